#pragma once

#include "loopframe/types.hpp"

#include <array>
#include <functional>
#include <map>

namespace loopframe {

/// Uniform samples lo, lo+h, ..., hi.
struct Axis {
  double lo = 0.0, hi = 1.0;
  int count = 2;

  double step() const { return (hi - lo) / (count - 1); }
  double at(int i) const { return lo + step() * i; }
  /// Coordinate of a fractional index.
  double at(double fi) const { return lo + step() * fi; }
  void validate(const char* name) const;
};

/// Rectangular two-dimensional parameter grid with a base point.
struct Grid {
  Axis u, v;
  int base_i = 0, base_j = 0;

  Grid() = default;
  Grid(Axis u_axis, Axis v_axis, int bi, int bj);
  /// Grid over [u0,u1]×[v0,v1] whose base point is the sample nearest to (pu, pv).
  static Grid with_base(Axis u_axis, Axis v_axis, double pu, double pv);

  int nu() const { return u.count; }
  int nv() const { return v.count; }
  int size() const { return nu() * nv(); }
  int index(int i, int j) const { return i * nv() + j; }
  const Axis& axis(int a) const { return a == 0 ? u : v; }
  double step(int a) const { return axis(a).step(); }
  bool contains(int i, int j) const { return i >= 0 && j >= 0 && i < nu() && j < nv(); }

  bool operator==(const Grid& o) const;
};

/// Matrix-valued 1-form sampled on a grid: components[a][index] is the dx^a part.
struct OneFormField {
  Grid grid;
  int n = 0;
  std::array<std::vector<CMatrix>, 2> components;

  OneFormField() = default;
  OneFormField(const Grid& g, int dim);

  CMatrix& at(int axis, int i, int j) { return components[axis][grid.index(i, j)]; }
  const CMatrix& at(int axis, int i, int j) const { return components[axis][grid.index(i, j)]; }

  OneFormField& operator+=(const OneFormField& o);
  OneFormField operator*(cd s) const;
  double max_norm() const;
};

/// Closed-form connection: (axis, u, v, λ) ↦ A_axis(u, v; λ) at complex coordinates.
using AnalyticConnection = std::function<CMatrix(int axis, cd u, cd v, cd lambda)>;

/// λ-family A(λ) = Σ_d A_d λ^d of 1-forms on one grid, optionally with a closed form.
struct ConnectionFamily {
  Grid grid;
  int n = 0;
  std::map<int, OneFormField> coeffs;
  AnalyticConnection analytic;

  ConnectionFamily() = default;
  ConnectionFamily(const Grid& g, int dim) : grid(g), n(dim) {}

  static ConnectionFamily from_analytic(const Grid& g, int dim, AnalyticConnection a);
  static ConnectionFamily single(const OneFormField& f, int degree = 0);

  void set(int degree, OneFormField field);
  bool has_analytic() const { return static_cast<bool>(analytic); }

  /// Sampled field A(λ).
  OneFormField at(cd lambda) const;
  /// A_axis(λ) at a grid node (closed form preferred).
  CMatrix value(int axis, int i, int j, cd lambda) const;
};

/// Group-valued samples on a grid.
struct FrameGrid {
  Grid grid;
  std::vector<CMatrix> values;

  FrameGrid() = default;
  FrameGrid(const Grid& g, int dim);
  CMatrix& at(int i, int j) { return values[grid.index(i, j)]; }
  const CMatrix& at(int i, int j) const { return values[grid.index(i, j)]; }
  int dim() const { return values.empty() ? 0 : static_cast<int>(values.front().rows()); }
};

/// Frames for a list of λ samples.
struct FrameFamily {
  std::vector<cd> lambdas;
  std::vector<FrameGrid> frames;
  bool normalized = true;

  const Grid& grid() const { return frames.front().grid; }
  int dim() const { return frames.front().dim(); }
  /// Values at one grid point across all λ samples.
  std::vector<CMatrix> loop_at(int i, int j) const;
};

}  // namespace loopframe
