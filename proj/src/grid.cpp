#include "loopframe/grid.hpp"

#include <algorithm>
#include <cmath>

namespace loopframe {

void Axis::validate(const char* name) const {
  if (count < 2) throw DomainError(std::string(name) + ": need at least 2 samples");
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError(std::string(name) + ": degenerate range");
}

Grid::Grid(Axis u_axis, Axis v_axis, int bi, int bj) : u(u_axis), v(v_axis), base_i(bi), base_j(bj) {
  u.validate("u axis");
  v.validate("v axis");
  if (!contains(bi, bj)) throw DomainError("base point outside grid");
}

Grid Grid::with_base(Axis u_axis, Axis v_axis, double pu, double pv) {
  auto nearest = [](const Axis& a, double p) {
    int i = static_cast<int>(std::lround((p - a.lo) / a.step()));
    return std::clamp(i, 0, a.count - 1);
  };
  u_axis.validate("u axis");
  v_axis.validate("v axis");
  return Grid(u_axis, v_axis, nearest(u_axis, pu), nearest(v_axis, pv));
}

bool Grid::operator==(const Grid& o) const {
  return u.lo == o.u.lo && u.hi == o.u.hi && u.count == o.u.count && v.lo == o.v.lo && v.hi == o.v.hi &&
         v.count == o.v.count && base_i == o.base_i && base_j == o.base_j;
}

OneFormField::OneFormField(const Grid& g, int dim) : grid(g), n(dim) {
  require_dimension(dim);
  for (auto& c : components) c.assign(g.size(), CMatrix::Zero(dim, dim));
}

OneFormField& OneFormField::operator+=(const OneFormField& o) {
  if (!(grid == o.grid) || n != o.n) throw DimensionError("one-form fields live on different grids");
  for (int a = 0; a < 2; ++a)
    for (std::size_t p = 0; p < components[a].size(); ++p) components[a][p] += o.components[a][p];
  return *this;
}

OneFormField OneFormField::operator*(cd s) const {
  OneFormField r = *this;
  for (auto& c : r.components)
    for (auto& m : c) m *= s;
  return r;
}

double OneFormField::max_norm() const {
  double r = 0.0;
  for (const auto& c : components)
    for (const auto& m : c) r = std::max(r, max_abs(m));
  return r;
}

ConnectionFamily ConnectionFamily::from_analytic(const Grid& g, int dim, AnalyticConnection a) {
  require_dimension(dim);
  ConnectionFamily c(g, dim);
  c.analytic = std::move(a);
  return c;
}

ConnectionFamily ConnectionFamily::single(const OneFormField& f, int degree) {
  ConnectionFamily c(f.grid, f.n);
  c.set(degree, f);
  return c;
}

void ConnectionFamily::set(int degree, OneFormField field) {
  if (!(field.grid == grid) || field.n != n) throw DimensionError("connection coefficient on a different grid");
  coeffs[degree] = std::move(field);
}

OneFormField ConnectionFamily::at(cd lambda) const {
  OneFormField out(grid, n);
  for (int i = 0; i < grid.nu(); ++i)
    for (int j = 0; j < grid.nv(); ++j)
      for (int a = 0; a < 2; ++a) out.at(a, i, j) = value(a, i, j, lambda);
  return out;
}

CMatrix ConnectionFamily::value(int axis, int i, int j, cd lambda) const {
  if (analytic) return analytic(axis, grid.u.at(i), grid.v.at(j), lambda);
  CMatrix r = CMatrix::Zero(n, n);
  for (const auto& [d, f] : coeffs) {
    if (d < 0 && lambda == cd(0)) throw DomainError("connection with negative degrees evaluated at lambda = 0");
    r += f.at(axis, i, j) * std::pow(lambda, d);
  }
  return r;
}

FrameGrid::FrameGrid(const Grid& g, int dim) : grid(g), values(g.size(), CMatrix::Identity(dim, dim)) {
  require_dimension(dim);
}

std::vector<CMatrix> FrameFamily::loop_at(int i, int j) const {
  std::vector<CMatrix> out;
  out.reserve(frames.size());
  for (const auto& f : frames) out.push_back(f.at(i, j));
  return out;
}

}  // namespace loopframe
