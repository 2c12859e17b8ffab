#pragma once

#include "loopframe/catalog.hpp"
#include "loopframe/integrate.hpp"

namespace loopframe {

/// Maurer–Cartan data of an adapted frame [e_1..e_m, f, ξ_1..ξ_k], stored as
/// the full n×n form with block accessors. The frame preserves
/// J = diag(I_m, j0, J_N); base_frame is its value at the base point.
struct AdaptedFrameData {
  int m = 2, k = 1;
  OneFormField form;
  SignatureForm frame_form;
  SignatureForm ambient;
  CMatrix base_frame;

  int n() const { return m + k + 1; }
  int j0() const { return frame_form[m]; }
  int epsilon() const { return j0(); }

  CMatrix omega(int axis, int i, int j) const { return form.at(axis, i, j).topLeftCorner(m, m); }
  CMatrix theta(int axis, int i, int j) const { return form.at(axis, i, j).block(0, m, m, 1); }
  CMatrix beta(int axis, int i, int j) const { return form.at(axis, i, j).topRightCorner(m, k); }
  CMatrix eta(int axis, int i, int j) const { return form.at(axis, i, j).bottomRightCorner(k + 1, k + 1); }
  /// Normal-connection block as its own field.
  OneFormField eta_field() const;
};

/// Real surface samples in an ambient space with form J.
struct ImmersionSurface {
  Grid grid;
  std::vector<RVector> points;
  SignatureForm ambient;
  int quadric_sign = 1;
  /// Largest discarded imaginary part.
  double max_imag = 0.0;

  const RVector& at(int i, int j) const { return points[grid.index(i, j)]; }
  int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
};

struct InsertionScales {
  cd theta, beta;  // θ ↦ theta·(λ+λ⁻¹)θ, β ↦ beta·(λ−λ⁻¹)β
  cd lambda0;      // where both scalings equal 1
};

/// Scalings for inserting λ into data of curvature c with position sign j0.
InsertionScales insertion_scales(double c, int j0);

/// λ-family of Maurer–Cartan forms with θ and β scaled; equals the input at λ0.
ConnectionFamily insert_lambda(const AdaptedFrameData& data, double c);

struct EvaluateOptions {
  double imag_tolerance = 1e-10;
  /// Multiplies every frame on the left (places a normalized family back).
  std::optional<CMatrix> left_factor;
  /// Skip the λ-range check (for rows built directly, not from the tables).
  bool check_range = true;
};

/// Applies Ad_T, takes column m+1 and drops its (checked) imaginary part.
ImmersionSurface evaluate_family(const FrameGrid& f, cd lambda, const CatalogRow& row,
                                 const EvaluateOptions& opts = {});
ImmersionSurface evaluate_family(const FrameFamily& f, cd lambda, const CatalogRow& row,
                                 const EvaluateOptions& opts = {});

/// Identity-T row evaluating data's family back in its own ambient space.
CatalogRow direct_row(const AdaptedFrameData& data);

struct CurvatureField {
  Grid grid;
  std::vector<double> values;  // NaN where skipped
  std::vector<bool> valid;
  int skipped = 0;
  double at(int i, int j) const { return values[grid.index(i, j)]; }
};

/// Intrinsic curvature of the induced metric (Brioschi formula) at interior points.
CurvatureField gauss_curvature_estimate(const ImmersionSurface& s, int accuracy = 4, double degeneracy = 1e-10);

/// max |⟨x,x⟩_J − quadric sign|.
double quadric_residual(const ImmersionSurface& s);

/// Max of |⟨∂_i∂_j x, ξ⟩| over normals ξ and interior points.
double second_fundamental_form_estimate(const ImmersionSurface& s, int accuracy = 4);

/// dη + η∧η residual.
double normal_flatness_residual(const OneFormField& eta);

/// Numerical rank of the coframe (column m+1, rows 1..m of A(λ)) at a grid point.
int coframe_rank(const ConnectionFamily& a, cd lambda, int i, int j, int m, double threshold = 1e-10);

struct MetricRatio {
  double ratio = 1.0;
  double spread = 0.0;  // relative deviation across probes
};

/// Constant relating the induced metrics at λ1 and λ2, rows chosen by the λ ranges of the case.
/// Throws NumericalError when the relation is not a constant multiple to `tolerance`.
MetricRatio metric_ratio(const ConnectionFamily& a, cd lambda1, cd lambda2, int case_id, int m,
                         const std::vector<std::pair<int, int>>& probes, double tolerance = 1e-6);

/// The catalog row of a case whose λ-range contains λ.
CatalogRow row_for_lambda(int case_id, cd lambda, int m, int k);

struct ExtractOptions {
  int accuracy = 6;
  /// Orthonormalize ∂_v before ∂_u.
  bool reverse_tangent_order = false;
  double rank_tolerance = 1e-10;
};

/// Adapted frame of a surface and the blocks of its Maurer–Cartan form.
AdaptedFrameData extract_adapted_frame(const ImmersionSurface& s, const ExtractOptions& opts = {});

/// Max distance between corresponding points.
double surface_distance(const ImmersionSurface& a, const ImmersionSurface& b);

}  // namespace loopframe
