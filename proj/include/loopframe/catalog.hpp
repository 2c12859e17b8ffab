#pragma once

#include "loopframe/involution.hpp"

#include <utility>

namespace loopframe {

enum class LambdaRange { Imaginary, Real, UnitCircle };

std::string to_string(LambdaRange r);

/// Real interval with optionally closed ends; infinite ends are always open.
struct Interval {
  double lo, hi;
  bool lo_closed = false, hi_closed = false;
  bool contains(double x, double tol = 0.0) const;
  std::string describe() const;
};

/// One evaluation row of the immersion tables.
struct CatalogRow {
  int case_id = 3;
  int row = 3;
  int m = 2, k = 1;
  SignatureForm base_form;   // J preserved by the loop group
  CMatrix t;                 // diagonal conjugation
  SignatureForm target_form; // Ĵ preserved after Ad_T
  LambdaRange range = LambdaRange::UnitCircle;
  Interval curvature;
  std::string target_label;
  int quadric_sign = 1;
  int curvature_sign = 1;    // c_λ = curvature_sign · 4/(λ+λ⁻¹)²

  /// Reality condition fixing the loops of this case.
  InvolutionSpec reality() const;
  InvolutionSpec sigma() const { return InvolutionSpec::sigma(InvolutionSpec::standard_p(m, k)); }
  InvolutionSpec mu() const { return InvolutionSpec::mu(InvolutionSpec::standard_q(m, k)); }
  int n() const { return m + k + 1; }
  int epsilon() const { return case_id == 4 ? -1 : 1; }
};

inline constexpr double kRangeTolerance = 1e-12;
inline constexpr double kExclusionRadius = 1e-6;

/// Row data for case 1..4, row 1..3 with tangent dimension m and codimension k.
CatalogRow case_catalog(int case_id, int row, int m = 2, int k = 1);

/// Loop group form J for the case: identity for cases 1-3, diag(I_m,−1,I_k) for case 4.
SignatureForm case_base_form(int case_id, int m, int k);

bool in_range(LambdaRange r, cd lambda, double tol = kRangeTolerance);
/// In range and outside the exclusion balls around 0 and ±i.
bool admissible(LambdaRange r, cd lambda);

/// ±4/(λ+λ⁻¹)², real part; throws DomainError at λ ∈ {0, ±i}.
double curvature_at(const CatalogRow& row, cd lambda);

/// s with T·Ĵ·T = s·J, or throws if no scalar works.
cd form_scale(const CatalogRow& row);

/// Symmetric space of the pluriharmonic extension for the case.
std::string symmetric_space_label(int case_id);

/// Reality/negative-involution pair used for the pluriharmonic extension.
std::pair<InvolutionSpec, InvolutionSpec> extension_pair(int case_id, int m, int k);

}  // namespace loopframe
