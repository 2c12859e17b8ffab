#pragma once

#include "loopframe/laurent.hpp"

#include <optional>
#include <vector>

namespace loopframe {

enum class InvolutionKind { Sigma, Mu, Rho1, Rho2, Rho3, RhoHat3, Tau1, Tau2, Tau3 };

std::string to_string(InvolutionKind kind);

/// One of the loop involutions, acting pointwise as (φX)(λ) = V(X(λ')) with
/// λ' ∈ {−λ, 1/λ, −λ̄, λ̄, 1/λ̄} and V a diagonal conjugation, possibly
/// composed with complex conjugation.
class InvolutionSpec {
 public:
  static InvolutionSpec sigma(const SignatureForm& p);
  static InvolutionSpec mu(const SignatureForm& q);
  static InvolutionSpec rho1();
  static InvolutionSpec rho2();
  static InvolutionSpec rho3();
  static InvolutionSpec rho_hat3(const SignatureForm& q);
  static InvolutionSpec tau1(const SignatureForm& p, const SignatureForm& q);
  static InvolutionSpec tau2(const SignatureForm& q);
  static InvolutionSpec tau3();

  /// P = diag(I_m, −I_{k+1}).
  static SignatureForm standard_p(int m, int k);
  /// Q = diag(I_{m+1}, −I_k).
  static SignatureForm standard_q(int m, int k);

  InvolutionKind kind() const { return kind_; }
  const std::optional<SignatureForm>& p() const { return p_; }
  const std::optional<SignatureForm>& q() const { return q_; }

  bool antilinear() const;
  /// True for the involutions exchanging the inside and outside of the circle.
  bool inverts_lambda() const;
  /// Sign s in λ' = s·λ^{±1} (before conjugation).
  int lambda_sign() const;
  cd map_lambda(cd lambda) const;

  /// The pointwise matrix part V (conjugation included when antilinear).
  CMatrix apply_matrix(const CMatrix& m) const;
  /// V restricted to the diagonal sign pattern, without conjugation.
  CMatrix conjugate_sign(const CMatrix& m) const;

  /// (φX)(λ) for an arbitrary evaluable loop X.
  template <typename Loop>
  CMatrix apply_at(const Loop& x, cd lambda) const {
    return apply_matrix(x(map_lambda(lambda)));
  }

  /// Throws DimensionError if P/Q do not fit an n×n loop.
  void check_dimension(int n) const;

 private:
  InvolutionKind kind_ = InvolutionKind::Rho2;
  std::optional<SignatureForm> p_, q_;
};

/// Coefficient-level action on a Laurent loop.
LaurentLoop apply_involution(const InvolutionSpec& spec, const LaurentLoop& l);

/// max_λ ‖(φX)(λ) − X(λ)‖ over the samples, for any evaluable loop.
template <typename Loop>
double fixed_residual(const InvolutionSpec& spec, const Loop& x, const std::vector<cd>& samples) {
  double r = 0.0;
  for (cd lambda : samples) r = std::max(r, max_abs(spec.apply_at(x, lambda) - x(lambda)));
  return r;
}

/// max_λ ‖F(λ)ᵗ J F(λ) − J‖ over the samples.
template <typename Loop>
double group_residual(const Loop& x, const SignatureForm& j, const std::vector<cd>& samples) {
  double r = 0.0;
  for (cd lambda : samples) {
    CMatrix f = x(lambda);
    if (f.rows() != j.size()) throw DimensionError("signature does not match loop dimension");
    r = std::max(r, group_defect(f, j));
  }
  return r;
}

/// T·A·T⁻¹ for diagonal invertible T.
CMatrix conjugate_by(const CMatrix& t, const CMatrix& a);
LaurentLoop conjugate_by(const CMatrix& t, const LaurentLoop& l);

/// Evaluable loop λ ↦ T·X(λ)·T⁻¹.
template <typename Loop>
struct ConjugatedLoop {
  CMatrix t;
  Loop inner;
  CMatrix operator()(cd lambda) const { return conjugate_by(t, inner(lambda)); }
};

/// Equispaced points on the unit circle, λ_j = exp(2πij/N).
std::vector<cd> circle_points(int n, double phase = 0.0);

}  // namespace loopframe
