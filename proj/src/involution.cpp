#include "loopframe/involution.hpp"

#include <cmath>
#include <numbers>

namespace loopframe {

std::string to_string(InvolutionKind kind) {
  switch (kind) {
    case InvolutionKind::Sigma: return "sigma";
    case InvolutionKind::Mu: return "mu";
    case InvolutionKind::Rho1: return "rho1";
    case InvolutionKind::Rho2: return "rho2";
    case InvolutionKind::Rho3: return "rho3";
    case InvolutionKind::RhoHat3: return "rho_hat3";
    case InvolutionKind::Tau1: return "tau1";
    case InvolutionKind::Tau2: return "tau2";
    case InvolutionKind::Tau3: return "tau3";
  }
  return "unknown";
}

InvolutionSpec InvolutionSpec::sigma(const SignatureForm& p) {
  InvolutionSpec s;
  s.kind_ = InvolutionKind::Sigma;
  s.p_ = p;
  return s;
}

InvolutionSpec InvolutionSpec::mu(const SignatureForm& q) {
  InvolutionSpec s;
  s.kind_ = InvolutionKind::Mu;
  s.q_ = q;
  return s;
}

InvolutionSpec InvolutionSpec::rho1() {
  InvolutionSpec s;
  s.kind_ = InvolutionKind::Rho1;
  return s;
}

InvolutionSpec InvolutionSpec::rho2() {
  InvolutionSpec s;
  s.kind_ = InvolutionKind::Rho2;
  return s;
}

InvolutionSpec InvolutionSpec::rho3() {
  InvolutionSpec s;
  s.kind_ = InvolutionKind::Rho3;
  return s;
}

InvolutionSpec InvolutionSpec::rho_hat3(const SignatureForm& q) {
  InvolutionSpec s;
  s.kind_ = InvolutionKind::RhoHat3;
  s.q_ = q;
  return s;
}

InvolutionSpec InvolutionSpec::tau1(const SignatureForm& p, const SignatureForm& q) {
  if (p.size() != q.size()) throw DimensionError("tau1: P and Q sizes differ");
  InvolutionSpec s;
  s.kind_ = InvolutionKind::Tau1;
  s.p_ = p;
  s.q_ = q;
  return s;
}

InvolutionSpec InvolutionSpec::tau2(const SignatureForm& q) {
  InvolutionSpec s;
  s.kind_ = InvolutionKind::Tau2;
  s.q_ = q;
  return s;
}

InvolutionSpec InvolutionSpec::tau3() {
  InvolutionSpec s;
  s.kind_ = InvolutionKind::Tau3;
  return s;
}

SignatureForm InvolutionSpec::standard_p(int m, int k) { return SignatureForm::blocks({{m, 1}, {k + 1, -1}}); }

SignatureForm InvolutionSpec::standard_q(int m, int k) { return SignatureForm::blocks({{m + 1, 1}, {k, -1}}); }

bool InvolutionSpec::antilinear() const {
  return kind_ != InvolutionKind::Sigma && kind_ != InvolutionKind::Mu;
}

bool InvolutionSpec::inverts_lambda() const {
  switch (kind_) {
    case InvolutionKind::Mu:
    case InvolutionKind::Rho3:
    case InvolutionKind::Tau1:
    case InvolutionKind::Tau2:
    case InvolutionKind::Tau3: return true;
    default: return false;
  }
}

int InvolutionSpec::lambda_sign() const {
  return (kind_ == InvolutionKind::Sigma || kind_ == InvolutionKind::Rho1) ? -1 : 1;
}

cd InvolutionSpec::map_lambda(cd lambda) const {
  if (lambda == cd(0)) throw DomainError("involution applied at lambda = 0");
  cd l = antilinear() ? std::conj(lambda) : lambda;
  if (inverts_lambda()) l = 1.0 / l;
  return double(lambda_sign()) * l;
}

CMatrix InvolutionSpec::conjugate_sign(const CMatrix& m) const {
  std::vector<int> d(m.rows(), 1);
  if (p_)
    for (int i = 0; i < m.rows(); ++i) d[i] *= (*p_)[i];
  if (q_)
    for (int i = 0; i < m.rows(); ++i) d[i] *= (*q_)[i];
  CMatrix r = m;
  for (int a = 0; a < r.rows(); ++a)
    for (int b = 0; b < r.cols(); ++b) r(a, b) *= double(d[a] * d[b]);
  return r;
}

CMatrix InvolutionSpec::apply_matrix(const CMatrix& m) const {
  check_dimension(static_cast<int>(m.rows()));
  return conjugate_sign(antilinear() ? CMatrix(m.conjugate()) : m);
}

void InvolutionSpec::check_dimension(int n) const {
  if ((p_ && p_->size() != n) || (q_ && q_->size() != n))
    throw DimensionError(to_string(kind_) + ": involution matrices do not match loop dimension " + std::to_string(n));
}

LaurentLoop apply_involution(const InvolutionSpec& spec, const LaurentLoop& l) {
  spec.check_dimension(l.dim());
  const int e = spec.inverts_lambda() ? -1 : 1;
  const int s = spec.lambda_sign();
  LaurentLoop out(l.dim());
  for (const auto& [d, a] : l.coeffs()) {
    const double scale = (s < 0 && (d % 2 != 0)) ? -1.0 : 1.0;
    out.set(e * d, spec.apply_matrix(a) * scale);
  }
  return out;
}

CMatrix conjugate_by(const CMatrix& t, const CMatrix& a) {
  if (t.rows() != a.rows() || t.cols() != a.cols()) throw DimensionError("conjugate_by: shape mismatch");
  for (int i = 0; i < t.rows(); ++i)
    for (int j = 0; j < t.cols(); ++j)
      if (i != j && t(i, j) != cd(0)) throw DomainError("conjugate_by expects a diagonal matrix");
  CMatrix r = a;
  for (int i = 0; i < t.rows(); ++i) {
    if (std::abs(t(i, i)) == 0.0) throw DomainError("conjugate_by: singular diagonal matrix");
    for (int j = 0; j < t.cols(); ++j) r(i, j) *= t(i, i) / t(j, j);
  }
  return r;
}

LaurentLoop conjugate_by(const CMatrix& t, const LaurentLoop& l) {
  LaurentLoop out(l.dim());
  for (const auto& [d, a] : l.coeffs()) out.set(d, conjugate_by(t, a));
  return out;
}

std::vector<cd> circle_points(int n, double phase) {
  std::vector<cd> pts(n);
  for (int j = 0; j < n; ++j) pts[j] = std::polar(1.0, phase + 2.0 * std::numbers::pi * j / n);
  return pts;
}

}  // namespace loopframe
