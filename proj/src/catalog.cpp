#include "loopframe/catalog.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace loopframe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
const cd I(0.0, 1.0);

// diag(a·I_m, b, c·I_k)
CMatrix block_diag(int m, int k, cd a, cd b, cd c) {
  CMatrix t = CMatrix::Zero(m + k + 1, m + k + 1);
  for (int i = 0; i < m; ++i) t(i, i) = a;
  t(m, m) = b;
  for (int i = 0; i < k; ++i) t(m + 1 + i, m + 1 + i) = c;
  return t;
}

SignatureForm form(int m, int k, int a, int b, int c) { return SignatureForm::blocks({{m, a}, {1, b}, {k, c}}); }

std::string space(int sign, int index, int dim) {
  std::string s = (sign > 0 ? "S^" : "H^") + std::to_string(dim);
  if (index > 0) s += "_" + std::to_string(index);
  return s;
}

}  // namespace

std::string to_string(LambdaRange r) {
  switch (r) {
    case LambdaRange::Imaginary: return "iR*";
    case LambdaRange::Real: return "R*";
    case LambdaRange::UnitCircle: return "S1";
  }
  return "?";
}

bool Interval::contains(double x, double tol) const {
  const bool above = lo_closed ? x >= lo - tol : x > lo - tol;
  const bool below = hi_closed ? x <= hi + tol : x < hi + tol;
  return above && below;
}

std::string Interval::describe() const {
  std::ostringstream os;
  auto num = [](double v) { return std::isinf(v) ? std::string(v < 0 ? "-inf" : "inf") : std::to_string(v); };
  os << (lo_closed ? "[" : "(") << num(lo) << ", " << num(hi) << (hi_closed ? "]" : ")");
  return os.str();
}

SignatureForm case_base_form(int case_id, int m, int k) {
  return case_id == 4 ? form(m, k, 1, -1, 1) : SignatureForm::identity(m + k + 1);
}

CatalogRow case_catalog(int case_id, int row, int m, int k) {
  if (case_id < 1 || case_id > 4) throw DomainError("case must be 1..4");
  if (row < 1 || row > 3) throw DomainError("row must be 1..3");
  if (m < 1 || k < 0) throw DomainError("need m >= 1 and k >= 0");
  require_dimension(m + k + 1);

  CatalogRow r;
  r.case_id = case_id;
  r.row = row;
  r.m = m;
  r.k = k;
  r.base_form = case_base_form(case_id, m, k);
  r.range = row == 1 ? LambdaRange::Imaginary : row == 2 ? LambdaRange::Real : LambdaRange::UnitCircle;
  const int n = m + k;

  const Interval neg{-kInf, 0.0};
  const Interval neg_unit{-1.0, 0.0, true, false};
  const Interval below_minus_one{-kInf, -1.0, false, true};
  const Interval pos{0.0, kInf};
  const Interval unit{0.0, 1.0, false, true};
  const Interval above_one{1.0, kInf, true, false};

  auto set = [&](CMatrix t, SignatureForm jh, int sign, Interval c, std::string label) {
    r.t = std::move(t);
    r.target_form = std::move(jh);
    r.quadric_sign = sign;
    r.curvature_sign = sign;
    r.curvature = c;
    r.target_label = std::move(label);
  };
  const CMatrix id = CMatrix::Identity(n + 1, n + 1);

  switch (case_id * 10 + row) {
    case 11: set(id, SignatureForm::identity(n + 1), 1, neg, space(1, 0, n)); break;
    case 12:
      set(block_diag(m, k, I, 1, 1), SignatureForm::blocks({{m, 1}, {k + 1, -1}}), -1, neg_unit, space(-1, k, n));
      break;
    case 13: set(block_diag(m, k, I, 1, I), form(m, k, 1, -1, 1), -1, below_minus_one, space(-1, 0, n)); break;
    case 21: set(block_diag(m, k, I, 1, 1), form(m, k, 1, -1, -1), -1, pos, space(-1, k, n)); break;
    case 22: set(id, SignatureForm::identity(n + 1), 1, unit, space(1, 0, n)); break;
    case 23: set(block_diag(m, k, I, I, 1), form(m, k, 1, 1, -1), 1, above_one, space(1, k, n)); break;
    case 31: set(block_diag(m, k, I, 1, I), form(m, k, 1, -1, 1), -1, pos, space(-1, 0, n)); break;
    case 32: set(block_diag(m, k, I, I, 1), form(m, k, 1, 1, -1), 1, unit, space(1, k, n)); break;
    case 33: set(id, SignatureForm::identity(n + 1), 1, above_one, space(1, 0, n)); break;
    case 41: set(block_diag(m, k, 1, I, I), form(m, k, 1, 1, -1), 1, neg, space(1, k, n)); break;
    case 42: set(id, form(m, k, 1, -1, 1), -1, neg_unit, space(-1, 0, n)); break;
    case 43: set(block_diag(m, k, 1, 1, I), form(m, k, 1, -1, -1), -1, below_minus_one, space(-1, k, n)); break;
  }
  return r;
}

InvolutionSpec CatalogRow::reality() const {
  switch (case_id) {
    case 1: return InvolutionSpec::rho1();
    case 3: return InvolutionSpec::rho3();
    default: return InvolutionSpec::rho2();
  }
}

bool in_range(LambdaRange r, cd lambda, double tol) {
  switch (r) {
    case LambdaRange::Imaginary: return std::abs(lambda.real()) <= tol;
    case LambdaRange::Real: return std::abs(lambda.imag()) <= tol;
    case LambdaRange::UnitCircle: return std::abs(std::abs(lambda) - 1.0) <= tol;
  }
  return false;
}

bool admissible(LambdaRange r, cd lambda) {
  if (std::abs(lambda) <= kExclusionRadius) return false;
  if (std::abs(lambda - I) <= kExclusionRadius || std::abs(lambda + I) <= kExclusionRadius) return false;
  return in_range(r, lambda);
}

double curvature_at(const CatalogRow& row, cd lambda) {
  if (std::abs(lambda) <= kExclusionRadius) throw DomainError("curvature undefined at lambda = 0");
  const cd s = lambda + 1.0 / lambda;
  if (std::abs(s) <= kExclusionRadius) throw DomainError("coframe vanishes at lambda = +-i");
  return (double(row.curvature_sign) * 4.0 / (s * s)).real();
}

cd form_scale(const CatalogRow& row) {
  const int n = row.n();
  cd s = 0.0;
  for (int i = 0; i < n; ++i) {
    const cd v = row.t(i, i) * double(row.target_form[i]) * row.t(i, i) / double(row.base_form[i]);
    if (i == 0)
      s = v;
    else if (std::abs(v - s) > 1e-14)
      throw DomainError("T J^ T is not a multiple of J");
  }
  return s;
}

std::string symmetric_space_label(int case_id) {
  switch (case_id) {
    case 1: return "SO(m+k,1)/(SO(m)xSO(k,1))";
    case 2: return "SO(m+1,k)/(SO(m)xSO(k,1))";
    case 3: return "SO(m+k+1)/(SO(m)xSO(k+1))";
    case 4: return "SO(m,k+1)/(SO(m)xSO(k+1))";
  }
  throw DomainError("case must be 1..4");
}

std::pair<InvolutionSpec, InvolutionSpec> extension_pair(int case_id, int m, int k) {
  const SignatureForm p = InvolutionSpec::standard_p(m, k);
  const SignatureForm q = InvolutionSpec::standard_q(m, k);
  switch (case_id) {
    case 1: return {InvolutionSpec::rho1(), InvolutionSpec::tau1(p, q)};
    case 2:
    case 4: return {InvolutionSpec::rho2(), InvolutionSpec::tau2(q)};
    case 3: return {InvolutionSpec::rho_hat3(q), InvolutionSpec::tau3()};
  }
  throw DomainError("case must be 1..4");
}

}  // namespace loopframe
