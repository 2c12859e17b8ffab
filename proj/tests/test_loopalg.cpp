#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loopframe/catalog.hpp"
#include "loopframe/involution.hpp"
#include "loopframe/sample_loops.hpp"
#include "oracles.hpp"

#include <random>

using namespace loopframe;

namespace {

const cd I(0, 1);

CMatrix unit(int n, int r, int c) {
  CMatrix e = CMatrix::Zero(n, n);
  e(r, c) = 1.0;
  return e;
}

// Displayed Maurer–Cartan components at fixed (u,v), as Laurent loops in λ.
LaurentLoop example_mc_loop(int axis, double u, double v) {
  // a = (λ+λ⁻¹)/2, b = i(λ−λ⁻¹)/2: read the coefficients off at λ = 1, i
  const CMatrix at0 = axis == 0 ? CMatrix(oracle::example_mc_u(u, v, 1.0)) : CMatrix(oracle::example_mc_v(u, v, 1.0));
  const CMatrix ati = axis == 0 ? CMatrix(oracle::example_mc_u(u, v, I)) : CMatrix(oracle::example_mc_v(u, v, I));
  // at λ=1: a=1, b=0 ; at λ=i: a=0, b=i·i = −1
  CMatrix a_part = CMatrix::Zero(4, 4), b_part = CMatrix::Zero(4, 4), rest = CMatrix::Zero(4, 4);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      const bool a_slot = (r == 2 || c == 2) && !(r >= 2 && c >= 2);
      const bool b_slot = (r == 3 || c == 3) && !(r >= 2 && c >= 2);
      if (a_slot)
        a_part(r, c) = at0(r, c);
      else if (b_slot)
        b_part(r, c) = -ati(r, c);
      else
        rest(r, c) = at0(r, c);
    }
  LaurentLoop l(4);
  l.set(0, rest);
  l.set(1, 0.5 * a_part + 0.5 * I * b_part);
  l.set(-1, 0.5 * a_part - 0.5 * I * b_part);
  return l;
}

// Pointwise formulas written out independently of InvolutionSpec.
CMatrix oracle_apply(InvolutionKind kind, const LaurentLoop& l, cd lambda, const CMatrix& p, const CMatrix& q) {
  switch (kind) {
    case InvolutionKind::Sigma: return p * l(-lambda) * p;
    case InvolutionKind::Mu: return q * l(1.0 / lambda) * q;
    case InvolutionKind::Rho1: return l(-std::conj(lambda)).conjugate();
    case InvolutionKind::Rho2: return l(std::conj(lambda)).conjugate();
    case InvolutionKind::Rho3:
    case InvolutionKind::Tau3: return l(1.0 / std::conj(lambda)).conjugate();
    case InvolutionKind::RhoHat3: return q * CMatrix(l(std::conj(lambda)).conjugate()) * q;
    case InvolutionKind::Tau1: return q * p * CMatrix(l(1.0 / std::conj(lambda)).conjugate()) * p * q;
    case InvolutionKind::Tau2: return q * CMatrix(l(1.0 / std::conj(lambda)).conjugate()) * q;
  }
  return {};
}

std::vector<InvolutionSpec> all_specs(int m, int k) {
  const auto p = InvolutionSpec::standard_p(m, k);
  const auto q = InvolutionSpec::standard_q(m, k);
  return {InvolutionSpec::sigma(p), InvolutionSpec::mu(q),          InvolutionSpec::rho1(),
          InvolutionSpec::rho2(),   InvolutionSpec::rho3(),         InvolutionSpec::rho_hat3(q),
          InvolutionSpec::tau1(p, q), InvolutionSpec::tau2(q),      InvolutionSpec::tau3()};
}

std::vector<cd> probe_lambdas() { return {cd(0.7, 0.2), cd(-1.3, 0.5), cd(0.1, -0.9), cd(2.0, 0.0), cd(0, 0.5)}; }

}  // namespace

TEST_CASE("eval_loop examples") {
  CMatrix c = CMatrix::Random(3, 3);
  CHECK(max_abs(LaurentLoop::constant(c)(cd(0.3, 0.7)) - c) == 0.0);
  CHECK(max_abs(LaurentLoop::monomial(CMatrix::Identity(3, 3), 1)(2.0) - 2.0 * CMatrix::Identity(3, 3)) == 0.0);
  LaurentLoop l(2);
  l.set(-1, unit(2, 0, 1));
  l.set(1, unit(2, 0, 1));
  CHECK(max_abs(l(I)) < 1e-15);
  CHECK_THROWS_AS(l(0.0), DomainError);
  CHECK_NOTHROW(LaurentLoop::monomial(c, 2)(0.0));
}

TEST_CASE("loop construction limits") {
  CHECK_THROWS_AS(LaurentLoop(13), DimensionError);
  CHECK_THROWS_AS(LaurentLoop(0), DimensionError);
  LaurentLoop l(2);
  CHECK_THROWS_AS(l.set(5, CMatrix::Zero(2, 2)), DomainError);
  CHECK_THROWS_AS(l.set(-5, CMatrix::Zero(2, 2)), DomainError);
  CHECK_THROWS_AS(l.set(0, CMatrix::Zero(3, 3)), DimensionError);
  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(l.set(0, bad), DomainError);
  CHECK_THROWS_AS(SignatureForm({1, 0, -1}), DomainError);
}

TEST_CASE("loop products and sums agree with pointwise arithmetic") {
  std::mt19937_64 rng(11);
  const LaurentLoop a = random_laurent(3, -1, 2, rng), b = random_laurent(3, -2, 1, rng);
  for (cd l : probe_lambdas()) {
    CHECK(max_abs((a * b)(l) - a(l) * b(l)) < 1e-12);
    CHECK(max_abs((a + b)(l) - (a(l) + b(l))) < 1e-12);
    CHECK(max_abs((a - b)(l) - (a(l) - b(l))) < 1e-12);
  }
  const LaurentLoop big = random_laurent(2, 3, 4, rng);
  CHECK_THROWS_AS(big * big, DomainError);
}

TEST_CASE("apply_involution examples") {
  const int m = 2, k = 1;
  const auto p = InvolutionSpec::standard_p(m, k);
  const auto q = InvolutionSpec::standard_q(m, k);
  CMatrix blockdiag = CMatrix::Zero(4, 4);
  blockdiag.topLeftCorner(2, 2) = CMatrix::Random(2, 2);
  blockdiag.bottomRightCorner(2, 2) = CMatrix::Random(2, 2);
  const LaurentLoop l0 = LaurentLoop::constant(blockdiag);
  CHECK(apply_involution(InvolutionSpec::sigma(p), l0).distance(l0) == 0.0);

  const CMatrix a = CMatrix::Random(4, 4);
  const LaurentLoop mu_img = apply_involution(InvolutionSpec::mu(q), LaurentLoop::monomial(a, 1));
  CHECK(mu_img.min_degree() == -1);
  CHECK(mu_img.max_degree() == -1);
  CHECK(max_abs(mu_img.coeff(-1) - q.matrix() * a * q.matrix()) < 1e-15);

  LaurentLoop real(4);
  real.set(-1, CMatrix(Eigen::MatrixXd::Random(4, 4).cast<cd>()));
  real.set(2, CMatrix(Eigen::MatrixXd::Random(4, 4).cast<cd>()));
  CHECK(apply_involution(InvolutionSpec::rho2(), real).distance(real) == 0.0);

  CHECK_THROWS_AS(apply_involution(InvolutionSpec::sigma(p), LaurentLoop::identity(3)), DimensionError);
}

TEST_CASE("coefficient action matches the pointwise formulas") {
  std::mt19937_64 rng(3);
  const int m = 2, k = 1;
  const CMatrix p = InvolutionSpec::standard_p(m, k).matrix(), q = InvolutionSpec::standard_q(m, k).matrix();
  const LaurentLoop l = random_laurent(4, -2, 2, rng);
  for (const auto& s : all_specs(m, k)) {
    const LaurentLoop img = apply_involution(s, l);
    for (cd lam : probe_lambdas()) {
      const CMatrix expected = oracle_apply(s.kind(), l, lam, p, q);
      CHECK_MESSAGE(max_abs(img(lam) - expected) < 1e-12, to_string(s.kind()));
      CHECK(max_abs(s.apply_at(l, lam) - expected) < 1e-12);
    }
  }
}

TEST_CASE("involutions are involutive and the standard ones commute") {
  std::mt19937_64 rng(5);
  for (auto [m, k] : {std::pair{2, 1}, std::pair{1, 2}, std::pair{3, 2}}) {
    const auto specs = all_specs(m, k);
    for (int trial = 0; trial < 5; ++trial) {
      const LaurentLoop l = random_laurent(m + k + 1, -2, 2, rng);
      for (const auto& s : specs) CHECK(apply_involution(s, apply_involution(s, l)).distance(l) < 1e-12);
      // σ, μ and the three ρ's
      const std::vector<InvolutionSpec> basic(specs.begin(), specs.begin() + 5);
      for (const auto& s : basic)
        for (const auto& t : basic) {
          const double d = apply_involution(s, apply_involution(t, l)).distance(apply_involution(t, apply_involution(s, l)));
          CHECK(d < 1e-12);
        }
    }
  }
}

TEST_CASE("fixed_residual examples") {
  for (const auto& s : all_specs(2, 1)) CHECK(fixed_residual(s, LaurentLoop::identity(4), probe_lambdas()) == 0.0);
  const std::vector<cd> samples = circle_points(16, 0.1);
  for (double u : {0.0, 0.4, -1.1})
    for (double v : {0.3, 1.2})
      for (int axis : {0, 1}) {
        const LaurentLoop mc = example_mc_loop(axis, u, v);
        // the reconstruction reproduces the closed-form matrix
        const cd lam(0.8, 0.3);
        const CMatrix disp = axis == 0 ? CMatrix(oracle::example_mc_u(u, v, lam)) : CMatrix(oracle::example_mc_v(u, v, lam));
        CHECK(max_abs(mc(lam) - disp) < 1e-13);
        CHECK(fixed_residual(InvolutionSpec::rho3(), mc, samples) < 1e-12);
        CHECK(fixed_residual(InvolutionSpec::sigma(InvolutionSpec::standard_p(2, 1)), mc, samples) < 1e-12);
        CHECK(fixed_residual(InvolutionSpec::mu(InvolutionSpec::standard_q(2, 1)), mc, samples) < 1e-12);
      }
  // b enters the MC form, and b(λ̄) ≠ conj b(λ) at λ = 2
  const LaurentLoop mc = example_mc_loop(1, 0.0, 0.0);
  CHECK(fixed_residual(InvolutionSpec::rho2(), mc, {2.0}) > 1.0);
}

TEST_CASE("conjugate_by examples") {
  std::mt19937_64 rng(7);
  const LaurentLoop l = random_laurent(4, -1, 1, rng);
  CHECK(conjugate_by(CMatrix::Identity(4, 4), l).distance(l) == 0.0);

  CMatrix t = CMatrix::Identity(4, 4);
  t(0, 0) = I;
  t(1, 1) = I;
  t(3, 3) = I;
  const CMatrix x = unit(4, 0, 2) - unit(4, 2, 0);
  const CMatrix y = conjugate_by(t, LaurentLoop::constant(x)).coeff(0);
  CHECK(std::abs(y(0, 2) - I) < 1e-15);
  CHECK(std::abs(y(2, 0) - I) < 1e-15);

  // Ad_T of the SO(4,C)-valued example frame preserves diag(1,1,−1,1)
  auto frame = [](cd lam) { return CMatrix(oracle::example_frame(0.7, -0.4, lam)); };
  ConjugatedLoop<decltype(frame)> conj{t, frame};
  const SignatureForm jhat({1, 1, -1, 1});
  CHECK(group_residual(conj, jhat, probe_lambdas()) < 1e-12);

  CMatrix singular = CMatrix::Identity(4, 4);
  singular(2, 2) = 0.0;
  CHECK_THROWS_AS(conjugate_by(singular, l), DomainError);
}

TEST_CASE("group_residual examples") {
  CHECK(group_residual(LaurentLoop::identity(4), SignatureForm::identity(4), probe_lambdas()) == 0.0);
  auto frame = [](cd lam) { return CMatrix(oracle::example_frame(0.3, 1.1, lam)); };
  CHECK(group_residual(frame, SignatureForm::identity(4), {0.5}) < 1e-12);
  CMatrix c = CMatrix::Identity(3, 3);
  c(0, 1) = 0.5;
  CHECK(group_residual(LaurentLoop::constant(c), SignatureForm::identity(3), {1.0}) > 0.1);
}

TEST_CASE("case catalog rows from the tables") {
  const CatalogRow r33 = case_catalog(3, 3);
  CHECK(max_abs(r33.t - CMatrix::Identity(4, 4)) == 0.0);
  CHECK(r33.target_form == SignatureForm::identity(4));
  CHECK(r33.range == LambdaRange::UnitCircle);
  CHECK(r33.curvature.lo == 1.0);
  CHECK(r33.curvature.lo_closed);
  CHECK(r33.target_label == "S^3");

  const CatalogRow r31 = case_catalog(3, 1);
  CHECK(r31.t(0, 0) == I);
  CHECK(r31.t(1, 1) == I);
  CHECK(r31.t(2, 2) == cd(1));
  CHECK(r31.t(3, 3) == I);
  CHECK(r31.target_form == SignatureForm({1, 1, -1, 1}));
  CHECK(r31.range == LambdaRange::Imaginary);
  CHECK(r31.target_label == "H^3");
  CHECK(r31.quadric_sign == -1);

  const CatalogRow r12 = case_catalog(1, 2);
  CHECK(r12.t(0, 0) == I);
  CHECK(r12.t(2, 2) == cd(1));
  CHECK(r12.t(3, 3) == cd(1));
  CHECK(r12.range == LambdaRange::Real);
  CHECK(r12.curvature.lo == -1.0);
  CHECK(r12.curvature.hi == 0.0);
  CHECK(r12.target_label == "H^3_1");

  CHECK_THROWS_AS(case_catalog(5, 1), DomainError);
  CHECK_THROWS_AS(case_catalog(1, 0), DomainError);
}

TEST_CASE("catalog consistency for every row and several dimensions") {
  for (auto [m, k] : {std::pair{2, 1}, std::pair{1, 1}, std::pair{2, 2}, std::pair{3, 0}})
    for (int c = 1; c <= 4; ++c)
      for (int r = 1; r <= 3; ++r) {
        const CatalogRow row = case_catalog(c, r, m, k);
        const cd s = form_scale(row);
        CHECK(std::abs(std::abs(s) - 1.0) < 1e-15);
        const cd sign = s * double(row.base_form[m]) / (row.t(m, m) * row.t(m, m));
        CHECK(std::abs(sign - double(row.quadric_sign)) < 1e-15);
        // curvature at sampled λ lies in the declared interval
        std::mt19937_64 rng(c * 10 + r);
        for (int trial = 0; trial < 20; ++trial) {
          const cd lam = random_admissible_lambda(row.range, rng);
          CHECK(row.curvature.contains(curvature_at(row, lam), 1e-12));
        }
      }
}

TEST_CASE("range membership and exclusion balls") {
  CHECK(in_range(LambdaRange::Real, cd(2.0, 1e-13)));
  CHECK_FALSE(in_range(LambdaRange::Real, cd(2.0, 1e-11)));
  CHECK(in_range(LambdaRange::Imaginary, cd(0.0, 0.5)));
  CHECK(in_range(LambdaRange::UnitCircle, std::polar(1.0, 0.3)));
  CHECK_FALSE(admissible(LambdaRange::UnitCircle, I));
  CHECK_FALSE(admissible(LambdaRange::Imaginary, cd(0, -1.0 + 1e-7)));
  CHECK_FALSE(admissible(LambdaRange::Real, 0.0));
  CHECK(admissible(LambdaRange::Imaginary, cd(0, 0.5)));
  CHECK_THROWS_AS(curvature_at(case_catalog(3, 3), I), DomainError);
  CHECK(curvature_at(case_catalog(3, 1), cd(0, 0.5)) == doctest::Approx(16.0 / 9.0).epsilon(1e-14));
  CHECK(curvature_at(case_catalog(3, 2), 2.0) == doctest::Approx(0.64).epsilon(1e-14));
}

TEST_CASE("reformulated reality conditions") {
  std::mt19937_64 rng(19);
  const int m = 2, k = 1;
  const auto p = InvolutionSpec::standard_p(m, k), q = InvolutionSpec::standard_q(m, k);
  const auto samples = probe_lambdas();
  for (int trial = 0; trial < 5; ++trial) {
    const LaurentLoop x = random_laurent(4, -2, 2, rng);
    const LaurentLoop x2 = symmetrize(x, {InvolutionSpec::rho2()});
    CHECK(fixed_residual(InvolutionSpec::tau2(q), x2, samples) ==
          doctest::Approx(fixed_residual(InvolutionSpec::mu(q), x2, samples)).epsilon(1e-12));
    const LaurentLoop x1 = symmetrize(x, {InvolutionSpec::rho1(), InvolutionSpec::sigma(p)});
    CHECK(fixed_residual(InvolutionSpec::tau1(p, q), x1, samples) ==
          doctest::Approx(fixed_residual(InvolutionSpec::mu(q), x1, samples)).epsilon(1e-12));
    const LaurentLoop x3 = symmetrize(x, {InvolutionSpec::mu(q)});
    CHECK(fixed_residual(InvolutionSpec::rho_hat3(q), x3, samples) ==
          doctest::Approx(fixed_residual(InvolutionSpec::rho3(), x3, samples)).epsilon(1e-12));
    // and fixedness transfers
    const LaurentLoop x23 = symmetrize(x, {InvolutionSpec::rho2(), InvolutionSpec::mu(q)});
    CHECK(fixed_residual(InvolutionSpec::tau2(q), x23, samples) < 1e-12);
  }
}

TEST_CASE("reality of fixed loops") {
  std::mt19937_64 rng(23);
  const LaurentLoop x = symmetrize(random_laurent(4, -2, 2, rng), {InvolutionSpec::rho2()});
  for (double t : {-2.0, 0.3, 1.7}) CHECK(x(t).imag().cwiseAbs().maxCoeff() < 1e-12);
  const LaurentLoop y = symmetrize(random_laurent(4, -2, 2, rng), {InvolutionSpec::rho3()});
  for (cd l : circle_points(7)) CHECK(y(l).imag().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("conjugation preserves group membership for every catalog row") {
  std::mt19937_64 rng(29);
  for (int c = 1; c <= 4; ++c)
    for (int r = 1; r <= 3; ++r) {
      const CatalogRow row = case_catalog(c, r);
      const ExpLoop f = random_group_loop(row, rng);
      const auto samples = probe_lambdas();
      CHECK(group_residual(f, row.base_form, samples) < 1e-12);
      CHECK(group_residual(ConjugatedLoop<ExpLoop>{row.t, f}, row.target_form, samples) < 1e-10);
    }
}
