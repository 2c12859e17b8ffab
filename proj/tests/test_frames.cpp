#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loopframe/example.hpp"
#include "loopframe/finite_diff.hpp"
#include "loopframe/integrate.hpp"
#include "oracles.hpp"

#include <unsupported/Eigen/MatrixFunctions>

using namespace loopframe;

namespace {

Grid square(double half, int count) { return Grid::with_base({-half, half, count}, {-half, half, count}, 0.0, 0.0); }

CMatrix unit(int n, int r, int c) {
  CMatrix e = CMatrix::Zero(n, n);
  e(r, c) = 1.0;
  return e;
}

// Commuting, non-constant pair: A_u = cos(u)·N1, A_v = 2v·N2 with [N1,N2] = 0.
struct CommutingOracle {
  CMatrix n1, n2;
  CommutingOracle() {
    n1 = CMatrix::Zero(3, 3);
    n1(0, 1) = -1.0;
    n1(1, 0) = 1.0;
    n2 = 0.3 * CMatrix::Identity(3, 3);
    n2(2, 2) = cd(0.1, 0.2);
  }
  CMatrix frame(double u, double v) const { return CMatrix(std::sin(u) * n1 + v * v * n2).exp(); }
  ConnectionFamily connection(const Grid& g, bool analytic) const {
    if (analytic)
      return ConnectionFamily::from_analytic(g, 3, [this](int axis, cd u, cd v, cd) {
        return axis == 0 ? CMatrix(std::cos(u) * n1) : CMatrix(2.0 * v * n2);
      });
    OneFormField f(g, 3);
    for (int i = 0; i < g.nu(); ++i)
      for (int j = 0; j < g.nv(); ++j) {
        f.at(0, i, j) = std::cos(g.u.at(i)) * n1;
        f.at(1, i, j) = 2.0 * g.v.at(j) * n2;
      }
    return ConnectionFamily::single(f);
  }
  double error(const Grid& g, bool analytic) const {
    const FrameGrid f = integrate_frame(connection(g, analytic), 1.0);
    double e = 0.0;
    for (int i = 0; i < g.nu(); ++i)
      for (int j = 0; j < g.nv(); ++j) e = std::max(e, max_abs(f.at(i, j) - frame(g.u.at(i), g.v.at(j))));
    return e;
  }
};

double example_error(const FrameGrid& f, cd lambda) {
  double e = 0.0;
  for (int i = 0; i < f.grid.nu(); ++i)
    for (int j = 0; j < f.grid.nv(); ++j)
      e = std::max(e, max_abs(f.at(i, j) - CMatrix(oracle::example_frame(f.grid.u.at(i), f.grid.v.at(j), lambda))));
  return e;
}

}  // namespace

TEST_CASE("finite-difference weights") {
  const auto w = fornberg_weights(0.0, {-1.0, 0.0, 1.0}, 1);
  CHECK(w[0] == doctest::Approx(-0.5));
  CHECK(w[1] == doctest::Approx(0.0));
  CHECK(w[2] == doctest::Approx(0.5));
  const auto w2 = fornberg_weights(0.0, {-1.0, 0.0, 1.0}, 2);
  CHECK(w2[0] == doctest::Approx(1.0));
  CHECK(w2[1] == doctest::Approx(-2.0));
  const auto w4 = fornberg_weights(0.0, {-2.0, -1.0, 0.0, 1.0, 2.0}, 1);
  CHECK(w4[0] == doctest::Approx(1.0 / 12.0));
  CHECK(w4[1] == doctest::Approx(-2.0 / 3.0));
  // derivative of a cubic is exact with a 4-point one-sided stencil
  const double h = 0.1;
  auto f = [&](int p) { return std::pow(p * h, 3); };
  CHECK(line_derivative(f, 0, 10, h, 4) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(line_derivative(f, 9, 10, h, 4) == doctest::Approx(3 * 0.81).epsilon(1e-10));
  CHECK(line_derivative(f, 5, 10, h, 4, 2) == doctest::Approx(6 * 0.5).epsilon(1e-10));
  CHECK(line_interpolate([&](int p) { return std::pow(p * h, 3); }, 2.5, 10) == doctest::Approx(std::pow(0.25, 3)));
  CHECK_THROWS_AS(derivative_stencil(0, 10, 3), DomainError);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid({0, 1, 1}, {0, 1, 4}, 0, 0), DomainError);
  CHECK_THROWS_AS(Grid({1, 0, 4}, {0, 1, 4}, 0, 0), DomainError);
  CHECK_THROWS_AS(Grid({0, 1, 4}, {0, 1, 4}, 4, 0), DomainError);
  const Grid g = square(1.0, 65);
  CHECK(g.base_i == 32);
  CHECK(g.u.at(g.base_i) == doctest::Approx(0.0));
}

TEST_CASE("integrate_frame: zero connection gives the identity") {
  const Grid g = square(1.0, 9);
  const FrameGrid f = integrate_frame(ConnectionFamily::single(OneFormField(g, 3)), 0.7);
  for (const auto& m : f.values) CHECK(max_abs(m - CMatrix::Identity(3, 3)) == 0.0);
}

TEST_CASE("integrate_frame reproduces the example frame") {
  const Grid g = square(1.0, 65);
  const FrameGrid f = integrate_frame(example_connection(g), 0.8);
  CHECK(example_error(f, 0.8) <= 1e-6);
  CHECK(max_abs(f.at(g.base_i, g.base_j) - CMatrix::Identity(4, 4)) <= 1e-12);
}

TEST_CASE("integrate_frame: commuting oracle and fourth-order convergence") {
  const CommutingOracle o;
  for (bool analytic : {true, false}) {
    const double e1 = o.error(square(1.0, 17), analytic);
    const double e2 = o.error(square(1.0, 33), analytic);
    CHECK(e2 <= 1e-6);
    CHECK_MESSAGE(e1 / e2 >= 8.0, "ratio ", e1 / e2, " analytic=", analytic);
  }
  // constant commuting pair
  const Grid g = square(1.0, 11);
  CMatrix au = 0.4 * unit(3, 0, 1) - 0.4 * unit(3, 1, 0), av = 0.2 * CMatrix::Identity(3, 3);
  OneFormField c(g, 3);
  for (auto& m : c.components[0]) m = au;
  for (auto& m : c.components[1]) m = av;
  const FrameGrid f = integrate_frame(ConnectionFamily::single(c), 1.0);
  for (int i = 0; i < g.nu(); ++i)
    for (int j = 0; j < g.nv(); ++j)
      CHECK(max_abs(f.at(i, j) - CMatrix(g.u.at(i) * au).exp() * CMatrix(g.v.at(j) * av).exp()) <= 1e-8);
}

TEST_CASE("integration order independence") {
  const Grid g = square(1.0, 33);
  IntegrationOptions alt;
  alt.columns_first = true;
  const ConnectionFamily a = example_connection(g);
  const cd lambda(0.6, 0.8);
  const FrameGrid f1 = integrate_frame(a, lambda);
  const FrameGrid f2 = integrate_frame(a, lambda, alt);
  const double bound = std::max(example_error(f1, lambda), example_error(f2, lambda));
  CHECK(frame_distance(f1, f2) <= 10.0 * bound);
}

TEST_CASE("group preservation with projection") {
  const Grid g = square(1.5, 41);
  IntegrationOptions opts;
  opts.project_to = SignatureForm::identity(4);
  for (cd lambda : {cd(0.8), std::polar(1.0, 0.4), cd(0, 0.5)}) {
    const FrameGrid f = integrate_frame(example_connection(g), lambda, opts);
    double d = 0.0;
    for (const auto& m : f.values) d = std::max(d, group_defect(m, SignatureForm::identity(4)));
    CHECK(d <= 1e-8);
  }
}

TEST_CASE("integration rejects non-flat input") {
  const Grid g = square(1.0, 9);
  OneFormField f(g, 2);
  for (auto& m : f.components[0]) m = unit(2, 0, 1);
  for (auto& m : f.components[1]) m = unit(2, 1, 0);
  const ConnectionFamily a = ConnectionFamily::single(f, 1);
  CHECK_THROWS_AS(integrate_frame(a, 1.0), NumericalError);
  IntegrationOptions lax;
  lax.check_integrability = false;
  CHECK_NOTHROW(integrate_frame(a, 1.0, lax));
  CHECK(mc_residual(a, 1.0) > 0.5);
  CHECK(mc_residual(a, 0.5) == doctest::Approx(0.25));
}

TEST_CASE("mc_form examples") {
  const Grid g = square(1.0, 21);
  FrameGrid c(g, 3);
  for (auto& m : c.values) m = CMatrix::Constant(3, 3, cd(1.0, 0.5)) + CMatrix::Identity(3, 3);
  CHECK(mc_form(c).max_norm() <= 1e-12);

  const CMatrix n = unit(3, 0, 2) + 2.0 * unit(3, 1, 2);
  FrameGrid e(g, 3);
  for (int i = 0; i < g.nu(); ++i)
    for (int j = 0; j < g.nv(); ++j) e.at(i, j) = CMatrix(g.u.at(i) * n).exp();
  const OneFormField a = mc_form(e);
  for (const auto& m : a.components[0]) CHECK(max_abs(m - n) <= 1e-12);
  for (const auto& m : a.components[1]) CHECK(max_abs(m) <= 1e-12);

  FrameGrid singular(g, 2);
  for (auto& m : singular.values) m = CMatrix::Zero(2, 2);
  CHECK_THROWS_AS(mc_form(singular), NumericalError);
}

TEST_CASE("mc_form of the example frame matches the closed form") {
  const Grid g = square(1.0, 128);
  const cd lambda(0.7, 0.4);
  FrameGrid f(g, 4);
  for (int i = 0; i < g.nu(); ++i)
    for (int j = 0; j < g.nv(); ++j) f.at(i, j) = example_frame(g.u.at(i), g.v.at(j), lambda);
  const OneFormField a = mc_form(f);
  double err = 0.0;
  for (int i = 0; i < g.nu(); ++i)
    for (int j = 0; j < g.nv(); ++j) {
      err = std::max(err, max_abs(a.at(0, i, j) - CMatrix(oracle::example_mc_u(g.u.at(i), g.v.at(j), lambda))));
      err = std::max(err, max_abs(a.at(1, i, j) - CMatrix(oracle::example_mc_v(g.u.at(i), g.v.at(j), lambda))));
    }
  CHECK(err <= 1e-3);

  // analytic derivative path
  for (double u : {-0.9, 0.1, 0.6})
    for (double v : {-0.4, 0.8}) {
      const CMatrix fr = example_frame(u, v, lambda);
      const auto d = example_frame_derivatives(u, v, lambda);
      CHECK(max_abs(CMatrix(fr.inverse() * d[0]) - CMatrix(oracle::example_mc_u(u, v, lambda))) <= 1e-10);
      CHECK(max_abs(CMatrix(fr.inverse() * d[1]) - CMatrix(oracle::example_mc_v(u, v, lambda))) <= 1e-10);
    }
}

TEST_CASE("mc_form inverts integrate_frame") {
  for (int count : {33, 65}) {
    const Grid g = square(1.0, count);
    const ConnectionFamily a = example_connection(g);
    const OneFormField back = mc_form(integrate_frame(a, 0.9));
    const OneFormField exact = a.at(0.9);
    double e = 0.0;
    for (int ax = 0; ax < 2; ++ax)
      for (std::size_t p = 0; p < back.components[ax].size(); ++p)
        e = std::max(e, max_abs(back.components[ax][p] - exact.components[ax][p]));
    CHECK(e <= 20.0 * std::pow(g.u.step(), 2));
  }
}

TEST_CASE("mc_residual of the example converges at second order") {
  CHECK(mc_residual(ConnectionFamily::single(OneFormField(square(1.0, 5), 3)), 1.0) == 0.0);
  const cd lambda = std::polar(1.2, 0.3);
  const double r1 = mc_residual(example_connection(square(1.0, 64)), lambda);
  const double r2 = mc_residual(example_connection(square(1.0, 127)), lambda);
  CHECK(r2 <= 1e-3);
  CHECK(r1 / r2 >= 3.5);
}

TEST_CASE("renormalize_at") {
  const Grid g = square(1.0, 17);
  const FrameGrid f = integrate_frame(example_connection(g), 1.3);
  const FrameGrid same = renormalize_at(f, g.base_i, g.base_j);
  CHECK(frame_distance(same, f) <= 1e-12);
  const FrameGrid r = renormalize_at(f, 3, 11);
  CHECK(max_abs(r.at(3, 11) - CMatrix::Identity(4, 4)) == 0.0);
  const OneFormField a = mc_form(f), b = mc_form(r);
  double e = 0.0;
  for (int ax = 0; ax < 2; ++ax)
    for (std::size_t p = 0; p < a.components[ax].size(); ++p)
      e = std::max(e, max_abs(a.components[ax][p] - b.components[ax][p]));
  CHECK(e <= 1e-12);
}
