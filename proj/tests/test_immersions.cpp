#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "loopframe/example.hpp"
#include "loopframe/immersions.hpp"
#include "loopframe/sample_loops.hpp"
#include "oracles.hpp"

#include <numbers>
#include <random>

using namespace loopframe;

namespace {

const cd I(0, 1);

Grid square(double half, int count) { return Grid::with_base({-half, half, count}, {-half, half, count}, 0.0, 0.0); }

ImmersionSurface example_surface(const Grid& g, cd lambda, int row) {
  return evaluate_family(example_family(g, {lambda}).frames[0], lambda, case_catalog(3, row));
}

// Relative curvature error over interior probes spread across the grid.
double curvature_error(const CurvatureField& k, double expected, int probes = 10) {
  double e = 0.0;
  const Grid& g = k.grid;
  for (int p = 0; p < probes; ++p) {
    const int i = g.nu() / 5 + (p * 37) % (3 * g.nu() / 5);
    const int j = g.nv() / 5 + (p * 53) % (3 * g.nv() / 5);
    REQUIRE(k.valid[g.index(i, j)]);
    e = std::max(e, std::abs(k.at(i, j) - expected) / std::abs(expected));
  }
  return e;
}

}  // namespace

TEST_CASE("example frame closed form") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int t = 0; t < 20; ++t) {
    const cd lam = std::polar(0.3 + std::abs(d(rng)), d(rng));
    CHECK(max_abs(example_frame(0.0, 0.0, lam) - CMatrix::Identity(4, 4)) <= 1e-14);
    const cd a = oracle::a_of(lam), b = oracle::b_of(lam);
    CHECK(std::abs(a * a + b * b - 1.0) <= 1e-12);
    const double u = d(rng), v = d(rng);
    CHECK(max_abs(example_frame(u, v, lam) - CMatrix(oracle::example_frame(u, v, lam))) <= 1e-13);
    CHECK(max_abs(example_column(u, v, lam) - CVector(oracle::example_column(u, v, lam))) <= 1e-12);
  }
  const CVector f = example_column(0.3, 0.7, 1.0);
  CHECK(std::abs(f[0] - std::sin(0.3) * std::cos(0.7)) <= 1e-15);
  CHECK(std::abs(f[1] - std::sin(0.7)) <= 1e-15);
  CHECK(std::abs(f[2] - std::cos(0.3) * std::cos(0.7)) <= 1e-15);
  CHECK(std::abs(f[3]) <= 1e-15);
}

TEST_CASE("evaluate_family examples") {
  const Grid g = square(1.0, 21);
  const ImmersionSurface s = example_surface(g, 1.0, 3);
  for (int i = 0; i < g.nu(); ++i)
    for (int j = 0; j < g.nv(); ++j) {
      const double u = g.u.at(i), v = g.v.at(j);
      Eigen::Vector4d expect(std::sin(u) * std::cos(v), std::sin(v), std::cos(u) * std::cos(v), 0.0);
      CHECK((s.at(i, j) - expect).cwiseAbs().maxCoeff() <= 1e-14);
    }
  std::mt19937_64 rng(2);
  for (int row = 1; row <= 3; ++row)
    for (int t = 0; t < 5; ++t) {
      const cd lam = random_admissible_lambda(case_catalog(3, row).range, rng);
      const ImmersionSurface r = example_surface(g, lam, row);
      CHECK((r.at(g.base_i, g.base_j) - Eigen::Vector4d(0, 0, 1, 0)).cwiseAbs().maxCoeff() <= 1e-12);
    }
  // row 2 at λ = 2: [f1, f2, f3, −i f4] in S³₁
  const ImmersionSurface t = example_surface(g, 2.0, 2);
  CHECK(t.ambient == SignatureForm({1, 1, 1, -1}));
  for (int i = 0; i < g.nu(); i += 5)
    for (int j = 0; j < g.nv(); j += 5) {
      const Eigen::Vector4cd f = oracle::example_column(g.u.at(i), g.v.at(j), 2.0);
      const Eigen::Vector4cd expect(f[0], f[1], f[2], -I * f[3]);
      CHECK((t.at(i, j).cast<cd>() - expect).cwiseAbs().maxCoeff() <= 1e-13);
      const RVector& x = t.at(i, j);
      CHECK(std::abs(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] - x[3] * x[3] - 1.0) <= 1e-12);
    }
}

TEST_CASE("evaluate_family rejects inadmissible or mismatched lambda") {
  const Grid g = square(1.0, 5);
  const FrameGrid f = example_family(g, {2.0}).frames[0];
  CHECK_THROWS_AS(evaluate_family(f, 2.0, case_catalog(3, 3)), DomainError);
  CHECK_THROWS_AS(evaluate_family(example_family(g, {I}).frames[0], I, case_catalog(3, 3)), DomainError);
  EvaluateOptions lax;
  lax.check_range = false;
  CHECK_THROWS_AS(evaluate_family(f, 2.0, case_catalog(3, 3), lax), NumericalError);
}

TEST_CASE("gauss curvature of the example") {
  const Grid g = square(1.0, 256);
  const cd l = std::polar(1.0, std::numbers::pi / 4);
  CHECK(curvature_error(gauss_curvature_estimate(example_surface(g, l, 3)), 2.0) <= 1e-2);
  CHECK(curvature_error(gauss_curvature_estimate(example_surface(g, 1.0, 3)), 1.0) <= 1e-2);
  CHECK(curvature_error(gauss_curvature_estimate(example_surface(g, 0.5 * I, 1)), 16.0 / 9.0) <= 1e-2);
  CHECK(curvature_error(gauss_curvature_estimate(example_surface(g, 2.0, 2)), 0.64) <= 1e-2);
}

TEST_CASE("gauss curvature converges under refinement") {
  const cd l = std::polar(1.0, 0.3);
  const double expected = oracle::curvature(l, 1);
  const double e1 = curvature_error(gauss_curvature_estimate(example_surface(square(1.0, 33), l, 3), 2), expected);
  const double e2 = curvature_error(gauss_curvature_estimate(example_surface(square(1.0, 65), l, 3), 2), expected);
  CHECK(e2 < e1);
}

TEST_CASE("gauss curvature skips degenerate points") {
  const double h = std::numbers::pi / 2;
  const Grid g = Grid::with_base({-1, 1, 41}, {h - 0.5, h + 0.5, 41}, 0.0, h);
  const FrameGrid f = example_family(g, {0.7}).frames[0];
  const CurvatureField k = gauss_curvature_estimate(evaluate_family(f, 0.7, case_catalog(3, 2)));
  CHECK(!k.valid[g.index(10, 20)]);
  CHECK(k.skipped > 0);
}

TEST_CASE("quadric residual") {
  const Grid g = square(1.0, 17);
  CHECK(quadric_residual(example_surface(g, std::polar(1.0, 1.1), 3)) <= 1e-10);
  const ImmersionSurface h = example_surface(g, 0.5 * I, 1);
  CHECK(h.quadric_sign == -1);
  CHECK(quadric_residual(h) <= 1e-10);
  ImmersionSurface twice = example_surface(g, 1.0, 3);
  for (auto& x : twice.points) x *= 2.0;
  CHECK(quadric_residual(twice) == doctest::Approx(3.0));
}

TEST_CASE("second fundamental form at the totally geodesic value") {
  const Grid g = square(1.0, 65);
  CHECK(second_fundamental_form_estimate(example_surface(g, 1.0, 3)) <= 1e-8);
  CHECK(second_fundamental_form_estimate(example_surface(g, std::polar(1.0, 0.5), 3)) > 1e-2);
}

TEST_CASE("normal flatness") {
  const Grid g = square(1.0, 9);
  CHECK(normal_flatness_residual(OneFormField(g, 2)) == 0.0);
  OneFormField eta(g, 2);
  for (int i = 0; i < g.nu(); ++i)
    for (int j = 0; j < g.nv(); ++j) {
      eta.at(1, i, j)(0, 1) = g.u.at(i);
      eta.at(1, i, j)(1, 0) = -g.u.at(i);
    }
  CHECK(normal_flatness_residual(eta) == doctest::Approx(1.0));
}

TEST_CASE("coframe rank") {
  const Grid g = Grid::with_base({-1, 1, 9}, {0, std::numbers::pi / 2, 9}, 0.0, 0.0);
  const ConnectionFamily a = example_connection(g);
  CHECK(coframe_rank(a, 0.8, 4, 8, 2) == 1);
  CHECK(coframe_rank(a, 0.8, g.base_i, g.base_j, 2) == 2);
  CHECK(coframe_rank(ConnectionFamily::single(OneFormField(g, 4)), 0.8, 3, 3, 2) == 0);
  CHECK(coframe_rank(a, I, 3, 3, 2) == 0);

  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> pick(0, 8);
  std::uniform_real_distribution<double> mag(0.1, 3.0), ang(-3.1, 3.1);
  for (int t = 0; t < 100; ++t) {
    const int i = pick(rng), j = pick(rng);
    cd l1 = std::polar(mag(rng), ang(rng)), l2 = std::polar(mag(rng), ang(rng));
    if (std::abs(l1 * l1 + 1.0) < 1e-3 || std::abs(l2 * l2 + 1.0) < 1e-3) continue;
    CHECK(coframe_rank(a, l1, i, j, 2) == coframe_rank(a, l2, i, j, 2));
  }
}

TEST_CASE("metric ratio") {
  const Grid g = square(1.0, 17);
  const ConnectionFamily a = example_connection(g);
  const std::vector<std::pair<int, int>> probes{{3, 4}, {8, 8}, {12, 2}, {15, 14}};
  CHECK(metric_ratio(a, 1.0, 1.0, 3, 2, probes).ratio == doctest::Approx(1.0).epsilon(1e-14));
  const MetricRatio r = metric_ratio(a, 1.0, std::polar(1.0, 0.3), 3, 2, probes);
  CHECK(std::abs(r.ratio / std::pow(std::cos(0.3), 2) - 1.0) <= 1e-6);
  CHECK(metric_ratio(a, 1.0, 2.0, 3, 2, probes).ratio == doctest::Approx(1.5625).epsilon(1e-12));
  CHECK(metric_ratio(a, 1.0, 0.5 * I, 3, 2, probes).ratio == doctest::Approx(0.5625).epsilon(1e-12));
  CHECK_THROWS_AS(metric_ratio(a, 1.0, cd(1.0, 0.5), 3, 2, probes), DomainError);
}

TEST_CASE("insertion scalings") {
  const InsertionScales s = insertion_scales(0.5, 1);
  CHECK(s.lambda0.real() == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-14));
  CHECK(std::abs(s.theta * 2.0 - 1.0 / std::sqrt(2.0)) <= 1e-15);
  CHECK(std::abs(s.theta * (s.lambda0 + 1.0 / s.lambda0) - 1.0) <= 1e-14);
  CHECK(std::abs(s.beta * (s.lambda0 - 1.0 / s.lambda0) - 1.0) <= 1e-14);
  // c > 1 puts λ0 on the unit circle
  CHECK(std::abs(std::abs(insertion_scales(2.0, 1).lambda0) - 1.0) <= 1e-14);
  const InsertionScales h = insertion_scales(-0.5, -1);
  CHECK(std::abs(h.theta * (h.lambda0 + 1.0 / h.lambda0) - 1.0) <= 1e-14);
  CHECK_THROWS_AS(insertion_scales(1.0, 1), DomainError);
  CHECK_THROWS_AS(insertion_scales(-1.0, -1), DomainError);
  CHECK_THROWS_AS(insertion_scales(0.0, 1), DomainError);
}

TEST_CASE("inserted families: β vanishes at ±1 and λ0 reproduces the input") {
  const Grid g = square(0.5, 33);
  const cd l0 = 1.0 + std::sqrt(2.0);
  const ImmersionSurface s = example_surface(g, l0, 2);
  const AdaptedFrameData d = extract_adapted_frame(s);
  const ConnectionFamily a = insert_lambda(d, 0.5);
  for (double l : {1.0, -1.0})
    for (int i = 0; i < g.nu(); i += 4)
      for (int j = 0; j < g.nv(); j += 4)
        for (int ax = 0; ax < 2; ++ax) {
          const CMatrix x = a.value(ax, i, j, l);
          CHECK(max_abs(x.block(0, 3, 2, 1)) == 0.0);
          CHECK(max_abs(x.block(3, 0, 1, 2)) == 0.0);
        }
  double e = 0.0;
  for (int i = 0; i < g.nu(); ++i)
    for (int j = 0; j < g.nv(); ++j)
      for (int ax = 0; ax < 2; ++ax) e = std::max(e, max_abs(a.value(ax, i, j, l0) - d.form.at(ax, i, j)));
  CHECK(e <= 1e-12);
}

TEST_CASE("extract_adapted_frame on the totally geodesic sphere") {
  const Grid g = square(0.8, 41);
  const AdaptedFrameData d = extract_adapted_frame(example_surface(g, 1.0, 3));
  CHECK(d.frame_form == SignatureForm::identity(4));
  double beta = 0.0, metric = 0.0;
  for (int i = 3; i < g.nu() - 3; ++i)
    for (int j = 3; j < g.nv() - 3; ++j) {
      for (int ax = 0; ax < 2; ++ax) beta = std::max(beta, max_abs(d.beta(ax, i, j)));
      // θθᵗ = cos²v du² + dv²
      Eigen::Matrix2d th;
      for (int ax = 0; ax < 2; ++ax) th.col(ax) = d.theta(ax, i, j).real();
      Eigen::Matrix2d gm = th.transpose() * th;
      const double cv = std::cos(g.v.at(j));
      metric = std::max(metric, (gm - Eigen::Vector2d(cv * cv, 1.0).asDiagonal().toDenseMatrix()).cwiseAbs().maxCoeff());
    }
  CHECK(beta <= 1e-12);
  CHECK(metric <= 1e-8);
  CHECK(normal_flatness_residual(d.eta_field()) <= 1e-12);
}

TEST_CASE("insertion round trip and gauge independence") {
  const Grid g = square(0.5, 65);
  const cd l0 = 1.0 + std::sqrt(2.0);
  const ImmersionSurface s = example_surface(g, l0, 2);
  std::vector<ImmersionSurface> back;
  for (bool reverse : {false, true}) {
    ExtractOptions eo;
    eo.reverse_tangent_order = reverse;
    const AdaptedFrameData d = extract_adapted_frame(s, eo);
    CHECK(d.j0() == 1);
    CHECK(d.frame_form == SignatureForm({1, 1, 1, -1}));
    const ConnectionFamily a = insert_lambda(d, 0.5);
    const FrameGrid f = integrate_frame(a, insertion_scales(0.5, 1).lambda0);
    EvaluateOptions opts;
    opts.left_factor = d.base_frame;
    opts.check_range = false;
    back.push_back(evaluate_family(f, l0, direct_row(d), opts));
    CHECK(surface_distance(back.back(), s) <= 1e-6);
  }
  CHECK(surface_distance(back[0], back[1]) <= 1e-8);
}

TEST_CASE("extract_adapted_frame rejects degenerate input") {
  const Grid g = square(0.5, 11);
  ImmersionSurface planar;
  planar.grid = g;
  planar.ambient = SignatureForm::identity(4);
  for (int i = 0; i < g.nu(); ++i)
    for (int j = 0; j < g.nv(); ++j) planar.points.push_back(Eigen::Vector4d(std::sin(g.u.at(i)), 0, std::cos(g.u.at(i)), 0));
  CHECK_THROWS_AS(extract_adapted_frame(planar), DomainError);
}
