#include "loopframe/verify.hpp"

#include "loopframe/example.hpp"
#include "loopframe/immersions.hpp"
#include "loopframe/sample_loops.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>

namespace loopframe {

namespace {

class Recorder {
 public:
  explicit Recorder(std::vector<CheckRecord>& out) : out_(out) {}

  void suite(const std::string& s) { suite_ = s; }

  void upper(const std::string& name, double tolerance, const std::function<double()>& measure) {
    run(name, tolerance, false, measure);
  }
  void lower(const std::string& name, double bound, const std::function<double()>& measure) {
    run(name, bound, true, measure);
  }

 private:
  void run(const std::string& name, double tol, bool lower_bound, const std::function<double()>& measure) {
    CheckRecord r{suite_, name, 0.0, tol, lower_bound, false, ""};
    try {
      r.measured = measure();
      r.pass = std::isfinite(r.measured) && (lower_bound ? r.measured > tol : r.measured <= tol);
    } catch (const std::exception& e) {
      r.measured = std::numeric_limits<double>::quiet_NaN();
      r.note = e.what();
    }
    out_.push_back(r);
  }

  std::vector<CheckRecord>& out_;
  std::string suite_;
};

Grid centred_square(double half, int count) { return Grid::with_base({-half, half, count}, {-half, half, count}, 0.0, 0.0); }

std::vector<cd> range_samples(LambdaRange r) {
  switch (r) {
    case LambdaRange::Real: return {0.3, 0.8, 1.7, -0.6, -2.5};
    case LambdaRange::Imaginary: return {cd(0, 0.3), cd(0, 0.8), cd(0, 1.7), cd(0, -0.6), cd(0, -2.5)};
    case LambdaRange::UnitCircle: return {std::polar(1.0, 0.3), std::polar(1.0, 1.2), std::polar(1.0, 2.9), std::polar(1.0, -0.7)};
  }
  return {};
}

ImmersionSurface example_surface(const Grid& g, cd lambda, int row) {
  return evaluate_family(example_family(g, {lambda}).frames[0], lambda, case_catalog(3, row));
}

double relative_curvature_error(const ImmersionSurface& s, double expected) {
  const CurvatureField k = gauss_curvature_estimate(s);
  const Grid& g = k.grid;
  double e = 0.0;
  for (int p = 0; p < 10; ++p) {
    const int i = g.nu() / 5 + (p * 37) % (3 * g.nu() / 5);
    const int j = g.nv() / 5 + (p * 53) % (3 * g.nv() / 5);
    if (!k.valid[g.index(i, j)]) throw NumericalError("curvature probe at a degenerate point");
    e = std::max(e, std::abs(k.at(i, j) - expected) / std::abs(expected));
  }
  return e;
}

void loopalg_checks(Recorder& rec, const RunConfig& c) {
  rec.suite("loopalg");
  std::mt19937_64 rng(c.seed);
  double group = 0.0, reality = 0.0;
  for (int cs = 1; cs <= 4; ++cs)
    for (int r = 1; r <= 3; ++r) {
      const CatalogRow row = case_catalog(cs, r);
      for (int trial = 0; trial < 3; ++trial) {
        const ExpLoop f = random_group_loop(row, rng);
        const ConjugatedLoop<ExpLoop> g{row.t, f};
        const std::vector<cd> lambdas = range_samples(row.range);
        group = std::max(group, group_residual(g, row.target_form, lambdas));
        for (cd l : lambdas) {
          const CMatrix x = f(l);
          for (int a = 0; a < row.n(); ++a) reality = std::max(reality, std::abs((row.t(a, a) * x(a, row.m) / row.t(row.m, row.m)).imag()));
        }
      }
    }
  rec.upper("table coverage: group residual", c.tol.group, [&] { return group; });
  rec.upper("table coverage: column reality", c.tol.group, [&] { return reality; });
}

void frames_checks(Recorder& rec, const RunConfig& c) {
  rec.suite("frames");
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> coord(-1.5, 1.5), angle(-std::numbers::pi, std::numbers::pi);
  rec.upper("example Maurer-Cartan form, closed form", c.tol.mc, [&] {
    const ExprForm shown = example_form();
    double e = 0.0;
    for (int t = 0; t < 20; ++t) {
      const double u = coord(rng), v = coord(rng);
      const cd l = std::polar(0.5 + std::abs(coord(rng)), angle(rng));
      for (int a = 0; a < 2; ++a) e = std::max(e, max_abs(example_mc(a, u, v, l) - shown.eval(a, u, v, l)));
    }
    return e;
  });
  rec.upper("example Maurer-Cartan form, finite differences", c.tol.mc_fd, [&] {
    const Grid g = c.grid.grid();
    double e = 0.0;
    for (cd l : {cd(1.0), std::polar(1.0, 0.3)}) {
      const OneFormField a = mc_form(example_family(g, {l}).frames[0], 4);
      for (int i = 0; i < g.nu(); ++i)
        for (int j = 0; j < g.nv(); ++j)
          for (int ax = 0; ax < 2; ++ax) e = std::max(e, max_abs(a.at(ax, i, j) - example_mc(ax, g.u.at(i), g.v.at(j), l)));
    }
    return e;
  });
  rec.upper("normalization at the base point", c.tol.normalization, [&] {
    const Grid g = centred_square(1.0, 5);
    double e = 0.0;
    for (int r = 1; r <= 3; ++r)
      for (int t = 0; t < 7; ++t) {
        const cd l = random_admissible_lambda(case_catalog(3, r).range, rng);
        const RVector x = example_surface(g, l, r).at(g.base_i, g.base_j);
        RVector e3 = RVector::Zero(4);
        e3(2) = 1.0;
        e = std::max(e, (x - e3).cwiseAbs().maxCoeff());
      }
    return e;
  });
}

void immersions_checks(Recorder& rec, const RunConfig& c) {
  rec.suite("immersions");
  const Grid g = c.grid.grid();
  for (cd l : c.lambda_values()) {
    rec.upper("curvature law at lambda " + format_lambda(l), c.tol.curvature, [&] {
      const CatalogRow row = row_for_lambda(3, l, 2, 1);
      return relative_curvature_error(example_surface(g, l, row.row), curvature_at(row, l));
    });
  }
  rec.upper("quadric membership, rows 1-3", c.tol.quadric, [&] {
    double e = 0.0;
    for (auto [r, l] : {std::pair<int, cd>{1, cd(0, 0.5)}, {2, cd(2.0)}, {3, std::polar(1.0, 0.3)}})
      e = std::max(e, quadric_residual(example_surface(g, l, r)));
    return e;
  });
  rec.upper("metric ratio between 1 and e^{0.3i}", c.tol.metric, [&] {
    const Grid small = centred_square(1.0, 17);
    const MetricRatio m = metric_ratio(example_connection(small), 1.0, std::polar(1.0, 0.3), 3, 2,
                                       {{3, 4}, {8, 8}, {12, 2}, {15, 14}});
    return std::abs(m.ratio / std::pow(std::cos(0.3), 2) - 1.0);
  });
  rec.upper("coframe rank is lambda-independent", 0.5, [&] {
    const Grid small = centred_square(1.0, 17);
    const ConnectionFamily a = example_connection(small);
    std::mt19937_64 rng(c.seed + 1);
    std::uniform_int_distribution<int> node(0, 16);
    int changes = 0;
    for (int t = 0; t < 100; ++t) {
      const int i = node(rng), j = node(rng);
      const int r0 = coframe_rank(a, 1.0, i, j, 2);
      const cd l = random_admissible_lambda(case_catalog(3, 1 + t % 3).range, rng);
      if (coframe_rank(a, l, i, j, 2) != r0) ++changes;
    }
    return double(changes);
  });
  rec.upper("totally geodesic at lambda 1: fourth coordinate", c.tol.normalization, [&] {
    const ImmersionSurface s = example_surface(g, 1.0, 3);
    double e = 0.0;
    for (const RVector& p : s.points) e = std::max(e, std::abs(p(3)));
    return e;
  });
  rec.upper("totally geodesic at lambda 1: second fundamental form", c.tol.geodesic,
            [&] { return second_fundamental_form_estimate(example_surface(centred_square(0.5, 65), 1.0, 3)); });
  rec.upper("insertion round trip", c.tol.insertion, [&] {
    const Grid small = centred_square(0.5, 65);
    const cd l0 = insertion_scales(c.c, 1).lambda0;
    const CatalogRow row = row_for_lambda(3, l0, 2, 1);
    const ImmersionSurface s = example_surface(small, l0, row.row);
    const AdaptedFrameData d = extract_adapted_frame(s);
    const FrameGrid f = integrate_frame(insert_lambda(d, c.c), insertion_scales(c.c, d.j0()).lambda0);
    EvaluateOptions opts;
    opts.left_factor = d.base_frame;
    opts.check_range = false;
    return surface_distance(evaluate_family(f, l0, direct_row(d), opts), s);
  });
}

CMatrix m2(cd a, cd b, cd c, cd d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

void factorization_checks(Recorder& rec, const RunConfig& c) {
  rec.suite("factorization");
  SplitOptions opts;
  opts.bandwidth = c.bandwidth;
  opts.condition_threshold = c.tol.condition;
  opts.residual_tolerance = c.tol.split;
  opts.support_tolerance = c.tol.split;
  const int samples = std::max(c.samples, 4 * c.bandwidth);
  rec.upper("SL2 loop re-splits into its factors", c.tol.split, [&] {
    const auto plus = [](cd l) { return m2(1.0, 0.0, 0.5 * l, 1.0); };
    const auto minus = [](cd l) { return m2(1.0, 0.3 / l, 0.0, 1.0); };
    const SplitResult r =
        birkhoff_split(CircleSampling::from([&](cd l) { return CMatrix(plus(l) * minus(l)); }, samples), Side::Left, opts);
    if (!r.in_big_cell) throw NumericalError("SL2 loop reported outside the big cell");
    return std::max(max_distance(r.plus, CircleSampling::from(plus, samples)),
                    max_distance(r.minus, CircleSampling::from(minus, samples)));
  });
  rec.upper("factor support constraints", c.tol.split, [&] {
    std::mt19937_64 rng(c.seed);
    double e = 0.0;
    for (int t = 0; t < 3; ++t) {
      const SplitResult r = birkhoff_split(CircleSampling::from(random_group_loop(case_catalog(3, 1), rng), samples), Side::Left, opts);
      e = std::max({e, r.support_defect, r.minus.coefficients().max_norm(1, samples)});
    }
    return e;
  });
  rec.lower("diag(lambda, 1/lambda) rejected (condition)", c.tol.condition, [&] {
    return in_big_cell(CircleSampling::from([](cd l) { return m2(l, 0.0, 0.0, 1.0 / l); }, samples), opts).condition;
  });
  rec.upper("forward split of the example: degree-one potential", c.tol.off_degree, [&] {
    const FrameFamily f = example_family(c.strip.domain.grid(), circle_points(samples));
    return mc_off_degree(dpw_forward(f, opts), 1, 1);
  });
}

void extension_checks(Recorder& rec, const RunConfig& c) {
  rec.suite("extension");
  ExtensionOptions opts;
  opts.samples = c.samples;
  opts.split.bandwidth = c.bandwidth;
  opts.split.condition_threshold = c.tol.condition;
  opts.backward.split = opts.split;
  opts.backward.fixed_tolerance = c.tol.split;
  opts.complexify.auto_shrink = c.strip.auto_shrink;
  const ComplexStrip strip = c.strip.strip();
  const ExprForm form = c.form.value_or(example_form());
  const std::vector<cd> lambdas = circle_points(c.samples);
  std::optional<ExtensionResult> base;
  auto result = [&]() -> const ExtensionResult& {
    if (!base) base = pluriharmonic_extend(form, FrameFamily{}, c.case_id, strip, opts);
    return *base;
  };
  rec.upper("pluriharmonic residual", c.tol.pluriharmonic, [&] {
    return std::max(result().pluriharmonic.top, result().pluriharmonic.conjugate);
  });
  rec.upper("reality on the real slice", c.tol.reality, [&] { return result().reality; });
  rec.upper("real-slice column agreement", c.tol.column, [&] { return result().columns; });
  rec.lower("negative control: anti-holomorphic factor", c.tol.negative_control, [&] {
    const InvolutionSpec tau = extension_pair(c.case_id, 2, form.n - 3).second;
    CMatrix n = CMatrix::Zero(form.n, form.n);
    n(0, 2) = 1.0;
    n(2, 0) = -1.0;
    const StripFamily plus = dpw_forward(extend_frame_holo(complexify_eta(form, strip, opts.complexify), lambdas), opts.split);
    return pluriharmonic_residual(dpw_backward(with_antiholomorphic_factor(plus, n, 0.2), tau, opts.backward), tau).top;
  });
  rec.upper("gluing of two normalizations", c.tol.gluing, [&] {
    const Grid& g = strip.base;
    const ExtensionResult other =
        pluriharmonic_extend_at(form, FrameFamily{}, c.case_id, strip, (3 * g.nu()) / 4, g.nv() / 4, opts);
    return gluing_defect(result().frames, other.frames, InvolutionSpec::standard_p(2, form.n - 3));
  });
}

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

}  // namespace

std::vector<CheckRecord> run_verification(const RunConfig& c) {
  std::vector<CheckRecord> out;
  Recorder rec(out);
  const auto selected = [&](const char* s) { return std::find(c.suites.begin(), c.suites.end(), s) != c.suites.end(); };
  if (selected("loopalg")) loopalg_checks(rec, c);
  if (selected("frames")) frames_checks(rec, c);
  if (selected("immersions")) immersions_checks(rec, c);
  if (selected("factorization")) factorization_checks(rec, c);
  if (selected("extension")) extension_checks(rec, c);
  return out;
}

bool all_pass(const std::vector<CheckRecord>& r) {
  return std::all_of(r.begin(), r.end(), [](const CheckRecord& x) { return x.pass; });
}

Json verification_report(const std::vector<CheckRecord>& r) {
  Json checks = Json::array();
  for (const CheckRecord& x : r) {
    Json j = {{"suite", x.suite},
              {"name", x.name},
              {"measured", fixed(x.measured)},
              {x.lower_bound ? "lower_bound" : "tolerance", fixed(x.tolerance)},
              {"pass", x.pass}};
    if (!x.note.empty()) j["note"] = x.note;
    checks.push_back(j);
  }
  return {{"pass", all_pass(r)}, {"checks", checks}};
}

}  // namespace loopframe
