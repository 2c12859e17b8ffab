#include "loopframe/example.hpp"
#include "loopframe/export.hpp"
#include "loopframe/finite_diff.hpp"
#include "loopframe/immersions.hpp"
#include "loopframe/parallel.hpp"
#include "loopframe/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

using namespace loopframe;

namespace {

enum Exit { kPass = 0, kFail = 1, kBadInput = 2, kBigCell = 3 };

std::string fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", x);
  return buf;
}

std::array<int, 2> parse_size(const std::string& text) {
  const auto x = text.find_first_of("xX");
  try {
    if (x != std::string::npos) {
      std::size_t a = 0, b = 0;
      const int w = std::stoi(text.substr(0, x), &a), h = std::stoi(text.substr(x + 1), &b);
      if (a == x && b == text.size() - x - 1) return {w, h};
    }
  } catch (const std::exception&) {
  }
  throw DomainError("grid must be given as WxH, got \"" + text + "\"");
}

std::string indexed_path(const std::string& path, std::size_t k, std::size_t total) {
  if (total <= 1) return path;
  const auto dot = path.find_last_of('.');
  const std::string tag = "_" + std::to_string(k);
  return dot == std::string::npos ? path + tag : path.substr(0, dot) + tag + path.substr(dot);
}

void emit(const Json& report, const std::string& path) {
  std::cout << report.dump(2) << "\n";
  if (!path.empty()) write_json_file(path, report);
}

// Grid lines on which the induced metric degenerates.
Json degenerate_lines(const ImmersionSurface& s) {
  const Grid& g = s.grid;
  const CMatrix jm = s.ambient.matrix();
  const Eigen::MatrixXd j = jm.real();
  std::vector<double> det(g.size());
  double scale = 0.0;
  for (int i = 0; i < g.nu(); ++i)
    for (int k = 0; k < g.nv(); ++k) {
      const RVector xu = line_derivative([&](int p) { return RVector(s.at(p, k)); }, i, g.nu(), g.u.step(), 4);
      const RVector xv = line_derivative([&](int p) { return RVector(s.at(i, p)); }, k, g.nv(), g.v.step(), 4);
      const double e = xu.dot(j * xu), f = xu.dot(j * xv), gg = xv.dot(j * xv);
      det[g.index(i, k)] = std::abs(e * gg - f * f);
      scale = std::max(scale, det[g.index(i, k)]);
    }
  const double floor = 1e-6 * scale;
  Json u_lines = Json::array(), v_lines = Json::array();
  for (int k = 0; k < g.nv(); ++k) {
    int bad = 0;
    for (int i = 0; i < g.nu(); ++i) bad += det[g.index(i, k)] <= floor;
    if (2 * bad > g.nu()) v_lines.push_back(fixed(g.v.at(k)));
  }
  for (int i = 0; i < g.nu(); ++i) {
    int bad = 0;
    for (int k = 0; k < g.nv(); ++k) bad += det[g.index(i, k)] <= floor;
    if (2 * bad > g.nv()) u_lines.push_back(fixed(g.u.at(i)));
  }
  return {{"v", v_lines}, {"u", u_lines}};
}

int cmd_example(const RunConfig& c) {
  c.validate();
  if (c.case_id != 3) throw DomainError("the example is a case 3 family");
  const Grid g = c.grid.grid();
  const CatalogRow row = case_catalog(3, c.row);
  const std::vector<cd> lambdas = c.lambda_values();
  Json runs = Json::array();
  bool pass = true;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const cd l = lambdas[k];
    const ImmersionSurface s = evaluate_family(example_family(g, {l}).frames[0], l, row);
    const CurvatureField curv = gauss_curvature_estimate(s);
    const double expected = curvature_at(row, l);
    double err = 0.0, sum = 0.0;
    int used = 0;
    for (int p = 0; p < 10; ++p) {
      const int i = g.nu() / 5 + (p * 37) % (3 * g.nu() / 5);
      const int j = g.nv() / 5 + (p * 53) % (3 * g.nv() / 5);
      if (!curv.valid[g.index(i, j)]) continue;
      sum += curv.at(i, j);
      ++used;
      err = std::max(err, std::abs(curv.at(i, j) - expected) / std::abs(expected));
    }
    const double quadric = quadric_residual(s);
    const bool ok = used > 0 && err <= c.tol.curvature && quadric <= c.tol.quadric;
    pass = pass && ok;
    Json run = {{"lambda", format_lambda(l)},
                {"row", c.row},
                {"space", row.target_label},
                {"curvature_formula", fixed(expected)},
                {"curvature_estimate", fixed(used ? sum / used : std::nan(""))},
                {"curvature_relative_error", fixed(err)},
                {"quadric_residual", fixed(quadric)},
                {"skipped_points", curv.skipped},
                {"degenerate_lines", degenerate_lines(s)},
                {"pass", ok}};
    if (!c.out.empty()) {
      const std::string path = indexed_path(c.out, k, lambdas.size());
      const ExportFormat f = c.format.empty() ? format_from_path(path) : parse_format(c.format);
      std::optional<std::array<int, 3>> projection;
      if (f == ExportFormat::Obj && s.dim() != 3) projection = std::array<int, 3>{0, 1, 2};
      write_surface(path, s, f, projection);
      run["file"] = path;
    }
    runs.push_back(run);
  }
  emit({{"command", "example"}, {"pass", pass}, {"runs", runs}}, "");
  return pass ? kPass : kFail;
}

int cmd_verify(const RunConfig& c) {
  c.validate();
  const std::vector<CheckRecord> records = run_verification(c);
  Json report = verification_report(records);
  report["command"] = "verify";
  emit(report, c.out);
  return all_pass(records) ? kPass : kFail;
}

int cmd_split(const RunConfig& c, const std::string& input) {
  c.validate();
  const LoopFile file = loop_from_json(read_json_file(input));
  const int samples = std::max(c.samples, 4 * c.bandwidth);
  SplitOptions opts;
  opts.bandwidth = c.bandwidth;
  opts.condition_threshold = c.tol.condition;
  opts.residual_tolerance = c.tol.split;
  opts.support_tolerance = c.tol.split;
  const Side side = c.side == "left" ? Side::Left : Side::Right;
  const SplitResult r = birkhoff_split(CircleSampling::from(file.loop, samples), side, opts);
  const Json record = {{"node", 0},
                       {"residual", fixed(r.residual)},
                       {"condition", fixed(r.condition)},
                       {"support_defect", fixed(r.support_defect)},
                       {"in_big_cell", r.in_big_cell}};
  if (c.diagnostics) std::cerr << record.dump() << "\n";
  if (!r.in_big_cell) {
    std::cerr << "loop is outside the big cell: failing points [0] (condition " << fixed(r.condition) << ", residual "
              << fixed(r.residual) << ")\n";
    return kBigCell;
  }
  auto trimmed = [&](const CircleSampling& s) {
    FourierLoop f = s.coefficients();
    const double floor = 1e-14 * std::max(1.0, f.max_norm(-samples, samples));
    for (auto it = f.coeffs.begin(); it != f.coeffs.end();) it = max_abs(it->second) <= floor ? f.coeffs.erase(it) : std::next(it);
    return f;
  };
  const Json plus = loop_to_json(trimmed(r.plus), "plus"), minus = loop_to_json(trimmed(r.minus), "minus");
  const Json report = {{"command", "split"}, {"side", c.side}, {"diagnostics", record}};
  if (c.out.empty()) {
    std::cout << Json{{"report", report}, {"factors", {plus, minus}}}.dump(2) << "\n";
  } else {
    write_json_file(c.out + ".plus.json", plus);
    write_json_file(c.out + ".minus.json", minus);
    std::cout << report.dump(2) << "\n";
  }
  return kPass;
}

int cmd_extend(const RunConfig& c) {
  c.validate();
  ExtensionOptions opts;
  opts.samples = c.samples;
  opts.split.bandwidth = c.bandwidth;
  opts.split.condition_threshold = c.tol.condition;
  opts.backward.split = opts.split;
  opts.backward.fixed_tolerance = c.tol.split;
  opts.complexify.auto_shrink = c.strip.auto_shrink;
  const ExprForm form = c.form.value_or(example_form());
  const ComplexStrip strip = c.strip.strip();
  ExtensionResult r;
  try {
    r = pluriharmonic_extend(form, FrameFamily{}, c.case_id, strip, opts);
  } catch (const BigCellError& e) {
    Json nodes = Json::array();
    for (int p : e.nodes()) nodes.push_back(p);
    std::cerr << e.what() << "\nfailing points: " << nodes.dump() << "\n";
    return kBigCell;
  }
  if (c.diagnostics)
    for (const auto* steps : {&r.forward, &r.backward})
      for (const PointDiagnostic& d : *steps)
        std::cerr << Json{{"step", steps == &r.forward ? "forward" : "backward"},
                          {"node", d.node},
                          {"residual", fixed(d.residual)},
                          {"condition", fixed(d.condition)},
                          {"in_big_cell", d.ok}}
                         .dump()
                  << "\n";
  const double pluri = std::max(r.pluriharmonic.top, r.pluriharmonic.conjugate);
  const bool pass = pluri <= c.tol.pluriharmonic && r.reality <= c.tol.reality && r.columns <= c.tol.column &&
                    r.plus_off_degree <= c.tol.off_degree;
  Json report = {{"command", "extend"},
                 {"case", c.case_id},
                 {"target", r.target_label},
                 {"strip_eps", fixed(r.eps)},
                 {"halvings", r.halvings},
                 {"cauchy_riemann", fixed(r.cr)},
                 {"plus_off_degree", fixed(r.plus_off_degree)},
                 {"pluriharmonic_top", fixed(r.pluriharmonic.top)},
                 {"pluriharmonic_conjugate", fixed(r.pluriharmonic.conjugate)},
                 {"reality_on_real_slice", fixed(r.reality)},
                 {"column_agreement", fixed(r.columns)},
                 {"pass", pass}};
  if (!c.out.empty()) {
    if (!c.format.empty() && parse_format(c.format) != ExportFormat::Vtk) throw DomainError("strips export as vtk");
    std::ofstream os(c.out);
    if (!os) throw DomainError("cannot write " + c.out);
    write_strip_vtk(os, r.frames, 0, 2);
    report["file"] = c.out;
  }
  emit(report, "");
  return pass ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loop-group frames of constant-curvature surfaces: generation, verification, splitting, extension"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  std::string config_path, grid, strip_grid, input, format, out, side;
  std::vector<std::string> lambdas, suites;
  int case_id = 0, row = 0, threads = 0, samples = 0, bandwidth = 0;
  double strip_eps = 0.0, c_value = 0.0;
  std::uint64_t seed = 0;
  bool show_config = false, diagnostics = false, auto_shrink = false;

  app.add_option("--config", config_path, "Config file (overrides LOOPFRAME_CONFIG)");
  auto* o_case = app.add_option("--case", case_id, "Case 1-4");
  auto* o_row = app.add_option("--row", row, "Table row 1-3");
  auto* o_lambda = app.add_option("--lambda", lambdas, "Spectral parameter(s): a+bi or r e^{it}");
  auto* o_c = app.add_option("--c", c_value, "Curvature of the surface used for insertion");
  auto* o_grid = app.add_option("--grid", grid, "Grid size WxH");
  auto* o_strip_grid = app.add_option("--strip-grid", strip_grid, "Real grid of the strip, WxH");
  auto* o_eps = app.add_option("--strip-eps", strip_eps, "Imaginary half-width of the strip");
  auto* o_shrink = app.add_flag("--auto-shrink", auto_shrink, "Halve the strip width at singularities");
  auto* o_samples = app.add_option("--samples", samples, "Circle samples for splitting");
  auto* o_bandwidth = app.add_option("--bandwidth", bandwidth, "Birkhoff bandwidth");
  auto* o_seed = app.add_option("--seed", seed, "Random seed");
  auto* o_out = app.add_option("--out", out, "Output path");
  auto* o_format = app.add_option("--format", format, "Export format")->check(CLI::IsMember({"csv", "obj", "vtk"}));
  auto* o_diag = app.add_flag("--diagnostics", diagnostics, "Per-point split records");
  auto* o_threads = app.add_option("--threads", threads, "Worker threads (0: all cores)");
  app.add_flag("--show-config", show_config, "Print the effective config and exit");

  RunConfig defaults;
  std::map<std::string, double> tol_values;
  std::map<std::string, CLI::Option*> tol_options;
  {
    const Json t = config_to_json(defaults)["tolerances"];
    for (const auto& [name, value] : t.items()) {
      std::string flag = "--tol-" + name;
      std::replace(flag.begin(), flag.end(), '_', '-');
      tol_values[name] = value.get<double>();
      tol_options[name] = app.add_option(flag, tol_values[name], "Tolerance " + name);
    }
  }

  auto* example = app.add_subcommand("example", "Evaluate the closed-form example and export the surface");
  auto* verify = app.add_subcommand("verify", "Run the invariant suites");
  auto* o_suite = verify->add_option("--suite", suites, "Suites to run")->check(CLI::IsMember(known_suites()));
  auto* split = app.add_subcommand("split", "Birkhoff-split a loop file");
  split->add_option("input", input, "Loop file")->required();
  auto* o_side = split->add_option("--side", side, "left or right")->check(CLI::IsMember({"left", "right"}));
  auto* extend = app.add_subcommand("extend", "Pluriharmonic extension of a closed-form family");
  std::string form_path;
  extend->add_option("--form", form_path, "Closed-form Maurer-Cartan form file (default: the example)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kBadInput;
  }

  try {
    RunConfig c = default_config();
    if (!config_path.empty()) c = config_from_json(read_json_file(config_path), c);
    if (*o_case) c.case_id = case_id;
    if (*o_row) c.row = row;
    if (*o_lambda) c.lambdas = lambdas;
    if (*o_c) c.c = c_value;
    if (*o_grid) c.grid.size = parse_size(grid);
    if (*o_strip_grid) c.strip.domain.size = parse_size(strip_grid);
    if (*o_eps) c.strip.eps = strip_eps;
    if (*o_shrink) c.strip.auto_shrink = auto_shrink;
    if (*o_samples) c.samples = samples;
    if (*o_bandwidth) c.bandwidth = bandwidth;
    if (*o_seed) c.seed = seed;
    if (*o_out) c.out = out;
    if (*o_format) c.format = format;
    if (*o_diag) c.diagnostics = diagnostics;
    if (*o_threads) c.threads = threads;
    if (*o_suite) c.suites = suites;
    if (*o_side) c.side = side;
    if (!form_path.empty()) c.form = form_from_json(read_json_file(form_path));
    Json t = config_to_json(c)["tolerances"];
    for (const auto& [name, opt] : tol_options)
      if (*opt) t[name] = tol_values[name];
    c = config_from_json({{"tolerances", t}}, c);
    set_thread_count(c.threads);

    if (show_config) {
      std::cout << config_to_json(c).dump(2) << "\n";
      return kPass;
    }
    if (*example) return cmd_example(c);
    if (*verify) return cmd_verify(c);
    if (*split) return cmd_split(c, input);
    if (*extend) return cmd_extend(c);
    std::cout << app.help();
    return kBadInput;
  } catch (const BigCellError& e) {
    std::cerr << "big-cell failure: " << e.what() << "\n";
    return kBigCell;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadInput;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kFail;
  }
}
