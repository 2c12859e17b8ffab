#include "loopframe/config.hpp"

#include "loopframe/catalog.hpp"

#include <algorithm>
#include <cstdlib>
#include <regex>
#include <sstream>

namespace loopframe {

namespace {

[[noreturn]] void bad_lambda(const std::string& text) {
  throw DomainError("cannot parse λ \"" + text + "\" (use a+bi or r e^{it})");
}

double parse_real(const std::string& s, const std::string& whole) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    bad_lambda(whole);
  }
  if (used != s.size()) bad_lambda(whole);
  return x;
}

// "a", "bi", "a+bi", "a-bi"
cd parse_cartesian(const std::string& s, const std::string& whole) {
  if (s.empty()) bad_lambda(whole);
  if (s.back() != 'i') return parse_real(s, whole);
  const std::string body = s.substr(0, s.size() - 1);
  // split at the last sign that is not part of an exponent
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;)
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string::npos) return cd(0.0, parse_real(body, whole));
  return cd(parse_real(body.substr(0, split), whole), parse_real(body.substr(split), whole));
}

}  // namespace

cd parse_lambda(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  const auto e = s.find("e^{");
  if (e != std::string::npos) {
    if (s.back() != '}') bad_lambda(text);
    const double r = e == 0 ? 1.0 : parse_real(s.substr(0, e), text);
    std::string t = s.substr(e + 3, s.size() - e - 4);
    if (!t.empty() && t.front() == 'i') t.erase(0, 1);
    else if (!t.empty() && t.back() == 'i') t.pop_back();
    else bad_lambda(text);
    if (t.empty()) bad_lambda(text);
    return std::polar(r, parse_real(t, text));
  }
  const cd l = parse_cartesian(s, text);
  if (!std::isfinite(l.real()) || !std::isfinite(l.imag())) bad_lambda(text);
  return l;
}

std::string format_lambda(cd lambda) {
  std::ostringstream os;
  os.precision(17);
  os << lambda.real() << (lambda.imag() < 0.0 || std::signbit(lambda.imag()) ? "-" : "+") << std::abs(lambda.imag()) << "i";
  return os.str();
}

Grid DomainSpec::grid() const {
  return Grid::with_base({u[0], u[1], size[0]}, {v[0], v[1], size[1]}, 0.0, 0.0);
}

ComplexStrip StripSpec::strip() const {
  ComplexStrip s(domain.grid(), eps, count);
  s.validate();
  return s;
}

std::vector<cd> RunConfig::lambda_values() const {
  std::vector<cd> out;
  for (const auto& s : lambdas) out.push_back(parse_lambda(s));
  return out;
}

void RunConfig::validate() const {
  const Tolerances& t = tol;
  for (double x : {t.mc, t.mc_fd, t.normalization, t.curvature, t.group, t.quadric, t.metric, t.geodesic, t.insertion,
                   t.split, t.condition, t.off_degree, t.pluriharmonic, t.reality, t.column, t.gluing, t.negative_control})
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("every tolerance must be positive");
  if (grid.size[0] < 5 || grid.size[1] < 5) throw DomainError("grid needs at least 5x5 samples");
  if (samples < 8 || samples % 2 != 0) throw DomainError("circle samples must be even and at least 8");
  if (bandwidth < 1 || samples < 4 * bandwidth) throw DomainError("bandwidth must be positive with samples >= 4x bandwidth");
  if (side != "left" && side != "right") throw DomainError("side must be left or right");
  if (threads < 0) throw DomainError("thread count must be non-negative");
  for (const auto& s : suites)
    if (std::find(known_suites().begin(), known_suites().end(), s) == known_suites().end())
      throw DomainError("unknown suite \"" + s + "\"");
  const CatalogRow r = case_catalog(case_id, row);
  for (cd l : lambda_values()) {
    if (std::abs(l - cd(0, 1)) < kExclusionRadius || std::abs(l + cd(0, 1)) < kExclusionRadius)
      throw DomainError("coframe vanishes at λ = " + format_lambda(l) + ": the map f is not an immersion at λ = ±i");
    if (!admissible(r.range, l))
      throw DomainError("λ = " + format_lambda(l) + " is outside the range of case " + std::to_string(case_id) + " row " +
                        std::to_string(row));
  }
  strip.strip();
}

bool RunConfig::operator==(const RunConfig& o) const { return config_to_json(*this) == config_to_json(o); }

namespace {

Json domain_json(const DomainSpec& d) { return {{"size", d.size}, {"u", d.u}, {"v", d.v}}; }

template <typename T>
void take(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw DomainError(std::string("config field \"") + key + "\": " + e.what());
  }
}

void check_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) throw DomainError("config " + where + " must be an object");
  for (const auto& [k, v] : j.items())
    if (std::none_of(keys.begin(), keys.end(), [&](const char* x) { return k == x; }))
      throw DomainError("unknown config field \"" + where + k + "\"");
}

DomainSpec domain_from(const Json& j, DomainSpec d, const std::string& where) {
  check_keys(j, {"size", "u", "v"}, where);
  take(j, "size", d.size);
  take(j, "u", d.u);
  take(j, "v", d.v);
  return d;
}

#define LOOPFRAME_TOLERANCES(X)                                                                                     \
  X(mc) X(mc_fd) X(normalization) X(curvature) X(group) X(quadric) X(metric) X(geodesic) X(insertion) X(split)      \
      X(condition) X(off_degree) X(pluriharmonic) X(reality) X(column) X(gluing) X(negative_control)

}  // namespace

Json config_to_json(const RunConfig& c) {
  Json tol;
#define X(name) tol[#name] = c.tol.name;
  LOOPFRAME_TOLERANCES(X)
#undef X
  Json j = {{"case", c.case_id},
            {"row", c.row},
            {"lambda", c.lambdas},
            {"c", c.c},
            {"seed", c.seed},
            {"threads", c.threads},
            {"grid", domain_json(c.grid)},
            {"strip",
             {{"domain", domain_json(c.strip.domain)},
              {"eps", c.strip.eps},
              {"count", c.strip.count},
              {"auto_shrink", c.strip.auto_shrink}}},
            {"split", {{"samples", c.samples}, {"bandwidth", c.bandwidth}, {"side", c.side}}},
            {"tolerances", tol},
            {"output", {{"path", c.out}, {"format", c.format}, {"diagnostics", c.diagnostics}}},
            {"suites", c.suites}};
  j["form"] = c.form ? form_to_json(*c.form) : Json(nullptr);
  return j;
}

RunConfig config_from_json(const Json& j, const RunConfig& base) {
  RunConfig c = base;
  check_keys(j, {"case", "row", "lambda", "c", "seed", "threads", "grid", "strip", "split", "tolerances", "output", "suites", "form"}, "");
  take(j, "case", c.case_id);
  take(j, "row", c.row);
  take(j, "lambda", c.lambdas);
  take(j, "c", c.c);
  take(j, "seed", c.seed);
  take(j, "threads", c.threads);
  take(j, "suites", c.suites);
  if (j.contains("grid")) c.grid = domain_from(j["grid"], c.grid, "grid.");
  if (j.contains("strip")) {
    const Json& s = j["strip"];
    check_keys(s, {"domain", "eps", "count", "auto_shrink"}, "strip.");
    if (s.contains("domain")) c.strip.domain = domain_from(s["domain"], c.strip.domain, "strip.domain.");
    take(s, "eps", c.strip.eps);
    take(s, "count", c.strip.count);
    take(s, "auto_shrink", c.strip.auto_shrink);
  }
  if (j.contains("split")) {
    const Json& s = j["split"];
    check_keys(s, {"samples", "bandwidth", "side"}, "split.");
    take(s, "samples", c.samples);
    take(s, "bandwidth", c.bandwidth);
    take(s, "side", c.side);
  }
  if (j.contains("tolerances")) {
    const Json& t = j["tolerances"];
#define X(name) #name,
    check_keys(t, {LOOPFRAME_TOLERANCES(X)}, "tolerances.");
#undef X
#define X(name) take(t, #name, c.tol.name);
    LOOPFRAME_TOLERANCES(X)
#undef X
  }
  if (j.contains("output")) {
    const Json& o = j["output"];
    check_keys(o, {"path", "format", "diagnostics"}, "output.");
    take(o, "path", c.out);
    take(o, "format", c.format);
    take(o, "diagnostics", c.diagnostics);
  }
  if (j.contains("form")) {
    if (j["form"].is_null())
      c.form.reset();
    else
      c.form = form_from_json(j["form"]);
  }
  return c;
}

RunConfig default_config() {
  const char* path = std::getenv("LOOPFRAME_CONFIG");
  if (!path || !*path) return {};
  return config_from_json(read_json_file(path));
}

}  // namespace loopframe
