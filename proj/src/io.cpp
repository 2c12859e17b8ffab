#include "loopframe/io.hpp"

#include <fstream>
#include <sstream>

namespace loopframe {

namespace {

[[noreturn]] void schema(const std::string& what) { throw DomainError("file format: " + what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) schema(std::string(what) + " must be an integer");
  return j.get<int>();
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) schema(std::string(what) + " must be a number");
  return j.get<double>();
}

int parse_degree(const std::string& key) {
  std::size_t used = 0;
  int d = 0;
  try {
    d = std::stoi(key, &used);
  } catch (const std::exception&) {
    schema("degree key \"" + key + "\" is not an integer");
  }
  if (used != key.size()) schema("degree key \"" + key + "\" is not an integer");
  return d;
}

}  // namespace

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j, int n) {
  if (!j.is_array() || static_cast<int>(j.size()) != n) schema("matrix must have " + std::to_string(n) + " rows");
  CMatrix m(n, n);
  for (int r = 0; r < n; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || static_cast<int>(row.size()) != n) schema("matrix row must have " + std::to_string(n) + " entries");
    for (int c = 0; c < n; ++c) {
      const Json& e = row[c];
      if (!e.is_array() || e.size() != 2) schema("matrix entries are [re, im] pairs");
      m(r, c) = cd(number(e[0], "re"), number(e[1], "im"));
    }
  }
  if (!all_finite(m)) schema("non-finite matrix entry");
  return m;
}

Json loop_to_json(const FourierLoop& loop, const std::optional<std::string>& factor) {
  Json j;
  j["n"] = loop.n;
  j["coeffs"] = Json::object();
  for (const auto& [d, m] : loop.coeffs) j["coeffs"][std::to_string(d)] = matrix_to_json(m);
  if (factor) j["factor"] = *factor;
  return j;
}

Json loop_to_json(const LaurentLoop& loop, const std::optional<std::string>& factor) {
  FourierLoop f;
  f.n = loop.dim();
  for (const auto& [d, m] : loop.coeffs()) f.coeffs.emplace(d, m);
  return loop_to_json(f, factor);
}

LaurentLoop LoopFile::laurent() const {
  LaurentLoop l(loop.n);
  for (const auto& [d, m] : loop.coeffs) l.set(d, m);
  return l;
}

LoopFile loop_from_json(const Json& j) {
  LoopFile out;
  out.loop.n = integer(field(j, "n"), "n");
  require_dimension(out.loop.n);
  const Json& coeffs = field(j, "coeffs");
  if (!coeffs.is_object()) schema("\"coeffs\" must map degrees to matrices");
  for (const auto& [key, value] : coeffs.items()) out.loop.coeffs.emplace(parse_degree(key), matrix_from_json(value, out.loop.n));
  if (j.contains("factor")) {
    if (!j["factor"].is_string()) schema("\"factor\" must be a string");
    out.factor = j["factor"].get<std::string>();
  }
  return out;
}

Json grid_to_json(const Grid& g) {
  return {{"u", {g.u.lo, g.u.hi, g.u.count}}, {"v", {g.v.lo, g.v.hi, g.v.count}}, {"base", {g.base_i, g.base_j}}};
}

Grid grid_from_json(const Json& j) {
  auto axis = [&](const char* name) {
    const Json& a = field(j, name);
    if (!a.is_array() || a.size() != 3) schema(std::string("axis \"") + name + "\" is [lo, hi, count]");
    return Axis{number(a[0], "lo"), number(a[1], "hi"), integer(a[2], "count")};
  };
  const Axis u = axis("u"), v = axis("v");
  const Json& base = field(j, "base");
  if (!base.is_array() || base.size() != 2) schema("\"base\" is [i, j]");
  return Grid(u, v, integer(base[0], "base"), integer(base[1], "base"));
}

Json field_to_json(const OneFormField& f) {
  Json data = Json::array();
  for (int a = 0; a < 2; ++a) {
    Json rows = Json::array();
    for (int i = 0; i < f.grid.nu(); ++i) {
      Json row = Json::array();
      for (int j = 0; j < f.grid.nv(); ++j) row.push_back(matrix_to_json(f.at(a, i, j)));
      rows.push_back(row);
    }
    data.push_back(rows);
  }
  return {{"grid", grid_to_json(f.grid)}, {"n", f.n}, {"shape", {2, f.grid.nu(), f.grid.nv()}}, {"data", data}};
}

OneFormField field_from_json(const Json& j) {
  const Grid g = grid_from_json(field(j, "grid"));
  const int n = integer(field(j, "n"), "n");
  if (field(j, "shape") != Json{2, g.nu(), g.nv()}) schema("field shape does not match its grid");
  const Json& data = field(j, "data");
  OneFormField f(g, n);
  if (!data.is_array() || data.size() != 2) schema("field data must hold two axes");
  for (int a = 0; a < 2; ++a) {
    if (!data[a].is_array() || static_cast<int>(data[a].size()) != g.nu()) schema("field data has the wrong shape");
    for (int i = 0; i < g.nu(); ++i) {
      if (!data[a][i].is_array() || static_cast<int>(data[a][i].size()) != g.nv()) schema("field data has the wrong shape");
      for (int jj = 0; jj < g.nv(); ++jj) f.at(a, i, jj) = matrix_from_json(data[a][i][jj], n);
    }
  }
  return f;
}

Json frames_to_json(const FrameGrid& f) {
  Json rows = Json::array();
  for (int i = 0; i < f.grid.nu(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < f.grid.nv(); ++j) row.push_back(matrix_to_json(f.at(i, j)));
    rows.push_back(row);
  }
  return {{"grid", grid_to_json(f.grid)}, {"n", f.dim()}, {"shape", {f.grid.nu(), f.grid.nv()}}, {"data", rows}};
}

FrameGrid frames_from_json(const Json& j) {
  const Grid g = grid_from_json(field(j, "grid"));
  const int n = integer(field(j, "n"), "n");
  if (field(j, "shape") != Json{g.nu(), g.nv()}) schema("frame shape does not match its grid");
  const Json& data = field(j, "data");
  FrameGrid f(g, n);
  if (!data.is_array() || static_cast<int>(data.size()) != g.nu()) schema("frame data has the wrong shape");
  for (int i = 0; i < g.nu(); ++i) {
    if (!data[i].is_array() || static_cast<int>(data[i].size()) != g.nv()) schema("frame data has the wrong shape");
    for (int jj = 0; jj < g.nv(); ++jj) f.at(i, jj) = matrix_from_json(data[i][jj], n);
  }
  return f;
}

Json form_to_json(const ExprForm& f) {
  Json terms = Json::array();
  for (const auto& [d, axes] : f.terms)
    for (int a = 0; a < 2; ++a)
      for (const auto& [rc, e] : axes[a])
        terms.push_back({{"degree", d}, {"axis", a == 0 ? "u" : "v"}, {"row", rc.first}, {"col", rc.second}, {"expr", e.str()}});
  return {{"n", f.n}, {"terms", terms}};
}

ExprForm form_from_json(const Json& j) {
  ExprForm f(integer(field(j, "n"), "n"));
  require_dimension(f.n);
  const Json& terms = field(j, "terms");
  if (!terms.is_array()) schema("\"terms\" must be a list");
  for (const Json& t : terms) {
    const Json& axis = field(t, "axis");
    if (!axis.is_string() || (axis != "u" && axis != "v")) schema("term axis must be \"u\" or \"v\"");
    const Json& text = field(t, "expr");
    if (!text.is_string()) schema("term expr must be a string");
    const int row = integer(field(t, "row"), "row"), col = integer(field(t, "col"), "col");
    if (row < 0 || col < 0 || row >= f.n || col >= f.n) schema("term entry outside the matrix");
    f.set(integer(field(t, "degree"), "degree"), axis == "u" ? 0 : 1, row, col, Expr::parse(text.get<std::string>()));
  }
  return f;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw DomainError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace loopframe
