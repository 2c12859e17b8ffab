#include "loopframe/expr.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace loopframe {

namespace {

struct OpName {
  Expr::Op op;
  const char* name;
  int min_args, max_args;  // max −1 = unbounded
};

constexpr OpName kOps[] = {
    {Expr::Op::Add, "add", 1, -1}, {Expr::Op::Sub, "sub", 2, 2},  {Expr::Op::Mul, "mul", 1, -1},
    {Expr::Op::Div, "div", 2, 2},  {Expr::Op::Neg, "neg", 1, 1},  {Expr::Op::Pow, "pow", 2, 2},
    {Expr::Op::Sin, "sin", 1, 1},  {Expr::Op::Cos, "cos", 1, 1},  {Expr::Op::Exp, "exp", 1, 1},
    {Expr::Op::Sinh, "sinh", 1, 1}, {Expr::Op::Cosh, "cosh", 1, 1},
};

const OpName* find_op(const std::string& name) {
  for (const auto& o : kOps)
    if (name == o.name) return &o;
  return nullptr;
}

const char* op_name(Expr::Op op) {
  for (const auto& o : kOps)
    if (o.op == op) return o.name;
  return "?";
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

class Parser {
 public:
  explicit Parser(const std::string& t) : text_(t) {}

  Expr parse_all() {
    Expr e = parse();
    skip_space();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw DomainError("expression: " + what + " at offset " + std::to_string(pos_) + " in \"" + text_ + "\"");
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string token() {
    skip_space();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
           !std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (start == pos_) fail("expected a token");
    return text_.substr(start, pos_ - start);
  }

  double number(const std::string& tok) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(tok, &used);
    } catch (const std::exception&) {
      fail("bad number '" + tok + "'");
    }
    if (used != tok.size() || !std::isfinite(x)) fail("bad number '" + tok + "'");
    return x;
  }

  Expr atom(const std::string& tok) {
    if (tok == "u") return Expr::u();
    if (tok == "v") return Expr::v();
    if (tok == "pi") return Expr::constant(std::numbers::pi);
    return Expr::constant(number(tok));
  }

  Expr parse() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end");
    if (text_[pos_] == ')') fail("unexpected ')'");
    if (text_[pos_] != '(') return atom(token());
    ++pos_;
    const std::string head = token();
    if (head == "const") {
      const double re = number(token());
      skip_space();
      double im = 0.0;
      if (pos_ < text_.size() && text_[pos_] != ')') im = number(token());
      close();
      return Expr::constant(cd(re, im));
    }
    const OpName* op = find_op(head);
    if (!op) fail("unknown operator '" + head + "'");
    std::vector<Expr> args;
    for (;;) {
      skip_space();
      if (pos_ >= text_.size()) fail("missing ')'");
      if (text_[pos_] == ')') break;
      args.push_back(parse());
    }
    const int count = static_cast<int>(args.size());
    if (count < op->min_args || (op->max_args >= 0 && count > op->max_args))
      fail("wrong number of arguments for '" + head + "'");
    close();
    return Expr::make(op->op, std::move(args));
  }

  void close() {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::constant(cd value) { return Expr(std::make_shared<const Node>(Node{Op::Const, value, {}})); }
Expr Expr::u() { return Expr(std::make_shared<const Node>(Node{Op::U, 0.0, {}})); }
Expr Expr::v() { return Expr(std::make_shared<const Node>(Node{Op::V, 0.0, {}})); }
Expr Expr::make(Op op, std::vector<Expr> args) {
  return Expr(std::make_shared<const Node>(Node{op, 0.0, std::move(args)}));
}

Expr Expr::parse(const std::string& text) { return Parser(text).parse_all(); }

std::string Expr::str() const {
  switch (op()) {
    case Op::Const: {
      const cd c = value();
      if (c.imag() == 0.0) return "(const " + format_number(c.real()) + ")";
      return "(const " + format_number(c.real()) + " " + format_number(c.imag()) + ")";
    }
    case Op::U: return "u";
    case Op::V: return "v";
    default: break;
  }
  std::string s = "(" + std::string(op_name(op()));
  for (const Expr& a : args()) s += " " + a.str();
  return s + ")";
}

cd Expr::eval(cd u, cd v) const {
  const auto& a = args();
  switch (op()) {
    case Op::Const: return value();
    case Op::U: return u;
    case Op::V: return v;
    case Op::Add: {
      cd s = 0.0;
      for (const Expr& e : a) s += e.eval(u, v);
      return s;
    }
    case Op::Sub: return a[0].eval(u, v) - a[1].eval(u, v);
    case Op::Mul: {
      cd s = 1.0;
      for (const Expr& e : a) s *= e.eval(u, v);
      return s;
    }
    case Op::Div: return a[0].eval(u, v) / a[1].eval(u, v);
    case Op::Neg: return -a[0].eval(u, v);
    case Op::Pow: {
      const cd b = a[0].eval(u, v), p = a[1].eval(u, v);
      // integer exponents by repeated multiplication keep polynomials entire
      if (p.imag() == 0.0 && p.real() == std::round(p.real()) && std::abs(p.real()) <= 64) {
        const int k = static_cast<int>(p.real());
        cd r = 1.0;
        for (int i = 0; i < std::abs(k); ++i) r *= b;
        return k >= 0 ? r : 1.0 / r;
      }
      return std::pow(b, p);
    }
    case Op::Sin: return std::sin(a[0].eval(u, v));
    case Op::Cos: return std::cos(a[0].eval(u, v));
    case Op::Exp: return std::exp(a[0].eval(u, v));
    case Op::Sinh: return std::sinh(a[0].eval(u, v));
    case Op::Cosh: return std::cosh(a[0].eval(u, v));
  }
  return 0.0;
}

std::vector<Expr> Expr::singular_factors() const {
  std::vector<Expr> out;
  for (const Expr& a : args()) {
    auto sub = a.singular_factors();
    out.insert(out.end(), sub.begin(), sub.end());
  }
  if (op() == Op::Div) out.push_back(args()[1]);
  if (op() == Op::Pow) {
    const Expr& p = args()[1];
    const bool nonneg_int = p.op() == Op::Const && p.value().imag() == 0.0 && p.value().real() >= 0.0 &&
                            p.value().real() == std::round(p.value().real());
    if (!nonneg_int) out.push_back(args()[0]);
  }
  return out;
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Add, {a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Sub, {a, b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Mul, {a, b}); }

void ExprForm::set(int degree, int axis, int row, int col, Expr e) {
  if (axis < 0 || axis > 1) throw DomainError("axis must be 0 or 1");
  if (row < 0 || col < 0 || row >= n || col >= n) throw DimensionError("entry outside the matrix");
  terms[degree][axis][{row, col}] = std::move(e);
}

CMatrix ExprForm::coefficient(int degree, int axis, cd u, cd v) const {
  CMatrix m = CMatrix::Zero(n, n);
  const auto it = terms.find(degree);
  if (it == terms.end()) return m;
  for (const auto& [rc, e] : it->second[axis]) m(rc.first, rc.second) = e.eval(u, v);
  return m;
}

CMatrix ExprForm::eval(int axis, cd u, cd v, cd lambda) const {
  CMatrix m = CMatrix::Zero(n, n);
  for (const auto& [d, parts] : terms) {
    const cd w = std::pow(lambda, d);
    for (const auto& [rc, e] : parts[axis]) m(rc.first, rc.second) += w * e.eval(u, v);
  }
  return m;
}

AnalyticConnection ExprForm::connection() const {
  return [form = *this](int axis, cd u, cd v, cd lambda) { return form.eval(axis, u, v, lambda); };
}

ConnectionFamily ExprForm::family(const Grid& g) const {
  ConnectionFamily c = ConnectionFamily::from_analytic(g, n, connection());
  for (const auto& [d, parts] : terms) {
    OneFormField f(g, n);
    for (int i = 0; i < g.nu(); ++i)
      for (int j = 0; j < g.nv(); ++j)
        for (int axis = 0; axis < 2; ++axis) f.at(axis, i, j) = coefficient(d, axis, g.u.at(i), g.v.at(j));
    c.set(d, std::move(f));
  }
  return c;
}

std::vector<Expr> ExprForm::singular_factors() const {
  std::vector<Expr> out;
  for (const auto& [d, parts] : terms)
    for (const auto& entries : parts)
      for (const auto& [rc, e] : entries) {
        auto s = e.singular_factors();
        out.insert(out.end(), s.begin(), s.end());
      }
  return out;
}

int ExprForm::min_degree() const { return terms.empty() ? 0 : terms.begin()->first; }
int ExprForm::max_degree() const { return terms.empty() ? 0 : terms.rbegin()->first; }

ExprForm example_form() {
  const cd I(0.0, 1.0);
  const Expr cv = Expr::make(Expr::Op::Cos, {Expr::v()});
  const Expr sv = Expr::make(Expr::Op::Sin, {Expr::v()});
  auto c = [](cd x) { return Expr::constant(x); };
  ExprForm f(4);
  f.set(0, 0, 0, 1, Expr::make(Expr::Op::Neg, {sv}));
  f.set(0, 0, 1, 0, sv);
  for (int d : {-1, 1}) {
    const cd half = 0.5, ib = 0.5 * I * double(d);
    f.set(d, 0, 0, 2, c(half) * cv);
    f.set(d, 0, 2, 0, c(-half) * cv);
    f.set(d, 0, 0, 3, c(ib) * cv);
    f.set(d, 0, 3, 0, c(-ib) * cv);
    f.set(d, 1, 1, 2, c(half));
    f.set(d, 1, 2, 1, c(-half));
    f.set(d, 1, 1, 3, c(ib));
    f.set(d, 1, 3, 1, c(-ib));
  }
  return f;
}

namespace {

// Winding number of f along the closed polygon through `corners`, refining
// segments until consecutive argument jumps are small.
struct Winding {
  double turns = 0.0;
  double min_abs = std::numeric_limits<double>::infinity();
  bool failed = false;
};

void wind_segment(const std::function<cd(cd)>& f, cd a, cd b, cd fa, cd fb, int depth, Winding& w) {
  if (w.failed) return;
  const double jump = std::abs(std::arg(fb / fa));
  if (jump > 0.5 && depth < 24) {
    const cd m = 0.5 * (a + b);
    const cd fm = f(m);
    if (!std::isfinite(fm.real()) || !std::isfinite(fm.imag())) {
      w.failed = true;
      return;
    }
    w.min_abs = std::min(w.min_abs, std::abs(fm));
    wind_segment(f, a, m, fa, fm, depth + 1, w);
    wind_segment(f, m, b, fm, fb, depth + 1, w);
    return;
  }
  w.turns += std::arg(fb / fa);
}

Winding winding(const std::function<cd(cd)>& f, double x0, double x1, double eps) {
  const cd corners[4] = {cd(x0, -eps), cd(x1, -eps), cd(x1, eps), cd(x0, eps)};
  Winding w;
  constexpr int kPerSide = 32;
  std::vector<cd> pts;
  for (int s = 0; s < 4; ++s)
    for (int p = 0; p < kPerSide; ++p) pts.push_back(corners[s] + (corners[(s + 1) % 4] - corners[s]) * (double(p) / kPerSide));
  std::vector<cd> vals;
  for (cd z : pts) {
    const cd fz = f(z);
    if (!std::isfinite(fz.real()) || !std::isfinite(fz.imag())) {
      w.failed = true;
      return w;
    }
    w.min_abs = std::min(w.min_abs, std::abs(fz));
    vals.push_back(fz);
  }
  if (w.min_abs == 0.0) return w;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    const std::size_t q = (p + 1) % pts.size();
    wind_segment(f, pts[p], pts[q], vals[p], vals[q], 0, w);
  }
  w.turns /= 2.0 * std::numbers::pi;
  return w;
}

}  // namespace

PoleReport find_poles(const std::vector<Expr>& factors, const Grid& g, std::array<double, 2> eps, int samples) {
  PoleReport report;
  if (samples < 2) samples = 2;
  constexpr int kCells = 8;
  for (const Expr& factor : factors) {
    for (int a = 0; a < 2; ++a) {
      const int b = 1 - a;
      const Axis& ax = g.axis(a);
      const Axis& bx = g.axis(b);
      for (int sx = 0; sx < samples; ++sx)
        for (int sy = 0; sy < samples; ++sy) {
          const cd zb(bx.lo + (bx.hi - bx.lo) * sx / (samples - 1), -eps[b] + 2.0 * eps[b] * sy / (samples - 1));
          auto f = [&](cd za) { return a == 0 ? factor.eval(za, zb) : factor.eval(zb, za); };
          // slightly enlarged so poles on the strip boundary count
          const double pad = 1e-3 * std::max(1.0, eps[a]);
          // a second pass with shifted edges catches zeros lying on an edge of the first
          for (int pass = 0; pass < 2; ++pass) {
            std::vector<double> edges{ax.lo - pad};
            for (int c = 1; c < kCells; ++c) edges.push_back(ax.lo + (ax.hi - ax.lo) * (c - 0.5 * pass) / kCells);
            edges.push_back(ax.hi + pad);
            for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
              const double x0 = edges[c], x1 = edges[c + 1];
              const Winding w = winding(f, x0, x1, eps[a] + pad);
              if (w.failed || w.min_abs < 1e-300 || std::abs(w.turns) > 0.5) {
                report.found = true;
                const cd za(0.5 * (x0 + x1), 0.0);
                report.location_u = a == 0 ? za : zb;
                report.location_v = a == 0 ? zb : za;
                report.factor = factor.str();
                return report;
              }
            }
          }
        }
    }
  }
  return report;
}

}  // namespace loopframe
