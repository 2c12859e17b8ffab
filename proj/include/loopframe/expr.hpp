#pragma once

#include "loopframe/grid.hpp"

#include <memory>
#include <string>

namespace loopframe {

/// Scalar expression in the coordinates u, v, evaluable at complex arguments.
///
/// Text form is prefix notation:
///   (const re [im])  u  v  (add a b ...)  (sub a b)  (mul a b ...)  (div a b)
///   (neg a)  (pow a p)  (sin a)  (cos a)  (exp a)  (sinh a)  (cosh a)
/// A bare number is shorthand for (const number).
class Expr {
 public:
  enum class Op { Const, U, V, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp, Sinh, Cosh };

  Expr() : Expr(constant(0.0)) {}
  static Expr constant(cd value);
  static Expr u();
  static Expr v();
  static Expr make(Op op, std::vector<Expr> args);

  /// Throws DomainError with the offending position on malformed text.
  static Expr parse(const std::string& text);
  std::string str() const;

  cd eval(cd u, cd v) const;

  Op op() const { return node_->op; }
  const std::vector<Expr>& args() const { return node_->args; }
  cd value() const { return node_->value; }
  bool is_zero() const { return op() == Op::Const && node_->value == cd(0.0); }

  /// Subexpressions whose zeros are poles: denominators and bases of negative powers.
  std::vector<Expr> singular_factors() const;

 private:
  struct Node {
    Op op;
    cd value;
    std::vector<Expr> args;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);

/// Closed-form λ-family of matrix 1-forms Σ_d λ^d (A_d,u du + A_d,v dv) with
/// sparse expression entries.
struct ExprForm {
  using Entries = std::map<std::pair<int, int>, Expr>;

  int n = 0;
  std::map<int, std::array<Entries, 2>> terms;

  ExprForm() = default;
  explicit ExprForm(int dim) : n(dim) {}

  void set(int degree, int axis, int row, int col, Expr e);
  CMatrix eval(int axis, cd u, cd v, cd lambda) const;
  /// The degree-d coefficient at (u, v).
  CMatrix coefficient(int degree, int axis, cd u, cd v) const;
  AnalyticConnection connection() const;
  ConnectionFamily family(const Grid& g) const;
  std::vector<Expr> singular_factors() const;
  int min_degree() const;
  int max_degree() const;
};

/// Entrywise closed form of the example connection.
ExprForm example_form();

/// Where a scalar expression fails to be holomorphic on a region.
struct PoleReport {
  bool found = false;
  cd location_u, location_v;  // a point of the offending cell
  std::string factor;
};

/// Argument-principle scan for zeros of the singular factors over
/// {(x1 + i y1, x2 + i y2) : x in the grid box, |y_a| ≤ eps_a}. Each complex
/// coordinate is scanned along rectangles while the other runs over `samples`
/// points of its own rectangle; evaluation failures count as poles.
PoleReport find_poles(const std::vector<Expr>& factors, const Grid& g, std::array<double, 2> eps, int samples = 9);

}  // namespace loopframe
