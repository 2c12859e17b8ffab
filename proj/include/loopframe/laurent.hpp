#pragma once

#include "loopframe/types.hpp"

#include <map>

namespace loopframe {

/// Widest degree (in absolute value) a finite Laurent loop may carry.
inline constexpr int kMaxLoopDegree = 4;

/// Finite Laurent polynomial Σ_d A_d λ^d with square matrix coefficients.
///
/// Coefficients are stored sparsely by degree. Degrees outside
/// [-kMaxLoopDegree, kMaxLoopDegree] and dimensions above kMaxDimension are
/// rejected on construction.
template <typename Scalar>
class BasicLaurentLoop {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Coefficients = std::map<int, Matrix>;

  BasicLaurentLoop() = default;

  explicit BasicLaurentLoop(int n) : n_(n) { require_dimension(n); }

  BasicLaurentLoop(int n, Coefficients coeffs) : n_(n) {
    require_dimension(n);
    for (auto& [d, a] : coeffs) set(d, std::move(a));
  }

  static BasicLaurentLoop constant(const Matrix& c) {
    BasicLaurentLoop l(static_cast<int>(c.rows()));
    l.set(0, c);
    return l;
  }

  static BasicLaurentLoop identity(int n) { return constant(Matrix::Identity(n, n)); }

  static BasicLaurentLoop monomial(const Matrix& c, int degree) {
    BasicLaurentLoop l(static_cast<int>(c.rows()));
    l.set(degree, c);
    return l;
  }

  int dim() const { return n_; }
  const Coefficients& coeffs() const { return coeffs_; }

  int min_degree() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
  int max_degree() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

  /// Coefficient at `degree` (zero when absent).
  Matrix coeff(int degree) const {
    auto it = coeffs_.find(degree);
    return it == coeffs_.end() ? Matrix::Zero(n_, n_) : it->second;
  }

  void set(int degree, Matrix a) {
    if (degree < -kMaxLoopDegree || degree > kMaxLoopDegree)
      throw DomainError("loop degree " + std::to_string(degree) + " outside [-" +
                        std::to_string(kMaxLoopDegree) + ", " + std::to_string(kMaxLoopDegree) + "]");
    if (a.rows() != n_ || a.cols() != n_) throw DimensionError("coefficient shape does not match loop dimension");
    if (!all_finite(a)) throw DomainError("non-finite loop coefficient");
    coeffs_[degree] = std::move(a);
  }

  void add(int degree, const Matrix& a) {
    auto it = coeffs_.find(degree);
    if (it == coeffs_.end())
      set(degree, a);
    else
      it->second += a;
  }

  bool has_negative_degrees() const { return !coeffs_.empty() && coeffs_.begin()->first < 0; }

  /// Σ_d A_d λ^d.
  Matrix operator()(const Scalar& lambda) const {
    if (lambda == Scalar(0) && has_negative_degrees())
      throw DomainError("loop with negative degrees evaluated at lambda = 0");
    Matrix out = Matrix::Zero(n_, n_);
    for (const auto& [d, a] : coeffs_) out += a * std::pow(lambda, d);
    return out;
  }

  Matrix eval(const Scalar& lambda) const { return (*this)(lambda); }

  BasicLaurentLoop operator+(const BasicLaurentLoop& o) const {
    check_same(o);
    BasicLaurentLoop r = *this;
    for (const auto& [d, a] : o.coeffs_) r.add(d, a);
    return r;
  }

  BasicLaurentLoop operator-(const BasicLaurentLoop& o) const { return *this + o * Scalar(-1); }

  BasicLaurentLoop operator*(const Scalar& s) const {
    BasicLaurentLoop r = *this;
    for (auto& [d, a] : r.coeffs_) a *= s;
    return r;
  }

  /// Pointwise product; the degree span must stay within the cap.
  BasicLaurentLoop operator*(const BasicLaurentLoop& o) const {
    check_same(o);
    BasicLaurentLoop r(n_);
    for (const auto& [d1, a1] : coeffs_)
      for (const auto& [d2, a2] : o.coeffs_) r.add(d1 + d2, a1 * a2);
    return r;
  }

  /// Max coefficientwise difference over the union of supports.
  double distance(const BasicLaurentLoop& o) const {
    check_same(o);
    double m = 0.0;
    for (const auto& [d, a] : coeffs_) m = std::max(m, max_abs(a - o.coeff(d)));
    for (const auto& [d, a] : o.coeffs_)
      if (!coeffs_.count(d)) m = std::max(m, max_abs(a));
    return m;
  }

  /// Drops coefficients whose max-abs entry is at most `tol`.
  BasicLaurentLoop pruned(double tol = 0.0) const {
    BasicLaurentLoop r(n_);
    for (const auto& [d, a] : coeffs_)
      if (max_abs(a) > tol) r.coeffs_[d] = a;
    return r;
  }

 private:
  void check_same(const BasicLaurentLoop& o) const {
    if (o.n_ != n_) throw DimensionError("loop dimensions differ");
  }

  int n_ = 0;
  Coefficients coeffs_;
};

using LaurentLoop = BasicLaurentLoop<cd>;

}  // namespace loopframe
