#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace loopframe {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Largest matrix dimension accepted anywhere in the library.
inline constexpr int kMaxDimension = 12;

/// Thrown when an argument lies outside the domain of an operation
/// (zero loop parameter, inadmissible curvature, bad indices, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Thrown when shapes of the operands do not agree.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a numerical procedure cannot deliver its postcondition
/// (non-integrable connection, big-cell failure, non-convergence).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(std::real(m(i, j))) || !std::isfinite(std::imag(m(i, j)))) return false;
  return true;
}

inline void require_dimension(Eigen::Index n) {
  if (n < 1 || n > kMaxDimension)
    throw DimensionError("matrix dimension " + std::to_string(n) + " outside [1, " +
                         std::to_string(kMaxDimension) + "]");
}

/// Diagonal ±1 bilinear form J.
class SignatureForm {
 public:
  SignatureForm() = default;
  explicit SignatureForm(std::vector<int> diag) : diag_(std::move(diag)) {
    require_dimension(static_cast<Eigen::Index>(diag_.size()));
    for (int d : diag_)
      if (d != 1 && d != -1) throw DomainError("signature entries must be +1 or -1");
  }

  static SignatureForm identity(int n) { return SignatureForm(std::vector<int>(n, 1)); }

  /// diag(I_a, s, I_b)-style builder: blocks of (count, sign).
  static SignatureForm blocks(std::initializer_list<std::pair<int, int>> parts) {
    std::vector<int> d;
    for (auto [count, sign] : parts) d.insert(d.end(), count, sign);
    return SignatureForm(std::move(d));
  }

  int size() const { return static_cast<int>(diag_.size()); }
  int operator[](int i) const { return diag_[i]; }
  const std::vector<int>& entries() const { return diag_; }

  CMatrix matrix() const {
    CMatrix j = CMatrix::Zero(size(), size());
    for (int i = 0; i < size(); ++i) j(i, i) = double(diag_[i]);
    return j;
  }

  bool operator==(const SignatureForm&) const = default;

 private:
  std::vector<int> diag_;
};

/// J-adjoint inverse of a matrix in the quadratic group of J: J Fᵗ J.
inline CMatrix group_inverse(const CMatrix& f, const SignatureForm& j) {
  CMatrix r = f.transpose();
  for (int a = 0; a < r.rows(); ++a)
    for (int b = 0; b < r.cols(); ++b) r(a, b) *= double(j[a] * j[b]);
  return r;
}

/// max‖FᵗJF − J‖ for a single matrix.
inline double group_defect(const CMatrix& f, const SignatureForm& j) {
  const CMatrix jm = j.matrix();
  return max_abs(f.transpose() * jm * f - jm);
}

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

}  // namespace loopframe
