#pragma once

#include "loopframe/catalog.hpp"
#include "loopframe/flats.hpp"
#include "loopframe/laurent.hpp"

namespace loopframe {

/// Matrix Fourier polynomial Σ_d C_d λ^d with unbounded degrees.
struct FourierLoop {
  int n = 0;
  std::map<int, CMatrix> coeffs;

  CMatrix coeff(int d) const;
  CMatrix operator()(cd lambda) const;
  /// Largest coefficient norm (max abs entry) over degrees in [lo, hi].
  double max_norm(int lo, int hi) const;
};

/// Values of a loop at the N-th roots of unity λ_k = e^{2πik/N}.
struct CircleSampling {
  std::vector<CMatrix> values;

  CircleSampling() = default;
  explicit CircleSampling(std::vector<CMatrix> v) : values(std::move(v)) {}
  template <typename Loop>
  static CircleSampling from(const Loop& loop, int count) {
    CircleSampling s;
    for (cd l : circle_points(count)) s.values.push_back(loop(l));
    return s;
  }

  int size() const { return static_cast<int>(values.size()); }
  int dim() const { return values.empty() ? 0 : static_cast<int>(values.front().rows()); }
  std::vector<cd> points() const { return circle_points(size()); }

  /// Fourier coefficients for degrees −N/2 < d < N/2 (FFT).
  FourierLoop coefficients() const;
  static CircleSampling from_coefficients(const FourierLoop& c, int count);
  /// Largest coefficient over the top quartile of frequencies (|d| ≥ 3N/8).
  double spectral_tail() const;
  CircleSampling inverse() const;
};

CircleSampling operator*(const CircleSampling& a, const CircleSampling& b);
double max_distance(const CircleSampling& a, const CircleSampling& b);

/// (φX)(λ_k) = V(X(λ'_k)); needs every λ'_k to be a sample (N even for σ).
CircleSampling apply_involution(const InvolutionSpec& s, const CircleSampling& x);

enum class Side { Left, Right };

struct SplitOptions {
  int bandwidth = 16;
  double condition_threshold = 1e8;
  double residual_tolerance = 1e-8;
  /// Largest accepted wrong-side Fourier mass of the disc factor.
  double support_tolerance = 1e-8;
};

/// L = plus·minus (left) or L = minus·plus (right). The left split normalizes
/// plus(0) = I, the right split minus(∞) = I.
struct SplitResult {
  Side side = Side::Left;
  CircleSampling plus, minus;
  double residual = 0.0;
  double condition = 0.0;
  double support_defect = 0.0;
  bool in_big_cell = false;

  const CircleSampling& left_factor() const { return side == Side::Left ? plus : minus; }
  const CircleSampling& right_factor() const { return side == Side::Left ? minus : plus; }
};

/// Truncated Birkhoff splitting: solves for L₊⁻¹ = I + Σ_{j=1}^{B} X_j λ^j with
/// no positive degrees in L₊⁻¹L, by least squares.
SplitResult birkhoff_split(const CircleSampling& l, Side side, const SplitOptions& opts = {});
SplitResult birkhoff_split(const LaurentLoop& l, Side side, int samples = 256, const SplitOptions& opts = {});

struct BigCellVerdict {
  bool in_big_cell = false;
  double condition = 0.0;
  double residual = 0.0;
};

BigCellVerdict in_big_cell(const CircleSampling& l, const SplitOptions& opts = {});
BigCellVerdict in_big_cell(const LaurentLoop& l, int samples = 256, const SplitOptions& opts = {});

/// Per-point split diagnostics.
struct PointDiagnostic {
  int node = 0;  // grid or strip index
  double residual = 0.0, condition = 0.0;
  bool ok = true;
};

class BigCellError : public NumericalError {
 public:
  BigCellError(const std::string& what, std::vector<int> nodes) : NumericalError(what), nodes_(std::move(nodes)) {}
  const std::vector<int>& nodes() const { return nodes_; }

 private:
  std::vector<int> nodes_;
};

/// The λ samples of a family must be the N-th roots of unity in order.
void require_circle_samples(const std::vector<cd>& lambdas);

/// Pointwise left split F = F₊G₋; returns F₊. Throws BigCellError listing
/// failing grid points.
FrameFamily dpw_forward(const FrameFamily& f, const SplitOptions& opts = {},
                        std::vector<PointDiagnostic>* diagnostics = nullptr);
StripFamily dpw_forward(const StripFamily& f, const SplitOptions& opts = {},
                        std::vector<PointDiagnostic>* diagnostics = nullptr);

struct BackwardOptions {
  SplitOptions split;
  /// Largest accepted τ-fixedness residual of the result.
  double fixed_tolerance = 1e-8;
};

/// Pointwise F = F₊·h with h in the exterior subgroup and F fixed by the
/// exterior-interchanging involution τ: W = τ(F₊)⁻¹F₊ = W₊W₋, C = W₋(∞),
/// F = F₊W₋⁻¹C^{1/2}.
FrameFamily dpw_backward(const FrameFamily& plus, const InvolutionSpec& tau, const BackwardOptions& opts = {},
                         std::vector<PointDiagnostic>* diagnostics = nullptr);
StripFamily dpw_backward(const StripFamily& plus, const InvolutionSpec& tau, const BackwardOptions& opts = {},
                         std::vector<PointDiagnostic>* diagnostics = nullptr);

/// R(x, λ) = F(q, λ)⁻¹F(x, λ).
FrameFamily renormalize_at(const FrameFamily& f, int qi, int qj);

/// λ-Fourier coefficient of degree d of the discrete Maurer–Cartan form.
OneFormField mc_coefficient(const FrameFamily& f, int degree, int accuracy = 6);
/// Largest Fourier coefficient of F⁻¹dF outside the given degree range.
double mc_off_degree(const FrameFamily& f, int lo, int hi, int accuracy = 6);

struct PluriharmonicResidual {
  double top = 0.0;        // max ‖A₁''‖
  double conjugate = 0.0;  // max ‖A''₋₁ − τ⁰(A'₁)‖
};

/// Splits F⁻¹dF on the strip into (1,0) and (0,1) parts with discrete ∂ and
/// ∂̄, expands in λ over the circle samples and measures A₁''.
PluriharmonicResidual pluriharmonic_residual(const StripFamily& f, const InvolutionSpec& tau, int accuracy = 4);

/// Fixed-point residual of the slice at imaginary offsets (k1, k2).
double reality_residual(const StripFamily& f, const InvolutionSpec& rho, int k1, int k2);
double reality_residual_on_M(const StripFamily& f, const InvolutionSpec& rho);

/// Max over the real grid and λ of ‖F̂ e_m − F e_m‖ (position columns).
double column_agreement(const FrameFamily& a, const FrameFamily& b, int column);

/// F P F⁻¹, invariant under right multiplication by the block subgroup.
CMatrix block_invariant(const CMatrix& f, const SignatureForm& p);

struct ExtensionOptions {
  int samples = 64;
  SplitOptions split{24};
  BackwardOptions backward{{24}};
  ComplexifyOptions complexify;
  HoloOptions holo;
  int accuracy = 4;
};

struct ExtensionResult {
  int case_id = 3;
  std::string target_label;
  StripFamily frames;
  double eps = 0.0;
  int halvings = 0;
  double cr = 0.0;
  PluriharmonicResidual pluriharmonic;
  double reality = 0.0;
  double columns = 0.0;
  double plus_off_degree = 0.0;
  /// Per strip node records of the two splitting steps.
  std::vector<PointDiagnostic> forward, backward;
};

/// Extends an extended frame family given by its closed-form Maurer–Cartan form
/// to a pluriharmonic family on the strip: holomorphic extension of F, pointwise
/// DPW forward split, τ̂ backward step. `input` holds F on the real grid at the
/// circle samples (empty: integrate the form). The strip base point is the
/// normalization point; the result is F(base)·R̂.
ExtensionResult pluriharmonic_extend(const ExprForm& mc, const FrameFamily& input, int case_id,
                                     const ComplexStrip& strip, const ExtensionOptions& opts = {});

/// Extension computed from the renormalization at grid node (qi, qj),
/// glued back with F(q, λ).
ExtensionResult pluriharmonic_extend_at(const ExprForm& mc, const FrameFamily& input, int case_id,
                                        const ComplexStrip& strip, int qi, int qj, const ExtensionOptions& opts = {});

/// F₊(z, λ)·exp(λ·scale·z̄₁·N): a plus family with anti-holomorphic dependence.
StripFamily with_antiholomorphic_factor(const StripFamily& plus, const CMatrix& n, double scale);

/// max ‖F̂_a P F̂_a⁻¹ − F̂_b P F̂_b⁻¹‖ over strip nodes and λ.
double gluing_defect(const StripFamily& a, const StripFamily& b, const SignatureForm& p);

}  // namespace loopframe
