#pragma once

#include "loopframe/expr.hpp"
#include "loopframe/integrate.hpp"
#include "loopframe/involution.hpp"

namespace loopframe {

struct FlatResiduals {
  double closed = 0.0;  // max ‖dη‖ per cell
  double wedge = 0.0;   // max ‖η∧η‖ per cell
};

FlatResiduals flat_residuals(const OneFormField& eta);

/// 𝔭-valued 1-form of a curved flat in the symmetric space of (σ⁰ = Ad_P, ρ).
struct CurvedFlatData {
  OneFormField eta;
  SignatureForm p;
  InvolutionSpec reality = InvolutionSpec::rho2();

  /// max ‖PηP + η‖ (zero iff η is supported on the off-diagonal blocks).
  double off_block_residual() const;
};

/// Largest ‖F(λ) − V(F(λ'))‖ over grid points and over the λ samples whose
/// image λ' under the involution is also sampled.
double family_fixed_residual(const FrameFamily& f, const InvolutionSpec& s);

/// Solves K⁻¹dK = A₀, K(base) = I, and returns Ad_K(A₁) = K A₁ K⁻¹, the
/// coefficient left after gauging A₀ away. Throws NumericalError if A₀ is
/// not integrable (holonomy above `tolerance`).
OneFormField gauge_normalize(const OneFormField& a0, const OneFormField& a1, double tolerance = 1e-6,
                             FrameGrid* gauge = nullptr);

struct CurvedFlatOptions {
  double residual_threshold = 1e-3;
  IntegrationOptions integration;
};

/// Frames with F⁻¹dF = λη, F(base) = I.
FrameFamily curved_flat_from_eta(const OneFormField& eta, const std::vector<cd>& lambdas,
                                 const CurvedFlatOptions& opts = {});
/// Same from a closed form; the form must be of pure degree 1.
FrameFamily curved_flat_from_eta(const ExprForm& eta, const Grid& g, const std::vector<cd>& lambdas,
                                 const CurvedFlatOptions& opts = {});

/// Product of the real grid with imaginary offsets y_a ∈ [−ε_a, ε_a]
/// sampled at an odd number of points, so y = 0 is a node.
struct ComplexStrip {
  Grid base;
  std::array<double, 2> eps{0.1, 0.1};
  std::array<int, 2> counts{5, 5};

  ComplexStrip() = default;
  ComplexStrip(const Grid& g, double e, int count) : base(g), eps{e, e}, counts{count, count} {}

  void validate() const;
  int size() const { return base.size() * counts[0] * counts[1]; }
  int index(int i, int j, int k1, int k2) const { return (base.index(i, j) * counts[0] + k1) * counts[1] + k2; }
  int centre(int axis) const { return (counts[axis] - 1) / 2; }
  double y_step(int axis) const { return counts[axis] > 1 ? 2.0 * eps[axis] / (counts[axis] - 1) : 0.0; }
  double y(int axis, int k) const { return -eps[axis] + y_step(axis) * k; }
  cd z(int axis, int real_index, int k) const { return cd(base.axis(axis).at(real_index), y(axis, k)); }
  ComplexStrip scaled(double factor) const;
};

struct ComplexifyOptions {
  /// Halve ε on a detected singularity instead of failing.
  bool auto_shrink = false;
  int max_halvings = 6;
};

/// Closed-form connection continued holomorphically onto a strip.
struct ComplexifiedForm {
  ExprForm form;
  ComplexStrip strip;
  double requested_eps = 0.0;
  int halvings = 0;

  /// The degree-d coefficient of the dz^axis component at a strip node.
  CMatrix coefficient(int degree, int axis, int i, int j, int k1, int k2) const;
  CMatrix value(int axis, int i, int j, int k1, int k2, cd lambda) const;
};

/// Checks the strip for singularities of the closed form (argument principle)
/// and evaluation failures. Throws DomainError naming the singular factor and
/// suggesting a halved ε unless auto_shrink resolves it.
ComplexifiedForm complexify_eta(const ExprForm& form, const ComplexStrip& strip, const ComplexifyOptions& opts = {});

/// max over strip nodes of |η̂(x + i0) − η(x)|.
double real_slice_error(const ComplexifiedForm& c, const ConnectionFamily& real);

/// Holomorphic flat residuals of one λ-coefficient: ∂_{z1}η̂_2 − ∂_{z2}η̂_1 and
/// [η̂_1, η̂_2] on every imaginary slice.
FlatResiduals holomorphic_flat_residuals(const ComplexifiedForm& c, int degree, int accuracy = 4);
/// Holomorphic Maurer–Cartan residual of the whole family at λ.
double holomorphic_mc_residual(const ComplexifiedForm& c, cd lambda, int accuracy = 4);

/// Frames on a strip; values indexed by ComplexStrip::index.
struct StripFrames {
  ComplexStrip strip;
  std::vector<CMatrix> values;

  StripFrames() = default;
  StripFrames(const ComplexStrip& s, int dim);
  CMatrix& at(int i, int j, int k1, int k2) { return values[strip.index(i, j, k1, k2)]; }
  const CMatrix& at(int i, int j, int k1, int k2) const { return values[strip.index(i, j, k1, k2)]; }
  int dim() const { return values.empty() ? 0 : static_cast<int>(values.front().rows()); }
  /// The y = 0 slice.
  FrameGrid real_slice() const;
  /// The slice at imaginary offsets (k1, k2).
  FrameGrid slice(int k1, int k2) const;
};

struct StripFamily {
  std::vector<cd> lambdas;
  std::vector<StripFrames> frames;

  const ComplexStrip& strip() const { return frames.front().strip; }
  int dim() const { return frames.front().dim(); }
  FrameFamily real_slice() const;
  FrameFamily slice(int k1, int k2) const;
};

struct HoloOptions {
  int substeps = 4;
  /// Imaginary direction integrated first.
  int first_axis = 0;
  IntegrationOptions real;
  /// Largest accepted discrete ∂̄ residual (negative disables the check).
  double cr_tolerance = 1e-6;
  /// Stencil accuracy of that check.
  int cr_accuracy = 6;
};

/// Integrates the real slice, then i·Â along the imaginary directions from
/// every real node. Throws NumericalError if the ∂̄ residual is too large.
StripFamily extend_frame_holo(const ComplexifiedForm& c, const std::vector<cd>& lambdas, const HoloOptions& opts = {});

/// Derivative of strip samples along x_axis (imaginary = false) or y_axis.
template <typename Get>
auto strip_derivative(const ComplexStrip& s, Get get, int axis, bool imaginary, int i, int j, int k1, int k2,
                      int accuracy);

/// max |∂̄_a F| = |½(∂_{x_a} + i∂_{y_a})F| over strip nodes and axes.
double cr_residual(const StripFrames& f, int accuracy = 4);
double cr_residual(const StripFamily& f, int accuracy = 4);

}  // namespace loopframe

#include "loopframe/finite_diff.hpp"

namespace loopframe {

template <typename Get>
auto strip_derivative(const ComplexStrip& s, Get get, int axis, bool imaginary, int i, int j, int k1, int k2,
                      int accuracy) {
  if (!imaginary) {
    if (axis == 0)
      return line_derivative([&](int p) { return get(p, j, k1, k2); }, i, s.base.nu(), s.base.u.step(), accuracy);
    return line_derivative([&](int p) { return get(i, p, k1, k2); }, j, s.base.nv(), s.base.v.step(), accuracy);
  }
  if (axis == 0) return line_derivative([&](int p) { return get(i, j, p, k2); }, k1, s.counts[0], s.y_step(0), accuracy);
  return line_derivative([&](int p) { return get(i, j, k1, p); }, k2, s.counts[1], s.y_step(1), accuracy);
}

}  // namespace loopframe
