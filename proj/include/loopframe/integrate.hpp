#pragma once

#include "loopframe/grid.hpp"

#include <optional>

namespace loopframe {

struct IntegrationOptions {
  /// Re-project onto {F : FᵗJF = J} after every step.
  std::optional<SignatureForm> project_to;
  int substeps = 1;
  /// Largest accepted per-cell holonomy defect.
  double holonomy_tolerance = 1e-6;
  bool check_integrability = true;
  /// Integrate along axis 2 through the base point first, then along axis 1.
  bool columns_first = false;
};

struct IntegrationReport {
  double max_holonomy_defect = 0.0;
  int worst_i = -1, worst_j = -1;
};

/// Two-stage fourth-order Magnus exponent for values at the Gauss points.
CMatrix magnus_exponent(const CMatrix& a1, const CMatrix& a2, double h);

/// P with F(t0+h) = F(t0)·P for dF/dt = F·A(t).
CMatrix line_propagator(const std::function<CMatrix(double)>& a, double t0, double h, int substeps = 1);

/// One Newton step towards FᵗJF = J.
CMatrix project_to_group(const CMatrix& f, const SignatureForm& j);

/// Solves F⁻¹dF = A(λ), F(base) = I. Throws NumericalError when the per-cell
/// holonomy defect exceeds the tolerance.
FrameGrid integrate_frame(const ConnectionFamily& a, cd lambda, const IntegrationOptions& opts = {},
                          IntegrationReport* report = nullptr);

FrameFamily integrate_family(const ConnectionFamily& a, const std::vector<cd>& lambdas,
                             const IntegrationOptions& opts = {});

/// Largest per-cell holonomy defect of A(λ).
IntegrationReport holonomy_defect(const ConnectionFamily& a, cd lambda, int substeps = 1);

/// Discrete F⁻¹dF with central differences of the given accuracy (2, 4 or 6).
OneFormField mc_form(const FrameGrid& f, int accuracy = 2);

/// Cell-centred ∂_uA_v − ∂_vA_u + [A_u, A_v], max over cells.
double curvature_residual(const OneFormField& a);
/// Cell-centred ∂_uA_v − ∂_vA_u, max over cells.
double closedness_residual(const OneFormField& a);
/// [A_u, A_v] at cell centres, max over cells.
double wedge_residual(const OneFormField& a);

/// Maurer–Cartan residual of A(λ).
double mc_residual(const ConnectionFamily& a, cd lambda);

/// Max over grid points of ‖F(x) − G(x)‖.
double frame_distance(const FrameGrid& f, const FrameGrid& g);

/// R(x) = F(q)⁻¹F(x).
FrameGrid renormalize_at(const FrameGrid& f, int qi, int qj);

}  // namespace loopframe
