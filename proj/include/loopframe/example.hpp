#pragma once

#include "loopframe/grid.hpp"
#include "loopframe/laurent.hpp"

namespace loopframe {

/// The closed-form Case 3 family F_λ(u,v) ∈ SO(4,ℂ), with
/// a = (λ+λ⁻¹)/2 and b = i(λ−λ⁻¹)/2. Coordinates may be complex.
CMatrix example_frame(cd u, cd v, cd lambda);

/// Third column of example_frame.
CVector example_column(cd u, cd v, cd lambda);

/// ∂F/∂u and ∂F/∂v of example_frame.
std::array<CMatrix, 2> example_frame_derivatives(cd u, cd v, cd lambda);

/// The Maurer–Cartan components A_u, A_v of example_frame.
CMatrix example_mc(int axis, cd u, cd v, cd lambda);

/// λ-coefficients (degrees −1, 0, 1) of example_mc at one point.
LaurentLoop example_mc_loop(int axis, cd u, cd v);

/// Connection family of the example on a grid: closed form plus sampled
/// coefficient fields of degree −1, 0, 1.
ConnectionFamily example_connection(const Grid& g);

/// Frames of the example sampled on a grid for each λ.
FrameFamily example_family(const Grid& g, const std::vector<cd>& lambdas);

}  // namespace loopframe
