#pragma once

#include "loopframe/types.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <vector>

namespace loopframe {

/// Weights w with f^(order)(x0) ≈ Σ w_i f(nodes_i) (Fornberg's recursion).
std::vector<double> fornberg_weights(double x0, const std::vector<double>& nodes, int order);

/// Offsets and unit-spacing weights of an `accuracy`-order stencil for the
/// derivative of the given order at sample i of a line with `count` samples.
/// Centred when it fits, shifted one-sided near the ends.
struct Stencil {
  std::vector<int> offsets;
  std::vector<double> weights;
};

Stencil derivative_stencil(int i, int count, int accuracy, int order = 1);

/// Derivative of sampled data along a line; get(index) returns the sample.
template <typename Get>
auto line_derivative(const Get& get, int i, int count, double h, int accuracy, int order = 1) {
  const Stencil s = derivative_stencil(i, count, accuracy, order);
  const double scale = 1.0 / std::pow(h, order);
  using Value = std::decay_t<decltype(get(i))>;
  Value acc = get(i + s.offsets[0]) * (s.weights[0] * scale);
  for (std::size_t p = 1; p < s.offsets.size(); ++p) acc += get(i + s.offsets[p]) * (s.weights[p] * scale);
  return acc;
}

/// Lagrange interpolation through the 4 samples nearest to fractional index t.
template <typename Get>
auto line_interpolate(const Get& get, double t, int count) {
  int start = static_cast<int>(std::floor(t)) - 1;
  const int width = std::min(4, count);
  start = std::clamp(start, 0, count - width);
  std::vector<double> nodes(width);
  for (int p = 0; p < width; ++p) nodes[p] = start + p;
  const std::vector<double> w = fornberg_weights(t, nodes, 0);
  using Value = std::decay_t<decltype(get(start))>;
  Value acc = get(start) * w[0];
  for (int p = 1; p < width; ++p) acc += get(start + p) * w[p];
  return acc;
}

}  // namespace loopframe
