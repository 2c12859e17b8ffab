#include "loopframe/finite_diff.hpp"

#include <cmath>

namespace loopframe {

std::vector<double> fornberg_weights(double x0, const std::vector<double>& nodes, int order) {
  const int n = static_cast<int>(nodes.size());
  if (n == 0 || order < 0 || order >= n) throw DomainError("fornberg_weights: need more nodes than the derivative order");
  // c[j][k]: weight of node j for derivative k
  std::vector<std::vector<double>> c(n, std::vector<double>(order + 1, 0.0));
  double c1 = 1.0;
  double c4 = nodes[0] - x0;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = nodes[i] - x0;
    for (int j = 0; j < i; ++j) {
      const double c3 = nodes[i] - nodes[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) w[j] = c[j][order];
  return w;
}

Stencil derivative_stencil(int i, int count, int accuracy, int order) {
  if (accuracy < 2 || accuracy % 2 != 0) throw DomainError("stencil accuracy must be even and >= 2");
  if (order < 1) throw DomainError("derivative order must be positive");
  const int half = accuracy / 2;
  int width = accuracy + 1;
  if (i - half < 0 || i + half >= count) width = accuracy + order;
  width = std::min(width, count);
  if (width <= order) throw DomainError("line too short for the derivative");
  const int start = std::clamp(i - width / 2, 0, count - width);
  Stencil s;
  std::vector<double> nodes(width);
  for (int p = 0; p < width; ++p) {
    s.offsets.push_back(start + p - i);
    nodes[p] = start + p - i;
  }
  s.weights = fornberg_weights(0.0, nodes, order);
  return s;
}

}  // namespace loopframe
