#include "loopframe/sample_loops.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <numbers>

namespace loopframe {

LaurentLoop random_laurent(int n, int lo, int hi, std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  LaurentLoop l(n);
  for (int d = lo; d <= hi; ++d) {
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = cd(g(rng), g(rng));
    l.set(d, a);
  }
  return l;
}

LaurentLoop symmetrize(const LaurentLoop& l, const std::vector<InvolutionSpec>& generators) {
  std::vector<LaurentLoop> orbit{l};
  for (const auto& s : generators) {
    const std::size_t count = orbit.size();
    for (std::size_t p = 0; p < count; ++p) orbit.push_back(apply_involution(s, orbit[p]));
  }
  LaurentLoop sum(l.dim());
  for (const auto& o : orbit) sum = sum + o;
  return sum * cd(1.0 / double(orbit.size()));
}

LaurentLoop project_to_algebra(const LaurentLoop& l, const SignatureForm& j) {
  LaurentLoop out(l.dim());
  for (const auto& [d, a] : l.coeffs()) out.set(d, 0.5 * (a - group_inverse(a, j)));
  return out;
}

CMatrix ExpLoop::operator()(cd lambda) const { return x(lambda).exp(); }

ExpLoop random_group_loop(const CatalogRow& row, std::mt19937_64& rng, double scale) {
  LaurentLoop x = project_to_algebra(random_laurent(row.n(), -1, 1, rng, scale), row.base_form);
  x = symmetrize(x, {row.sigma(), row.mu(), row.reality()});
  return ExpLoop{x.pruned(1e-15)};
}

cd random_admissible_lambda(LambdaRange r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.2, 3.0), angle(-std::numbers::pi, std::numbers::pi);
  std::bernoulli_distribution sign(0.5);
  for (;;) {
    cd l;
    const double s = sign(rng) ? 1.0 : -1.0;
    switch (r) {
      case LambdaRange::Imaginary: l = cd(0.0, s * mag(rng)); break;
      case LambdaRange::Real: l = cd(s * mag(rng), 0.0); break;
      case LambdaRange::UnitCircle: l = std::polar(1.0, angle(rng)); break;
    }
    if (std::abs(l - cd(0, 1)) > 0.05 && std::abs(l + cd(0, 1)) > 0.05) return l;
  }
}

}  // namespace loopframe
