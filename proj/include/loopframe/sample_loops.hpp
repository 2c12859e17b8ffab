#pragma once

#include "loopframe/catalog.hpp"

#include <random>

namespace loopframe {

/// Laurent loop with independent complex Gaussian coefficients in degrees [lo, hi].
LaurentLoop random_laurent(int n, int lo, int hi, std::mt19937_64& rng, double scale = 1.0);

/// Average of φ(L) over the group generated by commuting involutions.
LaurentLoop symmetrize(const LaurentLoop& l, const std::vector<InvolutionSpec>& generators);

/// Coefficientwise ½(X − J XᵗJ), the part in the Lie algebra of J.
LaurentLoop project_to_algebra(const LaurentLoop& l, const SignatureForm& j);

/// λ ↦ exp(X(λ)).
struct ExpLoop {
  LaurentLoop x;
  CMatrix operator()(cd lambda) const;
};

/// exp of a random degree-(−1..1) Lie-algebra loop fixed by σ, μ and the
/// case's reality condition.
ExpLoop random_group_loop(const CatalogRow& row, std::mt19937_64& rng, double scale = 0.3);

/// Random sample from the row's λ-range, away from 0 and ±i.
cd random_admissible_lambda(LambdaRange r, std::mt19937_64& rng);

}  // namespace loopframe
