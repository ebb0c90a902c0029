#pragma once

#include <cstdint>
#include <vector>

#include "natlearn/concepts.hpp"
#include "natlearn/norm.hpp"

namespace natlearn {

// Norm of the pair function xi(r, s) = eval(mu(r), rho(s)), i.e.
//   R2(xi) = E_{f,g ~ mu; z,w ~ rho}[ f(z) f(w) g(z) g(w) ]
//          = E_{z,w ~ rho}[ (E_{f ~ mu} f(z) f(w))^2 ].
// Both distributions must be enumerable, with
// |supp rho|^2 * |supp mu| <= kMaxPairWork.
inline constexpr std::uint64_t kMaxPairWork = 100'000'000;

Rational r2_pair_exact(const EvaluationRule& rule, const TargetDistribution& mu,
                       const ExampleDistribution& rho);

// Same quantity from explicit supports: signs[k][j] = f_k(x_j).
struct WeightedSignTable {
  std::vector<Rational> row_weights;  // mu weights, one per concept
  std::vector<Rational> col_weights;  // rho weights, one per input
  SignMatrix signs;                   // rows = concepts, cols = inputs
};

WeightedSignTable tabulate(const EvaluationRule& rule, const TargetDistribution& mu,
                           const ExampleDistribution& rho);

namespace serial {
Rational pair_norm(const WeightedSignTable& table);
}
namespace parallel {
Rational pair_norm(const WeightedSignTable& table);
}

// Sampled estimate of R2(xi) from N iid quadruples (f, g, z, w).
NormEstimate r2_pair_estimate(const EvaluationRule& rule, const TargetDistribution& mu,
                              const ExampleDistribution& rho, std::uint64_t samples, Rng& rng);

}  // namespace natlearn
