#include "natlearn/pair_norm.hpp"

#include <boost/multiprecision/integer.hpp>
#include <cmath>

#include "natlearn/errors.hpp"

namespace natlearn {

WeightedSignTable tabulate(const EvaluationRule& rule, const TargetDistribution& mu,
                           const ExampleDistribution& rho) {
  if (!mu.enumerable() || !rho.enumerable())
    throw InvalidDistribution("r2_pair_exact needs enumerable mu and rho");
  if (mu.rep_bits() != rule.rep_bits || rho.arity() != rule.n)
    throw ArityError("distributions do not match the evaluation rule");
  const auto concepts = mu.support();
  const auto inputs = rho.support();
  const auto K = static_cast<std::uint64_t>(concepts.size());
  const auto X = static_cast<std::uint64_t>(inputs.size());
  if (X > 0 && K > kMaxPairWork / (X * X)) throw InvalidDistribution("supports too large to enumerate");

  WeightedSignTable t{{}, {}, SignMatrix(X, K)};
  for (const auto& c : concepts) t.row_weights.push_back(c.weight);
  for (const auto& p : inputs) t.col_weights.push_back(p.weight);
  for (std::uint64_t k = 0; k < K; ++k)
    for (std::uint64_t j = 0; j < X; ++j) t.signs.set(j, k, rule.evaluate(concepts[k].value, inputs[j].value));
  return t;
}

namespace {

// Weights scaled to integers over their common denominator.
struct ScaledWeights {
  std::vector<BigInt> values;
  BigInt denominator;
  bool uniform = false;
};

ScaledWeights scale(const std::vector<Rational>& ws) {
  ScaledWeights s;
  s.denominator = 1;
  for (const auto& w : ws) s.denominator = boost::multiprecision::lcm(s.denominator, denominator(w));
  s.values.reserve(ws.size());
  for (const auto& w : ws) s.values.push_back(numerator(w) * (s.denominator / denominator(w)));
  s.uniform = true;
  for (const auto& v : s.values)
    if (v != s.values.front()) s.uniform = false;
  return s;
}

constexpr std::int64_t kSmall = std::int64_t{1} << 31;

struct PairPlan {
  const WeightedSignTable& table;
  ScaledWeights mu, rho;
  bool fast = false;  // int64 weights and __int128 row sums are safe
  std::vector<std::int64_t> mu_small, rho_small;

  explicit PairPlan(const WeightedSignTable& t)
      : table(t), mu(scale(t.row_weights)), rho(scale(t.col_weights)) {
    const BigInt mu_den = mu.uniform ? BigInt(mu.values.size()) : mu.denominator;
    fast = mu_den < kSmall && rho.denominator < kSmall;
    if (fast) {
      for (const auto& v : mu.values) mu_small.push_back(v.convert_to<std::int64_t>());
      for (const auto& v : rho.values) rho_small.push_back(v.convert_to<std::int64_t>());
    }
  }

  // Unnormalized E_f[f(z) f(w)]; units of 1/mu_den.
  std::int64_t inner(std::uint64_t z, std::uint64_t w) const {
    if (mu.uniform) return table.signs.row_inner(z, w);
    std::int64_t s = 0;
    for (std::uint64_t k = 0; k < table.signs.cols(); ++k)
      s += table.signs.get(z, k) * table.signs.get(w, k) * mu_small[k];
    return s;
  }

  __int128 row_sum(std::uint64_t z) const {
    __int128 acc = 0;
    for (std::uint64_t w = 0; w < table.signs.rows(); ++w) {
      const __int128 ip = inner(z, w);
      acc += static_cast<__int128>(rho_small[w]) * ip * ip;
    }
    return acc;
  }

  BigInt mu_den() const { return mu.uniform ? BigInt(mu.values.size()) : mu.denominator; }

  Rational finish(const std::vector<__int128>& rows) const {
    BigInt total = 0;
    for (std::size_t z = 0; z < rows.size(); ++z) {
      const __int128 r = rows[z];
      const auto hi = static_cast<std::int64_t>(r >> 64);
      const auto lo = static_cast<std::uint64_t>(r);
      BigInt v = (BigInt(hi) << 64) + BigInt(lo);
      total += v * rho_small[z];
    }
    const BigInt md = mu_den();
    return Rational(total, rho.denominator * rho.denominator * md * md);
  }

  // Exact but slow path for weights with huge denominators.
  Rational slow() const {
    const BigInt md = mu.denominator;
    BigInt total = 0;
    const auto X = table.signs.rows();
    for (std::uint64_t z = 0; z < X; ++z)
      for (std::uint64_t w = 0; w < X; ++w) {
        BigInt ip = 0;
        for (std::uint64_t k = 0; k < table.signs.cols(); ++k)
          ip += mu.values[k] * (table.signs.get(z, k) * table.signs.get(w, k));
        total += rho.values[z] * rho.values[w] * ip * ip;
      }
    return Rational(total, rho.denominator * rho.denominator * md * md);
  }
};

}  // namespace

namespace serial {
Rational pair_norm(const WeightedSignTable& table) {
  const PairPlan plan(table);
  if (!plan.fast) return plan.slow();
  std::vector<__int128> rows(table.signs.rows());
  for (std::uint64_t z = 0; z < rows.size(); ++z) rows[z] = plan.row_sum(z);
  return plan.finish(rows);
}
}  // namespace serial

namespace parallel {
Rational pair_norm(const WeightedSignTable& table) {
  const PairPlan plan(table);
  if (!plan.fast) return plan.slow();
  std::vector<__int128> rows(table.signs.rows());
  const auto X = static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(dynamic, 8)
  for (std::int64_t z = 0; z < X; ++z) rows[static_cast<std::size_t>(z)] = plan.row_sum(static_cast<std::uint64_t>(z));
  return plan.finish(rows);
}
}  // namespace parallel

Rational r2_pair_exact(const EvaluationRule& rule, const TargetDistribution& mu, const ExampleDistribution& rho) {
  return parallel::pair_norm(tabulate(rule, mu, rho));
}

NormEstimate r2_pair_estimate(const EvaluationRule& rule, const TargetDistribution& mu,
                              const ExampleDistribution& rho, std::uint64_t samples, Rng& rng) {
  if (samples == 0) throw std::invalid_argument("r2_pair_estimate: need at least one sample");
  constexpr std::int64_t shards = 64;
  const std::uint64_t base = rng();
  std::int64_t total = 0;
#pragma omp parallel for schedule(static) reduction(+ : total)
  for (std::int64_t k = 0; k < shards; ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    const std::uint64_t count = samples / shards + (uk < samples % shards ? 1 : 0);
    Rng local(splitmix64(base + uk));
    std::int64_t s = 0;
    for (std::uint64_t i = 0; i < count; ++i) {
      const BitString f = mu.sample(local), g = mu.sample(local);
      const Input z = rho.sample(local), w = rho.sample(local);
      s += rule(f, z) * rule(f, w) * rule(g, z) * rule(g, w);
    }
    total += s;
  }
  NormEstimate e;
  e.samples = samples;
  e.mean = static_cast<double>(total) / static_cast<double>(samples);
  e.stderr_ = 1.0 / std::sqrt(static_cast<double>(samples));
  return e;
}

}  // namespace natlearn
