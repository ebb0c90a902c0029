#include "natlearn/concepts.hpp"

#include "natlearn/errors.hpp"

namespace natlearn {

namespace {

void check_list(const ThresholdList& list, int extra_inputs) {
  if (list.empty()) throw ArityError("threshold list must contain at least one gate");
  const int n = list.front().arity();
  for (const auto& t : list)
    if (t.arity() != n) throw ArityError("threshold list gates must share one arity");
  if (n + extra_inputs > kMaxInputArity) throw ArityError("switched gates exceed 64 inputs");
}

std::vector<LinearThreshold> switched_gates(const ThresholdList& list) {
  std::vector<LinearThreshold> out;
  out.reserve(list.size());
  for (const auto& t : list) out.push_back(with_switch_input(t));
  return out;
}

std::size_t switched_firing(const std::vector<LinearThreshold>& gates, const BitString& rep,
                            std::size_t z_offset, Input x) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < gates.size(); ++i)
    k += gates[i].fires((x << 1) | (rep.get(z_offset + i) ? 1U : 0U)) ? 1 : 0;
  return k;
}

std::size_t count_range(const BitString& rep, std::size_t offset, std::size_t len) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < len; ++i) c += rep.get(offset + i) ? 1 : 0;
  return c;
}

BitString bits_of(std::uint64_t v, std::size_t len) {
  BitString b(len);
  for (std::size_t i = 0; i < len; ++i) b.set(i, (v >> i) & 1U);
  return b;
}

// All len-bit masks with exactly k ones, in increasing order.
std::vector<std::uint64_t> masks_with_weight(std::size_t len, std::size_t k) {
  if (len > 40) throw ArityError("support too large to enumerate");
  std::vector<std::uint64_t> out;
  if (k > len) return out;
  if (k == 0) return {0};
  std::uint64_t v = (std::uint64_t{1} << k) - 1;
  const std::uint64_t limit = std::uint64_t{1} << len;
  while (v < limit) {
    out.push_back(v);
    const std::uint64_t t = v | (v - 1);
    v = (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
  }
  return out;
}

std::size_t majthr_y_weight(std::size_t m, std::size_t zw) { return (m + zw) / 2; }

std::size_t polytope_aux_weight(std::size_t m, std::size_t zw) {
  const std::size_t active = m - zw;
  return (3 * m + 1) / 2 - active;
}

}  // namespace

std::int64_t forcing_weight(const LinearThreshold& t) {
  std::int64_t sum = 0, positive = 0;
  for (auto w : t.weights()) {
    sum = checked_add(sum, w);
    if (w > 0) positive = checked_add(positive, w);
  }
  const std::int64_t usual = checked_neg(checked_add(checked_add(sum, t.threshold()), 1));
  const std::int64_t general = checked_add(checked_add(t.threshold(), checked_neg(positive)), -1);
  return usual <= general ? usual : general;
}

LinearThreshold with_switch_input(const LinearThreshold& t) {
  auto w = t.weights();
  w.push_back(forcing_weight(t));
  return LinearThreshold(std::move(w), t.threshold());
}

MajThrRep split_majthr_rep(const BitString& rep, std::size_t m) {
  if (rep.size() != 2 * m) throw ArityError("majthr representation must have 2m bits");
  return {rep.slice(0, m), rep.slice(m, m)};
}

PolytopeRep split_polytope_rep(const BitString& rep, std::size_t m) {
  if (rep.size() != 3 * m) throw ArityError("polytope representation must have 3m bits");
  return {rep.slice(0, m), rep.slice(m, m), rep.slice(2 * m, m)};
}

RulePtr majthr_rule(const ThresholdList& list) {
  check_list(list, 1);
  const std::size_t m = list.size();
  auto gates = switched_gates(list);
  auto rule = std::make_shared<EvaluationRule>();
  rule->name = "majthr";
  rule->n = list.front().arity();
  rule->rep_bits = 2 * m;
  rule->evaluate = [gates = std::move(gates), m](const BitString& rep, Input x) {
    const std::size_t ones = switched_firing(gates, rep, 0, x) + count_range(rep, m, m);
    return 2 * ones >= 2 * m ? 1 : -1;
  };
  return rule;
}

RulePtr polytope_rule(const ThresholdList& list) {
  check_list(list, 1);
  const std::size_t m = list.size();
  auto gates = switched_gates(list);
  auto rule = std::make_shared<EvaluationRule>();
  rule->name = "polytope";
  rule->n = list.front().arity();
  rule->rep_bits = 3 * m;
  rule->evaluate = [gates = std::move(gates), m](const BitString& rep, Input x) {
    // v at [0, m), z at [m, 2m), y at [2m, 3m)
    const std::size_t ones =
        switched_firing(gates, rep, m, x) + count_range(rep, 0, m) + count_range(rep, 2 * m, m);
    return 2 * ones >= 3 * m ? 1 : -1;
  };
  return rule;
}

RulePtr cnf_rule(const ThresholdList& list) {
  for (const auto& t : list)
    if (!t.is_or_gate()) throw InvalidCircuit("cnf_rule needs OR-form gates (0/1 weights, theta = 1)");
  auto base = polytope_rule(list);
  auto rule = std::make_shared<EvaluationRule>(*base);
  rule->name = "cnf";
  return rule;
}

GateCircuit majthr_rule_circuit(const ThresholdList& list) {
  const std::size_t m = list.size();
  check_list(list, static_cast<int>(2 * m));
  const int n = list.front().arity();
  const int arity = n + static_cast<int>(2 * m);
  std::vector<LinearThreshold> gates;
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::int64_t> w(static_cast<std::size_t>(arity), 0);
    for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = list[i].weights()[static_cast<std::size_t>(j)];
    w[static_cast<std::size_t>(n) + i] = forcing_weight(list[i]);
    gates.emplace_back(std::move(w), list[i].threshold());
  }
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<std::int64_t> w(static_cast<std::size_t>(arity), 0);
    w[static_cast<std::size_t>(n) + m + j] = 1;
    gates.emplace_back(std::move(w), 1);
  }
  return GateCircuit(CircuitKind::MajOfThr, std::move(gates), arity);
}

int direct_concept_eval(const ThresholdList& list, const BitString& z, Input x) {
  if (z.size() != list.size()) throw ArityError("z must have one bit per gate");
  std::size_t active = 0, firing = 0;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (z.get(i)) continue;
    ++active;
    firing += list[i].fires(x) ? 1 : 0;
  }
  return 2 * firing >= active ? 1 : -1;
}

int direct_conjunction_eval(const ThresholdList& list, const BitString& z, Input x) {
  if (z.size() != list.size()) throw ArityError("z must have one bit per gate");
  for (std::size_t i = 0; i < list.size(); ++i)
    if (!z.get(i) && !list[i].fires(x)) return -1;
  return 1;
}

BitString sample_mu_L(const ThresholdList& list, const TargetDistribution& theta, Rng& rng) {
  const std::size_t m = list.size();
  if (theta.rep_bits() != m) throw ArityError("theta must sample m-bit strings");
  const BitString z = theta.sample(rng);
  const BitString y = BitString::random_weight(m, majthr_y_weight(m, z.count()), rng);
  return concat(z, y);
}

BitString sample_mu_and_L(const ThresholdList& list, const TargetDistribution& theta, Rng& rng) {
  const std::size_t m = list.size();
  if (theta.rep_bits() != m) throw ArityError("theta must sample m-bit strings");
  const BitString z = theta.sample(rng);
  const std::size_t aux = polytope_aux_weight(m, z.count());
  if (aux > 2 * m) throw std::logic_error("auxiliary vote count out of range");
  const BitString yv = BitString::random_weight(2 * m, aux, rng);
  const BitString y = yv.slice(0, m), v = yv.slice(m, m);
  return concat(concat(v, z), y);
}

TargetDistribution mu_L(const ThresholdList& list, const TargetDistribution& theta) {
  const std::size_t m = list.size();
  if (theta.rep_bits() != m) throw ArityError("theta must sample m-bit strings");
  TargetDistribution::Enumerator en;
  if (theta.enumerable())
    en = [theta, m] {
      std::vector<Weighted<BitString>> pts;
      for (const auto& [z, wz] : theta.support()) {
        const auto masks = masks_with_weight(m, majthr_y_weight(m, z.count()));
        const Rational each = wz / static_cast<long long>(masks.size());
        for (auto mask : masks) pts.push_back({concat(z, bits_of(mask, m)), each});
      }
      return pts;
    };
  return TargetDistribution(
      2 * m, [list, theta](Rng& rng) { return sample_mu_L(list, theta, rng); }, "mu_L", std::move(en));
}

TargetDistribution mu_and_L(const ThresholdList& list, const TargetDistribution& theta) {
  const std::size_t m = list.size();
  if (theta.rep_bits() != m) throw ArityError("theta must sample m-bit strings");
  TargetDistribution::Enumerator en;
  if (theta.enumerable())
    en = [theta, m] {
      std::vector<Weighted<BitString>> pts;
      for (const auto& [z, wz] : theta.support()) {
        const auto masks = masks_with_weight(2 * m, polytope_aux_weight(m, z.count()));
        const Rational each = wz / static_cast<long long>(masks.size());
        for (auto mask : masks) {
          const BitString yv = bits_of(mask, 2 * m);
          pts.push_back({concat(concat(yv.slice(m, m), z), yv.slice(0, m)), each});
        }
      }
      return pts;
    };
  return TargetDistribution(
      3 * m, [list, theta](Rng& rng) { return sample_mu_and_L(list, theta, rng); }, "mu_and_L",
      std::move(en));
}

}  // namespace natlearn
