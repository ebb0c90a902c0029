#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "natlearn/concepts.hpp"
#include "natlearn/errors.hpp"
#include "natlearn/oracle.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace natlearn;

using fixtures::active_of;
using fixtures::or_gates;
using fixtures::random_gates;

TEST_SUITE("concepts") {
  TEST_CASE("forcing weight switches a gate off for every x") {
    const LinearThreshold nonneg_case({1, 2, 3}, 2);
    CHECK(forcing_weight(nonneg_case) == -9);
    const LinearThreshold negative_case({-5}, 0);
    CHECK(forcing_weight(negative_case) == -1);  // -(sum + theta + 1) = 4 would fire at x = 0
    Rng rng = make_rng(3, "concepts.forcing");
    for (int trial = 0; trial < 300; ++trial) {
      const int n = 1 + trial % 8;
      const auto t = random_gates(rng, n, 1, 6).front();
      const auto sw = with_switch_input(t);
      for (Input x = 0; x < (Input{1} << n); ++x) {
        REQUIRE(sw.eval((x << 1) | 1) == -1);
        REQUIRE(sw.eval(x << 1) == t.eval(x));
      }
    }
  }

  TEST_CASE("majthr rule: degenerate representations") {
    Rng rng = make_rng(1, "concepts.majthr.degenerate");
    const auto gates = random_gates(rng, 5, 4);
    const auto rule = majthr_rule(gates);
    CHECK(rule->rep_bits == 8);
    const auto ones = TargetDistribution::point_mass(BitString::from_string("1111"));
    for (int i = 0; i < 10; ++i) {
      const auto rep = sample_mu_L(gates, ones, rng);
      for (Input x = 0; x < 32; ++x) CHECK((*rule)(rep, x) == 1);
    }
    const ThresholdList one = {LinearThreshold::always_fire(4)};
    const auto r1 = majthr_rule(one);
    const auto rep = sample_mu_L(one, TargetDistribution::point_mass(BitString::from_string("0")), rng);
    for (Input x = 0; x < 16; ++x) CHECK((*r1)(rep, x) == 1);
  }

  TEST_CASE("majthr rule with no gate switched off is the plain majority") {
    Rng rng = make_rng(2, "concepts.majthr.plain");
    for (int trial = 0; trial < 20; ++trial) {
      const auto gates = random_gates(rng, 6, 3);
      const auto rule = majthr_rule(gates);
      const auto rep = sample_mu_L(gates, TargetDistribution::point_mass(BitString::from_string("000")), rng);
      CHECK(split_majthr_rep(rep, 3).y.count() == 1);
      const GateCircuit plain(CircuitKind::MajOfThr, gates, 6);
      for (Input x = 0; x < 64; ++x) REQUIRE((*rule)(rep, x) == plain.eval(x));
    }
  }

  TEST_CASE("sample_mu_L padding") {
    Rng rng = make_rng(4, "concepts.padding");
    const ThresholdList two = {LinearThreshold({1}, 1), LinearThreshold({1}, 0)};
    const auto rep = sample_mu_L(two, TargetDistribution::point_mass(BitString::from_string("11")), rng);
    CHECK(rep.to_string() == "1111");

    const ThresholdList three = {LinearThreshold({1}, 1), LinearThreshold({1}, 0), LinearThreshold({-1}, 0)};
    std::map<std::string, int> freq;
    const int N = 3000;
    for (int i = 0; i < N; ++i)
      freq[split_majthr_rep(sample_mu_L(three, TargetDistribution::point_mass(BitString::from_string("000")), rng), 3)
               .y.to_string()]++;
    CHECK(freq.size() == 3);
    const double sigma = std::sqrt(N * (1.0 / 3) * (2.0 / 3));
    for (const auto& s : {"100", "010", "001"}) CHECK(std::abs(freq[s] - N / 3.0) <= 5 * sigma);
  }

  TEST_CASE("majthr rule equals the active-set vote on sampled representations") {
    Rng rng = make_rng(5, "concepts.majthr.equiv");
    int checked = 0;
    for (int trial = 0; trial < 500; ++trial) {
      const int n = 2 + trial % 9;          // 2..10
      const std::size_t m = 1 + trial % 7;  // 1..7
      const auto gates = random_gates(rng, n, m);
      const auto rule = majthr_rule(gates);
      const auto circuit = majthr_rule_circuit(gates);
      const auto theta = TargetDistribution::bernoulli_bits(m, 0.3);
      const auto rep = sample_mu_L(gates, theta, rng);
      const auto parts = split_majthr_rep(rep, m);
      CHECK(parts.y.count() == (m + parts.z.count()) / 2);
      const auto active = active_of(parts.z);
      for (Input x = 0; x < (Input{1} << n); ++x) {
        const int want = oracle::vote(gates, active, x);
        REQUIRE((*rule)(rep, x) == want);
        REQUIRE(direct_concept_eval(gates, parts.z, x) == want);
        Input full = x;
        for (std::size_t i = 0; i < 2 * m; ++i) full = (full << 1) | (rep.get(i) ? 1U : 0U);
        REQUIRE(circuit.eval(full) == want);
      }
      ++checked;
    }
    CHECK(checked == 500);
  }

  TEST_CASE("switching off a non-pivotal gate keeps the output") {
    Rng rng = make_rng(6, "concepts.pivotal");
    for (int trial = 0; trial < 60; ++trial) {
      const int n = 3 + trial % 4;
      const std::size_t m = 2 + trial % 4;
      const auto gates = random_gates(rng, n, m);
      const auto rule = majthr_rule(gates);
      const BitString z = BitString::random(m, rng);
      for (std::size_t i = 0; i < m; ++i) {
        if (z.get(i)) continue;
        BitString z2 = z;
        z2.set(i, true);
        const auto rep = sample_mu_L(gates, TargetDistribution::point_mass(z), rng);
        const auto rep2 = sample_mu_L(gates, TargetDistribution::point_mass(z2), rng);
        for (Input x = 0; x < (Input{1} << n); ++x)
          if (direct_concept_eval(gates, z, x) == direct_concept_eval(gates, z2, x))
            REQUIRE((*rule)(rep, x) == (*rule)(rep2, x));
      }
    }
  }

  TEST_CASE("polytope rule: degenerate cases") {
    Rng rng = make_rng(7, "concepts.polytope.degenerate");
    const ThresholdList fire(4, LinearThreshold::always_fire(3));
    const auto rule = polytope_rule(fire);
    const auto rep = sample_mu_and_L(fire, TargetDistribution::point_mass(BitString::from_string("0000")), rng);
    for (Input x = 0; x < 8; ++x) CHECK((*rule)(rep, x) == 1);

    ThresholdList mixed = {LinearThreshold::never_fire(3), LinearThreshold::always_fire(3), LinearThreshold({1, 1, 1}, 2)};
    const auto r2 = polytope_rule(mixed);
    const auto rep2 = sample_mu_and_L(mixed, TargetDistribution::point_mass(BitString::from_string("011")), rng);
    for (Input x = 0; x < 8; ++x) CHECK((*r2)(rep2, x) == -1);
    const auto rep3 = sample_mu_and_L(mixed, TargetDistribution::point_mass(BitString::from_string("111")), rng);
    for (Input x = 0; x < 8; ++x) CHECK((*r2)(rep3, x) == 1);
  }

  TEST_CASE("polytope rule equals the conjunction of active gates") {
    Rng rng = make_rng(8, "concepts.polytope.equiv");
    for (int trial = 0; trial < 300; ++trial) {
      const int n = 2 + trial % 7;          // 2..8
      const std::size_t m = 1 + trial % 5;  // 1..5
      const auto gates = random_gates(rng, n, m);
      const auto rule = polytope_rule(gates);
      const auto rep = sample_mu_and_L(gates, TargetDistribution::uniform_bits(m), rng);
      const auto parts = split_polytope_rep(rep, m);
      const std::size_t M = m - parts.z.count();
      CHECK(parts.y.count() + parts.v.count() == (3 * m + 1) / 2 - M);
      const auto active = active_of(parts.z);
      for (Input x = 0; x < (Input{1} << n); ++x) {
        const int want = oracle::conjunction(gates, active, x);
        REQUIRE((*rule)(rep, x) == want);
        REQUIRE(direct_conjunction_eval(gates, parts.z, x) == want);
      }
    }
  }

  TEST_CASE("cnf rule") {
    Rng rng = make_rng(9, "concepts.cnf");
    const std::vector<std::vector<int>> clauses = {{0, 1}, {2}};
    const auto gates = or_gates(clauses, 3);
    const auto rule = cnf_rule(gates);
    const auto both = sample_mu_and_L(gates, TargetDistribution::point_mass(BitString::from_string("00")), rng);
    CHECK((*rule)(both, 0b110) == -1);
    CHECK((*rule)(both, 0b101) == 1);
    const auto none = sample_mu_and_L(gates, TargetDistribution::point_mass(BitString::from_string("11")), rng);
    for (Input x = 0; x < 8; ++x) CHECK((*rule)(none, x) == 1);
    CHECK_THROWS_AS(cnf_rule({LinearThreshold({1, 2, 0}, 1)}), InvalidCircuit);

    for (int trial = 0; trial < 300; ++trial) {
      const int n = 2 + trial % 9;          // 2..10
      const std::size_t m = 1 + trial % 6;  // 1..6
      std::vector<std::vector<int>> cls(m);
      for (auto& c : cls)
        for (int v = 0; v < n; ++v)
          if (uniform_below(rng, 3) == 0) c.push_back(v);
      const auto g = or_gates(cls, n);
      const auto r = cnf_rule(g);
      const auto rep = sample_mu_and_L(g, TargetDistribution::uniform_bits(m), rng);
      const auto active = active_of(split_polytope_rep(rep, m).z);
      for (Input x = 0; x < (Input{1} << n); ++x) REQUIRE((*r)(rep, x) == oracle::cnf(cls, active, n, x));
    }
  }

  TEST_CASE("mu_L and mu_and_L supports are normalized and match the samplers") {
    const ThresholdList gates = {LinearThreshold({1, 1, 0}, 1), LinearThreshold({0, 1, 1}, 2),
                                 LinearThreshold({1, -1, 1}, 1)};
    const auto theta = TargetDistribution::uniform_bits(3);
    for (const auto& mu : {mu_L(gates, theta), mu_and_L(gates, theta)}) {
      REQUIRE(mu.enumerable());
      Rational total = 0;
      std::map<BitString, double> want;
      for (const auto& [rep, w] : mu.support()) {
        total += w;
        want[rep] = to_double(w);
      }
      CHECK(total == 1);
      Rng rng = make_rng(10, "concepts.support");
      std::map<BitString, int> seen;
      const int N = 20000;
      for (int i = 0; i < N; ++i) seen[mu.sample(rng)]++;
      for (const auto& [rep, c] : seen) {
        REQUIRE(want.count(rep) == 1);
        const double p = want[rep];
        CHECK(std::abs(c - N * p) <= 5 * std::sqrt(N * p * (1 - p)) + 1);
      }
    }
  }

  TEST_CASE("oracle draws") {
    const ThresholdList gates = {LinearThreshold({1, 1, 0, 0, 1, 0, 0, 1}, 2)};
    const auto rule = majthr_rule(gates);
    Rng rng = make_rng(11, "concepts.oracle");
    const BoundConcept f{rule, sample_mu_L(gates, TargetDistribution::uniform_bits(1), rng)};

    const ExampleOracle point(f, ExampleDistribution::point_mass(8, 0x5a));
    for (int i = 0; i < 50; ++i) {
      const auto ex = oracle_draw(point, rng);
      CHECK(ex.x == 0x5a);
      CHECK(ex.y == f(0x5a));
    }

    const ExampleOracle uniform(f, ExampleDistribution::uniform(8));
    const int N = 10000;
    std::vector<int> ones(8, 0);
    for (int i = 0; i < N; ++i) {
      const auto ex = oracle_draw(uniform, rng);
      REQUIRE(ex.y == f(ex.x));
      REQUIRE(ex.y == uniform.label_of(ex.x));
      for (int b = 0; b < 8; ++b) ones[static_cast<std::size_t>(b)] += input_bit(ex.x, 8, b);
    }
    for (int c : ones) CHECK(std::abs(c - N / 2.0) <= 5 * std::sqrt(N / 4.0));
  }

  TEST_CASE("example distributions") {
    Rng rng = make_rng(12, "concepts.rho");
    const auto zero = ExampleDistribution::bernoulli_product(6, 0.0);
    for (int i = 0; i < 100; ++i) CHECK(zero.sample(rng) == 0);

    const auto emp = ExampleDistribution::empirical(4, {{3, Rational(1, 4)}, {9, Rational(3, 4)}});
    const int N = 10000;
    int nine = 0;
    for (int i = 0; i < N; ++i) nine += emp.sample(rng) == 9 ? 1 : 0;
    CHECK(std::abs(nine - 0.75 * N) <= 5 * std::sqrt(N * 0.75 * 0.25));

    const auto u = ExampleDistribution::uniform(4);
    std::set<Input> seen;
    for (int i = 0; i < N; ++i) seen.insert(u.sample(rng));
    CHECK(seen.size() == 16);

    const auto push = ExampleDistribution::pushforward(3, 6, [](std::uint64_t r) { return (r << 3) | r; });
    for (int i = 0; i < 100; ++i) {
      const Input x = push.sample(rng);
      CHECK((x >> 3) == (x & 7));
    }
    CHECK(push.support().size() == 8);

    CHECK_THROWS_AS(ExampleDistribution::bernoulli_product(3, 1.5), InvalidDistribution);
    CHECK_THROWS_AS(ExampleDistribution::empirical(2, {{7, Rational(1)}}), InvalidDistribution);
    CHECK_THROWS_AS(ExampleDistribution::empirical(2, {{1, Rational(-1)}, {2, Rational(2)}}), InvalidDistribution);
  }
}
