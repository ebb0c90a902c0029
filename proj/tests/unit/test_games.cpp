#include <cmath>
#include <set>

#include "doctest.h"
#include "natlearn/errors.hpp"
#include "natlearn/games.hpp"
#include "natlearn/learner.hpp"
#include "natlearn/pair_norm.hpp"
#include "oracles.hpp"

using namespace natlearn;

TEST_SUITE("games") {
  TEST_CASE("trivial protocol always wins") {
    const ThresholdList gates = {LinearThreshold({1, 1, 0, 1, -1}, 1), LinearThreshold({0, 1, 1, -1, 1}, 1),
                                 LinearThreshold({1, -1, 1, 0, 1}, 2)};
    const auto rule = majthr_rule(gates);
    const GameSpec game{rule, mu_L(gates, TargetDistribution::uniform_bits(3)), ExampleDistribution::uniform(5)};
    const auto p = trivial_protocol(rule);
    CHECK(p.cost == 6);
    Rng rng = make_rng(1, "games.trivial");
    const auto win = game_win_prob(game, p, 5000, rng);
    CHECK(win.probability == 1.0);

    const GameSpec xm{xm_rule(8), xm_key_distribution(8), ExampleDistribution::uniform(8)};
    const auto px = trivial_protocol(xm.rule);
    CHECK(px.cost <= 2 * 3 * 3);
    CHECK(game_win_prob(xm, px, 5000, rng).probability == 1.0);
  }

  TEST_CASE("constant protocol on a balanced rule wins half the time") {
    const GameSpec xm{xm_rule(8), xm_key_distribution(8), ExampleDistribution::uniform(8)};
    Rng rng = make_rng(2, "games.constant");
    const auto win = game_win_prob(xm, constant_protocol(1), 20000, rng);
    CHECK(std::abs(win.probability - 0.5) <= 4 * win.stderr_);
  }

  TEST_CASE("understated cost is caught") {
    const auto rule = xm_rule(4);
    Protocol liar = trivial_protocol(rule);
    liar.cost = 2;
    const GameSpec game{rule, xm_key_distribution(4), ExampleDistribution::uniform(4)};
    Rng rng = make_rng(3, "games.liar");
    CHECK_THROWS_AS(game_win_prob(game, liar, 10, rng), ProtocolCostViolation);
    Channel ch(1);
    ch.send(true);
    CHECK_THROWS_AS(ch.send(false), ProtocolCostViolation);
  }

  TEST_CASE("advantage bound") {
    CHECK(advantage_bound(0, Rational(1, 2)) == Rational(1, 128));
    CHECK(advantage_bound(10, Rational(1, 2)) == Rational(1, pow2(47)));
    for (unsigned c = 0; c < 12; ++c)
      for (int g = 1; g <= 8; ++g) {
        const Rational gamma(g, 16);
        CHECK(advantage_bound(c + 1, gamma) < advantage_bound(c, gamma));
      }
    CHECK_THROWS(advantage_bound(1, Rational(0)));
    CHECK_THROWS(advantage_bound(1, Rational(3, 4)));
  }

  TEST_CASE("enumerated predictor advantage dominates the certified bound") {
    ThresholdList gates = {LinearThreshold({1, 1, -1}, 1), LinearThreshold({-1, 1, 1}, 1)};
    const auto rule = majthr_rule(gates);
    const auto mu = mu_L(gates, TargetDistribution::uniform_bits(2));
    const auto rho = ExampleDistribution::uniform(3);
    const Rational r2 = r2_pair_exact(*rule, mu, rho);
    const auto p = trivial_protocol(rule);
    Rng rng = make_rng(4, "games.bound");
    const auto win = game_win_prob(GameSpec{rule, mu, rho}, p, 4000, rng);
    const double gamma = win.probability - 0.5 - 3 * win.stderr_;
    REQUIRE(gamma > 0);
    // Pr[L correct] - 1/2 = R2/8 on this instance
    CHECK(r2 / 8 >= advantage_bound(static_cast<unsigned>(p.cost), rational_from_double(std::min(gamma, 0.5))));
  }

  TEST_CASE("correlation bound holds for constant protocols") {
    Rng rng = make_rng(5, "games.constant.corr");
    for (int trial = 0; trial < 50; ++trial) {
      const int n = 2 + trial % 9;
      const auto t = TruthTable::random(n, rng);
      const auto norm = r2_exact_gram(t);
      const auto h = RectangleProtocol::constant(InputPartition(n), 1);
      const std::int64_t k = protocol_correlation_sum(t, h);
      CHECK(k == 2 * static_cast<std::int64_t>(t.ones()) - static_cast<std::int64_t>(t.size()));
      CHECK(correlation_within_bound(k, h.cost(), norm.raw_sum, n));
      // bias^4 <= r2
      const Rational bias(k, static_cast<long long>(t.size()));
      CHECK(bias * bias * bias * bias <= norm.r2);
    }
  }

  TEST_CASE("correlation sums match direct evaluation") {
    Rng rng = make_rng(6, "games.corr.direct");
    for (int trial = 0; trial < 30; ++trial) {
      const int n = 3 + trial % 6;
      const auto t = TruthTable::random(n, rng);
      const InputPartition p(n);
      const auto h = RectangleProtocol::random(p, trial % 4, rng);
      std::int64_t direct = 0;
      for (Input x = 0; x < t.size(); ++x) {
        Channel ch(h.cost());
        direct += t(x) * h.run(p.row_of(x), p.col_of(x), ch);
        CHECK(ch.used() == h.cost());
      }
      CHECK(protocol_correlation_sum(t, h) == direct);
    }
  }

  TEST_CASE("correlation-bound falsification finds nothing") {
    for (int i = 0; i < 4; ++i) {
      Rng rng = make_rng(7, "games.falsify", static_cast<std::uint64_t>(i));
      const auto t = TruthTable::random(10, rng);
      const auto rep = corrbound_falsify(t, 1000, rng);
      CHECK(rep.violations == 0);
      CHECK(rep.max_bound_ratio <= 1.0);
    }
    Rng rng = make_rng(8, "games.falsify.ip");
    const auto rep = corrbound_falsify(families::inner_product(4), 2000, rng);
    CHECK(rep.violations == 0);
    CHECK(rep.norm.r2 == Rational(1, 16));
    CHECK(rep.max_bound_ratio <= 1.0);
    CHECK_THROWS_AS(corrbound_falsify(families::constant(17), 1, rng), ArityError);
  }

  TEST_CASE("XOR-MAJ conventions") {
    Rng rng = make_rng(9, "games.xm");
    for (int trial = 0; trial < 100; ++trial) {
      const auto key = xm_gen(8, rng);
      CHECK(key.a.size() == 3);
      CHECK(key.b.size() == 3);
      std::set<int> used(key.a.begin(), key.a.end());
      used.insert(key.b.begin(), key.b.end());
      CHECK(used.size() == 6);
      CHECK(xm_eval(key, 8, 0) == 1);
      for (Input x = 0; x < 256; x += 7) {
        for (int i = 0; i < 8; ++i) {
          const Input flipped = x ^ (Input{1} << (7 - i));
          if (std::count(key.a.begin(), key.a.end(), i)) CHECK(xm_eval(key, 8, flipped) == -xm_eval(key, 8, x));
          if (!used.count(i)) CHECK(xm_eval(key, 8, flipped) == xm_eval(key, 8, x));
        }
      }
      const auto enc = xm_encode(key, 8);
      CHECK(enc.size() == 18);
      CHECK(xm_decode(enc, 8) == key);
      for (Input x = 0; x < 256; ++x) REQUIRE((*xm_rule(8))(enc, x) == xm_eval(key, 8, x));
    }
    CHECK(xm_all_keys(8).size() == 560);
    CHECK(xm_key_count(8) == 560);
    CHECK(xm_key_distribution(8).support().size() == 560);
    CHECK_THROWS_AS(xm_gen(6, rng), ArityError);
    CHECK_THROWS_AS(xm_rule(12), ArityError);
  }

  TEST_CASE("XOR-MAJ exact norm and pair-estimate cross-check") {
    const auto triple = xor_maj_triple(8);
    const auto rho = triple.example_distribution();
    const Rational r2 = r2_pair_exact(*triple.f, triple.gen, rho);
    CHECK(r2 == Rational(67, 4480));
    Rng rng = make_rng(10, "games.xm.mc");
    const auto est = r2_pair_estimate(*triple.f, triple.gen, rho, 200000, rng);
    CHECK(std::abs(est.mean - to_double(r2)) <= 4.0 / std::sqrt(200000.0));
    CHECK(distinguisher_samples(to_double(r2)) ==
          static_cast<std::uint64_t>(std::ceil(25.0 / (to_double(r2) * to_double(r2)))));
  }

  TEST_CASE("distinguisher") {
    const auto triple = xor_maj_triple(8);
    const Rational r2 = r2_pair_exact(*triple.f, triple.gen, triple.example_distribution());
    const auto N = distinguisher_samples(to_double(r2));
    int structured = 0, null_quiet = 0;
    const int runs = 20;
    for (int run = 0; run < runs; ++run) {
      Rng rng = make_rng(11, "games.distinguish", static_cast<std::uint64_t>(run));
      const auto keyed = wprf_distinguish(triple, N, rng, LabelMode::Keyed);
      structured += keyed.structured && keyed.z >= 3 ? 1 : 0;
      CHECK(std::abs(keyed.mean - to_double(r2)) <= 4.0 / std::sqrt(static_cast<double>(N)));
      const auto null = wprf_distinguish(triple, N, rng, LabelMode::Random);
      null_quiet += std::abs(null.z) <= 3 ? 1 : 0;
    }
    CHECK(structured >= 18);
    CHECK(null_quiet >= 19);

    Rng rng = make_rng(12, "games.point.key");
    const auto key = xm_encode(xm_gen(8, rng), 8);
    WprfTriple single{"single-key", xm_rule(8), TargetDistribution::point_mass(key), 0, {}};
    const auto r = wprf_distinguish(single, 1000, rng);
    CHECK(r.mean == 1.0);
    CHECK(r.structured);
  }

  TEST_CASE("encoded inputs go through the encoding") {
    // A keyed parity on a duplicated seed: enc(r) = r || r.
    EvaluationRule rule{"masked-parity", 6, 6, [](const BitString& k, Input x) {
                          Input mask = 0;
                          for (std::size_t i = 0; i < 6; ++i) mask = (mask << 1) | (k.get(i) ? 1U : 0U);
                          return (__builtin_popcountll(x & mask) & 1) ? -1 : 1;
                        }};
    const auto r = std::make_shared<const EvaluationRule>(rule);
    WprfTriple t{"masked-parity", r, TargetDistribution::uniform_bits(6), 3,
                 [](std::uint64_t s) { return static_cast<Input>((s << 3) | s); }};
    const auto rho = t.example_distribution();
    CHECK(rho.support().size() == 8);
    for (const auto& [x, w] : rho.support()) CHECK((x >> 3) == (x & 7));
    const Rational exact = r2_pair_exact(*r, t.gen, rho);
    Rng rng = make_rng(13, "games.encoded");
    const auto d = wprf_distinguish(t, 40000, rng);
    CHECK(std::abs(d.mean - to_double(exact)) <= 4.0 / 200.0);
  }
}
