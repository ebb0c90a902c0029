#include <sstream>

#include "doctest.h"
#include "natlearn/errors.hpp"
#include "natlearn/threshold.hpp"
#include "natlearn/truth_table.hpp"
#include "oracles.hpp"

using namespace natlearn;

TEST_SUITE("corefn") {
  TEST_CASE("tt_from_function follows the index convention") {
    CHECK(TruthTable::from_function(1, [](Input) { return 1; }).to_bits() == "11");
    auto parity = [](Input x) { return input_bit(x, 2, 0) != input_bit(x, 2, 1) ? -1 : 1; };
    CHECK(TruthTable::from_function(2, parity).to_bits() == "1001");
    auto ip2 = [](Input x) { return input_bit(x, 2, 0) && input_bit(x, 2, 1) ? -1 : 1; };
    CHECK(TruthTable::from_function(2, ip2).to_bits() == "1110");
    CHECK_THROWS_AS(TruthTable::from_function(0, [](Input) { return 1; }), ArityError);
    CHECK_THROWS_AS(TruthTable::from_function(21, [](Input) { return 1; }), ArityError);
  }

  TEST_CASE("input indexing is a bijection with x[0] most significant") {
    for (int n : {1, 3, 7, 12}) {
      for (Input i = 0; i < (Input{1} << n); i += 1 + (i >> 4)) {
        std::vector<int> bits;
        for (int k = 0; k < n; ++k) bits.push_back(input_bit(i, n, k));
        CHECK(make_input(bits) == i);
      }
    }
    CHECK(make_input(std::vector<int>{1, 0, 0}) == 4);
  }

  TEST_CASE("ltf_eval") {
    const LinearThreshold t({1, 1, 1}, 2);
    CHECK(t.eval(0b110) == 1);
    CHECK(t.eval(0b100) == -1);
    CHECK(LinearThreshold::always_fire(3).eval(0) == 1);
    CHECK(LinearThreshold::never_fire(3).eval(7) == -1);
  }

  TEST_CASE("ltf overflow is an error, not a wrap") {
    const std::int64_t big = std::numeric_limits<std::int64_t>::max();
    const LinearThreshold t({big, big}, 0);
    CHECK(t.eval(0b10) == 1);
    CHECK_THROWS_AS(t.eval(0b11), OverflowError);
    CHECK_THROWS_AS(checked_neg(std::numeric_limits<std::int64_t>::min()), OverflowError);
  }

  TEST_CASE("ltf is monotone in positive-weight coordinates") {
    Rng rng = make_rng(11, "corefn.monotone");
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 1 + static_cast<int>(uniform_below(rng, 8));
      std::vector<std::int64_t> w;
      for (int i = 0; i < n; ++i) w.push_back(static_cast<std::int64_t>(uniform_below(rng, 11)) - 5);
      const LinearThreshold t(w, static_cast<std::int64_t>(uniform_below(rng, 9)) - 4);
      for (Input x = 0; x < (Input{1} << n); ++x)
        for (int i = 0; i < n; ++i) {
          const Input bit = Input{1} << (n - 1 - i);
          if (w[static_cast<std::size_t>(i)] > 0 && !(x & bit)) CHECK(t.weighted_sum(x | bit) >= t.weighted_sum(x));
        }
    }
  }

  TEST_CASE("circuit_eval tie rule and empty lists") {
    const GateCircuit maj(CircuitKind::MajOfThr, {LinearThreshold::always_fire(3), LinearThreshold::never_fire(3)}, 3);
    for (Input x = 0; x < 8; ++x) CHECK(maj.eval(x) == 1);
    const GateCircuit and_empty(CircuitKind::AndOfThr, {}, 4);
    const GateCircuit maj_empty(CircuitKind::MajOfThr, {}, 4);
    for (Input x = 0; x < 16; ++x) {
      CHECK(and_empty.eval(x) == 1);
      CHECK(maj_empty.eval(x) == 1);
    }
  }

  TEST_CASE("OR-gate circuits reject non-OR gates") {
    CHECK_NOTHROW(GateCircuit(CircuitKind::OrGateThr, {LinearThreshold({1, 0, 1}, 1)}, 3));
    CHECK_THROWS_AS(GateCircuit(CircuitKind::OrGateThr, {LinearThreshold({1, 2, 1}, 1)}, 3), InvalidCircuit);
    CHECK_THROWS_AS(GateCircuit(CircuitKind::OrGateThr, {LinearThreshold({1, 1, 1}, 2)}, 3), InvalidCircuit);
    CHECK_THROWS_AS(GateCircuit(CircuitKind::MajOfThr, {LinearThreshold({1, 1}, 1)}, 3), ArityError);
  }

  TEST_CASE("MAJ-of-THR matches a direct vote count on every input") {
    Rng rng = make_rng(5, "corefn.maj");
    for (int trial = 0; trial < 40; ++trial) {
      const int n = 4 + trial % 7;  // 4..10
      const std::size_t m = 1 + uniform_below(rng, 5);
      ThresholdList gates;
      for (std::size_t g = 0; g < m; ++g) {
        std::vector<std::int64_t> w;
        for (int i = 0; i < n; ++i) w.push_back(static_cast<std::int64_t>(uniform_below(rng, 7)) - 3);
        gates.emplace_back(w, static_cast<std::int64_t>(uniform_below(rng, 5)) - 2);
      }
      const GateCircuit c(CircuitKind::MajOfThr, gates, n);
      const std::vector<bool> all(m, true);
      const TruthTable t = c.truth_table();
      for (Input x = 0; x < (Input{1} << n); ++x) {
        REQUIRE(c.eval(x) == oracle::vote(gates, all, x));
        REQUIRE(t(x) == c.eval(x));
      }
      const GateCircuit a(CircuitKind::AndOfThr, gates, n);
      for (Input x = 0; x < (Input{1} << n); ++x) REQUIRE(a.eval(x) == oracle::conjunction(gates, all, x));
    }
  }

  TEST_CASE("random_truth_table determinism and balance") {
    Rng a = make_rng(42, "tt"), b = make_rng(42, "tt");
    CHECK(TruthTable::random(10, a) == TruthTable::random(10, b));
    Rng r1 = make_rng(1, "tt"), r2 = make_rng(2, "tt");
    CHECK_FALSE(TruthTable::random(10, r1) == TruthTable::random(10, r2));
    Rng r = make_rng(3, "tt.balance");
    const auto t = TruthTable::random(14, r);
    const double mean = static_cast<double>(t.ones()) / static_cast<double>(t.size());
    CHECK(std::abs(mean - 0.5) <= 4.0 / 128.0);
  }

  TEST_CASE("truth-table file round trip and errors") {
    Rng rng = make_rng(9, "tt.io");
    const auto t = TruthTable::random(6, rng);
    std::stringstream ss;
    write_truth_table(ss, t);
    CHECK(read_truth_table(ss) == t);

    std::istringstream bad("n=3\n0101\n");
    try {
      read_truth_table(bad);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("2^3 = 8") != std::string::npos);
    }
    std::istringstream bad_header("k=3\n01010101\n");
    CHECK_THROWS_AS(read_truth_table(bad_header), ParseError);
    std::istringstream bad_char("n=2\n01x1\n");
    CHECK_THROWS_AS(read_truth_table(bad_char), ParseError);
  }

  TEST_CASE("LTF file round trip and errors") {
    const ThresholdList gates = {LinearThreshold({1, -2, 3}, 2), LinearThreshold({0, 0, 1}, -1)};
    std::stringstream ss;
    write_threshold_list(ss, gates);
    CHECK(read_threshold_list(ss) == gates);
    std::istringstream short_line("m=1 n=3\n1 2 ; 1\n");
    try {
      read_threshold_list(short_line);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }

  TEST_CASE("partition halves") {
    const InputPartition p(7);
    CHECK(p.size_a == 4);
    CHECK(p.size_b == 3);
    for (Input x = 0; x < 128; ++x) CHECK(p.join(p.row_of(x), p.col_of(x)) == x);
  }

  TEST_CASE("permuted table moves variables") {
    Rng rng = make_rng(4, "tt.perm");
    const auto t = TruthTable::random(5, rng);
    const std::vector<int> perm = {4, 3, 2, 1, 0};
    const auto p = t.permuted(perm);
    for (Input x = 0; x < 32; ++x) {
      Input y = 0;
      for (int i = 0; i < 5; ++i)
        if (input_bit(x, 5, i)) y |= Input{1} << (5 - 1 - perm[static_cast<std::size_t>(i)]);
      CHECK(p(x) == t(y));
    }
  }
}
