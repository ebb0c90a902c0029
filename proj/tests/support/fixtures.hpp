#pragma once
// Random instance generators shared by the unit and acceptance tests.

#include <cstdint>
#include <vector>

#include "natlearn/bits.hpp"
#include "natlearn/rng.hpp"
#include "natlearn/threshold.hpp"

namespace fixtures {

using namespace natlearn;

inline ThresholdList random_gates(Rng& rng, int n, std::size_t m, int wmax = 3) {
  ThresholdList gates;
  for (std::size_t g = 0; g < m; ++g) {
    std::vector<std::int64_t> w;
    for (int i = 0; i < n; ++i)
      w.push_back(static_cast<std::int64_t>(uniform_below(rng, 2 * wmax + 1)) - wmax);
    gates.emplace_back(w, static_cast<std::int64_t>(uniform_below(rng, 2 * wmax + 1)) - wmax);
  }
  return gates;
}

// Gate i is active iff its switch bit z_i is 0.
inline std::vector<bool> active_of(const BitString& z) {
  std::vector<bool> a;
  for (std::size_t i = 0; i < z.size(); ++i) a.push_back(!z.get(i));
  return a;
}

inline ThresholdList or_gates(const std::vector<std::vector<int>>& clauses, int n) {
  ThresholdList gates;
  for (const auto& c : clauses) {
    std::vector<std::int64_t> w(static_cast<std::size_t>(n), 0);
    for (int v : c) w[static_cast<std::size_t>(v)] = 1;
    gates.emplace_back(w, 1);
  }
  return gates;
}

}  // namespace fixtures
