#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "natlearn/rational.hpp"
#include "natlearn/rng.hpp"
#include "natlearn/truth_table.hpp"

namespace natlearn {

// Exact 2-party norm of a truth table under the canonical partition.
//   raw_sum = sum over (a0, a1, b0, b1) of f(a0 b0) f(a0 b1) f(a1 b0) f(a1 b1)
//   r2      = raw_sum / 2^{2n}
//   alpha   = raw_sum / 2^n
struct NormResult {
  int n = 0;
  BigInt raw_sum;
  Rational r2;
  Rational alpha;
};

NormResult make_norm_result(int n, const BigInt& raw_sum);

inline constexpr int kMaxNaiveArity = 12;

// Four-fold sum, O(2^{2n}). Reference for the Gram kernel.
NormResult r2_exact_naive(const TruthTable& t);

// raw_sum = sum over row pairs of <row_r0, row_r1>^2 on the packed
// 2^{ceil(n/2)} x 2^{floor(n/2)} sign matrix. When perm is given the inputs
// are reordered first (see TruthTable::permuted).
NormResult r2_exact_gram(const TruthTable& t, std::optional<std::span<const int>> perm = std::nullopt);

// True iff |raw_sum|^3 <= 2^{5n}, i.e. |alpha| <= 2^{2n/3}.
bool alpha_within_property_bound(const BigInt& raw_sum, int n);

struct PropertyVerdict {
  bool accepted = false;  // property output 1
  NormResult norm;
};

PropertyVerdict natural_property(const TruthTable& t);

// Sampled norm; each product is +-1 so stderr = 1/sqrt(N).
struct NormEstimate {
  double mean = 0.0;
  std::uint64_t samples = 0;
  double stderr_ = 0.0;
};

// f(a, b) with a in {0,1}^{bits_a}, b in {0,1}^{bits_b}.
struct PairFunction {
  int bits_a = 0;
  int bits_b = 0;
  std::function<int(std::uint64_t, std::uint64_t)> eval;
};

PairFunction pair_function(const TruthTable& t);

// Mean of the product over N iid uniform tuples (a0, b0, a1, b1). Work is split
// into fixed shards seeded from one draw of rng, so the result does not
// depend on the thread count.
NormEstimate r2_estimate_mc(const PairFunction& f, std::uint64_t samples, Rng& rng);

// Kernels behind the exact computations. The serial versions are the
// references the parallel ones are tested and benchmarked against.
namespace serial {
std::uint64_t naive_raw_sum(const TruthTable& t);
std::uint64_t gram_raw_sum(const TruthTable& t);
std::int64_t mc_product_sum(const PairFunction& f, std::uint64_t samples, std::uint64_t base_seed);
}  // namespace serial

namespace parallel {
std::uint64_t gram_raw_sum(const TruthTable& t);
std::int64_t mc_product_sum(const PairFunction& f, std::uint64_t samples, std::uint64_t base_seed);
}  // namespace parallel

// Row-major +-1 sign matrix packed into 64-bit words, rows padded to whole
// words. Bit set = +1.
class SignMatrix {
 public:
  SignMatrix(std::uint64_t rows, std::uint64_t cols);
  static SignMatrix from_table(const TruthTable& t);

  std::uint64_t rows() const noexcept { return rows_; }
  std::uint64_t cols() const noexcept { return cols_; }
  std::size_t words_per_row() const noexcept { return wpr_; }

  void set(std::uint64_t r, std::uint64_t c, int sign) noexcept;
  int get(std::uint64_t r, std::uint64_t c) const noexcept {
    return ((data_[r * wpr_ + (c >> 6)] >> (c & 63)) & 1U) ? 1 : -1;
  }
  std::span<const std::uint64_t> row(std::uint64_t r) const noexcept {
    return {data_.data() + r * wpr_, wpr_};
  }
  // <row_r0, row_r1> = cols - 2 * popcount(row_r0 xor row_r1).
  std::int64_t row_inner(std::uint64_t r0, std::uint64_t r1) const noexcept;

 private:
  std::uint64_t rows_, cols_;
  std::size_t wpr_;
  std::vector<std::uint64_t> data_;
};

}  // namespace natlearn
