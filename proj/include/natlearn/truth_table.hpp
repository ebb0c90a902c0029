#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "natlearn/rng.hpp"

namespace natlearn {

// An input x in {0,1}^n packed so that x[0] is the most significant of the n
// low bits. With this packing the integer value of an input is its
// truth-table index.
using Input = std::uint64_t;

inline constexpr int kMaxInputArity = 64;
inline constexpr int kMaxTableArity = 20;

inline bool input_bit(Input x, int n, int i) noexcept { return (x >> (n - 1 - i)) & 1U; }
Input make_input(std::span<const int> bits);

// +1 for bit 1, -1 for bit 0.
inline int to_sign(bool bit) noexcept { return bit ? 1 : -1; }
inline bool to_bit(int sign) noexcept { return sign > 0; }

// The fixed split of n inputs into a high-order half A (ceil(n/2) bits) and a
// low-order half B (floor(n/2) bits). Index = a * cols + b.
struct InputPartition {
  int n = 0;
  int size_a = 0;
  int size_b = 0;

  explicit InputPartition(int arity) : n(arity), size_a((arity + 1) / 2), size_b(arity / 2) {}

  std::uint64_t rows() const noexcept { return std::uint64_t{1} << size_a; }
  std::uint64_t cols() const noexcept { return std::uint64_t{1} << size_b; }
  std::uint64_t row_of(Input x) const noexcept { return x >> size_b; }
  std::uint64_t col_of(Input x) const noexcept { return x & (cols() - 1); }
  Input join(std::uint64_t a, std::uint64_t b) const noexcept { return (a << size_b) | b; }
};

// Bit-packed table of a function {0,1}^n -> {-1,+1}, 1 <= n <= 20. Bit value 1
// encodes +1. Entry for index i sits in word i/64 at position i%64.
class TruthTable {
 public:
  explicit TruthTable(int n);

  static TruthTable from_function(int n, const std::function<int(Input)>& f);
  // Characters in index order, '1' for +1.
  static TruthTable from_bits(int n, const std::string& bits);
  static TruthTable random(int n, Rng& rng);

  int arity() const noexcept { return n_; }
  std::uint64_t size() const noexcept { return std::uint64_t{1} << n_; }

  bool bit(Input x) const noexcept { return (words_[x >> 6] >> (x & 63)) & 1U; }
  int operator()(Input x) const noexcept { return to_sign(bit(x)); }
  void set(Input x, int value) noexcept;

  std::uint64_t ones() const noexcept;
  std::string to_bits() const;

  // Table of g(x) = f(x'), where x'[perm[i]] = x[i]; perm must be a permutation
  // of 0..n-1. Reorders which variables land in each partition half.
  TruthTable permuted(std::span<const int> perm) const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  int n_;
  std::vector<std::uint64_t> words_;
};

namespace families {
TruthTable constant(int n, int value = 1);
// (-1)^{<a,b>} on k+k bits, a the high half.
TruthTable inner_product(int k);
// +1 iff 2*|x| >= n.
TruthTable majority(int n);
// g(a) of the A half only.
TruthTable one_sided(int n, Rng& rng);
}  // namespace families

// Line 1 "n=<k>", line 2 the 2^k characters.
TruthTable read_truth_table(std::istream& in);
TruthTable read_truth_table_file(const std::string& path);
void write_truth_table(std::ostream& out, const TruthTable& t);

}  // namespace natlearn
