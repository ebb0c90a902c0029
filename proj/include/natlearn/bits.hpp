#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "natlearn/rng.hpp"

namespace natlearn {

inline int popcount64(std::uint64_t w) noexcept { return std::popcount(w); }

// Growable packed bit string. Used for concept representations (z||y, keys)
// whose length is not bounded by 64. Bit i lives in word i/64, position i%64.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

  // From a "0101" string, character i is bit i.
  static BitString from_string(std::string_view s);
  // Inverse of to_hex(); size must be supplied since hex pads to nibbles.
  static BitString from_hex(std::string_view hex, std::size_t size);
  static BitString random(std::size_t size, Rng& rng);
  // Uniform among strings of length size with exactly ones set bits.
  static BitString random_weight(std::size_t size, std::size_t ones, Rng& rng);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool get(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i, bool v) noexcept {
    const std::uint64_t m = std::uint64_t{1} << (i & 63);
    if (v)
      words_[i >> 6] |= m;
    else
      words_[i >> 6] &= ~m;
  }
  bool operator[](std::size_t i) const noexcept { return get(i); }

  std::size_t count() const noexcept;
  // Bits [offset, offset + len) as a new string.
  BitString slice(std::size_t offset, std::size_t len) const;
  void append(const BitString& other);

  std::string to_string() const;
  // Lowercase hex, nibble k holds bits 4k..4k+3 (bit 4k least significant).
  std::string to_hex() const;

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }

  friend bool operator==(const BitString&, const BitString&) = default;
  friend auto operator<=>(const BitString&, const BitString&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

BitString concat(const BitString& a, const BitString& b);

}  // namespace natlearn
