#include "natlearn/bits.hpp"

#include <numeric>
#include <stdexcept>

namespace natlearn {

BitString BitString::from_string(std::string_view s) {
  BitString b(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      b.set(i, true);
    else if (s[i] != '0')
      throw std::invalid_argument("BitString: expected '0' or '1'");
  }
  return b;
}

BitString BitString::from_hex(std::string_view hex, std::size_t size) {
  if (hex.size() != (size + 3) / 4)
    throw std::invalid_argument("BitString: hex length does not match bit size");
  BitString b(size);
  for (std::size_t k = 0; k < hex.size(); ++k) {
    const char c = hex[k];
    unsigned v;
    if (c >= '0' && c <= '9')
      v = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f')
      v = static_cast<unsigned>(c - 'a' + 10);
    else if (c >= 'A' && c <= 'F')
      v = static_cast<unsigned>(c - 'A' + 10);
    else
      throw std::invalid_argument("BitString: bad hex digit");
    for (unsigned j = 0; j < 4; ++j) {
      const std::size_t i = 4 * k + j;
      const bool bit = (v >> j) & 1U;
      if (i < size)
        b.set(i, bit);
      else if (bit)
        throw std::invalid_argument("BitString: hex sets bits past the end");
    }
  }
  return b;
}

BitString BitString::random(std::size_t size, Rng& rng) {
  BitString b(size);
  for (auto& w : b.words_) w = rng();
  if (size % 64 != 0 && !b.words_.empty()) b.words_.back() &= (std::uint64_t{1} << (size % 64)) - 1;
  return b;
}

BitString BitString::random_weight(std::size_t size, std::size_t ones, Rng& rng) {
  if (ones > size) throw std::invalid_argument("BitString: weight exceeds length");
  // Partial Fisher-Yates over positions.
  std::vector<std::size_t> pos(size);
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  BitString b(size);
  for (std::size_t k = 0; k < ones; ++k) {
    const std::size_t j = k + uniform_below(rng, size - k);
    std::swap(pos[k], pos[j]);
    b.set(pos[k], true);
  }
  return b;
}

std::size_t BitString::count() const noexcept {
  std::size_t c = 0;
  for (auto w : words_) c += static_cast<std::size_t>(popcount64(w));
  return c;
}

BitString BitString::slice(std::size_t offset, std::size_t len) const {
  if (offset + len > size_) throw std::out_of_range("BitString::slice");
  BitString out(len);
  for (std::size_t i = 0; i < len; ++i) out.set(i, get(offset + i));
  return out;
}

void BitString::append(const BitString& other) {
  const std::size_t old = size_;
  size_ += other.size_;
  words_.resize((size_ + 63) / 64, 0);
  for (std::size_t i = 0; i < other.size_; ++i) set(old + i, other.get(i));
}

std::string BitString::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i)
    if (get(i)) s[i] = '1';
  return s;
}

std::string BitString::to_hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s((size_ + 3) / 4, '0');
  for (std::size_t k = 0; k < s.size(); ++k) {
    unsigned v = 0;
    for (unsigned j = 0; j < 4; ++j) {
      const std::size_t i = 4 * k + j;
      if (i < size_ && get(i)) v |= 1U << j;
    }
    s[k] = digits[v];
  }
  return s;
}

BitString concat(const BitString& a, const BitString& b) {
  BitString out = a;
  out.append(b);
  return out;
}

}  // namespace natlearn
