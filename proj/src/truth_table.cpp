#include "natlearn/truth_table.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "natlearn/bits.hpp"
#include "natlearn/errors.hpp"

namespace natlearn {

namespace {

void check_table_arity(int n) {
  if (n < 1 || n > kMaxTableArity)
    throw ArityError("truth table arity must be in [1, 20], got " + std::to_string(n));
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  return s.substr(i);
}

}  // namespace

Input make_input(std::span<const int> bits) {
  if (bits.size() > static_cast<std::size_t>(kMaxInputArity)) throw ArityError("input longer than 64 bits");
  Input x = 0;
  for (int b : bits) x = (x << 1) | (b ? 1U : 0U);
  return x;
}

TruthTable::TruthTable(int n) : n_(n) {
  check_table_arity(n);
  words_.assign((size() + 63) / 64, 0);
}

TruthTable TruthTable::from_function(int n, const std::function<int(Input)>& f) {
  TruthTable t(n);
  for (Input x = 0; x < t.size(); ++x) t.set(x, f(x));
  return t;
}

TruthTable TruthTable::from_bits(int n, const std::string& bits) {
  TruthTable t(n);
  if (bits.size() != t.size())
    throw ParseError(0, "expected " + std::to_string(t.size()) + " table characters, got " +
                            std::to_string(bits.size()));
  for (Input x = 0; x < t.size(); ++x) {
    if (bits[x] != '0' && bits[x] != '1') throw ParseError(0, "table characters must be 0 or 1");
    t.set(x, bits[x] == '1' ? 1 : -1);
  }
  return t;
}

TruthTable TruthTable::random(int n, Rng& rng) {
  TruthTable t(n);
  for (auto& w : t.words_) w = rng();
  if (n < 6) t.words_[0] &= (std::uint64_t{1} << t.size()) - 1;
  return t;
}

void TruthTable::set(Input x, int value) noexcept {
  const std::uint64_t m = std::uint64_t{1} << (x & 63);
  if (value > 0)
    words_[x >> 6] |= m;
  else
    words_[x >> 6] &= ~m;
}

std::uint64_t TruthTable::ones() const noexcept {
  std::uint64_t c = 0;
  for (auto w : words_) c += static_cast<std::uint64_t>(popcount64(w));
  return c;
}

std::string TruthTable::to_bits() const {
  std::string s(size(), '0');
  for (Input x = 0; x < size(); ++x)
    if (bit(x)) s[x] = '1';
  return s;
}

TruthTable TruthTable::permuted(std::span<const int> perm) const {
  if (perm.size() != static_cast<std::size_t>(n_)) throw ArityError("permutation length must equal arity");
  std::vector<bool> seen(n_, false);
  for (int p : perm) {
    if (p < 0 || p >= n_ || seen[p]) throw ArityError("not a permutation of the inputs");
    seen[p] = true;
  }
  TruthTable out(n_);
  for (Input x = 0; x < size(); ++x) {
    Input src = 0;
    for (int i = 0; i < n_; ++i)
      if (input_bit(x, n_, i)) src |= Input{1} << (n_ - 1 - perm[i]);
    out.set(x, (*this)(src));
  }
  return out;
}

namespace families {

TruthTable constant(int n, int value) {
  return TruthTable::from_function(n, [value](Input) { return value; });
}

TruthTable inner_product(int k) {
  const InputPartition p(2 * k);
  return TruthTable::from_function(2 * k, [&](Input x) {
    return (popcount64(p.row_of(x) & p.col_of(x)) & 1) ? -1 : 1;
  });
}

TruthTable majority(int n) {
  return TruthTable::from_function(n, [n](Input x) { return 2 * popcount64(x) >= n ? 1 : -1; });
}

TruthTable one_sided(int n, Rng& rng) {
  const InputPartition p(n);
  std::vector<int> g(p.rows());
  for (auto& v : g) v = random_sign(rng);
  return TruthTable::from_function(n, [&](Input x) { return g[p.row_of(x)]; });
}

}  // namespace families

TruthTable read_truth_table(std::istream& in) {
  std::string header, body;
  if (!std::getline(in, header)) throw ParseError(1, "missing header \"n=<k>\"");
  header = trim(header);
  if (header.rfind("n=", 0) != 0) throw ParseError(1, "header must be \"n=<k>\"");
  int n = 0;
  try {
    std::size_t used = 0;
    n = std::stoi(header.substr(2), &used);
    if (used != header.size() - 2) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw ParseError(1, "bad arity in header \"" + header + "\"");
  }
  if (n < 1 || n > kMaxTableArity) throw ParseError(1, "arity must be in [1, 20]");
  if (!std::getline(in, body)) throw ParseError(2, "missing table line");
  body = trim(body);
  const std::uint64_t expected = std::uint64_t{1} << n;
  if (body.size() != expected)
    throw ParseError(2, "expected 2^" + std::to_string(n) + " = " + std::to_string(expected) +
                            " characters, got " + std::to_string(body.size()));
  for (char c : body)
    if (c != '0' && c != '1') throw ParseError(2, "table characters must be 0 or 1");
  return TruthTable::from_bits(n, body);
}

TruthTable read_truth_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  return read_truth_table(in);
}

void write_truth_table(std::ostream& out, const TruthTable& t) {
  out << "n=" << t.arity() << '\n' << t.to_bits() << '\n';
}

}  // namespace natlearn
