#include "natlearn/norm.hpp"

#include <cmath>
#include <string>

#include "natlearn/bits.hpp"
#include "natlearn/errors.hpp"

namespace natlearn {

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("rational_from_double: non-finite value");
  int exp = 0;
  const double mant = std::frexp(v, &exp);
  // mant * 2^53 is an exact integer.
  const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational q(scaled);
  if (exp >= 0)
    q *= Rational(pow2(static_cast<unsigned>(exp)));
  else
    q /= Rational(pow2(static_cast<unsigned>(-exp)));
  return q;
}

std::string to_string(const Rational& q) {
  if (denominator_string(q) == "1") return numerator_string(q);
  return numerator_string(q) + "/" + denominator_string(q);
}

NormResult make_norm_result(int n, const BigInt& raw_sum) {
  NormResult r;
  r.n = n;
  r.raw_sum = raw_sum;
  r.r2 = Rational(raw_sum, pow2(2 * static_cast<unsigned>(n)));
  r.alpha = Rational(raw_sum, pow2(static_cast<unsigned>(n)));
  return r;
}

SignMatrix::SignMatrix(std::uint64_t rows, std::uint64_t cols)
    : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), data_(rows * wpr_, 0) {}

SignMatrix SignMatrix::from_table(const TruthTable& t) {
  const InputPartition p(t.arity());
  SignMatrix m(p.rows(), p.cols());
  const auto words = t.words();
  if (p.cols() >= 64) {
    // Rows are whole words of the table.
    for (std::size_t i = 0; i < words.size(); ++i) m.data_[i] = words[i];
  } else {
    const std::uint64_t mask = (std::uint64_t{1} << p.cols()) - 1;
    for (std::uint64_t r = 0; r < p.rows(); ++r) {
      const std::uint64_t bitpos = r * p.cols();
      m.data_[r] = (words[bitpos >> 6] >> (bitpos & 63)) & mask;
    }
  }
  return m;
}

void SignMatrix::set(std::uint64_t r, std::uint64_t c, int sign) noexcept {
  auto& w = data_[r * wpr_ + (c >> 6)];
  const std::uint64_t m = std::uint64_t{1} << (c & 63);
  if (sign > 0)
    w |= m;
  else
    w &= ~m;
}

std::int64_t SignMatrix::row_inner(std::uint64_t r0, std::uint64_t r1) const noexcept {
  const std::uint64_t* a = data_.data() + r0 * wpr_;
  const std::uint64_t* b = data_.data() + r1 * wpr_;
  std::int64_t diff = 0;
  for (std::size_t k = 0; k < wpr_; ++k) diff += popcount64(a[k] ^ b[k]);
  return static_cast<std::int64_t>(cols_) - 2 * diff;
}

namespace serial {

std::uint64_t naive_raw_sum(const TruthTable& t) {
  const InputPartition p(t.arity());
  std::int64_t s = 0;
  for (std::uint64_t a0 = 0; a0 < p.rows(); ++a0)
    for (std::uint64_t a1 = 0; a1 < p.rows(); ++a1)
      for (std::uint64_t b0 = 0; b0 < p.cols(); ++b0)
        for (std::uint64_t b1 = 0; b1 < p.cols(); ++b1)
          s += t(p.join(a0, b0)) * t(p.join(a0, b1)) * t(p.join(a1, b0)) * t(p.join(a1, b1));
  // A sum of squares in disguise, never negative.
  return static_cast<std::uint64_t>(s);
}

std::uint64_t gram_raw_sum(const TruthTable& t) {
  const SignMatrix m = SignMatrix::from_table(t);
  const auto cols = static_cast<std::uint64_t>(m.cols());
  std::uint64_t off = 0;
  for (std::uint64_t r0 = 0; r0 < m.rows(); ++r0)
    for (std::uint64_t r1 = r0 + 1; r1 < m.rows(); ++r1) {
      const auto ip = m.row_inner(r0, r1);
      off += static_cast<std::uint64_t>(ip * ip);
    }
  return m.rows() * cols * cols + 2 * off;
}

}  // namespace serial

NormResult r2_exact_naive(const TruthTable& t) {
  if (t.arity() > kMaxNaiveArity)
    throw ArityError("naive norm limited to n <= 12, got " + std::to_string(t.arity()));
  return make_norm_result(t.arity(), BigInt(serial::naive_raw_sum(t)));
}

NormResult r2_exact_gram(const TruthTable& t, std::optional<std::span<const int>> perm) {
  if (perm) return r2_exact_gram(t.permuted(*perm));
  return make_norm_result(t.arity(), BigInt(parallel::gram_raw_sum(t)));
}

bool alpha_within_property_bound(const BigInt& raw_sum, int n) {
  const BigInt a = abs(raw_sum);
  return a * a * a <= pow2(5 * static_cast<unsigned>(n));
}

PropertyVerdict natural_property(const TruthTable& t) {
  PropertyVerdict v;
  v.norm = r2_exact_gram(t);
  v.accepted = alpha_within_property_bound(v.norm.raw_sum, t.arity());
  return v;
}

PairFunction pair_function(const TruthTable& t) {
  const InputPartition p(t.arity());
  return PairFunction{p.size_a, p.size_b,
                      [t, p](std::uint64_t a, std::uint64_t b) { return t(p.join(a, b)); }};
}

namespace {

constexpr std::uint64_t kMcShards = 64;

std::uint64_t shard_samples(std::uint64_t total, std::uint64_t shard) {
  return total / kMcShards + (shard < total % kMcShards ? 1 : 0);
}

std::int64_t mc_shard(const PairFunction& f, std::uint64_t count, std::uint64_t seed) {
  Rng rng(seed);
  const std::uint64_t ma = f.bits_a >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << f.bits_a) - 1;
  const std::uint64_t mb = f.bits_b >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << f.bits_b) - 1;
  std::int64_t s = 0;
  for (std::uint64_t k = 0; k < count; ++k) {
    const std::uint64_t a0 = rng() & ma, a1 = rng() & ma, b0 = rng() & mb, b1 = rng() & mb;
    s += f.eval(a0, b0) * f.eval(a0, b1) * f.eval(a1, b0) * f.eval(a1, b1);
  }
  return s;
}

}  // namespace

namespace serial {
std::int64_t mc_product_sum(const PairFunction& f, std::uint64_t samples, std::uint64_t base_seed) {
  std::int64_t s = 0;
  for (std::uint64_t k = 0; k < kMcShards; ++k)
    s += mc_shard(f, shard_samples(samples, k), splitmix64(base_seed + k));
  return s;
}
}  // namespace serial

NormEstimate r2_estimate_mc(const PairFunction& f, std::uint64_t samples, Rng& rng) {
  if (samples == 0) throw std::invalid_argument("r2_estimate_mc: need at least one sample");
  const std::uint64_t base = rng();
  const std::int64_t s = parallel::mc_product_sum(f, samples, base);
  NormEstimate e;
  e.samples = samples;
  e.mean = static_cast<double>(s) / static_cast<double>(samples);
  e.stderr_ = 1.0 / std::sqrt(static_cast<double>(samples));
  return e;
}

}  // namespace natlearn
