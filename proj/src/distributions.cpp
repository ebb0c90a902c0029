#include "natlearn/distributions.hpp"

#include <algorithm>
#include <map>

#include "natlearn/errors.hpp"

namespace natlearn {

namespace detail {

void check_weights(const std::vector<Rational>& weights) {
  if (weights.empty()) throw InvalidDistribution("empty support");
  Rational total = 0;
  for (const auto& w : weights) {
    if (w < 0) throw InvalidDistribution("negative weight");
    total += w;
  }
  if (total <= 0) throw InvalidDistribution("weights sum to zero");
}

DiscreteSampler::DiscreteSampler(const std::vector<Rational>& weights) {
  check_weights(weights);
  Rational total = 0;
  for (const auto& w : weights) total += w;
  Rational acc = 0;
  cdf_.reserve(weights.size());
  for (const auto& w : weights) {
    acc += w;
    cdf_.push_back(to_double(acc / total));
  }
  cdf_.back() = 1.0;
}

std::size_t DiscreteSampler::operator()(Rng& rng) const {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
}

}  // namespace detail

template <class T>
std::vector<Weighted<T>> normalize_support(std::vector<Weighted<T>> pts) {
  std::vector<Rational> ws;
  ws.reserve(pts.size());
  for (const auto& p : pts) ws.push_back(p.weight);
  detail::check_weights(ws);
  std::map<T, Rational> merged;
  Rational total = 0;
  for (auto& p : pts) {
    merged[p.value] += p.weight;
    total += p.weight;
  }
  std::vector<Weighted<T>> out;
  out.reserve(merged.size());
  for (auto& [v, w] : merged)
    if (w > 0) out.push_back({v, w / total});
  return out;
}

template std::vector<Weighted<BitString>> normalize_support(std::vector<Weighted<BitString>>);
template std::vector<Weighted<Input>> normalize_support(std::vector<Weighted<Input>>);

namespace {

Rational checked_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidDistribution("probability outside [0, 1]");
  return rational_from_double(p);
}

}  // namespace

// ---------------------------------------------------------------- target

TargetDistribution::TargetDistribution(std::size_t rep_bits, Sampler sampler, std::string sampling_class,
                                       Enumerator enumerate)
    : rep_bits_(rep_bits), sampler_(std::move(sampler)), class_(std::move(sampling_class)),
      enumerate_(std::move(enumerate)) {}

BitString TargetDistribution::sample(Rng& rng) const { return sampler_(rng); }

std::vector<Weighted<BitString>> TargetDistribution::support() const {
  if (!enumerate_) throw InvalidDistribution("target distribution is not enumerable");
  return normalize_support(enumerate_());
}

TargetDistribution TargetDistribution::point_mass(const BitString& rep) {
  return TargetDistribution(
      rep.size(), [rep](Rng&) { return rep; }, "constant",
      [rep] { return std::vector<Weighted<BitString>>{{rep, Rational(1)}}; });
}

TargetDistribution TargetDistribution::weighted(std::vector<Weighted<BitString>> support) {
  auto pts = normalize_support(std::move(support));
  const std::size_t bits = pts.front().value.size();
  for (const auto& p : pts)
    if (p.value.size() != bits) throw InvalidDistribution("representations differ in length");
  std::vector<Rational> ws;
  for (const auto& p : pts) ws.push_back(p.weight);
  auto sampler = std::make_shared<detail::DiscreteSampler>(ws);
  return TargetDistribution(
      bits, [pts, sampler](Rng& rng) { return pts[(*sampler)(rng)].value; }, "finite-support",
      [pts] { return pts; });
}

TargetDistribution TargetDistribution::uniform_over(const std::vector<BitString>& reps) {
  std::vector<Weighted<BitString>> pts;
  for (const auto& r : reps) pts.push_back({r, Rational(1)});
  return weighted(std::move(pts));
}

TargetDistribution TargetDistribution::uniform_bits(std::size_t bits) {
  Enumerator en;
  if (bits <= 16)
    en = [bits] {
      std::vector<Weighted<BitString>> pts;
      const std::uint64_t count = std::uint64_t{1} << bits;
      for (std::uint64_t v = 0; v < count; ++v) {
        BitString b(bits);
        for (std::size_t i = 0; i < bits; ++i) b.set(i, (v >> i) & 1U);
        pts.push_back({b, Rational(1, count)});
      }
      return pts;
    };
  return TargetDistribution(
      bits, [bits](Rng& rng) { return BitString::random(bits, rng); }, "uniform", std::move(en));
}

TargetDistribution TargetDistribution::bernoulli_bits(std::size_t bits, double p) {
  const Rational q = checked_probability(p);
  Enumerator en;
  if (bits <= 16)
    en = [bits, q] {
      std::vector<Weighted<BitString>> pts;
      const std::uint64_t count = std::uint64_t{1} << bits;
      for (std::uint64_t v = 0; v < count; ++v) {
        BitString b(bits);
        Rational w = 1;
        for (std::size_t i = 0; i < bits; ++i) {
          const bool one = (v >> i) & 1U;
          b.set(i, one);
          w *= one ? q : Rational(1) - q;
        }
        if (w > 0) pts.push_back({b, w});
      }
      return pts;
    };
  return TargetDistribution(
      bits,
      [bits, p](Rng& rng) {
        BitString b(bits);
        for (std::size_t i = 0; i < bits; ++i) b.set(i, uniform01(rng) < p);
        return b;
      },
      "bernoulli", std::move(en));
}

TargetDistribution TargetDistribution::pushforward(std::size_t source_bits, std::size_t rep_bits,
                                                   std::function<BitString(const BitString&)> map) {
  Enumerator en;
  if (source_bits <= 16)
    en = [source_bits, map] {
      std::vector<Weighted<BitString>> pts;
      const std::uint64_t count = std::uint64_t{1} << source_bits;
      for (std::uint64_t v = 0; v < count; ++v) {
        BitString r(source_bits);
        for (std::size_t i = 0; i < source_bits; ++i) r.set(i, (v >> i) & 1U);
        pts.push_back({map(r), Rational(1, count)});
      }
      return pts;
    };
  return TargetDistribution(
      rep_bits,
      [source_bits, map](Rng& rng) { return map(BitString::random(source_bits, rng)); },
      "pushforward", std::move(en));
}

// --------------------------------------------------------------- example

ExampleDistribution::ExampleDistribution(int n, Sampler sampler, std::string name, Enumerator enumerate)
    : n_(n), sampler_(std::move(sampler)), name_(std::move(name)), enumerate_(std::move(enumerate)) {
  if (n < 1 || n > kMaxInputArity) throw ArityError("input arity must be in [1, 64]");
}

Input ExampleDistribution::sample(Rng& rng) const { return sampler_(rng); }

std::vector<Weighted<Input>> ExampleDistribution::support() const {
  if (!enumerate_) throw InvalidDistribution("example distribution is not enumerable");
  return normalize_support(enumerate_());
}

ExampleDistribution ExampleDistribution::uniform(int n) {
  if (n < 1 || n > kMaxInputArity) throw ArityError("input arity must be in [1, 64]");
  const std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  Enumerator en;
  if (n <= 16)
    en = [n] {
      std::vector<Weighted<Input>> pts;
      const std::uint64_t count = std::uint64_t{1} << n;
      for (Input x = 0; x < count; ++x) pts.push_back({x, Rational(1, count)});
      return pts;
    };
  return ExampleDistribution(
      n, [mask](Rng& rng) { return rng() & mask; }, "uniform", std::move(en));
}

ExampleDistribution ExampleDistribution::bernoulli_product(std::vector<double> p) {
  const int n = static_cast<int>(p.size());
  std::vector<Rational> q;
  for (double v : p) q.push_back(checked_probability(v));
  Enumerator en;
  if (n <= 16)
    en = [n, q] {
      std::vector<Weighted<Input>> pts;
      const std::uint64_t count = std::uint64_t{1} << n;
      for (Input x = 0; x < count; ++x) {
        Rational w = 1;
        for (int i = 0; i < n; ++i) w *= input_bit(x, n, i) ? q[i] : Rational(1) - q[i];
        if (w > 0) pts.push_back({x, w});
      }
      return pts;
    };
  return ExampleDistribution(
      n,
      [n, p](Rng& rng) {
        Input x = 0;
        for (int i = 0; i < n; ++i) x = (x << 1) | (uniform01(rng) < p[i] ? 1U : 0U);
        return x;
      },
      "bernoulli-product", std::move(en));
}

ExampleDistribution ExampleDistribution::bernoulli_product(int n, double p) {
  if (n < 1 || n > kMaxInputArity) throw ArityError("input arity must be in [1, 64]");
  return bernoulli_product(std::vector<double>(static_cast<std::size_t>(n), p));
}

ExampleDistribution ExampleDistribution::empirical(int n, std::vector<Weighted<Input>> points) {
  auto pts = normalize_support(std::move(points));
  const std::uint64_t limit = n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  for (const auto& p : pts)
    if (p.value > limit) throw InvalidDistribution("empirical point exceeds arity");
  std::vector<Rational> ws;
  for (const auto& p : pts) ws.push_back(p.weight);
  auto sampler = std::make_shared<detail::DiscreteSampler>(ws);
  return ExampleDistribution(
      n, [pts, sampler](Rng& rng) { return pts[(*sampler)(rng)].value; }, "empirical",
      [pts] { return pts; });
}

ExampleDistribution ExampleDistribution::point_mass(int n, Input x) {
  return empirical(n, {{x, Rational(1)}});
}

ExampleDistribution ExampleDistribution::pushforward(int source_bits, int n,
                                                     std::function<Input(std::uint64_t)> map) {
  if (source_bits < 1 || source_bits > 64) throw ArityError("source bits must be in [1, 64]");
  const std::uint64_t mask = source_bits == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << source_bits) - 1;
  Enumerator en;
  if (source_bits <= 16)
    en = [source_bits, map] {
      std::vector<Weighted<Input>> pts;
      const std::uint64_t count = std::uint64_t{1} << source_bits;
      for (std::uint64_t r = 0; r < count; ++r) pts.push_back({map(r), Rational(1, count)});
      return pts;
    };
  return ExampleDistribution(
      n, [mask, map](Rng& rng) { return map(rng() & mask); }, "pushforward", std::move(en));
}

}  // namespace natlearn
