#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "natlearn/bits.hpp"
#include "natlearn/rational.hpp"
#include "natlearn/rng.hpp"
#include "natlearn/truth_table.hpp"

namespace natlearn {

template <class T>
struct Weighted {
  T value;
  Rational weight;
};

namespace detail {

// Samples an index from a fixed weight vector by inverse CDF.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const std::vector<Rational>& weights);
  std::size_t operator()(Rng& rng) const;

 private:
  std::vector<double> cdf_;
};

void check_weights(const std::vector<Rational>& weights);

}  // namespace detail

// Distribution mu over concept representations of a fixed length. Optionally
// exposes a finite weighted support for exact enumeration.
class TargetDistribution {
 public:
  using Sampler = std::function<BitString(Rng&)>;
  using Enumerator = std::function<std::vector<Weighted<BitString>>()>;

  TargetDistribution(std::size_t rep_bits, Sampler sampler, std::string sampling_class,
                     Enumerator enumerate = {});

  static TargetDistribution point_mass(const BitString& rep);
  // Weights need not be normalized; they are scaled to sum to 1.
  static TargetDistribution weighted(std::vector<Weighted<BitString>> support);
  static TargetDistribution uniform_over(const std::vector<BitString>& reps);
  // Uniform over {0,1}^bits; enumerable when bits <= 16.
  static TargetDistribution uniform_bits(std::size_t bits);
  // Independent bits, each 1 with probability p.
  static TargetDistribution bernoulli_bits(std::size_t bits, double p);
  // map(r) for r uniform over {0,1}^source_bits.
  static TargetDistribution pushforward(std::size_t source_bits, std::size_t rep_bits,
                                        std::function<BitString(const BitString&)> map);

  std::size_t rep_bits() const noexcept { return rep_bits_; }
  const std::string& sampling_class() const noexcept { return class_; }
  BitString sample(Rng& rng) const;
  bool enumerable() const noexcept { return static_cast<bool>(enumerate_); }
  // Weights sum to 1; duplicates merged. Throws if not enumerable.
  std::vector<Weighted<BitString>> support() const;

 private:
  std::size_t rep_bits_;
  Sampler sampler_;
  std::string class_;
  Enumerator enumerate_;
};

// Distribution rho over n-bit inputs.
class ExampleDistribution {
 public:
  using Sampler = std::function<Input(Rng&)>;
  using Enumerator = std::function<std::vector<Weighted<Input>>()>;

  ExampleDistribution(int n, Sampler sampler, std::string name, Enumerator enumerate = {});

  // Enumerable when n <= 16.
  static ExampleDistribution uniform(int n);
  // Bit i is 1 with probability p[i].
  static ExampleDistribution bernoulli_product(std::vector<double> p);
  static ExampleDistribution bernoulli_product(int n, double p);
  static ExampleDistribution empirical(int n, std::vector<Weighted<Input>> points);
  static ExampleDistribution point_mass(int n, Input x);
  // map(r) for r uniform over {0,1}^source_bits; enumerable when source_bits <= 16.
  static ExampleDistribution pushforward(int source_bits, int n, std::function<Input(std::uint64_t)> map);

  int arity() const noexcept { return n_; }
  const std::string& name() const noexcept { return name_; }
  Input sample(Rng& rng) const;
  bool enumerable() const noexcept { return static_cast<bool>(enumerate_); }
  std::vector<Weighted<Input>> support() const;

 private:
  int n_;
  Sampler sampler_;
  std::string name_;
  Enumerator enumerate_;
};

// Merge duplicate support points and normalize weights to sum to 1.
template <class T>
std::vector<Weighted<T>> normalize_support(std::vector<Weighted<T>> pts);

}  // namespace natlearn
