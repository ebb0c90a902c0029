#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>

#include "natlearn/distributions.hpp"
#include "natlearn/truth_table.hpp"

namespace natlearn {

struct LabeledExample {
  Input x = 0;
  int y = 1;
};

// The only access a learner gets to the hidden concept: random labelled draws.
class ExampleSource {
 public:
  virtual ~ExampleSource() = default;
  virtual int arity() const = 0;
  virtual LabeledExample draw(Rng& rng) const = 0;
};

// EX(f, rho): x ~ rho, label f(x). Noise-free.
class ExampleOracle final : public ExampleSource {
 public:
  ExampleOracle(std::function<int(Input)> concept_fn, ExampleDistribution rho)
      : concept_(std::move(concept_fn)), rho_(std::move(rho)) {}

  int arity() const override { return rho_.arity(); }
  LabeledExample draw(Rng& rng) const override {
    const Input x = rho_.sample(rng);
    return {x, concept_(x)};
  }

  const ExampleDistribution& distribution() const noexcept { return rho_; }
  // Evaluates the hidden concept. For tests and evaluation harnesses, never
  // handed to a learner.
  int label_of(Input x) const { return concept_(x); }

 private:
  std::function<int(Input)> concept_;
  ExampleDistribution rho_;
};

inline LabeledExample oracle_draw(const ExampleSource& o, Rng& rng) { return o.draw(rng); }

// Counts draws passed through to another source. Thread-safe.
class CountingOracle final : public ExampleSource {
 public:
  explicit CountingOracle(const ExampleSource& inner) : inner_(inner) {}
  int arity() const override { return inner_.arity(); }
  LabeledExample draw(Rng& rng) const override {
    draws_.fetch_add(1, std::memory_order_relaxed);
    return inner_.draw(rng);
  }
  std::uint64_t draws() const noexcept { return draws_.load(); }
  void reset() noexcept { draws_.store(0); }

 private:
  const ExampleSource& inner_;
  mutable std::atomic<std::uint64_t> draws_{0};
};

// Labels uniform and independent of x; the null hypothesis for distinguishers.
class RandomLabelOracle final : public ExampleSource {
 public:
  explicit RandomLabelOracle(ExampleDistribution rho) : rho_(std::move(rho)) {}
  int arity() const override { return rho_.arity(); }
  LabeledExample draw(Rng& rng) const override {
    const Input x = rho_.sample(rng);
    return {x, random_sign(rng)};
  }

 private:
  ExampleDistribution rho_;
};

}  // namespace natlearn
