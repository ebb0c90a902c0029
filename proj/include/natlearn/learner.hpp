#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "natlearn/concepts.hpp"
#include "natlearn/hypothesis.hpp"
#include "natlearn/oracle.hpp"

namespace natlearn {

// Coins of one run of the randomized predictor: hybrid index i = 1 + 2*b1 + b2,
// guess signs r[b1][b2], a concept g ~ mu and one oracle example (w, y).
struct PredictorCoins {
  int hybrid = 1;
  int r[2][2] = {{1, 1}, {1, 1}};
  BitString g;
  LabeledExample anchor;

  int b1() const noexcept { return (hybrid - 1) >> 1; }
  int b2() const noexcept { return (hybrid - 1) & 1; }
};

PredictorCoins draw_coins(const ExampleSource& oracle, const TargetDistribution& mu, Rng& rng);

// One evaluation of the randomized predictor with its coins fixed:
//   b1b2 = 00: v = r00 r01 r10 r11
//   b1b2 = 01: v = y r00 (r00 r01 r10 r11)
//   b1b2 = 10: v = g(w) g(z) r10 r11
//   b1b2 = 11: v = y g(w) g(z) r11
// output r[b1][b2] * v.
int predict_L(const PredictorCoins& coins, const EvaluationRule& rule, Input z);

// The same map in closed form: a constant for i in {1, 2}, +-g for i in {3, 4}.
Hypothesis candidate_from_coins(const PredictorCoins& coins, RulePtr rule);

Hypothesis draw_candidate(const ExampleSource& oracle, RulePtr rule, const TargetDistribution& mu, Rng& rng);

struct LearnParams {
  double epsilon = 0.1;
  double delta = 0.1;
  double eta = 0.1;
  std::size_t candidates = 64;     // m
  std::size_t tests = 2000;        // t
  std::size_t boost_rounds = 0;    // T; 0 = derive from weak_margin
  double weak_margin = 0.05;       // advantage the weak learner is expected to have
  std::size_t validation_samples = 4000;
  std::size_t holdout_samples = 10000;

  void validate() const;
  // ceil(8 ln(2/epsilon) / margin^2), at least 1.
  std::size_t default_rounds() const;
};

// Defaults derived from a measured R2(xi): margin = r2/8, m = ceil(8/margin),
// t = ceil(8/margin^2 * ln(8m/delta)).
LearnParams params_from_norm(double r2_estimate, double epsilon, double delta, double eta);

struct Selection {
  Hypothesis best;
  std::size_t index = 0;
  std::vector<double> correlations;
};

// Draw m candidates, score each by its empirical correlation with t fresh
// oracle labels (the same t examples for all candidates), keep the argmax;
// ties go to the lowest index. Consumes exactly m + t oracle draws.
Selection select_A(const ExampleSource& oracle, RulePtr rule, const TargetDistribution& mu,
                   std::size_t candidates, std::size_t tests, Rng& rng);

struct AccuracyEstimate {
  double accuracy = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
};

AccuracyEstimate measure_accuracy(const std::function<int(Input)>& h, const ExampleSource& oracle,
                                  std::uint64_t samples, Rng& rng);

// ---------------------------------------------------------------- boosting

// Thrown when the filtered oracle accepts too rarely to make progress.
class BoostStalled : public std::runtime_error {
 public:
  BoostStalled(std::size_t round, std::uint64_t attempts, std::uint64_t accepted, double validation_error);
  std::size_t round;
  std::uint64_t attempts;
  std::uint64_t accepted;
  double validation_error;
};

// Capped exponential weight of a labelled example under the current vote
// F(x) = sum_j alpha_j h_j(x): min(1, exp(-y F(x))).
double filter_weight(const std::vector<Hypothesis>& hyps, const std::vector<double>& alphas, Input x, int y);

// Rejection sampler over another source: accepts (x, y) with probability
// filter_weight. Throws BoostStalled when, after at least `window` attempts,
// the acceptance rate is below `min_acceptance`.
class FilteredOracle final : public ExampleSource {
 public:
  FilteredOracle(const ExampleSource& inner, const std::vector<Hypothesis>& hyps,
                 const std::vector<double>& alphas, double min_acceptance, std::uint64_t window,
                 std::size_t round);
  int arity() const override { return inner_.arity(); }
  LabeledExample draw(Rng& rng) const override;
  std::uint64_t attempts() const noexcept { return attempts_; }
  std::uint64_t accepted() const noexcept { return accepted_; }

 private:
  const ExampleSource& inner_;
  const std::vector<Hypothesis>& hyps_;
  const std::vector<double>& alphas_;
  double min_acceptance_;
  std::uint64_t window_;
  std::size_t round_;
  mutable std::uint64_t attempts_ = 0;
  mutable std::uint64_t accepted_ = 0;
};

using WeakLearner = std::function<Hypothesis(const ExampleSource&, Rng&)>;

struct BoostOptions {
  double epsilon = 0.1;
  std::size_t max_rounds = 50;
  std::size_t edge_samples = 2000;        // filtered draws used to weight each round
  std::size_t validation_samples = 4000;  // fresh draws for the early-exit check
  double min_acceptance = 1e-3;
  std::uint64_t acceptance_window = 20000;
};

struct BoostRound {
  double weighted_error = 0.0;
  double alpha = 0.0;
  double acceptance_rate = 1.0;
  double validation_error = 1.0;
};

struct BoostResult {
  Hypothesis hypothesis;
  std::vector<BoostRound> rounds;
  bool reached_target = false;
};

// Filtering booster with weights capped at 1. Each round runs the weak
// learner on a rejection-filtered view of the oracle, weights it by its
// filtered error, and stops once the combined vote has validation error
// <= epsilon. If the first weak hypothesis is already accurate it is returned
// unchanged.
BoostResult boost(const WeakLearner& weak, const ExampleSource& oracle, const BoostOptions& options, Rng& rng);

// ------------------------------------------------------------ end to end

struct LearnOutcome {
  Hypothesis weak;
  Hypothesis boosted;
  AccuracyEstimate weak_accuracy;
  AccuracyEstimate boosted_accuracy;
  std::vector<BoostRound> rounds;
  bool reached_target = false;
  nlohmann::json report;
};

// select_A as the weak learner inside boost; accuracies on held-out draws.
LearnOutcome distpac_learn(RulePtr rule, const TargetDistribution& mu, const ExampleSource& oracle,
                           const LearnParams& params, Rng& rng);

}  // namespace natlearn
