#include "natlearn/learner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "natlearn/parallel.hpp"

namespace natlearn {

PredictorCoins draw_coins(const ExampleSource& oracle, const TargetDistribution& mu, Rng& rng) {
  PredictorCoins c;
  c.hybrid = 1 + static_cast<int>(uniform_below(rng, 4));
  for (auto& row : c.r)
    for (auto& s : row) s = random_sign(rng);
  c.g = mu.sample(rng);
  c.anchor = oracle.draw(rng);
  return c;
}

int predict_L(const PredictorCoins& coins, const EvaluationRule& rule, Input z) {
  const auto& r = coins.r;
  const int all = r[0][0] * r[0][1] * r[1][0] * r[1][1];
  const int y = coins.anchor.y;
  int v = 0;
  switch (coins.hybrid) {
    case 1:
      v = all;
      break;
    case 2:
      v = y * r[0][0] * all;
      break;
    case 3:
      v = rule(coins.g, coins.anchor.x) * rule(coins.g, z) * r[1][0] * r[1][1];
      break;
    case 4:
      v = y * rule(coins.g, coins.anchor.x) * rule(coins.g, z) * r[1][1];
      break;
    default:
      throw std::invalid_argument("hybrid index must be in 1..4");
  }
  return r[coins.b1()][coins.b2()] * v;
}

Hypothesis candidate_from_coins(const PredictorCoins& coins, RulePtr rule) {
  const auto& r = coins.r;
  const int y = coins.anchor.y;
  switch (coins.hybrid) {
    case 1:
      return Hypothesis::constant(r[0][1] * r[1][0] * r[1][1]);
    case 2:
      return Hypothesis::constant(y * r[1][0] * r[1][1]);
    case 3: {
      const int gw = (*rule)(coins.g, coins.anchor.x);
      return Hypothesis::oriented(std::move(rule), coins.g, gw * r[1][1]);
    }
    case 4: {
      const int gw = (*rule)(coins.g, coins.anchor.x);
      return Hypothesis::oriented(std::move(rule), coins.g, y * gw);
    }
    default:
      throw std::invalid_argument("hybrid index must be in 1..4");
  }
}

Hypothesis draw_candidate(const ExampleSource& oracle, RulePtr rule, const TargetDistribution& mu, Rng& rng) {
  return candidate_from_coins(draw_coins(oracle, mu, rng), std::move(rule));
}

void LearnParams::validate() const {
  auto unit = [](double v, const char* name) {
    if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in (0, 1]");
  };
  unit(epsilon, "epsilon");
  unit(delta, "delta");
  unit(eta, "eta");
  if (candidates < 1) throw std::invalid_argument("candidate count m must be >= 1");
  if (tests < 1) throw std::invalid_argument("test count t must be >= 1");
  if (!(weak_margin > 0.0)) throw std::invalid_argument("weak margin must be positive");
  if (validation_samples < 1 || holdout_samples < 1) throw std::invalid_argument("sample counts must be >= 1");
}

std::size_t LearnParams::default_rounds() const {
  const double t = std::ceil(8.0 * std::log(2.0 / epsilon) / (weak_margin * weak_margin));
  return std::max<std::size_t>(1, static_cast<std::size_t>(t));
}

LearnParams params_from_norm(double r2_estimate, double epsilon, double delta, double eta) {
  if (!(r2_estimate > 0.0)) throw std::invalid_argument("norm estimate must be positive");
  LearnParams p;
  p.epsilon = epsilon;
  p.delta = delta;
  p.eta = eta;
  const double margin = r2_estimate / 8.0;
  p.weak_margin = margin;
  p.candidates = static_cast<std::size_t>(std::ceil(8.0 / margin));
  p.tests = static_cast<std::size_t>(
      std::ceil(8.0 / (margin * margin) * std::log(8.0 * static_cast<double>(p.candidates) / delta)));
  return p;
}

Selection select_A(const ExampleSource& oracle, RulePtr rule, const TargetDistribution& mu,
                   std::size_t candidates, std::size_t tests, Rng& rng) {
  if (candidates < 1 || tests < 1) throw std::invalid_argument("select_A needs m, t >= 1");
  std::vector<Hypothesis> pool;
  pool.reserve(candidates);
  for (std::size_t j = 0; j < candidates; ++j) pool.push_back(draw_candidate(oracle, rule, mu, rng));
  std::vector<LabeledExample> sample(tests);
  for (auto& e : sample) e = oracle.draw(rng);

  std::vector<std::int64_t> agree(candidates, 0);
  parallel_for(static_cast<std::int64_t>(candidates), [&](std::int64_t j) {
    const auto& h = pool[static_cast<std::size_t>(j)];
    std::int64_t s = 0;
    for (const auto& e : sample) s += h.predict(e.x) * e.y;
    agree[static_cast<std::size_t>(j)] = s;
  });

  Selection out;
  out.correlations.reserve(candidates);
  std::size_t best = 0;
  for (std::size_t j = 0; j < candidates; ++j) {
    out.correlations.push_back(static_cast<double>(agree[j]) / static_cast<double>(tests));
    if (agree[j] > agree[best]) best = j;
  }
  out.index = best;
  out.best = pool[best];
  return out;
}

AccuracyEstimate measure_accuracy(const std::function<int(Input)>& h, const ExampleSource& oracle,
                                  std::uint64_t samples, Rng& rng) {
  if (samples == 0) throw std::invalid_argument("measure_accuracy: need at least one sample");
  std::vector<LabeledExample> draws(samples);
  for (auto& e : draws) e = oracle.draw(rng);
  std::uint64_t correct = 0;
#pragma omp parallel for schedule(static) reduction(+ : correct)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples); ++i) {
    const auto& e = draws[static_cast<std::size_t>(i)];
    correct += h(e.x) == e.y ? 1 : 0;
  }
  AccuracyEstimate a;
  a.samples = samples;
  a.accuracy = static_cast<double>(correct) / static_cast<double>(samples);
  a.stderr_ = std::sqrt(a.accuracy * (1.0 - a.accuracy) / static_cast<double>(samples));
  return a;
}

// ---------------------------------------------------------------- boosting

BoostStalled::BoostStalled(std::size_t round_, std::uint64_t attempts_, std::uint64_t accepted_,
                           double validation_error_)
    : std::runtime_error("boost stalled in round " + std::to_string(round_) + ": accepted " +
                         std::to_string(accepted_) + " of " + std::to_string(attempts_) +
                         " filtered draws (validation error " + std::to_string(validation_error_) + ")"),
      round(round_), attempts(attempts_), accepted(accepted_), validation_error(validation_error_) {}

double filter_weight(const std::vector<Hypothesis>& hyps, const std::vector<double>& alphas, Input x, int y) {
  double f = 0.0;
  for (std::size_t j = 0; j < hyps.size(); ++j) f += alphas[j] * hyps[j].predict(x);
  return std::min(1.0, std::exp(-y * f));
}

FilteredOracle::FilteredOracle(const ExampleSource& inner, const std::vector<Hypothesis>& hyps,
                               const std::vector<double>& alphas, double min_acceptance, std::uint64_t window,
                               std::size_t round)
    : inner_(inner), hyps_(hyps), alphas_(alphas), min_acceptance_(min_acceptance), window_(window),
      round_(round) {}

LabeledExample FilteredOracle::draw(Rng& rng) const {
  for (;;) {
    const LabeledExample e = inner_.draw(rng);
    ++attempts_;
    const double w = filter_weight(hyps_, alphas_, e.x, e.y);
    if (uniform01(rng) < w) {
      ++accepted_;
      return e;
    }
    if (attempts_ >= window_ &&
        static_cast<double>(accepted_) < min_acceptance_ * static_cast<double>(attempts_))
      throw BoostStalled(round_, attempts_, accepted_, -1.0);
  }
}

namespace {

double vote_error(const std::vector<Hypothesis>& hyps, const std::vector<double>& alphas,
                  const std::vector<LabeledExample>& sample) {
  std::uint64_t wrong = 0;
  for (const auto& e : sample) {
    double f = 0.0;
    for (std::size_t j = 0; j < hyps.size(); ++j) f += alphas[j] * hyps[j].predict(e.x);
    wrong += (f >= 0.0 ? 1 : -1) != e.y ? 1 : 0;
  }
  return static_cast<double>(wrong) / static_cast<double>(sample.size());
}

}  // namespace

BoostResult boost(const WeakLearner& weak, const ExampleSource& oracle, const BoostOptions& options, Rng& rng) {
  if (options.max_rounds < 1 || options.edge_samples < 1 || options.validation_samples < 1)
    throw std::invalid_argument("boost: rounds and sample counts must be >= 1");
  std::vector<Hypothesis> hyps;
  std::vector<double> alphas;
  BoostResult result;
  double last_validation = 1.0;

  for (std::size_t round = 0; round < options.max_rounds; ++round) {
    FilteredOracle filtered(oracle, hyps, alphas, options.min_acceptance, options.acceptance_window, round);
    Hypothesis h;
    std::uint64_t wrong = 0;
    try {
      h = weak(filtered, rng);
      for (std::size_t k = 0; k < options.edge_samples; ++k) {
        const auto e = filtered.draw(rng);
        wrong += h.predict(e.x) != e.y ? 1 : 0;
      }
    } catch (const BoostStalled& s) {
      throw BoostStalled(round, s.attempts, s.accepted, last_validation);
    }
    const double n = static_cast<double>(options.edge_samples);
    const double err = std::clamp(static_cast<double>(wrong) / n, 0.5 / n, 1.0 - 0.5 / n);
    const double alpha = std::max(0.0, 0.5 * std::log((1.0 - err) / err));
    hyps.push_back(h);
    alphas.push_back(alpha);

    std::vector<LabeledExample> check(options.validation_samples);
    for (auto& e : check) e = oracle.draw(rng);
    const double verr = round == 0 ? [&] {
      std::uint64_t w = 0;
      for (const auto& e : check) w += h.predict(e.x) != e.y ? 1 : 0;
      return static_cast<double>(w) / static_cast<double>(check.size());
    }()
                                   : vote_error(hyps, alphas, check);
    last_validation = verr;

    BoostRound info;
    info.weighted_error = static_cast<double>(wrong) / n;
    info.alpha = alpha;
    info.acceptance_rate = filtered.attempts() == 0
                               ? 1.0
                               : static_cast<double>(filtered.accepted()) / static_cast<double>(filtered.attempts());
    info.validation_error = verr;
    result.rounds.push_back(info);

    if (verr <= options.epsilon) {
      result.reached_target = true;
      result.hypothesis = round == 0 ? h : Hypothesis::weighted_majority(hyps, alphas);
      return result;
    }
  }
  result.hypothesis = hyps.size() == 1 ? hyps.front() : Hypothesis::weighted_majority(hyps, alphas);
  return result;
}

LearnOutcome distpac_learn(RulePtr rule, const TargetDistribution& mu, const ExampleSource& oracle,
                           const LearnParams& params, Rng& rng) {
  params.validate();
  const std::size_t m = params.candidates, t = params.tests;
  WeakLearner weak = [&](const ExampleSource& src, Rng& r) { return select_A(src, rule, mu, m, t, r).best; };

  Rng weak_rng = split(rng);
  Rng boost_rng = split(rng);
  Rng holdout_rng = split(rng);

  LearnOutcome out;
  out.weak = weak(oracle, weak_rng);

  BoostOptions opt;
  opt.epsilon = params.epsilon;
  opt.max_rounds = params.boost_rounds > 0 ? params.boost_rounds : params.default_rounds();
  opt.edge_samples = t;
  opt.validation_samples = params.validation_samples;
  auto boosted = boost(weak, oracle, opt, boost_rng);
  out.boosted = boosted.hypothesis;
  out.rounds = boosted.rounds;
  out.reached_target = boosted.reached_target;

  Rng weak_eval = split(holdout_rng);
  Rng boost_eval = split(holdout_rng);
  out.weak_accuracy = measure_accuracy([&](Input x) { return out.weak.predict(x); }, oracle,
                                       params.holdout_samples, weak_eval);
  out.boosted_accuracy = measure_accuracy([&](Input x) { return out.boosted.predict(x); }, oracle,
                                          params.holdout_samples, boost_eval);

  auto rounds = nlohmann::json::array();
  for (const auto& r : out.rounds)
    rounds.push_back({{"weighted_error", r.weighted_error},
                      {"alpha", r.alpha},
                      {"acceptance_rate", r.acceptance_rate},
                      {"validation_error", r.validation_error}});
  out.report = {
      {"params",
       {{"epsilon", params.epsilon},
        {"delta", params.delta},
        {"eta", params.eta},
        {"candidates", m},
        {"tests", t},
        {"max_rounds", opt.max_rounds},
        {"weak_margin", params.weak_margin},
        {"holdout_samples", params.holdout_samples}}},
      {"weak_accuracy", {{"accuracy", out.weak_accuracy.accuracy}, {"stderr", out.weak_accuracy.stderr_}}},
      {"boosted_accuracy",
       {{"accuracy", out.boosted_accuracy.accuracy}, {"stderr", out.boosted_accuracy.stderr_}}},
      {"reached_target", out.reached_target},
      {"rounds", rounds},
      {"weak_hypothesis", out.weak.to_json()},
      {"hypothesis_kind", kind_name(out.boosted.kind())},
  };
  return out;
}

}  // namespace natlearn
