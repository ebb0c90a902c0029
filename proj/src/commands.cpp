#include "natlearn/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "natlearn/config.hpp"
#include "natlearn/errors.hpp"
#include "natlearn/games.hpp"
#include "natlearn/learner.hpp"
#include "natlearn/norm.hpp"
#include "natlearn/pair_norm.hpp"

namespace natlearn {

using nlohmann::json;

namespace {

class Timings {
 public:
  template <class F>
  auto phase(const std::string& name, F&& fn) {
    const auto start = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record(name, start);
    } else {
      auto r = fn();
      record(name, start);
      return r;
    }
  }
  const json& data() const { return data_; }

 private:
  void record(const std::string& name, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double, std::milli> d = std::chrono::steady_clock::now() - start;
    data_[name] = data_.value(name, 0.0) + d.count();
  }
  json data_ = json::object();
};

json make_report(const char* command, const json& config, const CommandOptions& opts, json results,
                 const Timings& t) {
  return {{"command", command},     {"seed", opts.seed},       {"version", kVersion},
          {"params", config},       {"results", std::move(results)}, {"timings", t.data()}};
}

json rational_json(const Rational& q) {
  return {{"numerator", numerator_string(q)}, {"denominator", denominator_string(q)}, {"value", to_double(q)}};
}

json norm_json(const NormResult& r) {
  return {{"n", r.n},
          {"rawSum", r.raw_sum.str()},
          {"r2", rational_json(r.r2)},
          {"alpha", rational_json(r.alpha)},
          {"property", alpha_within_property_bound(r.raw_sum, r.n) ? 1 : 0}};
}

// r2 >= 2^{-ceil(n/2)}  <=>  raw_sum * 2^{ceil(n/2)} >= 2^{2n}
bool above_floor(const NormResult& r) {
  const unsigned half = static_cast<unsigned>((r.n + 1) / 2);
  return (r.raw_sum << half) >= pow2(2U * static_cast<unsigned>(r.n));
}

json estimate_json(double mean, double se, std::uint64_t samples) {
  return {{"mean", mean}, {"stderr", se}, {"samples", samples}};
}

std::uint64_t get_u64(const json& config, const char* key, std::uint64_t fallback) {
  if (!config.contains(key)) return fallback;
  const auto& v = config.at(key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
    throw ParseError(0, std::string("\"") + key + "\" must be a non-negative integer");
  return v.get<std::uint64_t>();
}

NamedTable load_table(const json& config, const CommandOptions& opts, Rng& rng) {
  if (config.contains("table_file")) {
    std::filesystem::path p(config.at("table_file").get<std::string>());
    if (p.is_relative()) p = opts.base_dir / p;
    return {p.filename().string(), read_truth_table_file(p.string())};
  }
  if (config.contains("family")) return table_family_from_config(config.at("family"), opts.base_dir, rng);
  throw ParseError(0, "norm needs \"table_file\" or \"family\"");
}

// Exact pair norm when both supports are small enough to enumerate.
std::optional<Rational> try_pair_norm(const EvaluationRule& rule, const TargetDistribution& mu,
                                      const ExampleDistribution& rho) {
  if (!mu.enumerable() || !rho.enumerable()) return std::nullopt;
  const auto ms = mu.support().size();
  const auto rs = rho.support().size();
  if (static_cast<double>(rs) * static_cast<double>(rs) * static_cast<double>(ms) > static_cast<double>(kMaxPairWork))
    return std::nullopt;
  return r2_pair_exact(rule, mu, rho);
}

json distinguisher_json(const DistinguisherResult& r) {
  return {{"mean", r.mean},
          {"stderr", r.stderr_},
          {"z", r.z},
          {"N", r.samples},
          {"decision", r.structured ? "structured" : "random"}};
}

WprfTriple triple_from_config(const json& config, const CommandOptions& opts) {
  const auto candidate = config.value("candidate", std::string("xor-maj"));
  if (candidate == "xor-maj") return xor_maj_triple(config.value("n", 8));
  if (candidate == "concept-class") {
    auto cls = concept_class_from_config(config.at("mu"), opts.base_dir);
    WprfTriple t{"concept-class:" + cls.rule->name, cls.rule, cls.mu, 0, {}};
    if (config.contains("encoding")) {
      const auto& enc = config.at("encoding");
      const auto type = enc.at("type").get<std::string>();
      const int n = cls.rule->n;
      if (type == "duplicate") {
        // m = n/2 seed bits, input r || r
        if (n % 2 != 0) throw ParseError(0, "duplicate encoding needs even n");
        const int half = n / 2;
        t.encoding_bits = half;
        t.enc = [half](std::uint64_t r) { return static_cast<Input>((r << half) | r); };
      } else if (type != "identity") {
        throw ParseError(0, "unknown encoding \"" + type + "\"");
      }
    }
    return t;
  }
  throw ParseError(0, "unknown candidate \"" + candidate + "\"");
}

}  // namespace

// --------------------------------------------------------------------- norm

json cmd_norm(const json& config, const CommandOptions& opts) {
  Timings timings;
  Rng rng = make_rng(opts.seed, "norm.table");
  const auto table = timings.phase("load", [&] { return load_table(config, opts, rng); });
  const auto method = config.value("method", std::string("gram"));

  json results;
  results["table"] = table.name;
  NormResult exact;
  if (method == "naive") {
    exact = timings.phase("naive", [&] { return r2_exact_naive(table.table); });
  } else if (method == "gram" || method == "both") {
    exact = timings.phase("gram", [&] { return r2_exact_gram(table.table); });
    if (method == "both") {
      const auto naive = timings.phase("naive", [&] { return r2_exact_naive(table.table); });
      results["oracle_match"] = naive.raw_sum == exact.raw_sum;
    }
  } else {
    throw ParseError(0, "unknown method \"" + method + "\"");
  }
  results["norm"] = norm_json(exact);
  results["above_floor"] = above_floor(exact);

  if (const auto N = get_u64(config, "mc_samples", 0); N > 0) {
    Rng mc_rng = make_rng(opts.seed, "norm.mc");
    const auto est = timings.phase("mc", [&] { return r2_estimate_mc(pair_function(table.table), N, mc_rng); });
    auto mc = estimate_json(est.mean, est.stderr_, est.samples);
    const double err = std::abs(est.mean - to_double(exact.r2));
    mc["abs_error"] = err;
    mc["within_4_stderr"] = err <= 4.0 / std::sqrt(static_cast<double>(N));
    results["mc"] = mc;
  }
  return make_report("norm", config, opts, std::move(results), timings);
}

// ------------------------------------------------------------------ natprop

json cmd_natprop(const json& config, const CommandOptions& opts) {
  Timings timings;
  const int n = config.value("n", 12);
  const std::uint64_t K = get_u64(config, "tables", 2000);
  const int bins = config.value("bins", 20);
  if (bins < 1) throw ParseError(0, "\"bins\" must be >= 1");

  json results;
  std::vector<double> alphas;
  std::uint64_t accepted = 0, floor_violations = 0;
  if (K > 0) {
    timings.phase("random_tables", [&] {
      alphas.reserve(K);
      for (std::uint64_t k = 0; k < K; ++k) {
        Rng rng = make_rng(opts.seed, "natprop.random", k);
        const auto verdict = natural_property(TruthTable::random(n, rng));
        accepted += verdict.accepted ? 1 : 0;
        floor_violations += above_floor(verdict.norm) ? 0 : 1;
        alphas.push_back(to_double(verdict.norm.alpha));
      }
    });
  }

  double median = 0.0;
  if (!alphas.empty()) {
    auto sorted = alphas;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t h = sorted.size() / 2;
    median = sorted.size() % 2 ? sorted[h] : 0.5 * (sorted[h - 1] + sorted[h]);
    // Histogram of log2(alpha) over [min, max], equal-width bins.
    const double lo = std::log2(sorted.front()), hi = std::log2(sorted.back());
    const double width = hi > lo ? (hi - lo) / bins : 1.0;
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(bins), 0);
    for (double a : alphas) {
      auto b = static_cast<std::size_t>((std::log2(a) - lo) / width);
      counts[std::min(b, counts.size() - 1)]++;
    }
    std::vector<double> edges;
    for (int b = 0; b <= bins; ++b) edges.push_back(lo + width * b);
    results["random"] = {{"n", n},
                         {"tables", K},
                         {"accepted", accepted},
                         {"fraction", static_cast<double>(accepted) / static_cast<double>(K)},
                         {"floor_violations", floor_violations},
                         {"median_alpha", median},
                         {"log2_alpha_histogram", {{"edges", edges}, {"counts", counts}}}};
  }

  auto fams = json::array();
  if (config.contains("families")) {
    timings.phase("families", [&] {
      std::uint64_t idx = 0;
      for (const auto& f : config.at("families")) {
        Rng rng = make_rng(opts.seed, "natprop.family", idx++);
        const auto table = table_family_from_config(f, opts.base_dir, rng);
        const auto verdict = natural_property(table.table);
        json entry = {{"name", table.name},
                      {"n", table.table.arity()},
                      {"alpha", rational_json(verdict.norm.alpha)},
                      {"r2", rational_json(verdict.norm.r2)},
                      {"property", verdict.accepted ? 1 : 0},
                      {"above_floor", above_floor(verdict.norm)}};
        floor_violations += above_floor(verdict.norm) ? 0 : 1;
        if (!alphas.empty() && table.table.arity() == n)
          entry["above_random_median"] = to_double(verdict.norm.alpha) > median;
        fams.push_back(std::move(entry));
      }
    });
  }
  results["families"] = fams;
  results["floor_violations"] = floor_violations;
  return make_report("natprop", config, opts, std::move(results), timings);
}

// -------------------------------------------------------------------- learn

json cmd_learn(const json& config, const CommandOptions& opts) {
  Timings timings;
  if (!config.contains("mu")) throw ParseError(0, "learn needs a \"mu\" block");
  const auto cls = timings.phase("load", [&] { return concept_class_from_config(config.at("mu"), opts.base_dir); });
  const auto params = learn_params_from_config(config.value("params", json()));
  params.validate();

  std::vector<json> rho_specs;
  if (!config.contains("rho")) {
    rho_specs.push_back({{"type", "uniform"}});
  } else if (config.at("rho").is_array()) {
    for (const auto& r : config.at("rho")) rho_specs.push_back(r);
  } else {
    rho_specs.push_back(config.at("rho"));
  }
  const std::uint64_t runs = std::max<std::uint64_t>(1, get_u64(config, "runs", 1));
  const bool pair_norm = config.value("pair_norm", true);

  auto per_rho = json::array();
  for (std::size_t i = 0; i < rho_specs.size(); ++i) {
    const auto rho = rho_from_config(rho_specs[i], cls.rule->n);
    json entry = {{"rho", rho.name()}};
    if (pair_norm) {
      const auto r2 = timings.phase("pair_norm", [&] { return try_pair_norm(*cls.rule, cls.mu, rho); });
      if (r2) entry["pair_norm"] = rational_json(*r2);
    }
    auto run_reports = json::array();
    std::uint64_t weak_hits = 0, boost_hits = 0;
    for (std::uint64_t r = 0; r < runs; ++r) {
      const std::uint64_t shard = i * runs + r;
      Rng concept_rng = make_rng(opts.seed, "learn.concept", shard);
      const BoundConcept target{cls.rule, cls.mu.sample(concept_rng)};
      const ExampleOracle oracle(target, rho);
      Rng run_rng = make_rng(opts.seed, "learn.run", shard);
      const auto outcome = timings.phase("learn", [&] { return distpac_learn(cls.rule, cls.mu, oracle, params, run_rng); });
      json rr = outcome.report;
      rr.erase("params");
      rr["concept_hex"] = target.rep.to_hex();
      run_reports.push_back(std::move(rr));
      weak_hits += outcome.weak_accuracy.accuracy >= 0.5 + params.weak_margin / 2 ? 1 : 0;
      boost_hits += outcome.boosted_accuracy.accuracy >= 1.0 - params.epsilon ? 1 : 0;
    }
    entry["runs"] = run_reports;
    entry["weak_above_margin"] = weak_hits;
    entry["boosted_within_epsilon"] = boost_hits;
    per_rho.push_back(std::move(entry));
  }

  json results = {{"rule", cls.rule->name},
                  {"n", cls.rule->n},
                  {"rep_bits", cls.rule->rep_bits},
                  {"m", cls.gates.size()},
                  {"learn_params",
                   {{"epsilon", params.epsilon},
                    {"delta", params.delta},
                    {"eta", params.eta},
                    {"candidates", params.candidates},
                    {"tests", params.tests},
                    {"boost_rounds", params.boost_rounds > 0 ? params.boost_rounds : params.default_rounds()},
                    {"holdout_samples", params.holdout_samples}}},
                  {"per_rho", per_rho}};
  return make_report("learn", config, opts, std::move(results), timings);
}

// -------------------------------------------------------------- distinguish

json cmd_distinguish(const json& config, const CommandOptions& opts) {
  Timings timings;
  const auto triple = timings.phase("load", [&] { return triple_from_config(config, opts); });
  const double tau = config.value("tau", 3.0);
  const ExampleDistribution rho = triple.example_distribution();

  json results = {{"candidate", triple.name}, {"n", triple.f->n}};
  std::optional<Rational> exact;
  if (config.value("exact_norm", true))
    exact = timings.phase("pair_norm", [&] { return try_pair_norm(*triple.f, triple.gen, rho); });
  if (exact) results["r2_exact"] = rational_json(*exact);

  std::uint64_t N = 0;
  const json samples = config.value("samples", json("auto"));
  if (samples.is_string() && samples.get<std::string>() == "auto") {
    if (!exact || !(to_double(*exact) > 0.0))
      throw ParseError(0, "\"samples\": \"auto\" needs an enumerable triple with positive norm");
    N = distinguisher_samples(to_double(*exact), tau);
  } else {
    N = get_u64(config, "samples", 0);
    if (N == 0) throw ParseError(0, "\"samples\" must be positive or \"auto\"");
  }

  Rng keyed_rng = make_rng(opts.seed, "distinguish.keyed");
  const auto keyed = timings.phase("keyed", [&] { return wprf_distinguish(triple, N, keyed_rng, LabelMode::Keyed, tau); });
  results["N"] = N;
  results["tau"] = tau;
  results["mean"] = keyed.mean;
  results["stderr"] = keyed.stderr_;
  results["z"] = keyed.z;
  results["decision"] = keyed.structured ? "structured" : "random";
  if (exact) {
    const double err = std::abs(keyed.mean - to_double(*exact));
    results["abs_error"] = err;
    results["within_4_stderr"] = err <= 4.0 * keyed.stderr_;
  }
  if (config.value("calibration", true)) {
    Rng null_rng = make_rng(opts.seed, "distinguish.null");
    const auto null = timings.phase("calibration", [&] { return wprf_distinguish(triple, N, null_rng, LabelMode::Random, tau); });
    auto cal = distinguisher_json(null);
    cal["mode"] = "random-labels";
    results["calibration"] = cal;
  }
  return make_report("distinguish", config, opts, std::move(results), timings);
}

// --------------------------------------------------------------------- game

json cmd_game(const json& config, const CommandOptions& opts) {
  Timings timings;
  RulePtr rule;
  TargetDistribution mu = TargetDistribution::uniform_bits(1);
  if (config.contains("mu")) {
    auto cls = concept_class_from_config(config.at("mu"), opts.base_dir);
    rule = cls.rule;
    mu = cls.mu;
  } else {
    const int n = config.value("n", 8);
    rule = xm_rule(n);
    mu = xm_key_distribution(n);
  }
  const auto rho = rho_from_config(config.value("rho", json{{"type", "uniform"}}), rule->n);
  const GameSpec game{rule, mu, rho};

  const json pspec = config.value("protocol", json{{"name", "send-representation"}});
  const auto pname = pspec.value("name", std::string("send-representation"));
  Protocol protocol;
  if (pname == "send-representation") protocol = trivial_protocol(rule);
  else if (pname == "constant") protocol = constant_protocol(pspec.value("sign", 1));
  else throw ParseError(0, "unknown protocol \"" + pname + "\"");

  const std::uint64_t N = get_u64(config, "samples", 20000);
  if (N == 0) throw ParseError(0, "\"samples\" must be positive");
  Rng rng = make_rng(opts.seed, "game.win");
  const auto win = timings.phase("play", [&] { return game_win_prob(game, protocol, N, rng); });

  const double gamma = win.probability - 0.5;
  json results = {{"rule", rule->name},
                  {"n", rule->n},
                  {"protocol", protocol.name},
                  {"cost", protocol.cost},
                  {"win_probability", win.probability},
                  {"stderr", win.stderr_},
                  {"samples", win.samples},
                  {"gamma", gamma}};
  if (gamma > 0.0) {
    const Rational g = rational_from_double(std::min(gamma, 0.5));
    results["advantage_bound"] = rational_json(advantage_bound(static_cast<unsigned>(protocol.cost), g));
  }
  if (config.value("exact_norm", false)) {
    const auto exact = timings.phase("pair_norm", [&] { return try_pair_norm(*rule, mu, rho); });
    if (exact) results["r2_exact"] = rational_json(*exact);
  }
  return make_report("game", config, opts, std::move(results), timings);
}

json run_command(std::string_view name, const json& config, const CommandOptions& opts) {
  if (name == "norm") return cmd_norm(config, opts);
  if (name == "natprop") return cmd_natprop(config, opts);
  if (name == "learn") return cmd_learn(config, opts);
  if (name == "distinguish") return cmd_distinguish(config, opts);
  if (name == "game") return cmd_game(config, opts);
  throw std::invalid_argument("unknown command \"" + std::string(name) + "\"");
}

json without_timings(json report) {
  report.erase("timings");
  return report;
}

const char* report_schema() {
  return R"schema({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "natlearn experiment report",
  "type": "object",
  "required": ["command", "seed", "version", "params", "results", "timings"],
  "properties": {
    "command": {"enum": ["norm", "natprop", "learn", "distinguish", "game"]},
    "seed": {"type": "integer", "minimum": 0},
    "version": {"type": "string"},
    "params": {"type": "object"},
    "results": {"type": "object"},
    "timings": {"type": "object", "additionalProperties": {"type": "number", "minimum": 0}}
  },
  "definitions": {
    "rational": {
      "type": "object",
      "required": ["numerator", "denominator"],
      "properties": {
        "numerator": {"type": "string", "pattern": "^-?[0-9]+$"},
        "denominator": {"type": "string", "pattern": "^[1-9][0-9]*$"},
        "value": {"type": "number"}
      }
    },
    "accuracy": {
      "type": "object",
      "required": ["accuracy", "stderr"],
      "properties": {"accuracy": {"type": "number", "minimum": 0, "maximum": 1}, "stderr": {"type": "number"}}
    }
  },
  "allOf": [
    {
      "if": {"properties": {"command": {"const": "norm"}}},
      "then": {"properties": {"results": {
        "required": ["table", "norm"],
        "properties": {"norm": {
          "type": "object",
          "required": ["n", "rawSum", "r2", "alpha", "property"],
          "properties": {
            "n": {"type": "integer", "minimum": 1},
            "rawSum": {"type": "string", "pattern": "^[0-9]+$"},
            "r2": {"$ref": "#/definitions/rational"},
            "alpha": {"$ref": "#/definitions/rational"},
            "property": {"enum": [0, 1]}
          }
        }}
      }}}
    },
    {
      "if": {"properties": {"command": {"const": "natprop"}}},
      "then": {"properties": {"results": {
        "required": ["families", "floor_violations"],
        "properties": {
          "random": {
            "type": "object",
            "required": ["n", "tables", "accepted", "fraction", "median_alpha", "log2_alpha_histogram"],
            "properties": {"fraction": {"type": "number", "minimum": 0, "maximum": 1}}
          },
          "families": {"type": "array", "items": {
            "type": "object",
            "required": ["name", "n", "alpha", "property"],
            "properties": {"alpha": {"$ref": "#/definitions/rational"}, "property": {"enum": [0, 1]}}
          }}
        }
      }}}
    },
    {
      "if": {"properties": {"command": {"const": "learn"}}},
      "then": {"properties": {"results": {
        "required": ["rule", "n", "per_rho"],
        "properties": {"per_rho": {"type": "array", "minItems": 1, "items": {
          "type": "object",
          "required": ["rho", "runs"],
          "properties": {"runs": {"type": "array", "items": {
            "type": "object",
            "required": ["weak_accuracy", "boosted_accuracy", "reached_target", "rounds", "weak_hypothesis"],
            "properties": {
              "weak_accuracy": {"$ref": "#/definitions/accuracy"},
              "boosted_accuracy": {"$ref": "#/definitions/accuracy"}
            }
          }}}
        }}}
      }}}
    },
    {
      "if": {"properties": {"command": {"const": "distinguish"}}},
      "then": {"properties": {"results": {
        "required": ["candidate", "n", "N", "mean", "stderr", "z", "decision"],
        "properties": {
          "N": {"type": "integer", "minimum": 1},
          "decision": {"enum": ["structured", "random"]},
          "calibration": {
            "type": "object",
            "required": ["mean", "stderr", "z", "decision"],
            "properties": {"decision": {"enum": ["structured", "random"]}}
          }
        }
      }}}
    },
    {
      "if": {"properties": {"command": {"const": "game"}}},
      "then": {"properties": {"results": {
        "required": ["protocol", "cost", "win_probability", "stderr", "samples"],
        "properties": {"win_probability": {"type": "number", "minimum": 0, "maximum": 1}}
      }}}
    }
  ]
}
)schema";
}

}  // namespace natlearn
