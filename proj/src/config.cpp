#include "natlearn/config.hpp"

#include <fstream>

#include "natlearn/errors.hpp"

namespace natlearn {

using nlohmann::json;

namespace {

std::string type_of(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw ParseError(0, std::string(what) + " block needs a string \"type\"");
  return j.at("type").get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::vector<Rational> weights_or_uniform(const json& j, std::size_t count) {
  std::vector<Rational> w;
  if (j.contains("weights")) {
    const auto& arr = j.at("weights");
    if (!arr.is_array() || arr.size() != count) throw ParseError(0, "\"weights\" must list one weight per entry");
    for (const auto& v : arr) w.push_back(rational_from_double(v.get<double>()));
  } else {
    w.assign(count, Rational(1));
  }
  return w;
}

Input input_from_string(const std::string& s, int n) {
  if (s.size() != static_cast<std::size_t>(n)) throw ParseError(0, "input \"" + s + "\" must have n characters");
  Input x = 0;
  for (char c : s) {
    if (c != '0' && c != '1') throw ParseError(0, "inputs are strings over {0,1}");
    x = (x << 1) | (c == '1' ? 1U : 0U);
  }
  return x;
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

TargetDistribution theta_from_config(const json& theta, std::size_t m) {
  const auto type = type_of(theta, "theta");
  if (type == "uniform") return TargetDistribution::uniform_bits(m);
  if (type == "bernoulli") return TargetDistribution::bernoulli_bits(m, theta.at("p").get<double>());
  if (type == "support") {
    const auto& strings = theta.at("strings");
    const auto w = weights_or_uniform(theta, strings.size());
    std::vector<Weighted<BitString>> pts;
    for (std::size_t i = 0; i < strings.size(); ++i) {
      auto b = BitString::from_string(strings[i].get<std::string>());
      if (b.size() != m) throw ParseError(0, "theta support strings must have m bits");
      pts.push_back({std::move(b), w[i]});
    }
    return TargetDistribution::weighted(std::move(pts));
  }
  throw ParseError(0, "unknown theta type \"" + type + "\"");
}

ExampleDistribution rho_from_config(const json& rho, int n) {
  const auto type = type_of(rho, "rho");
  if (type == "uniform") return ExampleDistribution::uniform(n);
  if (type == "bernoulli-product") {
    const auto& p = rho.at("p");
    if (p.is_array()) {
      auto ps = p.get<std::vector<double>>();
      if (ps.size() != static_cast<std::size_t>(n)) throw ParseError(0, "bernoulli-product needs n probabilities");
      return ExampleDistribution::bernoulli_product(std::move(ps));
    }
    return ExampleDistribution::bernoulli_product(n, p.get<double>());
  }
  if (type == "empirical") {
    const auto& points = rho.at("points");
    const auto w = weights_or_uniform(rho, points.size());
    std::vector<Weighted<Input>> pts;
    for (std::size_t i = 0; i < points.size(); ++i)
      pts.push_back({input_from_string(points[i].get<std::string>(), n), w[i]});
    return ExampleDistribution::empirical(n, std::move(pts));
  }
  if (type == "point") return ExampleDistribution::point_mass(n, input_from_string(rho.at("x").get<std::string>(), n));
  throw ParseError(0, "unknown rho type \"" + type + "\"");
}

ConceptClass concept_class_from_config(const json& mu, const std::filesystem::path& base_dir) {
  const auto type = type_of(mu, "mu");
  if (!mu.contains("ltf_file")) throw ParseError(0, "mu block needs \"ltf_file\"");
  const auto gates = read_threshold_list_file(resolve(base_dir, mu.at("ltf_file").get<std::string>()).string());
  const std::size_t m = gates.size();
  if (type == "uniform-rep") {
    auto rule = majthr_rule(gates);
    return {rule, TargetDistribution::uniform_bits(2 * m), gates};
  }
  const auto theta = mu.contains("theta") ? theta_from_config(mu.at("theta"), m) : TargetDistribution::uniform_bits(m);
  if (type == "mu_L") return {majthr_rule(gates), mu_L(gates, theta), gates};
  if (type == "polytope") return {polytope_rule(gates), mu_and_L(gates, theta), gates};
  if (type == "cnf") return {cnf_rule(gates), mu_and_L(gates, theta), gates};
  throw ParseError(0, "unknown mu type \"" + type + "\"");
}

LearnParams learn_params_from_config(const json& params) {
  LearnParams p;
  if (params.is_null()) return p;
  p.epsilon = params.value("epsilon", p.epsilon);
  p.delta = params.value("delta", p.delta);
  p.eta = params.value("eta", p.eta);
  p.candidates = params.value("candidates", p.candidates);
  p.tests = params.value("tests", p.tests);
  p.boost_rounds = params.value("boost_rounds", p.boost_rounds);
  p.weak_margin = params.value("weak_margin", p.weak_margin);
  p.validation_samples = params.value("validation_samples", p.validation_samples);
  p.holdout_samples = params.value("holdout_samples", p.holdout_samples);
  return p;
}

NamedTable table_family_from_config(const json& family, const std::filesystem::path& base_dir, Rng& rng) {
  const auto type = type_of(family, "family");
  if (type == "ip") {
    const int k = family.at("k").get<int>();
    return {"ip-" + std::to_string(k) + "+" + std::to_string(k), families::inner_product(k)};
  }
  if (type == "constant") {
    const int n = family.at("n").get<int>();
    return {"constant-" + std::to_string(n), families::constant(n, family.value("value", 1))};
  }
  if (type == "majority") {
    const int n = family.at("n").get<int>();
    return {"majority-" + std::to_string(n), families::majority(n)};
  }
  if (type == "random") {
    const int n = family.at("n").get<int>();
    return {"random-" + std::to_string(n), TruthTable::random(n, rng)};
  }
  if (type == "one-sided") {
    const int n = family.at("n").get<int>();
    return {"one-sided-" + std::to_string(n), families::one_sided(n, rng)};
  }
  if (type == "circuit") {
    auto gates = read_threshold_list_file(resolve(base_dir, family.at("ltf_file").get<std::string>()).string());
    const int n = gates.front().arity();
    const auto kind = family.value("kind", std::string("maj"));
    const GateCircuit c(kind == "and" ? CircuitKind::AndOfThr : CircuitKind::MajOfThr, std::move(gates), n);
    return {family.value("name", std::string(kind == "and" ? "and-of-thr" : "maj-of-thr")), c.truth_table()};
  }
  throw ParseError(0, "unknown table family \"" + type + "\"");
}

}  // namespace natlearn
