#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "natlearn/concepts.hpp"
#include "natlearn/games.hpp"
#include "natlearn/learner.hpp"

namespace natlearn {

// A concept class with its target distribution, as described by a config
// "mu" block: {"type": "mu_L" | "polytope" | "cnf" | "uniform-rep",
// "ltf_file": path, "theta": {...}}.
struct ConceptClass {
  RulePtr rule;
  TargetDistribution mu;
  ThresholdList gates;
};

// Relative paths in a config resolve against base_dir.
ConceptClass concept_class_from_config(const nlohmann::json& mu, const std::filesystem::path& base_dir);

// {"type": "uniform"} | {"type": "bernoulli", "p": q} |
// {"type": "support", "strings": ["0101", ...], "weights": [...]}
TargetDistribution theta_from_config(const nlohmann::json& theta, std::size_t m);

// {"type": "uniform"} | {"type": "bernoulli-product", "p": q or [q_1, ...]} |
// {"type": "empirical", "points": ["0101", ...], "weights": [...]} |
// {"type": "point", "x": "0101"}
ExampleDistribution rho_from_config(const nlohmann::json& rho, int n);

LearnParams learn_params_from_config(const nlohmann::json& params);

// {"type": "ip", "k": k} | {"type": "constant", "n": n, "value": +-1} |
// {"type": "majority", "n": n} | {"type": "random", "n": n} |
// {"type": "one-sided", "n": n} | {"type": "circuit", "ltf_file": path, "kind": "maj"|"and"}
struct NamedTable {
  std::string name;
  TruthTable table;
};
NamedTable table_family_from_config(const nlohmann::json& family, const std::filesystem::path& base_dir, Rng& rng);

// Reads and parses a JSON document; errors become ParseError.
nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace natlearn
