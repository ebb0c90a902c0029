#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace natlearn {

inline constexpr const char* kVersion = "natlearn 0.3.0";

struct CommandOptions {
  std::uint64_t seed = 0;
  std::filesystem::path base_dir = ".";  // relative paths in the config resolve here
};

// Each command returns a full report:
//   {command, seed, version, params, results, timings}
// Everything but timings is a function of (config, seed).
nlohmann::json cmd_norm(const nlohmann::json& config, const CommandOptions& opts);
nlohmann::json cmd_natprop(const nlohmann::json& config, const CommandOptions& opts);
nlohmann::json cmd_learn(const nlohmann::json& config, const CommandOptions& opts);
nlohmann::json cmd_distinguish(const nlohmann::json& config, const CommandOptions& opts);
nlohmann::json cmd_game(const nlohmann::json& config, const CommandOptions& opts);

// Dispatch by subcommand name; throws std::invalid_argument on unknown names.
nlohmann::json run_command(std::string_view name, const nlohmann::json& config, const CommandOptions& opts);

// JSON schema (draft-07) every report validates against.
const char* report_schema();

// Copy of a report without its timings block.
nlohmann::json without_timings(nlohmann::json report);

}  // namespace natlearn
