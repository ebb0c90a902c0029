// natlearn: batch experiment runner. One subcommand per invocation, JSON
// report on stdout (or --out), diagnostics on stderr.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "natlearn/commands.hpp"
#include "natlearn/config.hpp"
#include "natlearn/errors.hpp"
#include "natlearn/learner.hpp"
#include "natlearn/parallel.hpp"

namespace {

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out;
  int threads = 0;
};

int run(const std::string& command, const Flags& flags) {
  nlohmann::json config = nlohmann::json::object();
  natlearn::CommandOptions opts;
  if (!flags.config.empty()) {
    config = natlearn::read_json_file(flags.config);
    opts.base_dir = std::filesystem::path(flags.config).parent_path();
    if (opts.base_dir.empty()) opts.base_dir = ".";
  }
  if (config.contains("seed")) opts.seed = config.at("seed").get<std::uint64_t>();
  if (flags.seed_given) opts.seed = flags.seed;
  config["seed"] = opts.seed;

  int threads = config.value("threads", 0);
  if (flags.threads > 0) threads = flags.threads;
  if (threads > 0) natlearn::set_thread_count(threads);
  config.erase("threads");  // thread count never changes results

  const auto report = natlearn::run_command(command, config, opts);
  const std::string text = report.dump(2) + "\n";
  if (flags.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(flags.out);
    if (!out) throw std::runtime_error("cannot write " + flags.out);
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributional PAC learning and 2-party norm experiments"};
  app.set_version_flag("--version", natlearn::kVersion);
  app.require_subcommand(0, 1);

  bool print_schema = false;
  app.add_flag("--print-schema", print_schema, "Print the report JSON schema and exit");

  Flags flags;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"norm", "exact (and optional Monte-Carlo) norm of a truth table or family"},
      {"natprop", "natural-property runs over random tables and structured families"},
      {"learn", "end-to-end learning run for a concept class"},
      {"distinguish", "norm-based weak-PRF distinguisher"},
      {"game", "evaluated-game win probability for a protocol"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "JSON config file")->check(CLI::ExistingFile);
    sub->add_option_function<std::uint64_t>(
        "--seed", [&flags](const std::uint64_t& s) { flags.seed = s; flags.seed_given = true; },
        "Master seed (overrides the config)");
    sub->add_option("--out", flags.out, "Write the report here instead of stdout");
    sub->add_option("--threads", flags.threads, "OpenMP thread count")->check(CLI::PositiveNumber);
    sub->add_flag("--print-schema", print_schema, "Print the report JSON schema and exit");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (print_schema) {
    std::cout << natlearn::report_schema();
    return 0;
  }
  if (app.get_subcommands().empty()) {
    std::cerr << app.help();
    return 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, flags);
  } catch (const natlearn::BoostStalled& e) {
    std::cerr << "natlearn " << command << ": boosting stalled in round " << e.round << " (" << e.accepted
              << " of " << e.attempts << " draws accepted, validation error " << e.validation_error << ")\n";
    return 3;
  } catch (const natlearn::ParseError& e) {
    std::cerr << "natlearn " << command << ": " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "natlearn " << command << ": " << e.what() << "\n";
    return 1;
  }
}
