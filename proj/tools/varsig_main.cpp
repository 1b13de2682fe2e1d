// varsig — scenario runner for action- and state-dependent signal learning.
//
// varsig <update|grid|regimes|trap|bandit> --config <path> [--seed <u64>]
//        [--out <path>]
//
// Writes the scenario CSV to the output path, prints a one-line summary to
// stdout, and reports failures as `ERROR <code> <where> <message>` lines on
// stderr with documented exit codes. VARSIG_LOG ∈ {quiet, info, debug}
// controls stderr chatter (default info; unknown values mean info).

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "varsig/errors.hpp"
#include "varsig/scenario.hpp"

namespace {

enum class LogLevel { kQuiet = 0, kInfo = 1, kDebug = 2 };

LogLevel log_level_from_env() {
  const char* v = std::getenv("VARSIG_LOG");
  if (v == nullptr) return LogLevel::kInfo;
  const std::string level(v);
  if (level == "quiet") return LogLevel::kQuiet;
  if (level == "debug") return LogLevel::kDebug;
  return LogLevel::kInfo;  // lenient: unknown values keep the default
}

int exit_code_for(const std::string& code) {
  if (code == "PARSE") return 2;
  if (code == "VALIDATION") return 3;
  if (code == "DOMAIN" || code == "NEGATIVE_VARIANCE" || code == "EMPTY_INPUT" ||
      code == "INDEX") {
    return 4;
  }
  if (code == "NO_INFORMATION") return 5;
  if (code == "DEGENERATE_POSTERIOR") return 6;
  if (code == "ZERO_EVIDENCE") return 7;
  if (code == "IO") return 8;
  return 9;
}

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return text;
}

void print_error(const std::string& code, const std::string& where, const std::string& message) {
  std::cerr << "ERROR " << code << " " << (where.empty() ? "-" : where) << " "
            << one_line(message) << "\n";
}

struct CommandArgs {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic scenario runner for Bayesian learning with "
               "action- and state-dependent signal variance"};
  app.require_subcommand(1);

  constexpr const char* kKinds[] = {"update", "grid", "regimes", "trap", "bandit"};
  constexpr const char* kDescriptions[] = {
      "Sequential conjugate belief updates",
      "Normalized posterior curves on a state grid",
      "Discrete-regime Bayes filter",
      "Uncertainty-trap population simulation",
      "Posterior-guided project episode",
  };

  CommandArgs args[5];
  CLI::Option* seed_opts[5];
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(kKinds[i], kDescriptions[i]);
    sub->add_option("--config", args[i].config_path, "Scenario config (JSON)")->required();
    seed_opts[i] = sub->add_option("--seed", args[i].seed, "Override the config seed");
    sub->add_option("--out", args[i].out_path, "Override the config output path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  int which = 0;
  for (int i = 0; i < 5; ++i) {
    if (app.got_subcommand(kKinds[i])) which = i;
  }
  const LogLevel level = log_level_from_env();

  try {
    varsig::ScenarioConfig config = varsig::load_config(args[which].config_path);
    if (std::string(varsig::scenario_kind_name(config.kind)) != kKinds[which]) {
      throw varsig::ValidationError(
          std::string("config declares scenario \"") + varsig::scenario_kind_name(config.kind) +
              "\" but the command is \"" + kKinds[which] + "\"",
          "scenario");
    }
    if (seed_opts[which]->count() > 0) config.seed = args[which].seed;
    if (!args[which].out_path.empty()) config.output = args[which].out_path;
    if (config.output.empty()) {
      config.output = std::string(varsig::scenario_kind_name(config.kind)) + ".csv";
    }

    if (level >= LogLevel::kDebug) {
      std::cerr << "varsig: config=" << args[which].config_path
                << " scenario=" << varsig::scenario_kind_name(config.kind)
                << " seed=" << config.seed << " replicas=" << config.replicas << "\n";
    }

    const auto started = std::chrono::steady_clock::now();
    const varsig::ScenarioResult result = varsig::run_scenario(config);
    varsig::write_text_file(config.output, result.csv);
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    std::cout << result.summary << "\n";
    if (level >= LogLevel::kInfo) {
      std::cerr << "varsig: wrote " << config.output << " (" << result.csv.size() << " bytes)";
      if (level >= LogLevel::kDebug) std::cerr << " in " << elapsed << " ms";
      std::cerr << "\n";
    }
    return 0;
  } catch (const varsig::Error& e) {
    print_error(e.code(), e.where(), e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    print_error("INTERNAL", "-", e.what());
    return 9;
  }
}
