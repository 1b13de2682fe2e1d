#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "varsig/bandit.hpp"
#include "varsig/belief.hpp"
#include "varsig/numeric_posterior.hpp"
#include "varsig/population.hpp"
#include "varsig/regime.hpp"

namespace varsig {

enum class ScenarioKind { kUpdate, kGrid, kRegimes, kTrap, kBandit };

const char* scenario_kind_name(ScenarioKind kind);

// Sequential conjugate updates: one belief revision per listed signal.
struct UpdateScenario {
  GaussianBelief prior;
  VarianceSpec noise;  // constant, inverse_count, or inverse_mass
  // Per-period action backing the noise: the signal count for
  // inverse_count, the participation mass for inverse_mass, unused for
  // constant.
  double action_value = 1.0;
  std::vector<double> signals;
};

// Normalized posterior curves over a state grid, one per signal.
struct GridScenario {
  GaussianBelief prior;
  StateFn f;
  std::vector<double> signals;
  GridSpec grid;
};

// Discrete-state filter over an explicit signal sequence.
struct RegimesScenario {
  RegimeModel model;
  std::vector<double> initial_probs;
  std::vector<double> signals;
};

// Uncertainty-trap trajectory from an initial public belief and true state.
struct TrapScenario {
  GaussianBelief prior;
  double initial_state;
  TrapConfig config;
};

// Posterior-guided project episode.
struct BanditScenario {
  BanditEnv env;
  std::vector<GaussianBelief> priors;  // one per project
  BanditPolicy policy;
  long long steps;
  GridSpec grid;
};

using ScenarioPayload =
    std::variant<UpdateScenario, GridScenario, RegimesScenario, TrapScenario, BanditScenario>;

struct ScenarioConfig {
  ScenarioKind kind;
  std::uint64_t seed = 0;
  std::string output;  // empty: caller picks a default
  int replicas = 1;    // trap and bandit only
  bool parallel = true;
  ScenarioPayload payload;
};

// Parses and fully validates a JSON config. Throws ParseError for malformed
// JSON and ValidationError (with the offending field path in `where`) for
// schema violations; unknown keys are errors.
ScenarioConfig parse_config(const std::string& text);

// Reads the file and delegates to parse_config. Throws IoError.
ScenarioConfig load_config(const std::string& path);

struct ScenarioResult {
  std::string csv;      // full file contents, header included
  std::string summary;  // one line: kind, seed, output path, key moments
};

// Runs the configured scenario and renders its CSV and summary line.
// Deterministic: identical configs produce identical bytes, regardless of
// whether replicas run serially or concurrently.
ScenarioResult run_scenario(const ScenarioConfig& config);

// Stable seed mix for replica r of a master seed (splitmix64-style finalizer;
// constants documented in the README). Pure integer arithmetic, so replica
// streams are reproducible and independent of execution order.
std::uint64_t derive_replica_seed(std::uint64_t master_seed, std::uint64_t replica_index);

// Shortest decimal representation that round-trips a double (17 significant
// digits, locale-independent).
std::string format_double(double v);

// Writes text to path, throwing IoError on failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace varsig
