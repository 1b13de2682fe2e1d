#include "varsig/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>

#include <json.hpp>

#include "varsig/conjugate.hpp"
#include "varsig/errors.hpp"

namespace varsig {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Path-tracked JSON access. Every helper throws ValidationError carrying the
// exact field path so the CLI error line points at the offending config key.
// ---------------------------------------------------------------------------

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void check_keys(const json& obj, const std::string& parent,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed) {
      if (item.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError("unknown key \"" + item.key() + "\"", join(parent, item.key()));
    }
  }
}

const json& require(const json& obj, const std::string& parent, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ValidationError("missing required field", join(parent, key));
  }
  return *it;
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& as_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError("expected an object", path);
  return j;
}

double get_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError("expected a number", path);
  return j.get<double>();
}

long long get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    throw ValidationError("expected an integer", path);
  }
  return j.get<long long>();
}

std::uint64_t get_u64(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    const long long v = j.get<long long>();
    if (v < 0) throw ValidationError("expected a nonnegative integer", path);
    return static_cast<std::uint64_t>(v);
  }
  throw ValidationError("expected a nonnegative integer", path);
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ValidationError("expected a boolean", path);
  return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError("expected a string", path);
  return j.get<std::string>();
}

std::vector<double> get_number_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError("expected an array of numbers", path);
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_double(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::vector<double> get_nonempty_number_array(const json& j, const std::string& path) {
  std::vector<double> out = get_number_array(j, path);
  if (out.empty()) throw ValidationError("array must not be empty", path);
  return out;
}

// ---------------------------------------------------------------------------
// Block parsers
// ---------------------------------------------------------------------------

GaussianBelief parse_prior(const json& j, const std::string& path) {
  const json& obj = as_object(j, path);
  check_keys(obj, path, {"mean", "variance"});
  const double mean = get_double(require(obj, path, "mean"), join(path, "mean"));
  const double variance = get_double(require(obj, path, "variance"), join(path, "variance"));
  if (!(variance > 0.0)) {
    throw ValidationError("variance must be > 0", join(path, "variance"));
  }
  return GaussianBelief(mean, variance);
}

GridSpec parse_grid(const json& j, const std::string& path) {
  const json& obj = as_object(j, path);
  check_keys(obj, path, {"lo", "hi", "n_nodes"});
  GridSpec grid{};
  grid.lo = get_double(require(obj, path, "lo"), join(path, "lo"));
  grid.hi = get_double(require(obj, path, "hi"), join(path, "hi"));
  const long long n = get_integer(require(obj, path, "n_nodes"), join(path, "n_nodes"));
  if (n < 3 || n > 100000000) {
    throw ValidationError("n_nodes must be in [3, 1e8]", join(path, "n_nodes"));
  }
  if (n % 2 == 0) {
    throw ValidationError("n_nodes must be odd so the midpoint is a node", join(path, "n_nodes"));
  }
  grid.n_nodes = static_cast<int>(n);
  if (!(grid.lo < grid.hi)) throw ValidationError("requires lo < hi", join(path, "lo"));
  return grid;
}

StateFn parse_state_fn(const json& j, const std::string& path) {
  const json& obj = as_object(j, path);
  check_keys(obj, path, {"name", "param"});
  const std::string name = get_string(require(obj, path, "name"), join(path, "name"));
  if (name != "square" && name != "square_plus" && name != "abs" && name != "const") {
    throw ValidationError("unknown function \"" + name +
                              "\" (expected square | square_plus | abs | const)",
                          join(path, "name"));
  }
  double param = 0.0;
  if (const json* p = find(obj, "param")) param = get_double(*p, join(path, "param"));
  if ((name == "square_plus" || name == "const") && param < 0.0) {
    throw ValidationError("param must be >= 0 for \"" + name + "\"", join(path, "param"));
  }
  return StateFn(name, param);
}

struct NoiseBlock {
  VarianceSpec spec;
  double action_value = 1.0;
};

NoiseBlock parse_noise(const json& j, const std::string& path) {
  const json& obj = as_object(j, path);
  const std::string kind = get_string(require(obj, path, "kind"), join(path, "kind"));
  const std::string sig_path = join(path, "sigma_eps_sq");

  if (kind == "constant") {
    check_keys(obj, path, {"kind", "sigma_eps_sq"});
    const double sig = get_double(require(obj, path, "sigma_eps_sq"), sig_path);
    if (!(sig > 0.0)) throw ValidationError("sigma_eps_sq must be > 0", sig_path);
    return NoiseBlock{ConstantNoise{sig}, 0.0};
  }
  if (kind == "inverse_count") {
    check_keys(obj, path, {"kind", "sigma_eps_sq", "count"});
    const double sig = get_double(require(obj, path, "sigma_eps_sq"), sig_path);
    if (!(sig > 0.0)) throw ValidationError("sigma_eps_sq must be > 0", sig_path);
    const long long count = get_integer(require(obj, path, "count"), join(path, "count"));
    if (count < 0) throw ValidationError("count must be >= 0", join(path, "count"));
    return NoiseBlock{InverseCountNoise{sig}, static_cast<double>(count)};
  }
  if (kind == "inverse_mass") {
    check_keys(obj, path, {"kind", "sigma_eps_sq", "mass"});
    const double sig = get_double(require(obj, path, "sigma_eps_sq"), sig_path);
    if (!(sig > 0.0)) throw ValidationError("sigma_eps_sq must be > 0", sig_path);
    const double mass = get_double(require(obj, path, "mass"), join(path, "mass"));
    if (!(mass >= 0.0 && mass <= 1.0)) {
      throw ValidationError("mass must lie in [0, 1]", join(path, "mass"));
    }
    return NoiseBlock{InverseMassNoise{sig}, mass};
  }
  throw ValidationError("unknown noise kind \"" + kind +
                            "\" (expected constant | inverse_count | inverse_mass)",
                        join(path, "kind"));
}

RegimesScenario parse_regimes(const json& root) {
  const json& model_json = as_object(require(root, "", "model"), "model");
  check_keys(model_json, "model", {"states", "variances", "transition"});

  std::vector<double> states =
      get_nonempty_number_array(require(model_json, "model", "states"), "model.states");
  std::vector<double> variances =
      get_nonempty_number_array(require(model_json, "model", "variances"), "model.variances");

  std::vector<std::vector<double>> transition;
  if (const json* t = find(model_json, "transition")) {
    if (!t->is_array()) throw ValidationError("expected an array of rows", "model.transition");
    for (std::size_t i = 0; i < t->size(); ++i) {
      transition.push_back(
          get_number_array((*t)[i], "model.transition[" + std::to_string(i) + "]"));
    }
  } else {
    transition.assign(states.size(), std::vector<double>(states.size(), 0.0));
    for (std::size_t i = 0; i < states.size(); ++i) transition[i][i] = 1.0;
  }

  std::vector<double> probs;
  if (const json* p = find(root, "initial_probs")) {
    probs = get_number_array(*p, "initial_probs");
  } else {
    probs.assign(states.size(), 1.0 / static_cast<double>(states.size()));
  }

  std::vector<double> signals =
      get_number_array(require(root, "", "signals"), "signals");

  try {
    RegimeModel model(std::move(states), std::move(variances), std::move(transition));
    // The filter validates probs at run time; do it now so bad configs fail
    // at parse time with a field path.
    (void)DiscreteBelief(model.states, probs);
    return RegimesScenario{std::move(model), std::move(probs), std::move(signals)};
  } catch (const Error& e) {
    throw ValidationError(e.what(), "model");
  }
}

TrapConfig parse_trap_block(const json& j, const std::string& path) {
  const json& obj = as_object(j, path);
  check_keys(obj, path,
             {"rho", "sigma_eps_sq", "innovation_var", "cutoff", "risk_weight", "horizon"});
  TrapConfig cfg{};
  cfg.rho = get_double(require(obj, path, "rho"), join(path, "rho"));
  if (!(cfg.rho > 0.0 && cfg.rho < 1.0)) {
    throw ValidationError("rho must lie strictly inside (0, 1)", join(path, "rho"));
  }
  cfg.sigma_eps_sq = get_double(require(obj, path, "sigma_eps_sq"), join(path, "sigma_eps_sq"));
  if (!(cfg.sigma_eps_sq > 0.0)) {
    throw ValidationError("sigma_eps_sq must be > 0", join(path, "sigma_eps_sq"));
  }
  cfg.innovation_var = 0.0;
  if (const json* v = find(obj, "innovation_var")) {
    cfg.innovation_var = get_double(*v, join(path, "innovation_var"));
    if (cfg.innovation_var < 0.0) {
      throw ValidationError("innovation_var must be >= 0", join(path, "innovation_var"));
    }
  }
  cfg.cutoff = 0.0;
  if (const json* v = find(obj, "cutoff")) cfg.cutoff = get_double(*v, join(path, "cutoff"));
  cfg.risk_weight = 1.0;
  if (const json* v = find(obj, "risk_weight")) {
    cfg.risk_weight = get_double(*v, join(path, "risk_weight"));
    if (cfg.risk_weight < 0.0) {
      throw ValidationError("risk_weight must be >= 0", join(path, "risk_weight"));
    }
  }
  cfg.horizon = get_integer(require(obj, path, "horizon"), join(path, "horizon"));
  if (cfg.horizon < 1) throw ValidationError("horizon must be >= 1", join(path, "horizon"));
  return cfg;
}

BanditScenario parse_bandit(const json& root) {
  const json& env_json = as_object(require(root, "", "bandit"), "bandit");
  check_keys(env_json, "bandit", {"base_output", "targets", "k"});
  const double base = get_double(require(env_json, "bandit", "base_output"), "bandit.base_output");
  std::vector<double> targets =
      get_nonempty_number_array(require(env_json, "bandit", "targets"), "bandit.targets");
  const double k = get_double(require(env_json, "bandit", "k"), "bandit.k");
  if (!(k > 0.0)) throw ValidationError("k must be > 0", "bandit.k");

  const json* prior_json = find(root, "prior");
  const json* priors_json = find(root, "priors");
  if ((prior_json == nullptr) == (priors_json == nullptr)) {
    throw ValidationError("provide exactly one of \"prior\" (shared) or \"priors\" (per project)",
                          "prior");
  }

  std::vector<GaussianBelief> priors;
  if (prior_json != nullptr) {
    priors.assign(targets.size(), parse_prior(*prior_json, "prior"));
  } else {
    if (!priors_json->is_array() || priors_json->size() != targets.size()) {
      throw ValidationError("priors must be an array with one entry per target", "priors");
    }
    for (std::size_t i = 0; i < priors_json->size(); ++i) {
      priors.push_back(parse_prior((*priors_json)[i], "priors[" + std::to_string(i) + "]"));
    }
  }

  BanditPolicy policy = BanditPolicy::kGreedy;
  if (const json* p = find(root, "policy")) {
    const std::string name = get_string(*p, "policy");
    if (name == "greedy") {
      policy = BanditPolicy::kGreedy;
    } else if (name == "round_robin") {
      policy = BanditPolicy::kRoundRobin;
    } else {
      throw ValidationError("unknown policy \"" + name + "\" (expected greedy | round_robin)",
                            "policy");
    }
  }

  const long long steps = get_integer(require(root, "", "steps"), "steps");
  if (steps < 1) throw ValidationError("steps must be >= 1", "steps");

  GridSpec grid{};
  if (const json* g = find(root, "grid")) {
    grid = parse_grid(*g, "grid");
  } else {
    // Default: the union of the per-project default grids, so every
    // project's posterior support is covered by one shared grid.
    double lo = priors[0].mean - 8.0 * priors[0].sd();
    double hi = priors[0].mean + 8.0 * priors[0].sd();
    for (const GaussianBelief& b : priors) {
      lo = std::min(lo, b.mean - 8.0 * b.sd());
      hi = std::max(hi, b.mean + 8.0 * b.sd());
    }
    grid = GridSpec{lo, hi, 4001};
  }

  try {
    BanditEnv env(base, std::move(targets), k);
    return BanditScenario{std::move(env), std::move(priors), policy, steps, grid};
  } catch (const Error& e) {
    throw ValidationError(e.what(), "bandit");
  }
}

// ---------------------------------------------------------------------------
// CSV rendering
// ---------------------------------------------------------------------------

void append_row(std::string& csv, std::initializer_list<std::string> fields) {
  bool first = true;
  for (const std::string& f : fields) {
    if (!first) csv.push_back(',');
    csv += f;
    first = false;
  }
  csv.push_back('\n');
}

std::string fmt_i(long long v) { return std::to_string(v); }
std::string fmt_u(std::size_t v) { return std::to_string(v); }

struct SummaryBuilder {
  std::string line;

  SummaryBuilder(ScenarioKind kind, std::uint64_t seed, const std::string& out_path) {
    line = scenario_kind_name(kind);
    add("seed", std::to_string(seed));
    add("out", out_path.empty() ? "-" : out_path);
  }

  void add(const std::string& key, const std::string& value) {
    line += " " + key + "=" + value;
  }
  void add(const std::string& key, double value) { add(key, format_double(value)); }
};

// ---------------------------------------------------------------------------
// Scenario runners
// ---------------------------------------------------------------------------

ScenarioResult run_update(const UpdateScenario& sc, SummaryBuilder summary) {
  std::string csv = "step,signal,mean,variance\n";
  GaussianBelief belief = sc.prior;
  for (std::size_t i = 0; i < sc.signals.size(); ++i) {
    const Signal s(sc.signals[i]);
    if (std::holds_alternative<ConstantNoise>(sc.noise)) {
      belief = update_constant(belief, s, std::get<ConstantNoise>(sc.noise).sigma_eps_sq);
    } else if (std::holds_alternative<InverseCountNoise>(sc.noise)) {
      belief = update_count(belief, s, static_cast<long long>(sc.action_value),
                            std::get<InverseCountNoise>(sc.noise).sigma_eps_sq);
    } else {
      belief = update_mass(belief, s, sc.action_value,
                           std::get<InverseMassNoise>(sc.noise).sigma_eps_sq);
    }
    append_row(csv, {fmt_u(i), format_double(s.value), format_double(belief.mean),
                     format_double(belief.variance)});
  }
  summary.add("steps", fmt_u(sc.signals.size()));
  summary.add("final_mean", belief.mean);
  summary.add("final_variance", belief.variance);
  return ScenarioResult{std::move(csv), std::move(summary.line)};
}

ScenarioResult run_grid(const GridScenario& sc, SummaryBuilder summary) {
  const StateFn f = sc.f;
  const StateVarianceFn fn = [f](double x) { return f(x); };
  const auto curves = posterior_curves(sc.prior, fn, sc.signals, sc.grid);

  std::string csv = "signal,a_star,density\n";
  csv.reserve(curves.size() * sc.grid.n_nodes * 48);
  for (const auto& [signal, grid] : curves) {
    const std::string sig = format_double(signal);
    for (std::size_t i = 0; i < grid.nodes.size(); ++i) {
      append_row(csv, {sig, format_double(grid.nodes[i]), format_double(grid.density[i])});
    }
  }
  const auto [mean, var] = posterior_moments(curves.back().second);
  summary.add("curves", fmt_u(curves.size()));
  summary.add("nodes", fmt_i(sc.grid.n_nodes));
  summary.add("last_mean", mean);
  summary.add("last_variance", var);
  return ScenarioResult{std::move(csv), std::move(summary.line)};
}

ScenarioResult run_regimes(const RegimesScenario& sc, SummaryBuilder summary) {
  const std::size_t n = sc.model.size();
  DiscreteBelief initial(sc.model.states, sc.initial_probs);
  std::vector<Signal> signals;
  signals.reserve(sc.signals.size());
  for (double s : sc.signals) signals.emplace_back(s);

  const std::vector<DiscreteBelief> beliefs = regime_filter_run(initial, signals, sc.model);

  std::string csv = "t,signal,map_state";
  for (std::size_t i = 0; i < n; ++i) csv += ",p" + std::to_string(i);
  csv.push_back('\n');
  for (std::size_t t = 0; t < beliefs.size(); ++t) {
    const std::size_t map_idx = most_probable_index(beliefs[t]);
    csv += fmt_u(t) + "," + format_double(sc.signals[t]) + "," +
           format_double(beliefs[t].states[map_idx]);
    for (std::size_t i = 0; i < n; ++i) csv += "," + format_double(beliefs[t].probs[i]);
    csv.push_back('\n');
  }

  summary.add("steps", fmt_u(beliefs.size()));
  if (!beliefs.empty()) {
    const std::size_t map_idx = most_probable_index(beliefs.back());
    summary.add("map_state", beliefs.back().states[map_idx]);
    summary.add("map_prob", beliefs.back().probs[map_idx]);
  }
  return ScenarioResult{std::move(csv), std::move(summary.line)};
}

// Renders one trap replica as CSV rows; prefix is "" or "<replica>,".
std::string trap_rows(const TrapScenario& sc, std::uint64_t seed, const std::string& prefix,
                      PopulationState* final_out) {
  const double mass0 =
      participation_mass(sc.prior, sc.config.cutoff, sc.config.risk_weight);
  const PopulationState initial(sc.prior, sc.initial_state, mass0, 0);
  const std::vector<PopulationState> traj = simulate_trap(initial, sc.config, seed);

  std::string rows;
  rows.reserve(traj.size() * 64);
  for (const PopulationState& st : traj) {
    rows += prefix + fmt_i(st.t) + "," + format_double(st.mass) + "," +
            format_double(st.belief.mean) + "," + format_double(st.belief.variance) + "," +
            format_double(st.true_state) + "\n";
  }
  if (final_out != nullptr) *final_out = traj.back();
  return rows;
}

ScenarioResult run_trap(const TrapScenario& sc, std::uint64_t seed, int replicas, bool parallel,
                        SummaryBuilder summary) {
  const bool tagged = replicas > 1;
  std::string csv = tagged ? "replica,t,mass,mean,variance,true_state\n"
                           : "t,mass,mean,variance,true_state\n";

  PopulationState final_state(sc.prior, sc.initial_state, 0.0, 0);
  std::vector<std::string> chunks(static_cast<std::size_t>(replicas));

  auto worker = [&](int r) {
    const std::string prefix = tagged ? fmt_i(r) + "," : "";
    return trap_rows(sc, derive_replica_seed(seed, static_cast<std::uint64_t>(r)), prefix,
                     r == 0 ? &final_state : nullptr);
  };

  if (parallel && replicas > 1) {
    std::vector<std::future<std::string>> futures;
    futures.reserve(static_cast<std::size_t>(replicas));
    for (int r = 0; r < replicas; ++r) {
      futures.push_back(std::async(std::launch::async, worker, r));
    }
    for (int r = 0; r < replicas; ++r) chunks[static_cast<std::size_t>(r)] = futures[static_cast<std::size_t>(r)].get();
  } else {
    for (int r = 0; r < replicas; ++r) chunks[static_cast<std::size_t>(r)] = worker(r);
  }
  for (const std::string& c : chunks) csv += c;

  summary.add("replicas", fmt_i(replicas));
  summary.add("horizon", fmt_i(sc.config.horizon));
  summary.add("final_mean", final_state.belief.mean);
  summary.add("final_variance", final_state.belief.variance);
  summary.add("final_mass", final_state.mass);
  return ScenarioResult{std::move(csv), std::move(summary.line)};
}

std::string bandit_rows(const BanditScenario& sc, std::uint64_t seed, const std::string& prefix,
                        GaussianBelief* final_out) {
  const EpisodeLog log =
      run_bandit_episode(sc.env, sc.priors, sc.steps, sc.policy, sc.grid, seed);

  std::string rows;
  rows.reserve(log.steps.size() * 96);
  for (const EpisodeStep& st : log.steps) {
    rows += prefix + fmt_i(st.step) + "," + fmt_u(st.project) + "," + format_double(st.action) +
            "," + format_double(st.output) + "," + format_double(st.signal) + "," +
            format_double(st.post_mean) + "," + format_double(st.post_variance) + "\n";
  }
  if (final_out != nullptr) *final_out = log.final_beliefs.front();
  return rows;
}

ScenarioResult run_bandit(const BanditScenario& sc, std::uint64_t seed, int replicas,
                          bool parallel, SummaryBuilder summary) {
  const bool tagged = replicas > 1;
  std::string csv = tagged ? "replica,step,project,action,output,signal,mean,variance\n"
                           : "step,project,action,output,signal,mean,variance\n";

  GaussianBelief final_belief = sc.priors.front();
  std::vector<std::string> chunks(static_cast<std::size_t>(replicas));

  auto worker = [&](int r) {
    const std::string prefix = tagged ? fmt_i(r) + "," : "";
    return bandit_rows(sc, derive_replica_seed(seed, static_cast<std::uint64_t>(r)), prefix,
                       r == 0 ? &final_belief : nullptr);
  };

  if (parallel && replicas > 1) {
    std::vector<std::future<std::string>> futures;
    futures.reserve(static_cast<std::size_t>(replicas));
    for (int r = 0; r < replicas; ++r) {
      futures.push_back(std::async(std::launch::async, worker, r));
    }
    for (int r = 0; r < replicas; ++r) chunks[static_cast<std::size_t>(r)] = futures[static_cast<std::size_t>(r)].get();
  } else {
    for (int r = 0; r < replicas; ++r) chunks[static_cast<std::size_t>(r)] = worker(r);
  }
  for (const std::string& c : chunks) csv += c;

  summary.add("replicas", fmt_i(replicas));
  summary.add("steps", fmt_i(sc.steps));
  summary.add("final_mean", final_belief.mean);
  summary.add("final_variance", final_belief.variance);
  return ScenarioResult{std::move(csv), std::move(summary.line)};
}

}  // namespace

const char* scenario_kind_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kUpdate: return "update";
    case ScenarioKind::kGrid: return "grid";
    case ScenarioKind::kRegimes: return "regimes";
    case ScenarioKind::kTrap: return "trap";
    case ScenarioKind::kBandit: return "bandit";
  }
  return "unknown";
}

std::uint64_t derive_replica_seed(std::uint64_t master_seed, std::uint64_t replica_index) {
  // splitmix64-style finalizer over master xor an odd multiple of the
  // replica index; see the README for the bit-exact contract.
  std::uint64_t z = master_seed ^ (replica_index * 0x9E3779B97F4A7C15ULL + 0xBF58476D1CE4E5B9ULL);
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing", path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("write failed", path);
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config", path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failed", path);
  return parse_config(buffer.str());
}

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what(), "byte " + std::to_string(e.byte));
  }
  if (!root.is_object()) throw ValidationError("top-level must be an object", "$");

  const std::string kind_name = get_string(require(root, "", "scenario"), "scenario");
  ScenarioKind kind;
  if (kind_name == "update") {
    kind = ScenarioKind::kUpdate;
  } else if (kind_name == "grid") {
    kind = ScenarioKind::kGrid;
  } else if (kind_name == "regimes") {
    kind = ScenarioKind::kRegimes;
  } else if (kind_name == "trap") {
    kind = ScenarioKind::kTrap;
  } else if (kind_name == "bandit") {
    kind = ScenarioKind::kBandit;
  } else {
    throw ValidationError("unknown scenario \"" + kind_name +
                              "\" (expected update | grid | regimes | trap | bandit)",
                          "scenario");
  }

  std::uint64_t seed = 0;
  if (const json* s = find(root, "seed")) seed = get_u64(*s, "seed");
  std::string output;
  if (const json* o = find(root, "output")) output = get_string(*o, "output");

  int replicas = 1;
  bool parallel = true;
  const bool stochastic = kind == ScenarioKind::kTrap || kind == ScenarioKind::kBandit;
  if (const json* r = find(root, "replicas")) {
    if (!stochastic) {
      throw ValidationError("replicas apply only to trap and bandit scenarios", "replicas");
    }
    const long long v = get_integer(*r, "replicas");
    if (v < 1 || v > 100000) throw ValidationError("replicas must be in [1, 1e5]", "replicas");
    replicas = static_cast<int>(v);
  }
  if (const json* p = find(root, "parallel")) {
    if (!stochastic) {
      throw ValidationError("parallel applies only to trap and bandit scenarios", "parallel");
    }
    parallel = get_bool(*p, "parallel");
  }

  switch (kind) {
    case ScenarioKind::kUpdate: {
      check_keys(root, "", {"scenario", "seed", "output", "prior", "noise", "signals"});
      GaussianBelief prior = parse_prior(require(root, "", "prior"), "prior");
      NoiseBlock noise = parse_noise(require(root, "", "noise"), "noise");
      std::vector<double> signals = get_number_array(require(root, "", "signals"), "signals");
      return ScenarioConfig{kind, seed, std::move(output), replicas, parallel,
                            UpdateScenario{prior, std::move(noise.spec), noise.action_value,
                                           std::move(signals)}};
    }
    case ScenarioKind::kGrid: {
      check_keys(root, "", {"scenario", "seed", "output", "prior", "function", "signals", "grid"});
      GaussianBelief prior = parse_prior(require(root, "", "prior"), "prior");
      StateFn f = parse_state_fn(require(root, "", "function"), "function");
      std::vector<double> signals =
          get_nonempty_number_array(require(root, "", "signals"), "signals");
      GridSpec grid =
          find(root, "grid") ? parse_grid(*find(root, "grid"), "grid") : default_grid(prior);
      return ScenarioConfig{kind, seed, std::move(output), replicas, parallel,
                            GridScenario{prior, std::move(f), std::move(signals), grid}};
    }
    case ScenarioKind::kRegimes: {
      check_keys(root, "", {"scenario", "seed", "output", "model", "initial_probs", "signals"});
      return ScenarioConfig{kind, seed, std::move(output), replicas, parallel,
                            parse_regimes(root)};
    }
    case ScenarioKind::kTrap: {
      check_keys(root, "",
                 {"scenario", "seed", "output", "replicas", "parallel", "prior", "initial_state",
                  "trap"});
      GaussianBelief prior = parse_prior(require(root, "", "prior"), "prior");
      TrapConfig cfg = parse_trap_block(require(root, "", "trap"), "trap");
      double initial_state = prior.mean;
      if (const json* v = find(root, "initial_state")) {
        initial_state = get_double(*v, "initial_state");
      }
      return ScenarioConfig{kind, seed, std::move(output), replicas, parallel,
                            TrapScenario{prior, initial_state, cfg}};
    }
    case ScenarioKind::kBandit: {
      check_keys(root, "",
                 {"scenario", "seed", "output", "replicas", "parallel", "prior", "priors",
                  "bandit", "policy", "steps", "grid"});
      return ScenarioConfig{kind, seed, std::move(output), replicas, parallel,
                            parse_bandit(root)};
    }
  }
  throw ValidationError("unreachable scenario kind", "scenario");
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  SummaryBuilder summary(config.kind, config.seed, config.output);
  switch (config.kind) {
    case ScenarioKind::kUpdate:
      return run_update(std::get<UpdateScenario>(config.payload), std::move(summary));
    case ScenarioKind::kGrid:
      return run_grid(std::get<GridScenario>(config.payload), std::move(summary));
    case ScenarioKind::kRegimes:
      return run_regimes(std::get<RegimesScenario>(config.payload), std::move(summary));
    case ScenarioKind::kTrap:
      return run_trap(std::get<TrapScenario>(config.payload), config.seed, config.replicas,
                      config.parallel, std::move(summary));
    case ScenarioKind::kBandit:
      return run_bandit(std::get<BanditScenario>(config.payload), config.seed, config.replicas,
                        config.parallel, std::move(summary));
  }
  throw DomainError("unreachable scenario kind", "run_scenario");
}

}  // namespace varsig
