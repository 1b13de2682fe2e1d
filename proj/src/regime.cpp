#include "varsig/regime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "varsig/errors.hpp"

namespace varsig {

namespace {

constexpr double kSimplexTol = 1e-12;
constexpr double kLogTwoPi = 1.8378770664093454835606594728112;

void check_simplex(const std::vector<double>& probs, const char* where) {
  if (probs.empty()) throw EmptyInput("probability vector is empty", where);
  double sum = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) {  // catches negatives and NaN
      throw DomainError("probability " + std::to_string(p) + " is negative or NaN", where);
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSimplexTol) {
    throw DomainError("probabilities sum to " + std::to_string(sum) + ", not 1", where);
  }
}

void check_states(const std::vector<double>& states, const char* where) {
  if (states.empty()) throw EmptyInput("state list is empty", where);
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (!std::isfinite(states[i])) throw DomainError("state values must be finite", where);
    if (i > 0 && !(states[i - 1] < states[i])) {
      throw DomainError("states must be strictly increasing; violated at index " +
                            std::to_string(i),
                        where);
    }
  }
}

void check_same_states(const std::vector<double>& a, const std::vector<double>& b,
                       const char* where) {
  if (a != b) throw DomainError("belief and model disagree on the state list", where);
}

// Log-likelihood of s under state i, with the indicator convention for
// zero variance. Returns -inf for impossible observations.
double log_likelihood(double s, double state, double variance) {
  if (variance == 0.0) {
    return s == state ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  const double resid = s - state;
  return -0.5 * (kLogTwoPi + std::log(variance)) - resid * resid / (2.0 * variance);
}

}  // namespace

DiscreteBelief::DiscreteBelief(std::vector<double> states_in, std::vector<double> probs_in)
    : states(std::move(states_in)), probs(std::move(probs_in)) {
  check_states(states, "DiscreteBelief");
  if (probs.size() != states.size()) {
    throw DomainError("states and probs must have the same length", "DiscreteBelief");
  }
  check_simplex(probs, "DiscreteBelief");
}

RegimeModel::RegimeModel(std::vector<double> states_in, std::vector<double> variances_in,
                         std::vector<std::vector<double>> transition_in)
    : states(std::move(states_in)),
      variances(std::move(variances_in)),
      transition(std::move(transition_in)) {
  check_states(states, "RegimeModel");
  if (variances.size() != states.size()) {
    throw DomainError("states and variances must have the same length", "RegimeModel");
  }
  for (double v : variances) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw NegativeVariance("regime variance " + std::to_string(v) + " is not finite and >= 0",
                             "RegimeModel");
    }
  }
  if (transition.size() != states.size()) {
    throw DomainError("transition matrix must have one row per state", "RegimeModel");
  }
  for (std::size_t i = 0; i < transition.size(); ++i) {
    if (transition[i].size() != states.size()) {
      throw DomainError("transition row " + std::to_string(i) + " has wrong length",
                        "RegimeModel");
    }
    check_simplex(transition[i], "RegimeModel");
  }
}

RegimeModel RegimeModel::static_regimes(std::vector<double> states_in,
                                        std::vector<double> variances_in) {
  const std::size_t n = states_in.size();
  std::vector<std::vector<double>> identity(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) identity[i][i] = 1.0;
  return RegimeModel(std::move(states_in), std::move(variances_in), std::move(identity));
}

DiscreteBelief regime_update(const DiscreteBelief& prior, Signal s, const RegimeModel& model) {
  check_same_states(prior.states, model.states, "regime_update");
  const std::size_t n = model.size();

  // Work in log space with max-subtraction so tail signals do not underflow
  // every positive-probability term at once.
  std::vector<double> log_post(n, -std::numeric_limits<double>::infinity());
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (prior.probs[i] <= 0.0) continue;
    const double ll = log_likelihood(s.value, model.states[i], model.variances[i]);
    if (ll == -std::numeric_limits<double>::infinity()) continue;
    log_post[i] = std::log(prior.probs[i]) + ll;
    max_log = std::max(max_log, log_post[i]);
  }
  if (max_log == -std::numeric_limits<double>::infinity()) {
    throw ZeroEvidence("signal " + std::to_string(s.value) + " has zero likelihood in every regime",
                       "regime_update");
  }

  std::vector<double> post(n, 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (log_post[i] == -std::numeric_limits<double>::infinity()) continue;
    post[i] = std::exp(log_post[i] - max_log);
    total += post[i];
  }
  for (double& p : post) p /= total;
  return DiscreteBelief(prior.states, std::move(post));
}

DiscreteBelief regime_predict(const DiscreteBelief& belief, const RegimeModel& model) {
  check_same_states(belief.states, model.states, "regime_predict");
  const std::size_t n = model.size();
  std::vector<double> next(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (belief.probs[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) next[j] += belief.probs[i] * model.transition[i][j];
  }
  // Renormalize away accumulated rounding so the simplex invariant survives
  // long filter runs.
  double total = 0.0;
  for (double p : next) total += p;
  for (double& p : next) p /= total;
  return DiscreteBelief(belief.states, std::move(next));
}

std::vector<DiscreteBelief> regime_filter_run(const DiscreteBelief& initial,
                                              std::span<const Signal> signals,
                                              const RegimeModel& model) {
  std::vector<DiscreteBelief> out;
  out.reserve(signals.size());
  const DiscreteBelief* current = &initial;
  for (std::size_t t = 0; t < signals.size(); ++t) {
    DiscreteBelief predicted = regime_predict(*current, model);
    try {
      out.push_back(regime_update(predicted, signals[t], model));
    } catch (const ZeroEvidence& e) {
      throw ZeroEvidence(e.what(), "step " + std::to_string(t));
    }
    current = &out.back();
  }
  return out;
}

std::size_t most_probable_index(const DiscreteBelief& belief) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < belief.probs.size(); ++i) {
    if (belief.probs[i] > belief.probs[best]) best = i;
  }
  return best;
}

}  // namespace varsig
