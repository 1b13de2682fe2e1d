#pragma once

#include <cstddef>
#include <vector>

#include "varsig/belief.hpp"

namespace varsig {

// Probability distribution over a fixed, strictly increasing list of state
// values. Construction validates the simplex (entries >= 0, sum within
// 1e-12 of 1) so downstream code can rely on it.
struct DiscreteBelief {
  std::vector<double> states;
  std::vector<double> probs;

  DiscreteBelief(std::vector<double> states_in, std::vector<double> probs_in);
};

// Hidden-state model: per-state signal variances f(a*_i) >= 0 and a
// row-stochastic transition matrix (transition[i][j] = P(j | i)).
struct RegimeModel {
  std::vector<double> states;
  std::vector<double> variances;
  std::vector<std::vector<double>> transition;

  RegimeModel(std::vector<double> states_in, std::vector<double> variances_in,
              std::vector<std::vector<double>> transition_in);

  std::size_t size() const { return states.size(); }

  // Identity transition (static regimes).
  static RegimeModel static_regimes(std::vector<double> states_in,
                                    std::vector<double> variances_in);
};

// Bayes update: probs[i] proportional to prior.probs[i] * N(s; states[i],
// variances[i]). Zero-variance states use an exact-match indicator (the
// vanishing-variance limit). Throws ZeroEvidence when every term is zero.
DiscreteBelief regime_update(const DiscreteBelief& prior, Signal s, const RegimeModel& model);

// One-step Markov propagation: probs' = probs^T * transition.
DiscreteBelief regime_predict(const DiscreteBelief& belief, const RegimeModel& model);

// Predict-then-update filter; element t is the posterior after signal t.
// ZeroEvidence is rethrown with the offending step index in `where`.
std::vector<DiscreteBelief> regime_filter_run(const DiscreteBelief& initial,
                                              std::span<const Signal> signals,
                                              const RegimeModel& model);

// Index of the largest probability; ties break toward the lowest index.
std::size_t most_probable_index(const DiscreteBelief& belief);

}  // namespace varsig
