#pragma once

#include <cstdint>
#include <vector>

#include "varsig/belief.hpp"
#include "varsig/numeric_posterior.hpp"

namespace varsig {

// Multi-project environment: each project j pays base_output minus the
// squared miss against its hidden target, and the inference channel carries
// tracking-error noise k * (action - target)^2.
struct BanditEnv {
  double base_output;           // the constant A
  std::vector<double> targets;  // hidden per-project targets a*_j
  double k;                     // tracking-error coefficient (> 0)

  BanditEnv(double base_output_in, std::vector<double> targets_in, double k_in);

  std::size_t n_projects() const { return targets.size(); }
};

enum class BanditPolicy {
  kGreedy,     // play the project with the smallest posterior variance
  kRoundRobin  // cycle through projects in index order
};

struct EpisodeStep {
  long long step = 0;
  std::size_t project = 0;
  double action = 0.0;
  double output = 0.0;       // deterministic payoff A - (a - a*_j)^2
  double signal = 0.0;       // tracking-channel draw the update consumed
  double post_mean = 0.0;    // moment-matched belief after the update
  double post_variance = 0.0;
};

struct EpisodeLog {
  std::vector<EpisodeStep> steps;
  std::vector<GaussianBelief> final_beliefs;  // one per project
};

// Signal variance of the tracking channel: k * (action - state)^2. Zero at
// congruence: acting exactly on the truth yields a perfectly precise signal.
double tracking_variance(double k, double action, double state);

// Deterministic project output A - (action - targets[j])^2. Throws
// IndexError when j is out of range.
Signal bandit_output(const BanditEnv& env, std::size_t j, double action);

// Non-conjugate posterior for the tracking channel: grid_posterior with the
// action-indexed state function f_a(a*) = k * (action - a*)^2. Propagates
// DegeneratePosterior when the signal lands on the action (state
// identified; callers collapse the belief there).
PosteriorGrid tracking_update(const GaussianBelief& prior, double action, Signal s, double k,
                              const GridSpec& grid);

// Runs `steps` rounds: the policy picks a project, the agent plays its
// current posterior mean, observes the output and a tracking-channel
// signal, and moment-matches the grid posterior back to a Gaussian.
// Deterministic given the seed.
EpisodeLog run_bandit_episode(const BanditEnv& env, std::vector<GaussianBelief> priors,
                              long long steps, BanditPolicy policy, const GridSpec& grid,
                              std::uint64_t seed);

}  // namespace varsig
