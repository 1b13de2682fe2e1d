#include "varsig/bandit.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "varsig/errors.hpp"
#include "varsig/rng.hpp"

namespace varsig {

namespace {

// Moment-matched beliefs never collapse below this variance, so sequential
// updates keep GaussianBelief's positivity invariant.
constexpr double kMinBeliefVariance = 1e-12;

// Variance assigned when a DegeneratePosterior identifies the state: all
// mass at one point, represented as a near-delta Gaussian.
constexpr double kIdentifiedVariance = 1e-8;

}  // namespace

BanditEnv::BanditEnv(double base_output_in, std::vector<double> targets_in, double k_in)
    : base_output(base_output_in), targets(std::move(targets_in)), k(k_in) {
  if (targets.empty()) throw EmptyInput("bandit needs at least one project", "BanditEnv");
  for (double t : targets) {
    if (!std::isfinite(t)) throw DomainError("project targets must be finite", "BanditEnv");
  }
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw DomainError("tracking coefficient k must be positive and finite", "BanditEnv");
  }
  if (!std::isfinite(base_output)) {
    throw DomainError("base output must be finite", "BanditEnv");
  }
}

double tracking_variance(double k, double action, double state) {
  if (!(k > 0.0)) throw DomainError("tracking coefficient k must be > 0", "tracking_variance");
  const double d = action - state;
  return k * d * d;
}

Signal bandit_output(const BanditEnv& env, std::size_t j, double action) {
  if (j >= env.targets.size()) {
    throw IndexError("project " + std::to_string(j) + " out of range (have " +
                         std::to_string(env.targets.size()) + ")",
                     "bandit_output");
  }
  const double miss = action - env.targets[j];
  return Signal(env.base_output - miss * miss);
}

PosteriorGrid tracking_update(const GaussianBelief& prior, double action, Signal s, double k,
                              const GridSpec& grid) {
  if (!(k > 0.0)) throw DomainError("tracking coefficient k must be > 0", "tracking_update");
  const StateVarianceFn f = [k, action](double astar) {
    const double d = action - astar;
    return k * d * d;
  };
  return grid_posterior(prior, s, f, grid);
}

EpisodeLog run_bandit_episode(const BanditEnv& env, std::vector<GaussianBelief> priors,
                              long long steps, BanditPolicy policy, const GridSpec& grid,
                              std::uint64_t seed) {
  if (priors.size() != env.n_projects()) {
    throw DomainError("need exactly one prior per project", "run_bandit_episode");
  }
  if (steps < 1) throw DomainError("episode needs at least one step", "run_bandit_episode");
  grid.validate();

  Rng rng(seed);
  EpisodeLog log;
  log.steps.reserve(static_cast<std::size_t>(steps));

  for (long long t = 0; t < steps; ++t) {
    std::size_t j = 0;
    if (policy == BanditPolicy::kRoundRobin) {
      j = static_cast<std::size_t>(t) % env.n_projects();
    } else {
      // Greedy: play the project whose posterior variance is smallest (the
      // best-understood project); ties break toward the lowest index.
      for (std::size_t i = 1; i < priors.size(); ++i) {
        if (priors[i].variance < priors[j].variance) j = i;
      }
    }

    const double action = priors[j].mean;
    const double output = bandit_output(env, j, action).value;

    // Tracking channel: centered on the true target with variance
    // k * (action - target)^2. Congruent actions observe the target itself.
    const Signal s =
        sample_signal(env.targets[j], Action(action), VarianceSpec(TrackingErrorNoise{env.k}), rng);

    GaussianBelief updated = priors[j];
    try {
      const PosteriorGrid post = tracking_update(priors[j], action, s, env.k, grid);
      const auto [mean, var] = posterior_moments(post);
      updated = GaussianBelief(mean, std::max(var, kMinBeliefVariance));
    } catch (const DegeneratePosterior&) {
      // Signal landed on the action: zero-variance congruence identifies
      // the state at the observed value.
      updated = GaussianBelief(s.value, kIdentifiedVariance);
    } catch (const Error& e) {
      throw DomainError(std::string(e.what()), "step " + std::to_string(t));
    }
    priors[j] = updated;

    log.steps.push_back(EpisodeStep{t, j, action, output, s.value, updated.mean,
                                    updated.variance});
  }

  log.final_beliefs = std::move(priors);
  return log;
}

}  // namespace varsig
