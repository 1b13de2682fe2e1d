#include "varsig/numeric_posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "varsig/errors.hpp"
#include "varsig/numeric.hpp"
#include "varsig/rng.hpp"

namespace varsig {

namespace {

double checked_state_variance(const StateVarianceFn& f, double astar, const char* where) {
  const double v = f(astar);
  if (std::isnan(v)) {
    throw DomainError("state variance function returned NaN at a*=" + std::to_string(astar),
                      where);
  }
  if (v < 0.0) {
    throw NegativeVariance("state variance function returned " + std::to_string(v) +
                               " at a*=" + std::to_string(astar),
                           where);
  }
  return v;
}

double log_kernel(const GaussianBelief& prior, double s, double noise_var, double astar) {
  const double v = std::max(noise_var, kVarianceFloor);
  const double resid = s - astar;
  const double dev = astar - prior.mean;
  return -0.5 * std::log(v) - resid * resid / (2.0 * v) - dev * dev / (2.0 * prior.variance);
}

}  // namespace

void GridSpec::validate() const {
  if (!(lo < hi)) {
    throw DomainError("grid requires lo < hi, got [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]",
                      "GridSpec");
  }
  if (n_nodes < 3) {
    throw DomainError("grid requires at least 3 nodes, got " + std::to_string(n_nodes),
                      "GridSpec");
  }
  if (n_nodes % 2 == 0) {
    throw DomainError("grid requires an odd node count (midpoint must be a node), got " +
                          std::to_string(n_nodes),
                      "GridSpec");
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw DomainError("grid bounds must be finite", "GridSpec");
  }
}

GridSpec default_grid(const GaussianBelief& prior) {
  const double sd = prior.sd();
  return GridSpec{prior.mean - 8.0 * sd, prior.mean + 8.0 * sd, 4001};
}

double log_unnormalized_posterior(const GaussianBelief& prior, Signal s, const StateVarianceFn& f,
                                  double astar) {
  const double v = checked_state_variance(f, astar, "log_unnormalized_posterior");
  return log_kernel(prior, s.value, v, astar);
}

PosteriorGrid grid_posterior(const GaussianBelief& prior, Signal s, const StateVarianceFn& f,
                             const GridSpec& grid) {
  grid.validate();
  const int n = grid.n_nodes;
  const double h = grid.step();

  PosteriorGrid out;
  out.step = h;
  out.nodes.resize(static_cast<std::size_t>(n));
  out.log_unnormalized.resize(static_cast<std::size_t>(n));
  std::vector<bool> floored(static_cast<std::size_t>(n), false);

  for (int i = 0; i < n; ++i) {
    // hi is hit exactly so the endpoint weight applies to the true boundary.
    const double a = (i == n - 1) ? grid.hi : grid.lo + h * static_cast<double>(i);
    const double v = checked_state_variance(f, a, "grid_posterior");
    floored[static_cast<std::size_t>(i)] = v < kVarianceFloor;
    out.nodes[static_cast<std::size_t>(i)] = a;
    out.log_unnormalized[static_cast<std::size_t>(i)] = log_kernel(prior, s.value, v, a);
  }

  // Trapezoid normalization in log space: log Z = LSE(log p_i + log w_i).
  const std::vector<double> weights = trapezoid_weights(n, h);
  out.log_evidence = log_sum_exp_weighted(out.log_unnormalized, weights);
  if (!std::isfinite(out.log_evidence)) {
    throw ZeroEvidence("posterior mass underflowed on the grid", "grid_posterior");
  }

  out.density.resize(static_cast<std::size_t>(n));
  double floored_mass = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    out.density[k] = std::exp(out.log_unnormalized[k] - out.log_evidence);
    if (floored[k]) floored_mass += out.density[k] * weights[static_cast<std::size_t>(i)];
  }

  if (floored_mass > kFlooredMassLimit) {
    throw DegeneratePosterior("floored nodes carry " + std::to_string(floored_mass) +
                                  " of posterior mass",
                              "grid_posterior");
  }
  return out;
}

std::pair<double, double> posterior_moments(const PosteriorGrid& grid) {
  const std::size_t n = grid.nodes.size();
  if (n < 3) throw EmptyInput("posterior grid has no usable nodes", "posterior_moments");
  const std::vector<double> weights = trapezoid_weights(static_cast<int>(n), grid.step);

  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += weights[i] * grid.density[i] * grid.nodes[i];
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = grid.nodes[i] - mean;
    var += weights[i] * grid.density[i] * d * d;
  }
  return {mean, var};
}

MhResult mh_sample(const GaussianBelief& prior, Signal s, const StateVarianceFn& f, int n_samples,
                   double proposal_scale, std::uint64_t seed) {
  if (n_samples < 1) {
    throw DomainError("mh_sample needs at least one iteration, got " + std::to_string(n_samples),
                      "mh_sample");
  }
  if (!(proposal_scale > 0.0) || !std::isfinite(proposal_scale)) {
    throw DomainError("proposal scale must be positive and finite", "mh_sample");
  }

  Rng rng(seed);
  double current = prior.mean;
  double current_log = log_unnormalized_posterior(prior, s, f, current);

  const int burn = n_samples / 5;  // first 20% discarded
  MhResult out;
  out.samples.reserve(static_cast<std::size_t>(n_samples - burn));

  long long accepted = 0;
  for (int i = 0; i < n_samples; ++i) {
    const double proposal = current + proposal_scale * standard_normal(rng);
    const double proposal_log = log_unnormalized_posterior(prior, s, f, proposal);
    // log u <= log alpha accept; uniform01 can return 0, so guard the log.
    const double u = uniform01(rng);
    if (proposal_log - current_log >= 0.0 || (u > 0.0 && std::log(u) < proposal_log - current_log)) {
      current = proposal;
      current_log = proposal_log;
      ++accepted;
    }
    if (i >= burn) out.samples.push_back(current);
  }
  out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(n_samples);
  return out;
}

double default_proposal_scale(const GaussianBelief& prior) { return prior.sd(); }

std::vector<std::pair<double, PosteriorGrid>> posterior_curves(const GaussianBelief& prior,
                                                               const StateVarianceFn& f,
                                                               std::span<const double> signals,
                                                               const GridSpec& grid) {
  if (signals.empty()) throw EmptyInput("posterior_curves needs at least one signal", "posterior_curves");
  std::vector<std::pair<double, PosteriorGrid>> out;
  out.reserve(signals.size());
  for (double sv : signals) {
    try {
      out.emplace_back(sv, grid_posterior(prior, Signal(sv), f, grid));
    } catch (const DegeneratePosterior& e) {
      throw DegeneratePosterior("signal " + std::to_string(sv) + ": " + e.what(),
                                "posterior_curves");
    }
  }
  return out;
}

}  // namespace varsig
