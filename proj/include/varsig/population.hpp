#pragma once

#include <cstdint>
#include <vector>

#include "varsig/belief.hpp"
#include "varsig/rng.hpp"

namespace varsig {

// One period of the social-learning economy: the public posterior over the
// hidden state, the realized state, and the participation mass that
// produced this period's data.
struct PopulationState {
  GaussianBelief belief;
  double true_state = 0.0;
  double mass = 0.0;  // in [0,1]
  long long t = 0;

  PopulationState(GaussianBelief belief_in, double true_state_in, double mass_in, long long t_in);
};

// Parameters of the uncertainty-trap simulation. innovation_var defaults to
// 0: pure shrinkage, matching the belief recursion exactly; a positive
// value gives the truth a stationary distribution.
struct TrapConfig {
  double rho;             // AR(1) coefficient, strictly inside (0,1)
  double sigma_eps_sq;    // base signal variance (> 0)
  double innovation_var;  // state innovation variance (>= 0)
  double cutoff;          // lowest idiosyncratic participation cutoff
  double risk_weight;     // uncertainty penalty theta (>= 0)
  long long horizon;      // periods to simulate (>= 1)

  void validate() const;  // throws DomainError
};

// Per-agent next-period forecasts against the realized state.
struct ForecastRecord {
  std::vector<double> forecasts;
  double realized = 0.0;
};

// Mass of agents choosing the data-generating action. Agent cutoffs are
// uniform on [cutoff, cutoff + 1]; agent i participates iff
// mean - risk_weight * sd >= c_i, so the mass is the clamped overshoot.
double participation_mass(const GaussianBelief& belief, double cutoff, double risk_weight);

// Predictive variance of the next-period posterior mean given current
// posterior variance, base signal variance, and participation mass:
// rho^2 * (sigma_hat_sq - 1 / (1/sigma_hat_sq + m/sigma_eps_sq)).
double trap_dispersion(double sigma_hat_sq, double sigma_eps_sq, double m, double rho);

// One period: participation -> public signal (precision m/sigma_eps_sq)
// -> Bayes update -> AR(1) shrinkage of belief and truth.
PopulationState trap_step(const PopulationState& state, const TrapConfig& config, Rng& rng);

// Full trajectory of horizon steps; element 0 is the initial state, so the
// result has horizon + 1 entries. Deterministic given the seed.
std::vector<PopulationState> simulate_trap(const PopulationState& initial,
                                           const TrapConfig& config, std::uint64_t seed);

// Mean squared forecast error, averaged within each record and then across
// records. Throws EmptyInput on an empty list or a record with no agents.
double forecast_error_variance(std::span<const ForecastRecord> records);

}  // namespace varsig
