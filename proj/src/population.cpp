#include "varsig/population.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "varsig/conjugate.hpp"
#include "varsig/errors.hpp"

namespace varsig {

PopulationState::PopulationState(GaussianBelief belief_in, double true_state_in, double mass_in,
                                 long long t_in)
    : belief(belief_in), true_state(true_state_in), mass(mass_in), t(t_in) {
  if (!(mass >= 0.0 && mass <= 1.0)) {
    throw DomainError("mass " + std::to_string(mass) + " outside [0, 1]", "PopulationState");
  }
  if (!std::isfinite(true_state)) {
    throw DomainError("true state must be finite", "PopulationState");
  }
  if (t < 0) throw DomainError("period index must be >= 0", "PopulationState");
}

void TrapConfig::validate() const {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw DomainError("rho " + std::to_string(rho) + " outside (0, 1)", "TrapConfig");
  }
  if (!(sigma_eps_sq > 0.0) || !std::isfinite(sigma_eps_sq)) {
    throw DomainError("sigma_eps_sq must be positive and finite", "TrapConfig");
  }
  if (!(innovation_var >= 0.0) || !std::isfinite(innovation_var)) {
    throw DomainError("innovation_var must be >= 0 and finite", "TrapConfig");
  }
  if (!std::isfinite(cutoff)) throw DomainError("cutoff must be finite", "TrapConfig");
  if (!(risk_weight >= 0.0) || !std::isfinite(risk_weight)) {
    throw DomainError("risk_weight must be >= 0 and finite", "TrapConfig");
  }
  if (horizon < 1) throw DomainError("horizon must be >= 1", "TrapConfig");
}

double participation_mass(const GaussianBelief& belief, double cutoff, double risk_weight) {
  if (risk_weight < 0.0) {
    throw DomainError("risk_weight must be >= 0", "participation_mass");
  }
  const double certainty_adjusted = belief.mean - risk_weight * belief.sd();
  return std::clamp(certainty_adjusted - cutoff, 0.0, 1.0);
}

double trap_dispersion(double sigma_hat_sq, double sigma_eps_sq, double m, double rho) {
  if (!(sigma_hat_sq > 0.0)) throw DomainError("sigma_hat_sq must be > 0", "trap_dispersion");
  if (!(sigma_eps_sq > 0.0)) throw DomainError("sigma_eps_sq must be > 0", "trap_dispersion");
  if (!(m >= 0.0 && m <= 1.0)) throw DomainError("mass outside [0, 1]", "trap_dispersion");
  // m = 0 must return exactly 0; the general expression only reaches it up
  // to a rounding residual of 1/(1/x).
  if (m == 0.0) return 0.0;
  const double updated_var = 1.0 / (1.0 / sigma_hat_sq + m / sigma_eps_sq);
  return rho * rho * (sigma_hat_sq - updated_var);
}

PopulationState trap_step(const PopulationState& state, const TrapConfig& config, Rng& rng) {
  config.validate();
  const double m = participation_mass(state.belief, config.cutoff, config.risk_weight);

  // Public signal: mean of the participants' observations of a*_t, with
  // variance sigma_eps_sq / m. Zero mass generates no data at all.
  GaussianBelief interim = state.belief;
  if (m > 0.0) {
    const double s = state.true_state + std::sqrt(config.sigma_eps_sq / m) * standard_normal(rng);
    interim = update_mass(state.belief, Signal(s), m, config.sigma_eps_sq);
  }

  const GaussianBelief next_belief(config.rho * interim.mean,
                                   config.rho * config.rho * interim.variance +
                                       config.innovation_var);

  double next_truth = config.rho * state.true_state;
  if (config.innovation_var > 0.0) {
    next_truth += std::sqrt(config.innovation_var) * standard_normal(rng);
  }

  // The stored mass is the one the next belief implies, so every state on a
  // trajectory satisfies mass == participation_mass(belief).
  const double next_mass = participation_mass(next_belief, config.cutoff, config.risk_weight);
  return PopulationState(next_belief, next_truth, next_mass, state.t + 1);
}

std::vector<PopulationState> simulate_trap(const PopulationState& initial,
                                           const TrapConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  std::vector<PopulationState> trajectory;
  trajectory.reserve(static_cast<std::size_t>(config.horizon) + 1);
  trajectory.push_back(initial);
  for (long long t = 0; t < config.horizon; ++t) {
    trajectory.push_back(trap_step(trajectory.back(), config, rng));
  }
  return trajectory;
}

double forecast_error_variance(std::span<const ForecastRecord> records) {
  if (records.empty()) throw EmptyInput("no forecast records", "forecast_error_variance");
  double total = 0.0;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const ForecastRecord& rec = records[r];
    if (rec.forecasts.empty()) {
      throw EmptyInput("record " + std::to_string(r) + " has no forecasts",
                       "forecast_error_variance");
    }
    double sum_sq = 0.0;
    for (double f : rec.forecasts) {
      const double e = f - rec.realized;
      sum_sq += e * e;
    }
    total += sum_sq / static_cast<double>(rec.forecasts.size());
  }
  return total / static_cast<double>(records.size());
}

}  // namespace varsig
