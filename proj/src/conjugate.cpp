#include "varsig/conjugate.hpp"

#include <cmath>

#include "varsig/errors.hpp"

namespace varsig {

namespace {

// Precision-space kernel: adding precisions avoids catastrophic cancellation
// when variances get very small.
GaussianBelief update_with_precision(const GaussianBelief& prior, double s,
                                     double signal_precision) {
  const double prior_precision = 1.0 / prior.variance;
  const double post_precision = prior_precision + signal_precision;
  const double post_mean = (prior_precision * prior.mean + signal_precision * s) / post_precision;
  return GaussianBelief(post_mean, 1.0 / post_precision);
}

void require_positive_variance(double sigma_eps_sq, const char* who) {
  if (std::isnan(sigma_eps_sq) || sigma_eps_sq <= 0.0)
    throw DomainError(std::string(who) + ": sigma_eps_sq must be > 0");
}

}  // namespace

GaussianBelief update_constant(const GaussianBelief& prior, Signal s, double sigma_eps_sq) {
  require_positive_variance(sigma_eps_sq, "update_constant");
  return update_with_precision(prior, s.value, 1.0 / sigma_eps_sq);
}

GaussianBelief update_count(const GaussianBelief& prior, Signal s_bar, long long count,
                            double sigma_eps_sq) {
  if (count < 0) throw DomainError("update_count: count must be >= 0");
  require_positive_variance(sigma_eps_sq, "update_count");
  if (count == 0) return prior;
  return update_with_precision(prior, s_bar.value, static_cast<double>(count) / sigma_eps_sq);
}

GaussianBelief update_mass(const GaussianBelief& prior, Signal s, double m, double sigma_eps_sq) {
  if (std::isnan(m) || m < 0.0 || m > 1.0)
    throw DomainError("update_mass: mass must lie in [0, 1]");
  require_positive_variance(sigma_eps_sq, "update_mass");
  if (m == 0.0) return prior;
  return update_with_precision(prior, s.value, m / sigma_eps_sq);
}

}  // namespace varsig
