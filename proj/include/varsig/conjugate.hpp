#pragma once

#include "varsig/belief.hpp"

namespace varsig {

// Closed-form normal-normal updates, computed in precision space. The three
// entry points share one kernel, so the reductions count=1 == constant ==
// mass=1 hold bit for bit.

// Posterior after one signal of variance sigma_eps_sq.
GaussianBelief update_constant(const GaussianBelief& prior, Signal s, double sigma_eps_sq);

// Posterior after `count` iid signals summarized by their mean s_bar; the
// signal precision scales with the count. count = 0 returns the prior.
// Fractional counts are rejected at the interface: the arithmetic would
// accept them, but a non-integer count is a caller bug.
GaussianBelief update_count(const GaussianBelief& prior, Signal s_bar, long long count,
                            double sigma_eps_sq);

// Posterior after a public signal whose precision scales with the
// participation mass m in [0, 1]. m = 0 returns the prior.
GaussianBelief update_mass(const GaussianBelief& prior, Signal s, double m, double sigma_eps_sq);

}  // namespace varsig
