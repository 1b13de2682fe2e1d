#pragma once

#include <span>
#include <vector>

namespace varsig {

// log(sum_i exp(vals[i])) with max-subtraction. Empty input returns -inf.
double log_sum_exp(std::span<const double> vals);

// log(sum_i weights[i] * exp(logs[i])); weights must be nonnegative.
double log_sum_exp_weighted(std::span<const double> logs, std::span<const double> weights);

// Trapezoid-rule weights for a uniform grid of n nodes with spacing `step`:
// step/2 at the ends, step inside.
std::vector<double> trapezoid_weights(std::size_t n, double step);

}  // namespace varsig
