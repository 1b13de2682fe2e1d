#include "varsig/numeric.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace varsig {

double log_sum_exp(std::span<const double> vals) {
  if (vals.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(vals.begin(), vals.end());
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (const double v : vals) acc += std::exp(v - m);
  return m + std::log(acc);
}

double log_sum_exp_weighted(std::span<const double> logs, std::span<const double> weights) {
  assert(logs.size() == weights.size());
  if (logs.empty()) return -std::numeric_limits<double>::infinity();
  const double m = *std::max_element(logs.begin(), logs.end());
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) acc += weights[i] * std::exp(logs[i] - m);
  return m + std::log(acc);
}

std::vector<double> trapezoid_weights(std::size_t n, double step) {
  std::vector<double> w(n, step);
  if (!w.empty()) {
    w.front() = 0.5 * step;
    w.back() = 0.5 * step;
  }
  return w;
}

}  // namespace varsig
