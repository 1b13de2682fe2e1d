#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "varsig/belief.hpp"

namespace varsig {

// Variance floor applied to state-dependent noise functions before the
// density term f^{-1/2} is evaluated. f(a*) = a*^2 vanishes at the origin,
// which would make that term singular; flooring keeps every node finite and
// the floored-mass check below detects the genuinely non-integrable case.
inline constexpr double kVarianceFloor = 1e-12;

// A grid posterior is declared degenerate when more than this fraction of
// its mass sits on floored nodes.
inline constexpr double kFlooredMassLimit = 0.99;

// Uniform evaluation grid; n_nodes is odd so the midpoint is a node.
struct GridSpec {
  double lo;
  double hi;
  int n_nodes;

  void validate() const;  // throws DomainError
  double step() const { return (hi - lo) / static_cast<double>(n_nodes - 1); }
};

// Default grid for a given prior: [mean - 8 sd, mean + 8 sd] with 4001
// nodes. Covers all but ~1e-14 of prior mass; scenarios keep signals within
// a few prior sd, so the likelihood never pushes mass outside.
GridSpec default_grid(const GaussianBelief& prior);

// Discretized non-conjugate posterior. Densities are normalized so the
// trapezoid integral over the nodes is 1.
struct PosteriorGrid {
  std::vector<double> nodes;
  std::vector<double> log_unnormalized;
  std::vector<double> density;
  double step = 0.0;
  double log_evidence = 0.0;
};

using StateVarianceFn = std::function<double(double)>;

// Log of the unnormalized posterior of a state-dependent-noise model at a
// single point:
//   -1/2 log(max(f(a), floor)) - (s - a)^2 / (2 max(f(a), floor))
//   - (a - mean)^2 / (2 variance).
// Throws NegativeVariance when f(a) < 0.
double log_unnormalized_posterior(const GaussianBelief& prior, Signal s, const StateVarianceFn& f,
                                  double astar);

// Tabulates the posterior on the grid and normalizes with a log-sum-exp
// stabilized trapezoid rule. Throws DegeneratePosterior when floored nodes
// carry more than kFlooredMassLimit of the mass.
PosteriorGrid grid_posterior(const GaussianBelief& prior, Signal s, const StateVarianceFn& f,
                             const GridSpec& grid);

// Trapezoid first moment and second central moment of the density.
std::pair<double, double> posterior_moments(const PosteriorGrid& grid);

struct MhResult {
  std::vector<double> samples;      // post burn-in
  double acceptance_rate = 0.0;     // over the whole chain
};

// Random-walk Metropolis chain targeting exp(log_unnormalized_posterior).
// Starts at the prior mean, runs n_samples iterations and discards the
// first 20% as burn-in. Deterministic given the seed.
MhResult mh_sample(const GaussianBelief& prior, Signal s, const StateVarianceFn& f,
                   int n_samples, double proposal_scale, std::uint64_t seed);

// Default proposal scale for a given prior, exposed for configs. One prior
// sd keeps the realized acceptance rate in the 0.3-0.6 band on the shipped
// scenario shapes.
double default_proposal_scale(const GaussianBelief& prior);

// One normalized posterior curve per signal value, ready for CSV emission.
// A degenerate curve aborts the family with the offending signal tagged in
// the error.
std::vector<std::pair<double, PosteriorGrid>> posterior_curves(const GaussianBelief& prior,
                                                               const StateVarianceFn& f,
                                                               std::span<const double> signals,
                                                               const GridSpec& grid);

}  // namespace varsig
