#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "varsig/belief.hpp"
#include "varsig/conjugate.hpp"
#include "varsig/errors.hpp"
#include "varsig/numeric_posterior.hpp"

using namespace varsig;

namespace {

double trapezoid_mass(const PosteriorGrid& g) {
  double total = 0.0;
  for (std::size_t i = 0; i < g.density.size(); ++i) {
    const double w = (i == 0 || i + 1 == g.density.size()) ? 0.5 : 1.0;
    total += w * g.density[i] * g.step;
  }
  return total;
}

const StateVarianceFn kSquare = [](double x) { return x * x; };
const StateVarianceFn kSquarePlusOne = [](double x) { return x * x + 1.0; };
const StateVarianceFn kUnit = [](double) { return 1.0; };

}  // namespace

TEST_CASE("GridSpec validation") {
  CHECK_NOTHROW((GridSpec{-1.0, 1.0, 3}).validate());
  CHECK_THROWS_AS((GridSpec{1.0, -1.0, 11}).validate(), DomainError);   // lo >= hi
  CHECK_THROWS_AS((GridSpec{-1.0, 1.0, 1}).validate(), DomainError);    // too few nodes
  CHECK_THROWS_AS((GridSpec{-1.0, 1.0, 4000}).validate(), DomainError); // even count
  const GridSpec d = default_grid(GaussianBelief(1.0, 4.0));
  CHECK(d.lo == doctest::Approx(-15.0));
  CHECK(d.hi == doctest::Approx(17.0));
  CHECK(d.n_nodes == 4001);
  CHECK_NOTHROW(d.validate());
}

TEST_CASE("log_unnormalized_posterior matches hand evaluation") {
  const GaussianBelief prior(0.0, 1.0);
  CHECK(log_unnormalized_posterior(prior, Signal(0.0), kUnit, 0.0) == doctest::Approx(0.0));
  CHECK(log_unnormalized_posterior(prior, Signal(0.0), kUnit, 1.0) == doctest::Approx(-1.0));
  CHECK(log_unnormalized_posterior(prior, Signal(2.0), kSquare, 2.0) ==
        doctest::Approx(-0.5 * std::log(4.0) - 2.0).epsilon(1e-12));
  const StateVarianceFn negative = [](double) { return -0.5; };
  CHECK_THROWS_AS(log_unnormalized_posterior(prior, Signal(0.0), negative, 0.0),
                  NegativeVariance);
}

TEST_CASE("grid_posterior reproduces the conjugate closed form for constant noise") {
  const GaussianBelief prior(0.0, 1.0);
  const GridSpec grid{-10.0, 10.0, 4001};
  oracle::SplitMix rng(5);
  for (int i = 0; i < 20; ++i) {
    const double sig = rng.uniform(0.3, 3.0);
    const double s = rng.uniform(-3.0, 3.0);
    const PosteriorGrid post =
        grid_posterior(prior, Signal(s), [sig](double) { return sig; }, grid);
    const auto [mean, var] = posterior_moments(post);
    const GaussianBelief exact = update_constant(prior, Signal(s), sig);
    CHECK(std::abs(mean - exact.mean) < 1e-6);
    CHECK(std::abs(var - exact.variance) < 1e-6);
    CHECK(trapezoid_mass(post) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("grid_posterior handles the state-dependent noise of the feedback example") {
  const GaussianBelief prior(0.0, 1.0);
  const GridSpec grid = default_grid(prior);

  SUBCASE("frozen high-resolution oracle values for f(a) = a^2, s = 2") {
    const PosteriorGrid post = grid_posterior(prior, Signal(2.0), kSquare, grid);
    const auto [mean, var] = posterior_moments(post);
    // Pinned from a 10^6-node direct quadrature on [-8, 8]; stable to all
    // printed digits under range/resolution doubling.
    CHECK(std::abs(mean - 1.118360414672) < 1e-4);
    CHECK(std::abs(var - 0.591220394838) < 1e-4);

    const auto oracle = oracle::posterior_quadrature(0.0, 1.0, 2.0, kSquare, -8.0, 8.0, 1000001);
    CHECK(std::abs(mean - oracle.mean) < 1e-6);
    CHECK(std::abs(var - oracle.variance) < 1e-6);
  }

  SUBCASE("symmetric setting has mean zero") {
    const PosteriorGrid post = grid_posterior(prior, Signal(0.0), kSquarePlusOne, grid);
    const auto [mean, var] = posterior_moments(post);
    CHECK(std::abs(mean) < 1e-10);
    CHECK(var > 0.0);
  }

  SUBCASE("s = 0 with f(a) = a^2 concentrates on the floored spike") {
    CHECK_THROWS_AS(grid_posterior(prior, Signal(0.0), kSquare, grid), DegeneratePosterior);
  }

  SUBCASE("density recovers from log_unnormalized and log_evidence") {
    const PosteriorGrid post = grid_posterior(prior, Signal(1.0), kSquarePlusOne, grid);
    for (std::size_t i = 0; i < post.density.size(); i += 500) {
      CHECK(post.density[i] ==
            doctest::Approx(std::exp(post.log_unnormalized[i] - post.log_evidence))
                .epsilon(1e-12));
    }
  }

  SUBCASE("node spacing is uniform") {
    const PosteriorGrid post = grid_posterior(prior, Signal(1.0), kSquarePlusOne, grid);
    for (std::size_t i = 1; i < post.nodes.size(); ++i) {
      CHECK(std::abs(post.nodes[i] - post.nodes[i - 1] - post.step) < 1e-12);
    }
  }
}

TEST_CASE("posterior_moments nails a tabulated near-delta Gaussian") {
  // Tabulate a N(0, 1e-6) density directly and check the moment extractor.
  const int n = 4001;
  const double lo = -0.02, hi = 0.02;
  PosteriorGrid g;
  g.step = (hi - lo) / (n - 1);
  g.nodes.resize(n);
  g.density.resize(n);
  g.log_unnormalized.resize(n);
  const double sd = 1e-3;
  for (int i = 0; i < n; ++i) {
    const double x = lo + g.step * i;
    g.nodes[i] = x;
    g.density[i] = std::exp(-x * x / (2.0 * sd * sd)) / (sd * std::sqrt(2.0 * 3.14159265358979324));
  }
  const auto [mean, var] = posterior_moments(g);
  CHECK(std::abs(mean) < 1e-12);
  CHECK(var == doctest::Approx(1e-6).epsilon(0.05));
}

TEST_CASE("grid moments converge as the grid refines") {
  const GaussianBelief prior(0.0, 1.0);
  double prev_mean = 0.0;
  double prev_change = 0.0;
  bool have_prev = false;
  for (int n : {501, 1001, 2001, 4001}) {
    const GridSpec grid{-8.0, 8.0, n};
    const auto [mean, var] = posterior_moments(grid_posterior(prior, Signal(2.0), kSquare, grid));
    (void)var;
    if (have_prev) {
      const double change = std::abs(mean - prev_mean);
      if (prev_change > 0.0) {
        // Refining must not stall: each halving of the step shrinks the
        // moment change (allow slack for changes at rounding noise).
        CHECK(change <= 10.0 * prev_change + 1e-12);
      }
      prev_change = change;
    }
    prev_mean = mean;
    have_prev = true;
  }
}

TEST_CASE("mh_sample targets the grid posterior") {
  const GaussianBelief prior(0.0, 1.0);

  SUBCASE("constant noise matches the closed form") {
    const MhResult res = mh_sample(prior, Signal(2.0), kUnit, 200000,
                                   default_proposal_scale(prior), 17);
    double sum = 0.0, sum_sq = 0.0;
    for (double x : res.samples) {
      sum += x;
      sum_sq += x * x;
    }
    const double mean = sum / static_cast<double>(res.samples.size());
    const double var = sum_sq / static_cast<double>(res.samples.size()) - mean * mean;
    CHECK(std::abs(mean - 1.0) < 0.02);
    CHECK(std::abs(var - 0.5) < 0.05);
    CHECK(res.acceptance_rate > 0.1);
    CHECK(res.acceptance_rate < 0.7);
  }

  SUBCASE("symmetric target gives mean near zero") {
    const MhResult res = mh_sample(prior, Signal(0.0), kSquarePlusOne, 200000,
                                   default_proposal_scale(prior), 33);
    double sum = 0.0;
    for (double x : res.samples) sum += x;
    CHECK(std::abs(sum / static_cast<double>(res.samples.size())) < 0.02);
  }

  SUBCASE("same seed reproduces the chain exactly") {
    const MhResult a = mh_sample(prior, Signal(1.0), kSquare, 5000, 1.0, 4);
    const MhResult b = mh_sample(prior, Signal(1.0), kSquare, 5000, 1.0, 4);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i] == b.samples[i]);
    CHECK(a.acceptance_rate == b.acceptance_rate);
  }

  SUBCASE("burn-in discards a fifth of the chain") {
    const MhResult res = mh_sample(prior, Signal(1.0), kUnit, 1000, 1.0, 9);
    CHECK(res.samples.size() == 800);
  }

  SUBCASE("invalid arguments are rejected") {
    CHECK_THROWS_AS(mh_sample(prior, Signal(0.0), kUnit, 0, 1.0, 1), DomainError);
    CHECK_THROWS_AS(mh_sample(prior, Signal(0.0), kUnit, 100, 0.0, 1), DomainError);
  }
}

TEST_CASE("posterior_curves emits one normalized curve per signal") {
  const GaussianBelief prior(0.0, 1.0);
  const GridSpec grid = default_grid(prior);
  const std::vector<double> signals{-2.0, -1.0, 1.0, 2.0};

  const auto curves = posterior_curves(prior, kSquare, signals, grid);
  REQUIRE(curves.size() == 4);
  for (const auto& [s, g] : curves) {
    (void)s;
    CHECK(trapezoid_mass(g) == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("mirrored signals produce mirrored curves") {
    const auto& minus_two = curves[0].second;
    const auto& plus_two = curves[3].second;
    const std::size_t n = plus_two.density.size();
    double max_dev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      max_dev = std::max(max_dev,
                         std::abs(plus_two.density[i] - minus_two.density[n - 1 - i]));
    }
    CHECK(max_dev < 1e-10);
  }

  SUBCASE("constant noise curves equal the conjugate Gaussian pointwise") {
    const auto gaussian_curves = posterior_curves(prior, kUnit, std::vector<double>{1.0}, grid);
    const PosteriorGrid& g = gaussian_curves.front().second;
    const GaussianBelief exact = update_constant(prior, Signal(1.0), 1.0);
    double max_dev = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double x = g.nodes[i];
      const double ref = std::exp(-(x - exact.mean) * (x - exact.mean) /
                                  (2.0 * exact.variance)) /
                         std::sqrt(2.0 * 3.14159265358979324 * exact.variance);
      max_dev = std::max(max_dev, std::abs(g.density[i] - ref));
    }
    CHECK(max_dev < 1e-6);
  }

  SUBCASE("a degenerate signal aborts the family naming the signal") {
    const std::vector<double> with_zero{1.0, 0.0};
    CHECK_THROWS_AS(posterior_curves(prior, kSquare, with_zero, grid), DegeneratePosterior);
    CHECK_THROWS_AS(posterior_curves(prior, kSquare, std::vector<double>{}, grid), EmptyInput);
  }
}
