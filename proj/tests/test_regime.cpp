#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "varsig/belief.hpp"
#include "varsig/errors.hpp"
#include "varsig/regime.hpp"

using namespace varsig;

namespace {

double simplex_gap(const DiscreteBelief& b) {
  double sum = 0.0;
  for (double p : b.probs) sum += p;
  return std::abs(sum - 1.0);
}

}  // namespace

TEST_CASE("DiscreteBelief and RegimeModel validate their invariants") {
  CHECK_NOTHROW(DiscreteBelief({-1.0, 1.0}, {0.5, 0.5}));
  CHECK_THROWS_AS(DiscreteBelief({1.0, -1.0}, {0.5, 0.5}), DomainError);  // not increasing
  CHECK_THROWS_AS(DiscreteBelief({-1.0, 1.0}, {0.6, 0.6}), DomainError);  // sum != 1
  CHECK_THROWS_AS(DiscreteBelief({-1.0, 1.0}, {1.2, -0.2}), DomainError); // negative entry
  CHECK_THROWS_AS(DiscreteBelief({}, {}), EmptyInput);

  CHECK_NOTHROW(RegimeModel({-1.0, 1.0}, {1.0, 1.0}, {{0.9, 0.1}, {0.2, 0.8}}));
  CHECK_THROWS_AS(RegimeModel({-1.0, 1.0}, {1.0, -1.0}, {{1.0, 0.0}, {0.0, 1.0}}),
                  NegativeVariance);
  CHECK_THROWS_AS(RegimeModel({-1.0, 1.0}, {1.0, 1.0}, {{0.9, 0.2}, {0.2, 0.8}}), DomainError);
  CHECK_THROWS_AS(RegimeModel({-1.0, 1.0}, {1.0, 1.0}, {{1.0}, {0.0, 1.0}}), DomainError);

  const RegimeModel static_model = RegimeModel::static_regimes({0.0, 2.0}, {1.0, 4.0});
  CHECK(static_model.transition[0][0] == 1.0);
  CHECK(static_model.transition[0][1] == 0.0);
}

TEST_CASE("regime_update applies Bayes over the discrete states") {
  const RegimeModel model = RegimeModel::static_regimes({-1.0, 1.0}, {1.0, 1.0});
  const DiscreteBelief uniform({-1.0, 1.0}, {0.5, 0.5});

  SUBCASE("a symmetric signal leaves a symmetric posterior") {
    const DiscreteBelief post = regime_update(uniform, Signal(0.0), model);
    CHECK(post.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(post.probs[1] == doctest::Approx(0.5).epsilon(1e-12));
  }

  SUBCASE("hand-derived two-state posterior") {
    const DiscreteBelief post = regime_update(uniform, Signal(1.0), model);
    const double expected = 1.0 / (1.0 + std::exp(-2.0));
    CHECK(std::abs(post.probs[1] - expected) < 1e-12);
    CHECK(std::abs(post.probs[1] -
                   oracle::two_state_posterior(0.5, -1.0, 1.0, 1.0, 1.0, 1.0)) < 1e-12);
  }

  SUBCASE("a degenerate prior is a fixed point") {
    const DiscreteBelief sure({-1.0, 1.0}, {1.0, 0.0});
    const DiscreteBelief post = regime_update(sure, Signal(5.0), model);
    CHECK(post.probs[0] == 1.0);
    CHECK(post.probs[1] == 0.0);
  }

  SUBCASE("zero-variance states use an exact-match indicator") {
    const RegimeModel point = RegimeModel::static_regimes({-1.0, 1.0}, {0.0, 1.0});
    // On an exact hit the point state carries likelihood 1 against the other
    // state's Gaussian density at distance 2: p0 = 1 / (1 + N(-1; 1, 1)).
    const DiscreteBelief hit = regime_update(uniform, Signal(-1.0), point);
    const double density_at_two = std::exp(-2.0) / std::sqrt(2.0 * std::acos(-1.0));
    CHECK(hit.probs[0] == doctest::Approx(1.0 / (1.0 + density_at_two)).epsilon(1e-12));
    const DiscreteBelief miss = regime_update(uniform, Signal(0.5), point);
    CHECK(miss.probs[0] == 0.0);
    CHECK(miss.probs[1] == 1.0);
  }

  SUBCASE("impossible signals raise ZeroEvidence") {
    const RegimeModel point = RegimeModel::static_regimes({-1.0, 1.0}, {0.0, 0.0});
    CHECK_THROWS_AS(regime_update(uniform, Signal(0.5), point), ZeroEvidence);
  }

  SUBCASE("mismatched state lists are rejected") {
    const DiscreteBelief other({0.0, 1.0}, {0.5, 0.5});
    CHECK_THROWS_AS(regime_update(other, Signal(0.0), model), DomainError);
  }
}

TEST_CASE("regime_update survives extreme signals via log-space arithmetic") {
  const RegimeModel model = RegimeModel::static_regimes({-1.0, 1.0}, {0.25, 0.25});
  const DiscreteBelief uniform({-1.0, 1.0}, {0.5, 0.5});
  // Both raw likelihoods underflow at |s| ~ 60 with variance 0.25; the
  // max-subtracted form must still produce the obvious answer.
  const DiscreteBelief post = regime_update(uniform, Signal(-60.0), model);
  CHECK(post.probs[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(simplex_gap(post) < 1e-12);
}

TEST_CASE("uninformative signals leave the prior unchanged") {
  const RegimeModel vague = RegimeModel::static_regimes({-1.0, 1.0}, {1e12, 1e12});
  const DiscreteBelief prior({-1.0, 1.0}, {0.3, 0.7});
  const DiscreteBelief post = regime_update(prior, Signal(0.4), vague);
  CHECK(std::abs(post.probs[0] - 0.3) < 1e-6);
  CHECK(std::abs(post.probs[1] - 0.7) < 1e-6);
}

TEST_CASE("regime_predict propagates through the transition matrix") {
  const RegimeModel model({-1.0, 1.0}, {1.0, 1.0}, {{0.9, 0.1}, {0.2, 0.8}});

  SUBCASE("identity transition is a no-op") {
    const RegimeModel identity = RegimeModel::static_regimes({-1.0, 1.0}, {1.0, 1.0});
    const DiscreteBelief b({-1.0, 1.0}, {0.3, 0.7});
    const DiscreteBelief next = regime_predict(b, identity);
    CHECK(next.probs[0] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(next.probs[1] == doctest::Approx(0.7).epsilon(1e-12));
  }

  SUBCASE("point mass extracts the matching row") {
    const DiscreteBelief b({-1.0, 1.0}, {1.0, 0.0});
    const DiscreteBelief next = regime_predict(b, model);
    CHECK(next.probs[0] == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(next.probs[1] == doctest::Approx(0.1).epsilon(1e-12));
  }

  SUBCASE("a rank-one transition absorbs any belief") {
    const RegimeModel mixing({-1.0, 1.0}, {1.0, 1.0}, {{0.5, 0.5}, {0.5, 0.5}});
    const DiscreteBelief b({-1.0, 1.0}, {0.12, 0.88});
    const DiscreteBelief next = regime_predict(b, mixing);
    CHECK(next.probs[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(next.probs[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("likelihood ordering: equal variances rank states by |s - state|") {
  const RegimeModel model = RegimeModel::static_regimes({-2.0, 0.0, 1.0, 3.0},
                                                        {0.5, 0.5, 0.5, 0.5});
  const DiscreteBelief uniform({-2.0, 0.0, 1.0, 3.0}, {0.25, 0.25, 0.25, 0.25});
  const DiscreteBelief post = regime_update(uniform, Signal(0.9), model);
  // Distances from 0.9: state 1.0 -> 0.1, state 0.0 -> 0.9, 3.0 -> 2.1, -2.0 -> 2.9.
  CHECK(post.probs[2] > post.probs[1]);
  CHECK(post.probs[1] > post.probs[3]);
  CHECK(post.probs[3] > post.probs[0]);
}

TEST_CASE("simplex invariants hold on fuzzed updates") {
  oracle::SplitMix rng(2024);
  int performed = 0;
  while (performed < 10000) {
    const double gap = rng.uniform(0.5, 3.0);
    const std::vector<double> states{-gap, 0.0, gap};
    const std::vector<double> variances{rng.uniform(0.05, 4.0), rng.uniform(0.05, 4.0),
                                        rng.uniform(0.05, 4.0)};
    double p0 = rng.uniform(0.0, 1.0), p1 = rng.uniform(0.0, 1.0), p2 = rng.uniform(0.0, 1.0);
    const double total = p0 + p1 + p2;
    p0 /= total;
    p1 /= total;
    p2 = 1.0 - p0 - p1;

    const RegimeModel model = RegimeModel::static_regimes(states, variances);
    const DiscreteBelief prior(states, {p0, p1, p2});
    const DiscreteBelief post = regime_update(prior, Signal(rng.uniform(-6.0, 6.0)), model);
    CHECK(simplex_gap(post) < 1e-12);
    for (double p : post.probs) CHECK(p >= 0.0);
    ++performed;
  }
}

TEST_CASE("regime_filter_run composes predict and update") {
  const RegimeModel model({-1.0, 1.0}, {0.25, 4.0}, {{0.95, 0.05}, {0.05, 0.95}});
  const DiscreteBelief initial({-1.0, 1.0}, {0.5, 0.5});

  SUBCASE("empty signal list gives an empty run") {
    CHECK(regime_filter_run(initial, std::vector<Signal>{}, model).empty());
  }

  SUBCASE("one signal equals update after predict") {
    const std::vector<Signal> one{Signal(0.7)};
    const auto run = regime_filter_run(initial, one, model);
    REQUIRE(run.size() == 1);
    const DiscreteBelief manual = regime_update(regime_predict(initial, model), Signal(0.7), model);
    CHECK(run[0].probs[0] == doctest::Approx(manual.probs[0]).epsilon(1e-12));
    CHECK(run[0].probs[1] == doctest::Approx(manual.probs[1]).epsilon(1e-12));
  }

  SUBCASE("zero evidence reports the offending step") {
    const RegimeModel point({-1.0, 1.0}, {0.0, 0.0}, {{1.0, 0.0}, {0.0, 1.0}});
    const std::vector<Signal> signals{Signal(-1.0), Signal(0.3)};
    try {
      regime_filter_run(initial, signals, point);
      FAIL("expected ZeroEvidence");
    } catch (const ZeroEvidence& e) {
      CHECK(e.where() == "step 1");
    }
  }

  SUBCASE("filter tracks the true regime most of the time") {
    // Synthetic benchmark: two regimes distinguished by signal variance
    // (means grouped with variances 0.25 vs 4.0), persistence 0.95.
    int hits = 0, total = 0;
    double worst = 1.0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const auto traj = oracle::simulate_two_state(-1.0, 1.0, 0.25, 4.0, 0.95, 200, seed);
      std::vector<Signal> signals;
      for (double s : traj.signals) signals.emplace_back(s);
      const auto run = regime_filter_run(initial, signals, model);
      int run_hits = 0;
      for (std::size_t t = 0; t < run.size(); ++t) {
        if (most_probable_index(run[t]) == static_cast<std::size_t>(traj.true_index[t])) {
          ++run_hits;
        }
      }
      worst = std::min(worst, run_hits / 200.0);
      hits += run_hits;
      total += 200;
    }
    CHECK(static_cast<double>(hits) / total > 0.70);
    CHECK(worst > 0.5);  // no pathological seed collapses below chance
  }
}

TEST_CASE("most_probable_index breaks ties toward the lowest index") {
  CHECK(most_probable_index(DiscreteBelief({-1.0, 1.0}, {0.5, 0.5})) == 0);
  CHECK(most_probable_index(DiscreteBelief({-1.0, 0.0, 1.0}, {0.2, 0.6, 0.2})) == 1);
}
