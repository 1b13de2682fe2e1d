#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <variant>

#include "varsig/rng.hpp"

namespace varsig {

// Distinguished "no information" variance. A zero-count or zero-mass action
// produces this value rather than an error: an economy that generates no
// data is a representable outcome, not a fault.
inline constexpr double kInfiniteVariance = std::numeric_limits<double>::infinity();

inline bool is_infinite_variance(double v) { return std::isinf(v) && v > 0.0; }

// Gaussian belief over the hidden state: (mean, variance), variance strictly
// positive. Degenerate beliefs exist only as filter limits, never as values.
struct GaussianBelief {
  GaussianBelief(double mean, double variance);

  double mean;
  double variance;

  double sd() const { return std::sqrt(variance); }
  double precision() const { return 1.0 / variance; }
};

// The agent's scalar action. Count semantics (nonnegative integer) and mass
// semantics (value in [0,1]) are enforced by the variance variant that
// consumes the action, not by distinct types.
struct Action {
  explicit Action(double v);
  double value;
};

// A scalar observation of the hidden state.
struct Signal {
  explicit Signal(double v);
  double value;
};

// Named state-to-variance mapping. Builtins keep a (name, param) pair so
// configs and CSV output can round-trip the function; custom mappings carry
// an arbitrary callable under a caller-chosen label.
class StateFn {
 public:
  // Builtins: "square" (x^2), "square_plus" (x^2 + c), "abs" (|x|), "const" (c).
  explicit StateFn(const std::string& name, double param = 0.0);

  static StateFn custom(std::string label, std::function<double(double)> fn);

  double operator()(double x) const { return fn_(x); }
  const std::string& name() const { return name_; }
  double param() const { return param_; }

 private:
  StateFn() = default;
  std::string name_;
  double param_ = 0.0;
  std::function<double(double)> fn_;
};

// The five supported functional forms of the signal noise variance.
struct ConstantNoise {
  double sigma_eps_sq;  // > 0
};
struct InverseCountNoise {
  double sigma_eps_sq;  // variance sigma_eps_sq / a, a = signal count
};
struct InverseMassNoise {
  double sigma_eps_sq;  // variance sigma_eps_sq / m, m = participation mass
};
struct StateFunctionNoise {
  StateFn f;  // variance f(state), must be >= 0
};
struct TrackingErrorNoise {
  double k;  // variance k * (action - state)^2, k > 0
};

using VarianceSpec =
    std::variant<ConstantNoise, InverseCountNoise, InverseMassNoise, StateFunctionNoise,
                 TrackingErrorNoise>;

// Evaluates the noise variance for the given state and action. Returns
// kInfiniteVariance for zero count / zero mass. Throws DomainError when the
// action violates the variant's semantics and NegativeVariance when a state
// function goes negative.
double noise_variance(const VarianceSpec& spec, double state, Action action);

// Draws s = state + eps, eps ~ N(0, noise_variance(...)). Zero variance
// returns the state exactly. Throws NoInformation on infinite variance.
Signal sample_signal(double state, Action action, const VarianceSpec& spec, Rng& rng);

// Arithmetic mean of the signal values: the sufficient statistic of a batch
// of iid unbiased signals.
Signal aggregate_signals(std::span<const Signal> signals);

}  // namespace varsig
