#include "varsig/belief.hpp"

#include <cmath>
#include <utility>

#include "varsig/errors.hpp"

namespace varsig {

GaussianBelief::GaussianBelief(double mean_in, double variance_in)
    : mean(mean_in), variance(variance_in) {
  if (!std::isfinite(mean)) throw DomainError("GaussianBelief: mean must be finite");
  if (!std::isfinite(variance) || variance <= 0.0)
    throw DomainError("GaussianBelief: variance must be finite and > 0");
}

Action::Action(double v) : value(v) {
  if (!std::isfinite(value)) throw DomainError("Action: value must be finite");
}

Signal::Signal(double v) : value(v) {
  if (!std::isfinite(value)) throw DomainError("Signal: value must be finite");
}

StateFn::StateFn(const std::string& name, double param) : name_(name), param_(param) {
  if (name == "square") {
    fn_ = [](double x) { return x * x; };
  } else if (name == "square_plus") {
    fn_ = [param](double x) { return x * x + param; };
  } else if (name == "abs") {
    fn_ = [](double x) { return std::fabs(x); };
  } else if (name == "const") {
    fn_ = [param](double) { return param; };
  } else {
    throw DomainError("StateFn: unknown builtin '" + name + "'");
  }
}

StateFn StateFn::custom(std::string label, std::function<double(double)> fn) {
  StateFn out;
  out.name_ = std::move(label);
  out.fn_ = std::move(fn);
  return out;
}

namespace {

bool is_integral(double v) { return std::floor(v) == v; }

double state_function_variance(const StateFn& f, double state) {
  const double v = f(state);
  if (std::isnan(v) || (std::isinf(v) && v > 0.0))
    throw DomainError("noise_variance: state function returned a non-finite value");
  if (v < 0.0)
    throw NegativeVariance("noise_variance: state function returned a negative variance");
  return v;
}

}  // namespace

double noise_variance(const VarianceSpec& spec, double state, Action action) {
  struct Visitor {
    double state;
    double a;

    double operator()(const ConstantNoise& c) const { return c.sigma_eps_sq; }
    double operator()(const InverseCountNoise& c) const {
      if (a < 0.0 || !is_integral(a))
        throw DomainError("noise_variance: count action must be an integer >= 0");
      if (a == 0.0) return kInfiniteVariance;
      return c.sigma_eps_sq / a;
    }
    double operator()(const InverseMassNoise& c) const {
      if (a < 0.0 || a > 1.0)
        throw DomainError("noise_variance: mass action must lie in [0, 1]");
      if (a == 0.0) return kInfiniteVariance;
      return c.sigma_eps_sq / a;
    }
    double operator()(const StateFunctionNoise& c) const {
      return state_function_variance(c.f, state);
    }
    double operator()(const TrackingErrorNoise& c) const {
      const double d = a - state;
      return c.k * d * d;
    }
  };
  return std::visit(Visitor{state, action.value}, spec);
}

Signal sample_signal(double state, Action action, const VarianceSpec& spec, Rng& rng) {
  const double v = noise_variance(spec, state, action);
  if (is_infinite_variance(v))
    throw NoInformation("sample_signal: infinite variance carries no signal");
  // One draw regardless of variance so streams stay aligned; at v == 0 the
  // signal is the state exactly.
  const double z = standard_normal(rng);
  return Signal(state + std::sqrt(v) * z);
}

Signal aggregate_signals(std::span<const Signal> signals) {
  if (signals.empty()) throw EmptyInput("aggregate_signals: empty signal list");
  double acc = 0.0;
  for (const Signal& s : signals) acc += s.value;
  return Signal(acc / static_cast<double>(signals.size()));
}

}  // namespace varsig
