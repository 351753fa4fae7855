#include "fracid/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fracid/differint.hpp"
#include "fracid/errors.hpp"

namespace fracid {

void FractionalModel::validate() const {
  for (double v : {a1, alpha, a2, beta, a3}) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("model parameters must be finite");
    }
  }
  if (!(a1 > 0.0)) {
    throw std::invalid_argument("model requires a1 > 0, got " + std::to_string(a1));
  }
  if (!(beta >= 0.0)) {
    throw std::invalid_argument("model requires beta >= 0, got " + std::to_string(beta));
  }
  if (!(alpha > beta)) {
    throw std::invalid_argument("model requires alpha > beta, got alpha=" +
                                std::to_string(alpha) + " beta=" + std::to_string(beta));
  }
}

double input_value(const InputKind& input, double t, std::size_t k) {
  struct Visitor {
    double t;
    std::size_t k;
    double operator()(const StepInput&) const { return 1.0; }
    double operator()(const RampInput&) const { return t; }
    double operator()(const ParabolaInput&) const { return 0.5 * t * t; }
    double operator()(const SampledSignal& s) const { return s.samples[k]; }
  };
  return std::visit(Visitor{t, k}, input);
}

SampledSignal simulate(const FractionalModel& model, const InputKind& input, double step,
                       double horizon, const SimulationOptions& options) {
  model.validate();
  if (!(step > 0.0) || !std::isfinite(step)) {
    throw std::invalid_argument("simulation step must be positive, got " + std::to_string(step));
  }
  if (!(horizon >= step * (1.0 - 1e-12)) || !std::isfinite(horizon)) {
    throw std::invalid_argument("simulation horizon must be at least one step");
  }
  const std::size_t n = whole_steps(horizon, step) + 1;

  if (const auto* sampled = std::get_if<SampledSignal>(&input)) {
    if (std::abs(sampled->period - step) > 1e-9 * step) {
      throw std::invalid_argument("sampled input period differs from the simulation step");
    }
    if (std::abs(sampled->start_time) > 1e-9 * step) {
      throw std::invalid_argument("sampled input must start at t = 0");
    }
    if (sampled->size() < n) {
      throw std::invalid_argument("sampled input shorter than the simulation horizon");
    }
  }

  std::size_t taps = n - 1;
  if (options.memory_length) {
    taps = std::min(taps, memory_taps(*options.memory_length, step));
  }

  // Both fractional terms share the history, so fold them into one kernel.
  const auto b_alpha = gl_coefficients(model.alpha, taps + 1);
  const auto b_beta = gl_coefficients(model.beta, taps + 1);
  const double s_alpha = model.a1 * std::pow(step, -model.alpha);
  const double s_beta = model.a2 * std::pow(step, -model.beta);
  std::vector<double> kernel(taps + 1);
  for (std::size_t j = 0; j <= taps; ++j) {
    kernel[j] = s_alpha * b_alpha.values[j] + s_beta * b_beta.values[j];
  }
  const double denominator = kernel[0] + model.a3;
  if (!std::isfinite(denominator) || denominator == 0.0) {
    throw NumericalError("implicit step denominator a1*h^-alpha + a2*h^-beta + a3 is " +
                         std::to_string(denominator));
  }

  SampledSignal out{0.0, step, std::vector<double>(n)};
  auto& c = out.samples;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t last = std::min(k, taps);
    long double history = 0.0L;
    for (std::size_t j = 1; j <= last; ++j) {
      history += static_cast<long double>(kernel[j]) * static_cast<long double>(c[k - j]);
    }
    const double r = input_value(input, static_cast<double>(k) * step, k);
    c[k] = static_cast<double>((static_cast<long double>(r) - history) / denominator);
    if (!std::isfinite(c[k])) {
      throw NumericalError("simulation diverged at t=" + std::to_string(out.time_at(k)));
    }
  }
  return out;
}

SampledSignal downsample(const SampledSignal& signal, double target_period) {
  signal.validate();
  if (!(target_period > 0.0)) {
    throw std::invalid_argument("target period must be positive");
  }
  const double ratio = target_period / signal.period;
  const double stride_f = std::round(ratio);
  if (stride_f < 1.0 || std::abs(ratio - stride_f) > 1e-9 * ratio) {
    throw std::invalid_argument("target period " + std::to_string(target_period) +
                                " is not an integer multiple of " +
                                std::to_string(signal.period));
  }
  const auto stride = static_cast<std::size_t>(stride_f);
  SampledSignal out{signal.start_time, target_period, {}};
  out.samples.reserve(signal.size() / stride + 1);
  for (std::size_t k = 0; k < signal.size(); k += stride) {
    out.samples.push_back(signal.samples[k]);
  }
  return out;
}

}  // namespace fracid
