#pragma once

#include <optional>
#include <variant>

#include "fracid/signal.hpp"

namespace fracid {

/// Process 1 / (a1 s^alpha + a2 s^beta + a3).
struct FractionalModel {
  double a1 = 0.0;
  double alpha = 0.0;
  double a2 = 0.0;
  double beta = 0.0;
  double a3 = 0.0;

  /// Requires finite values, a1 > 0 and alpha > beta >= 0.
  void validate() const;

  friend bool operator==(const FractionalModel&, const FractionalModel&) = default;
};

struct StepInput {};      // u(t) = 1
struct RampInput {};      // r(t) = t
struct ParabolaInput {};  // p(t) = t^2 / 2

/// A sampled input must share the simulation step and start at t = 0.
using InputKind = std::variant<StepInput, RampInput, ParabolaInput, SampledSignal>;

struct SimulationOptions {
  /// Short-memory window in seconds; empty keeps the whole history.
  std::optional<double> memory_length;
};

/// Zero-initial-condition response sampled at 0, step, ..., horizon. Each
/// sample solves the implicit Grünwald–Letnikov discretisation
///   a1 D^alpha c + a2 D^beta c + a3 c = input
/// for the newest value given the history.
SampledSignal simulate(const FractionalModel& model, const InputKind& input, double step,
                       double horizon, const SimulationOptions& options = {});

/// Keeps every (target_period / period)-th sample starting at index 0.
/// Throws std::invalid_argument when the ratio is not an integer.
SampledSignal downsample(const SampledSignal& signal, double target_period);

/// Input value at time t for the analytic input shapes.
double input_value(const InputKind& input, double t, std::size_t k);

}  // namespace fracid
