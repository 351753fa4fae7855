#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracid/differint.hpp"
#include "fracid/signal.hpp"
#include "fracid/simulate.hpp"

namespace fracid {

/// One linear equation a1*p + a2*q + a3*r = s obtained from the step
/// response integrated `level` times.
struct EquationRow {
  double p = 0.0;
  double q = 0.0;
  double r = 0.0;
  double s = 0.0;
  int level = 0;
  double eval_time = 0.0;
};

/// Solves above this 1-norm condition estimate are refused.
inline constexpr double kConditionLimit = 1e12;

/// Row `level` (0, 1 or 2) at `eval_time`: p, q, r are the GL differintegrals
/// of c of orders alpha-level, beta-level and -level; s is the step, ramp or
/// t^2/2 input at eval_time. eval_time must be a sample instant no earlier
/// than `memory` so the history window is full.
EquationRow build_equation(const SampledSignal& c, double alpha, double beta, int level,
                           double eval_time, double memory, CoefficientCache* cache = nullptr);

struct Reconstruction {
  std::vector<EquationRow> rows;
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;
  double condition = 0.0;
};

/// a1, a2, a3 from the three rows at one instant, by Gaussian elimination with
/// partial pivoting. Throws NumericalError naming the rows when the system is
/// singular or its condition estimate exceeds kConditionLimit.
Reconstruction reconstruct_coefficients(const SampledSignal& c, double alpha, double beta,
                                        double eval_time, double memory,
                                        CoefficientCache* cache = nullptr);

/// Least-squares variant stacking the three rows at each of `eval_times`.
/// Every instant must lie within `memory` of the record start, so the window
/// covers the whole (zero-initialised) history.
Reconstruction reconstruct_coefficients_lsq(const SampledSignal& c, double alpha, double beta,
                                            std::span<const double> eval_times, double memory,
                                            CoefficientCache* cache = nullptr);

struct Solve3Result {
  std::array<double, 3> x{};
  double condition = 0.0;
};

/// Dense 3x3 solve with partial pivoting and 1-norm condition estimate.
/// Throws NumericalError on a zero pivot or when the estimate exceeds
/// kConditionLimit; the message lists `row_labels`.
Solve3Result solve3(const std::array<std::array<double, 3>, 3>& a,
                    const std::array<double, 3>& b,
                    const std::array<std::string, 3>& row_labels = {"row 0", "row 1", "row 2"});

struct RankedModel {
  FractionalModel model;
  std::size_t input_index = 0;
  std::optional<double> fitness;
  std::string error;
};

/// Scores each candidate with step_fitness against `observations` and sorts
/// ascending (stable). Candidates whose simulation fails go last, in input
/// order, with `error` set.
std::vector<RankedModel> rank_models(std::span<const FractionalModel> candidates,
                                     const SampledSignal& observations);

}  // namespace fracid
