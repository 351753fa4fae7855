#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracid/pso.hpp"
#include "fracid/signal.hpp"
#include "fracid/simulate.hpp"

namespace fracid {

enum class Parameter { a1, alpha, a2, beta, a3 };

inline constexpr std::array<Parameter, 5> kAllParameters{
    Parameter::a1, Parameter::alpha, Parameter::a2, Parameter::beta, Parameter::a3};

std::string_view to_string(Parameter p);
/// Throws std::invalid_argument for unknown names.
Parameter parse_parameter(std::string_view name);

double get(const FractionalModel& model, Parameter p);
void set(FractionalModel& model, Parameter p, double value);

struct FreeParameter {
  Parameter name;
  Bounds search;
  Bounds velocity;
};

/// Which parameters the swarm searches (in position-vector order) and the
/// values of the rest, plus the observation grid.
struct Scenario {
  std::vector<FreeParameter> free;
  std::map<Parameter, double> fixed;
  double observation_period = 0.05;
  double horizon = 10.0;

  /// Every parameter must be exactly one of free or fixed, ranges must be
  /// ordered, and every model decodable from the box must be valid
  /// (a1 > 0, alpha > beta >= 0). Throws std::invalid_argument otherwise.
  void validate() const;

  std::size_t dimension() const { return free.size(); }
  bool is_free(Parameter p) const;
  std::size_t sample_count() const;

  FractionalModel decode(std::span<const double> position) const;
  std::vector<double> encode(const FractionalModel& model) const;

  /// Copy with `target` moved from the free set to the fixed set.
  Scenario with_fixed(Parameter target, double value) const;

  /// Swarm settings with this scenario's bounds; 40 particles / 150
  /// iterations up to four free parameters, 50 / 200 beyond.
  SwarmConfig default_swarm(std::uint64_t seed = 0) const;

  /// Returns `swarm` with position/velocity bounds taken from this scenario.
  SwarmConfig bind(SwarmConfig swarm) const;
};

/// The reference process 1 / (0.8 s^2.2 + 0.5 s^0.9 + 1).
FractionalModel reference_model();

/// a1, alpha, a2, a3 free with beta fixed at 0.9.
Scenario four_parameter_scenario();
/// All five parameters free.
Scenario five_parameter_scenario();

/// Sum of squared deviations between `observations` and the unit-step
/// response of `model` simulated on the same grid (start 0, same period,
/// same sample count).
double step_fitness(const FractionalModel& model, const SampledSignal& observations);

/// Fitness oracle over positions of `scenario`. Observations must start at 0
/// and match the scenario's period and horizon.
FitnessFunction make_fitness(const SampledSignal& observations, const Scenario& scenario);

/// Adds an independent uniform draw from [-amplitude, amplitude] to each sample.
SampledSignal corrupt(const SampledSignal& signal, double amplitude, std::uint64_t seed);

struct NoiseConfig {
  double amplitude = 0.05;
  std::uint64_t base_seed = 0;
};

struct IdentifyOptions {
  std::size_t runs = 5;
  std::optional<NoiseConfig> noise;
  /// Enables percent-error statistics.
  std::optional<FractionalModel> truth;
  /// Also score each noisy run's estimate against the clean observations.
  bool report_clean_fitness = false;
  /// Independent runs executed concurrently.
  std::size_t run_workers = 1;
};

struct RunResult {
  std::size_t index = 0;
  std::uint64_t swarm_seed = 0;
  std::optional<std::uint64_t> noise_seed;
  bool ok = false;
  std::string error;
  FractionalModel estimate;
  std::vector<double> position;
  /// Against the data this run optimised (corrupted when noise is on).
  double fitness = 0.0;
  std::optional<double> clean_fitness;
  std::vector<double> history;
};

struct ParameterStats {
  Parameter name;
  double mean = 0.0;
  double std_dev = 0.0;  // sample (n - 1) standard deviation; 0 for one run
  std::optional<double> truth;
  std::optional<double> percent_error;
};

struct RunReport {
  std::vector<Parameter> order;
  std::vector<RunResult> runs;
  std::optional<std::size_t> best_run;
  std::vector<ParameterStats> stats;

  std::size_t failed_runs() const;
};

double mean_of(std::span<const double> xs);
double sample_std_dev(std::span<const double> xs);
/// |estimate - truth| / |truth| * 100; empty when truth is zero.
std::optional<double> percent_error(double estimate, double truth);

/// Independent PSO runs with seeds derive_seed(swarm.seed, "pso-run", i);
/// noisy runs corrupt a fresh copy with derive_seed(noise.base_seed, "noise-run", i).
RunReport identify(const SampledSignal& observations, const Scenario& scenario,
                   const SwarmConfig& swarm, const IdentifyOptions& options);

/// Fills order/best_run/stats from `runs` (failed runs excluded).
void summarize(RunReport& report, const std::optional<FractionalModel>& truth);

}  // namespace fracid
