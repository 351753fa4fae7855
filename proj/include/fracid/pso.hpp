#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace fracid {

struct Bounds {
  double min = 0.0;
  double max = 0.0;

  double width() const { return max - min; }
  double center() const { return 0.5 * (min + max); }
  double clamp(double x) const { return x < min ? min : (x > max ? max : x); }
  bool contains(double x) const { return x >= min && x <= max; }

  friend bool operator==(const Bounds&, const Bounds&) = default;
};

struct SwarmConfig {
  std::size_t particle_count = 40;
  std::size_t iterations = 150;
  double c1 = 1.4;  // cognitive
  double c2 = 1.4;  // social
  double inertia_start = 0.9;
  double inertia_end = 0.4;
  std::vector<Bounds> position_bounds;
  std::vector<Bounds> velocity_bounds;
  std::uint64_t seed = 0;
  /// Threads used for fitness evaluation within one iteration. Results do not
  /// depend on this value.
  std::size_t workers = 1;

  std::size_t dimension() const { return position_bounds.size(); }

  /// Throws std::invalid_argument on empty or mismatched bounds, min >= max,
  /// zero particles or zero iterations.
  void validate() const;
};

/// Snapshot handed to an observer after initialisation (iteration == 0 with
/// no history yet) and after every completed iteration.
struct SwarmState {
  std::size_t iteration = 0;
  std::vector<std::vector<double>> positions;
  std::vector<std::vector<double>> velocities;
  std::vector<double> position_fitness;
  std::vector<std::vector<double>> personal_best;
  std::vector<double> personal_best_fitness;
  std::vector<double> global_best;
  double global_best_fitness = 0.0;
};

struct SwarmResult {
  std::vector<double> best_position;
  double best_fitness = 0.0;
  /// Global-best fitness after each iteration; nonincreasing.
  std::vector<double> history;
};

/// Must be re-entrant when workers > 1.
using FitnessFunction = std::function<double(std::span<const double>)>;
using SwarmObserver = std::function<void(const SwarmState&)>;

/// Linear schedule start + (end - start) * iteration / (total - 1); start when total == 1.
double inertia_at(std::size_t iteration, std::size_t total, double start, double end);

/// Global-best PSO with synchronous updates:
///   v <- w v + c1 phi1 (pbest - x) + c2 phi2 (gbest - x),  x <- x + v
/// with phi1, phi2 drawn uniformly in [0, 1) per particle per dimension.
/// Velocities are clamped to velocity_bounds, positions to position_bounds
/// (velocity left as is). Throws NumericalError if the fitness is non-finite.
SwarmResult optimize(const FitnessFunction& fitness, const SwarmConfig& config,
                     const SwarmObserver& observer = {});

}  // namespace fracid
