#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracid/identify.hpp"
#include "fracid/pso.hpp"

namespace fracid {

/// One row of a refinement table: the target pinned at `nominal`, the other
/// free parameters optimised by PSO.
struct RefinementRow {
  Bounds range;
  double nominal = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  double fitness = 0.0;
  FractionalModel estimate;
  std::string error;
};

struct RefinementLevel {
  Parameter parameter = Parameter::beta;
  std::vector<RefinementRow> rows;
  std::size_t chosen = 0;
  /// Set when the first attempt scored worse than the parent level and the
  /// level was rerun with alternate seeds.
  bool retried = false;
  /// Set when even the retry scored worse than the parent level.
  bool monotonicity_violation = false;

  const RefinementRow& best() const { return rows[chosen]; }
};

struct RefinementResult {
  FractionalModel estimate;
  double fitness = 0.0;
  std::vector<RefinementLevel> levels;
};

struct RefineOptions {
  std::size_t branching = 5;
  double width_tolerance = 0.002;
  /// Nominals of one level run concurrently.
  std::size_t workers = 1;
  /// Receives one line per notable event (retries, violations).
  std::function<void(const std::string&)> log;
};

/// Concentrated search over `target`: split `range` into `branching` equal
/// subintervals, pin the target at each centre, optimise the remaining free
/// parameters, descend into the best subinterval, and stop once the chosen
/// subinterval is no wider than the tolerance. A range already within the
/// tolerance is handled by a single run at its centre.
///
/// `inner_swarm` supplies particle count, iterations and coefficients; its
/// bounds are replaced by the reduced scenario's. Nominal i of level l uses
/// seed derive_seed(derive_seed(seed, "refine-level", l), "nominal", i); the
/// retry uses the tag "nominal-retry".
RefinementResult concentrated_search(const SampledSignal& observations, const Scenario& scenario,
                                     Parameter target, Bounds range,
                                     const SwarmConfig& inner_swarm, std::uint64_t seed,
                                     const RefineOptions& options = {});

}  // namespace fracid
