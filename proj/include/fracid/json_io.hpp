#pragma once

#include <filesystem>
#include <optional>

#include "json.hpp"

#include "fracid/identify.hpp"
#include "fracid/pso.hpp"
#include "fracid/refine.hpp"
#include "fracid/simulate.hpp"
#include "fracid/verify.hpp"

namespace fracid {

using Json = nlohmann::ordered_json;

/// Scenario file: the scenario plus optional truth (for percent errors) and
/// swarm overrides.
///
///   {
///     "free": [{"name": "a1", "search": [1e-6, 2], "velocity": [-0.5, 0.5]}, ...],
///     "fixed": {"beta": 0.9},
///     "observation_period": 0.05,
///     "horizon": 10,
///     "truth": {"a1": 0.8, "alpha": 2.2, "a2": 0.5, "beta": 0.9, "a3": 1},
///     "swarm": {"particles": 40, "iterations": 150, "c1": 1.4, "c2": 1.4,
///               "inertia_start": 0.9, "inertia_end": 0.4}
///   }
struct ScenarioDocument {
  Scenario scenario;
  std::optional<FractionalModel> truth;
  /// Bounds bound from the scenario; seed left at 0.
  SwarmConfig swarm;
};

Json to_json(const FractionalModel& model);
FractionalModel model_from_json(const Json& j);

Json to_json(const Scenario& scenario);
Json to_json(const SwarmConfig& swarm);
Json to_json(const ScenarioDocument& doc);
/// Throws std::invalid_argument on schema or validation errors.
ScenarioDocument scenario_from_json(const Json& j);
ScenarioDocument read_scenario(const std::filesystem::path& path);

Json to_json(const RunReport& report);
Json to_json(const EquationRow& row);
Json to_json(const Reconstruction& rec);
Json to_json(const RankedModel& ranked);
Json to_json(const RefinementResult& result);

/// Pretty-printed with a trailing newline.
void write_json(const std::filesystem::path& path, const Json& j);

}  // namespace fracid
