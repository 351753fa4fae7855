#include "fracid/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace fracid {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

Json bounds_json(const Bounds& b) { return Json::array({b.min, b.max}); }

Bounds bounds_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument(what + " must be a two-element numeric array [min, max]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

double number_field(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw std::invalid_argument(where + ": missing numeric field '" + key + "'");
  }
  return j.at(key).get<double>();
}

}  // namespace

Json to_json(const FractionalModel& m) {
  return Json{{"a1", m.a1}, {"alpha", m.alpha}, {"a2", m.a2}, {"beta", m.beta}, {"a3", m.a3}};
}

FractionalModel model_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("model must be a JSON object");
  FractionalModel m;
  for (auto p : kAllParameters) {
    set(m, p, number_field(j, std::string(to_string(p)).c_str(), "model"));
  }
  m.validate();
  return m;
}

Json to_json(const Scenario& s) {
  Json free = Json::array();
  for (const auto& f : s.free) {
    free.push_back(Json{{"name", to_string(f.name)},
                        {"search", bounds_json(f.search)},
                        {"velocity", bounds_json(f.velocity)}});
  }
  Json fixed = Json::object();
  for (const auto& [p, v] : s.fixed) fixed[std::string(to_string(p))] = v;
  return Json{{"free", free},
              {"fixed", fixed},
              {"observation_period", s.observation_period},
              {"horizon", s.horizon}};
}

Json to_json(const SwarmConfig& c) {
  Json pos = Json::array();
  Json vel = Json::array();
  for (const auto& b : c.position_bounds) pos.push_back(bounds_json(b));
  for (const auto& b : c.velocity_bounds) vel.push_back(bounds_json(b));
  return Json{{"particles", c.particle_count},
              {"iterations", c.iterations},
              {"c1", c.c1},
              {"c2", c.c2},
              {"inertia_start", c.inertia_start},
              {"inertia_end", c.inertia_end},
              {"position_bounds", pos},
              {"velocity_bounds", vel},
              {"seed", c.seed}};
}

Json to_json(const ScenarioDocument& doc) {
  Json j = to_json(doc.scenario);
  if (doc.truth) j["truth"] = to_json(*doc.truth);
  j["swarm"] = Json{{"particles", doc.swarm.particle_count},
                    {"iterations", doc.swarm.iterations},
                    {"c1", doc.swarm.c1},
                    {"c2", doc.swarm.c2},
                    {"inertia_start", doc.swarm.inertia_start},
                    {"inertia_end", doc.swarm.inertia_end}};
  return j;
}

ScenarioDocument scenario_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("scenario must be a JSON object");
  ScenarioDocument doc;
  auto& s = doc.scenario;
  if (!j.contains("free") || !j.at("free").is_array()) {
    throw std::invalid_argument("scenario: 'free' must be an array");
  }
  for (const auto& f : j.at("free")) {
    if (!f.is_object() || !f.contains("name") || !f.at("name").is_string()) {
      throw std::invalid_argument("scenario: each free parameter needs a 'name'");
    }
    const auto name = f.at("name").get<std::string>();
    if (!f.contains("search") || !f.contains("velocity")) {
      throw std::invalid_argument("scenario: free parameter '" + name +
                                  "' needs 'search' and 'velocity' ranges");
    }
    s.free.push_back({parse_parameter(name), bounds_from_json(f.at("search"), name + ".search"),
                      bounds_from_json(f.at("velocity"), name + ".velocity")});
  }
  if (j.contains("fixed")) {
    if (!j.at("fixed").is_object()) throw std::invalid_argument("scenario: 'fixed' must be an object");
    for (const auto& [key, value] : j.at("fixed").items()) {
      if (!value.is_number()) {
        throw std::invalid_argument("scenario: fixed value of '" + key + "' must be a number");
      }
      s.fixed[parse_parameter(key)] = value.get<double>();
    }
  }
  if (j.contains("observation_period")) s.observation_period = number_field(j, "observation_period", "scenario");
  if (j.contains("horizon")) s.horizon = number_field(j, "horizon", "scenario");
  s.validate();

  if (j.contains("truth") && !j.at("truth").is_null()) doc.truth = model_from_json(j.at("truth"));

  doc.swarm = s.default_swarm();
  if (j.contains("swarm")) {
    const auto& w = j.at("swarm");
    if (!w.is_object()) throw std::invalid_argument("scenario: 'swarm' must be an object");
    auto count = [&](const char* key, std::size_t& dst) {
      if (!w.contains(key)) return;
      if (!w.at(key).is_number_unsigned() || w.at(key).get<std::size_t>() == 0) {
        throw std::invalid_argument(std::string("scenario: swarm.") + key +
                                    " must be a positive integer");
      }
      dst = w.at(key).get<std::size_t>();
    };
    auto real = [&](const char* key, double& dst) {
      if (w.contains(key)) dst = number_field(w, key, "scenario.swarm");
    };
    count("particles", doc.swarm.particle_count);
    count("iterations", doc.swarm.iterations);
    real("c1", doc.swarm.c1);
    real("c2", doc.swarm.c2);
    real("inertia_start", doc.swarm.inertia_start);
    real("inertia_end", doc.swarm.inertia_end);
  }
  doc.swarm.validate();
  return doc;
}

ScenarioDocument read_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open scenario file '" + path.string() + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("scenario file '" + path.string() + "' is not valid JSON: " +
                                e.what());
  }
  return scenario_from_json(j);
}

Json to_json(const RunReport& report) {
  Json order = Json::array();
  for (auto p : report.order) order.push_back(to_string(p));

  Json runs = Json::array();
  for (const auto& r : report.runs) {
    Json run{{"index", r.index}, {"swarm_seed", r.swarm_seed}};
    run["noise_seed"] = r.noise_seed ? Json(*r.noise_seed) : Json(nullptr);
    run["ok"] = r.ok;
    if (r.ok) {
      run["estimate"] = to_json(r.estimate);
      run["position"] = r.position;
      run["fitness"] = r.fitness;
      if (r.clean_fitness) run["clean_fitness"] = *r.clean_fitness;
    } else {
      run["error"] = r.error;
    }
    runs.push_back(run);
  }

  Json stats = Json::array();
  for (const auto& s : report.stats) {
    stats.push_back(Json{{"parameter", to_string(s.name)},
                         {"mean", s.mean},
                         {"std_dev", s.std_dev},
                         {"truth", optional_number(s.truth)},
                         {"percent_error", optional_number(s.percent_error)}});
  }

  Json j{{"parameter_order", order}, {"runs", runs}};
  j["best_run"] = report.best_run ? Json(*report.best_run) : Json(nullptr);
  if (report.best_run) {
    const auto& best = report.runs[*report.best_run];
    j["best_estimate"] = to_json(best.estimate);
    j["best_fitness"] = best.fitness;
  }
  j["failed_runs"] = report.failed_runs();
  j["statistics"] = stats;
  return j;
}

Json to_json(const EquationRow& row) {
  return Json{{"level", row.level}, {"eval_time", row.eval_time}, {"p", row.p},
              {"q", row.q},         {"r", row.r},                 {"s", row.s}};
}

Json to_json(const Reconstruction& rec) {
  Json rows = Json::array();
  for (const auto& r : rec.rows) rows.push_back(to_json(r));
  return Json{{"rows", rows},
              {"solution", Json{{"a1", rec.a1}, {"a2", rec.a2}, {"a3", rec.a3}}},
              {"condition_estimate", rec.condition}};
}

Json to_json(const RankedModel& m) {
  Json j{{"input_index", m.input_index}, {"model", to_json(m.model)}};
  j["fitness"] = optional_number(m.fitness);
  if (!m.error.empty()) j["error"] = m.error;
  return j;
}

Json to_json(const RefinementResult& result) {
  Json levels = Json::array();
  for (std::size_t l = 0; l < result.levels.size(); ++l) {
    const auto& lv = result.levels[l];
    Json rows = Json::array();
    for (std::size_t i = 0; i < lv.rows.size(); ++i) {
      const auto& row = lv.rows[i];
      Json r{{"range", bounds_json(row.range)}, {"nominal", row.nominal}, {"seed", row.seed}};
      r["fitness"] = row.ok ? Json(row.fitness) : Json(nullptr);
      if (row.ok) {
        r["estimate"] = to_json(row.estimate);
      } else {
        r["error"] = row.error;
      }
      r["chosen"] = i == lv.chosen;
      rows.push_back(r);
    }
    levels.push_back(Json{{"level", l},
                          {"parameter", to_string(lv.parameter)},
                          {"rows", rows},
                          {"chosen", lv.chosen},
                          {"retried", lv.retried},
                          {"monotonicity_violation", lv.monotonicity_violation}});
  }
  return Json{{"estimate", to_json(result.estimate)},
              {"fitness", result.fitness},
              {"levels", levels}};
}

void write_json(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::invalid_argument("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace fracid
