#include "fracid/refine.hpp"

#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

#include "fracid/errors.hpp"
#include "fracid/random.hpp"

namespace fracid {

namespace {

RefinementRow run_nominal(const SampledSignal& observations, const Scenario& scenario,
                          Parameter target, Bounds range, const SwarmConfig& inner_swarm,
                          std::uint64_t seed) {
  RefinementRow row;
  row.range = range;
  row.nominal = range.center();
  row.seed = seed;
  const Scenario reduced = scenario.with_fixed(target, row.nominal);
  try {
    SwarmConfig cfg = reduced.bind(inner_swarm);
    cfg.seed = seed;
    const auto result = optimize(make_fitness(observations, reduced), cfg);
    row.estimate = reduced.decode(result.best_position);
    row.fitness = result.best_fitness;
    row.ok = true;
  } catch (const NumericalError& e) {
    row.error = e.what();
  }
  return row;
}

std::vector<RefinementRow> run_level(const SampledSignal& observations, const Scenario& scenario,
                                     Parameter target, const std::vector<Bounds>& pieces,
                                     const SwarmConfig& inner_swarm,
                                     const std::vector<std::uint64_t>& seeds,
                                     std::size_t workers) {
  std::vector<RefinementRow> rows(pieces.size());
  if (workers <= 1) {
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      rows[i] = run_nominal(observations, scenario, target, pieces[i], inner_swarm, seeds[i]);
    }
    return rows;
  }
  for (std::size_t start = 0; start < pieces.size(); start += workers) {
    const std::size_t stop = std::min(pieces.size(), start + workers);
    std::vector<std::future<RefinementRow>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, run_nominal, std::cref(observations),
                                 std::cref(scenario), target, pieces[i], std::cref(inner_swarm),
                                 seeds[i]));
    }
    for (std::size_t i = start; i < stop; ++i) rows[i] = batch[i - start].get();
  }
  return rows;
}

std::optional<std::size_t> best_row(const std::vector<RefinementRow>& rows) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].ok && (!best || rows[i].fitness < rows[*best].fitness)) best = i;
  }
  return best;
}

std::vector<Bounds> split(Bounds interval, std::size_t parts) {
  std::vector<Bounds> pieces(parts);
  const double width = interval.width() / static_cast<double>(parts);
  for (std::size_t i = 0; i < parts; ++i) {
    pieces[i].min = interval.min + width * static_cast<double>(i);
    pieces[i].max = i + 1 == parts ? interval.max : interval.min + width * static_cast<double>(i + 1);
  }
  return pieces;
}

std::vector<std::uint64_t> level_seeds(std::uint64_t seed, std::size_t level, std::size_t count,
                                       const char* tag) {
  const auto level_seed = derive_seed(seed, "refine-level", level);
  std::vector<std::uint64_t> seeds(count);
  for (std::size_t i = 0; i < count; ++i) seeds[i] = derive_seed(level_seed, tag, i);
  return seeds;
}

}  // namespace

RefinementResult concentrated_search(const SampledSignal& observations, const Scenario& scenario,
                                     Parameter target, Bounds range,
                                     const SwarmConfig& inner_swarm, std::uint64_t seed,
                                     const RefineOptions& options) {
  scenario.validate();
  if (!scenario.is_free(target)) {
    throw std::invalid_argument("refinement target " + std::string(to_string(target)) +
                                " is not a free parameter of the scenario");
  }
  if (scenario.dimension() < 2) {
    throw std::invalid_argument("refinement needs at least one other free parameter");
  }
  if (options.branching < 2) {
    throw std::invalid_argument("branching factor must be at least 2");
  }
  if (!(options.width_tolerance > 0.0)) {
    throw std::invalid_argument("width tolerance must be positive");
  }
  if (!std::isfinite(range.min) || !std::isfinite(range.max) || !(range.min < range.max)) {
    throw std::invalid_argument("refinement range must satisfy lo < hi");
  }
  auto log = [&](const std::string& line) {
    if (options.log) options.log(line);
  };

  RefinementResult out;
  Bounds interval = range;
  std::optional<double> parent_fitness;
  for (std::size_t level = 0;; ++level) {
    const double limit = options.width_tolerance * (1.0 + 1e-9);
    const bool final_only = interval.width() <= limit;
    const auto pieces = final_only ? std::vector<Bounds>{interval} : split(interval, options.branching);

    RefinementLevel lv;
    lv.parameter = target;
    lv.rows = run_level(observations, scenario, target, pieces, inner_swarm,
                        level_seeds(seed, level, pieces.size(), "nominal"), options.workers);
    auto chosen = best_row(lv.rows);

    if (chosen && parent_fitness && lv.rows[*chosen].fitness > *parent_fitness) {
      std::ostringstream msg;
      msg << "level " << level << " best fitness " << lv.rows[*chosen].fitness
          << " exceeds parent " << *parent_fitness << "; retrying with alternate seeds";
      log(msg.str());
      lv.retried = true;
      auto retry = run_level(observations, scenario, target, pieces, inner_swarm,
                             level_seeds(seed, level, pieces.size(), "nominal-retry"),
                             options.workers);
      // Per nominal, keep whichever attempt found the lower fitness.
      for (std::size_t i = 0; i < retry.size(); ++i) {
        if (retry[i].ok && (!lv.rows[i].ok || retry[i].fitness < lv.rows[i].fitness)) {
          lv.rows[i] = std::move(retry[i]);
        }
      }
      chosen = best_row(lv.rows);
      if (chosen && lv.rows[*chosen].fitness > *parent_fitness) {
        lv.monotonicity_violation = true;
        std::ostringstream v;
        v << "level " << level << " still exceeds parent fitness after retry ("
          << lv.rows[*chosen].fitness << " > " << *parent_fitness << ")";
        log(v.str());
      }
    }

    if (!chosen) {
      std::ostringstream msg;
      msg << "concentrated search: every nominal failed at level " << level << ":";
      for (const auto& row : lv.rows) {
        msg << "\n  " << to_string(target) << "=" << row.nominal << ": " << row.error;
      }
      throw NumericalError(msg.str());
    }

    lv.chosen = *chosen;
    const auto& best = lv.rows[lv.chosen];
    out.estimate = best.estimate;
    out.fitness = best.fitness;
    parent_fitness = best.fitness;
    interval = best.range;
    out.levels.push_back(std::move(lv));

    if (final_only || interval.width() <= limit) break;
  }
  return out;
}

}  // namespace fracid
