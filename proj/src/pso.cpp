#include "fracid/pso.hpp"

#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fracid/errors.hpp"
#include "fracid/random.hpp"

namespace fracid {

void SwarmConfig::validate() const {
  if (particle_count == 0) {
    throw std::invalid_argument("swarm needs at least one particle");
  }
  if (iterations == 0) {
    throw std::invalid_argument("swarm needs at least one iteration");
  }
  if (position_bounds.empty()) {
    throw std::invalid_argument("swarm search space has no dimensions");
  }
  if (position_bounds.size() != velocity_bounds.size()) {
    throw std::invalid_argument("position and velocity bounds differ in dimension");
  }
  for (std::size_t d = 0; d < position_bounds.size(); ++d) {
    for (const auto& b : {position_bounds[d], velocity_bounds[d]}) {
      if (!std::isfinite(b.min) || !std::isfinite(b.max) || !(b.min < b.max)) {
        std::ostringstream msg;
        msg << "dimension " << d << " has invalid bounds [" << b.min << ", " << b.max << "]";
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

double inertia_at(std::size_t iteration, std::size_t total, double start, double end) {
  if (total <= 1) {
    return start;
  }
  return start + (end - start) * static_cast<double>(iteration) / static_cast<double>(total - 1);
}

namespace {

void evaluate_all(const FitnessFunction& fitness, const std::vector<std::vector<double>>& xs,
                  std::vector<double>& out, std::size_t workers) {
  auto evaluate_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = fitness(xs[i]);
    }
  };

  const std::size_t n = xs.size();
  if (workers <= 1 || n < 2) {
    evaluate_range(0, n);
  } else {
    const std::size_t chunks = std::min(workers, n);
    std::vector<std::exception_ptr> errors(chunks);
    {
      std::vector<std::jthread> pool;
      pool.reserve(chunks);
      for (std::size_t c = 0; c < chunks; ++c) {
        pool.emplace_back([&, c] {
          try {
            evaluate_range(c * n / chunks, (c + 1) * n / chunks);
          } catch (...) {
            errors[c] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(out[i])) {
      std::ostringstream msg;
      msg << "fitness returned non-finite value " << out[i] << " for particle " << i;
      throw NumericalError(msg.str());
    }
  }
}

}  // namespace

SwarmResult optimize(const FitnessFunction& fitness, const SwarmConfig& config,
                     const SwarmObserver& observer) {
  config.validate();
  const std::size_t n = config.particle_count;
  const std::size_t dims = config.dimension();
  Rng rng(config.seed);

  SwarmState s;
  s.positions.assign(n, std::vector<double>(dims));
  s.velocities.assign(n, std::vector<double>(dims));
  s.position_fitness.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t d = 0; d < dims; ++d) {
      s.positions[i][d] = rng.uniform(config.position_bounds[d].min, config.position_bounds[d].max);
    }
    for (std::size_t d = 0; d < dims; ++d) {
      s.velocities[i][d] = rng.uniform(config.velocity_bounds[d].min, config.velocity_bounds[d].max);
    }
  }
  evaluate_all(fitness, s.positions, s.position_fitness, config.workers);

  s.personal_best = s.positions;
  s.personal_best_fitness = s.position_fitness;
  std::size_t leader = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (s.personal_best_fitness[i] < s.personal_best_fitness[leader]) leader = i;
  }
  s.global_best = s.personal_best[leader];
  s.global_best_fitness = s.personal_best_fitness[leader];
  if (observer) observer(s);

  SwarmResult result;
  result.history.reserve(config.iterations);
  std::vector<double> phi(2 * dims);

  for (std::size_t t = 0; t < config.iterations; ++t) {
    const double w = inertia_at(t, config.iterations, config.inertia_start, config.inertia_end);
    // All draws happen here, before any evaluation is dispatched.
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& p : phi) p = rng.uniform01();
      auto& x = s.positions[i];
      auto& v = s.velocities[i];
      for (std::size_t d = 0; d < dims; ++d) {
        const double pull_own = config.c1 * phi[2 * d] * (s.personal_best[i][d] - x[d]);
        const double pull_swarm = config.c2 * phi[2 * d + 1] * (s.global_best[d] - x[d]);
        v[d] = config.velocity_bounds[d].clamp(w * v[d] + pull_own + pull_swarm);
        x[d] = config.position_bounds[d].clamp(x[d] + v[d]);
      }
    }

    evaluate_all(fitness, s.positions, s.position_fitness, config.workers);

    for (std::size_t i = 0; i < n; ++i) {
      if (s.position_fitness[i] < s.personal_best_fitness[i]) {
        s.personal_best_fitness[i] = s.position_fitness[i];
        s.personal_best[i] = s.positions[i];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (s.personal_best_fitness[i] < s.global_best_fitness) {
        s.global_best_fitness = s.personal_best_fitness[i];
        s.global_best = s.personal_best[i];
      }
    }
    s.iteration = t + 1;
    result.history.push_back(s.global_best_fitness);
    if (observer) observer(s);
  }

  result.best_position = s.global_best;
  result.best_fitness = s.global_best_fitness;
  return result;
}

}  // namespace fracid
