#include "fracid/identify.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>
#include <stdexcept>

#include "fracid/errors.hpp"
#include "fracid/random.hpp"

namespace fracid {

std::string_view to_string(Parameter p) {
  switch (p) {
    case Parameter::a1: return "a1";
    case Parameter::alpha: return "alpha";
    case Parameter::a2: return "a2";
    case Parameter::beta: return "beta";
    case Parameter::a3: return "a3";
  }
  return "?";
}

Parameter parse_parameter(std::string_view name) {
  for (auto p : kAllParameters) {
    if (to_string(p) == name) return p;
  }
  throw std::invalid_argument("unknown parameter '" + std::string(name) +
                              "' (expected a1, alpha, a2, beta or a3)");
}

double get(const FractionalModel& m, Parameter p) {
  switch (p) {
    case Parameter::a1: return m.a1;
    case Parameter::alpha: return m.alpha;
    case Parameter::a2: return m.a2;
    case Parameter::beta: return m.beta;
    case Parameter::a3: return m.a3;
  }
  return 0.0;
}

void set(FractionalModel& m, Parameter p, double value) {
  switch (p) {
    case Parameter::a1: m.a1 = value; break;
    case Parameter::alpha: m.alpha = value; break;
    case Parameter::a2: m.a2 = value; break;
    case Parameter::beta: m.beta = value; break;
    case Parameter::a3: m.a3 = value; break;
  }
}

bool Scenario::is_free(Parameter p) const {
  return std::any_of(free.begin(), free.end(), [p](const auto& f) { return f.name == p; });
}

std::size_t Scenario::sample_count() const { return whole_steps(horizon, observation_period) + 1; }

void Scenario::validate() const {
  if (free.empty()) {
    throw std::invalid_argument("scenario has no free parameters");
  }
  if (!(observation_period > 0.0) || !std::isfinite(observation_period)) {
    throw std::invalid_argument("scenario observation period must be positive");
  }
  if (!(horizon >= observation_period) || !std::isfinite(horizon)) {
    throw std::invalid_argument("scenario horizon must cover at least one period");
  }
  // Lowest and highest value each parameter can take over the search box.
  std::map<Parameter, Bounds> span;
  for (const auto& f : free) {
    if (span.count(f.name)) {
      throw std::invalid_argument("parameter " + std::string(to_string(f.name)) +
                                  " listed as free twice");
    }
    if (fixed.count(f.name)) {
      throw std::invalid_argument("parameter " + std::string(to_string(f.name)) +
                                  " is both free and fixed");
    }
    for (const auto& b : {f.search, f.velocity}) {
      if (!std::isfinite(b.min) || !std::isfinite(b.max) || !(b.min < b.max)) {
        throw std::invalid_argument("parameter " + std::string(to_string(f.name)) +
                                    " has an empty or invalid range");
      }
    }
    span[f.name] = f.search;
  }
  for (const auto& [p, v] : fixed) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("fixed value of " + std::string(to_string(p)) + " is not finite");
    }
    span[p] = Bounds{v, v};
  }
  for (auto p : kAllParameters) {
    if (!span.count(p)) {
      throw std::invalid_argument("parameter " + std::string(to_string(p)) +
                                  " is neither free nor fixed");
    }
  }
  if (!(span[Parameter::a1].min > 0.0)) {
    throw std::invalid_argument("a1 must stay positive over the whole search range");
  }
  if (!(span[Parameter::beta].min >= 0.0)) {
    throw std::invalid_argument("beta must stay nonnegative over the whole search range");
  }
  if (!(span[Parameter::alpha].min > span[Parameter::beta].max)) {
    throw std::invalid_argument("alpha range must lie strictly above the beta range");
  }
}

FractionalModel Scenario::decode(std::span<const double> position) const {
  if (position.size() != free.size()) {
    throw std::invalid_argument("position has wrong dimension for scenario");
  }
  FractionalModel m;
  for (const auto& [p, v] : fixed) set(m, p, v);
  for (std::size_t d = 0; d < free.size(); ++d) set(m, free[d].name, position[d]);
  return m;
}

std::vector<double> Scenario::encode(const FractionalModel& model) const {
  std::vector<double> x;
  x.reserve(free.size());
  for (const auto& f : free) x.push_back(get(model, f.name));
  return x;
}

Scenario Scenario::with_fixed(Parameter target, double value) const {
  Scenario out = *this;
  auto it = std::find_if(out.free.begin(), out.free.end(),
                         [target](const auto& f) { return f.name == target; });
  if (it == out.free.end()) {
    throw std::invalid_argument("parameter " + std::string(to_string(target)) +
                                " is not free in this scenario");
  }
  out.free.erase(it);
  out.fixed[target] = value;
  return out;
}

SwarmConfig Scenario::bind(SwarmConfig swarm) const {
  swarm.position_bounds.clear();
  swarm.velocity_bounds.clear();
  for (const auto& f : free) {
    swarm.position_bounds.push_back(f.search);
    swarm.velocity_bounds.push_back(f.velocity);
  }
  return swarm;
}

SwarmConfig Scenario::default_swarm(std::uint64_t seed) const {
  SwarmConfig swarm;
  if (free.size() > 4) {
    swarm.particle_count = 50;
    swarm.iterations = 200;
  }
  swarm.seed = seed;
  return bind(std::move(swarm));
}

FractionalModel reference_model() { return {0.8, 2.2, 0.5, 0.9, 1.0}; }

namespace {

// a1 must stay strictly positive; this is the smallest value the search may reach.
constexpr double kMinLeadingCoefficient = 1e-6;

FreeParameter coefficient(Parameter p) {
  const double lo = p == Parameter::a1 ? kMinLeadingCoefficient : 0.0;
  return {p, {lo, 2.0}, {-0.5, 0.5}};
}

}  // namespace

Scenario four_parameter_scenario() {
  Scenario s;
  s.free = {coefficient(Parameter::a1),
            {Parameter::alpha, {2.0, 2.4}, {-0.1, 0.1}},
            coefficient(Parameter::a2),
            coefficient(Parameter::a3)};
  s.fixed = {{Parameter::beta, 0.9}};
  return s;
}

Scenario five_parameter_scenario() {
  Scenario s;
  s.free = {coefficient(Parameter::a1),
            {Parameter::alpha, {2.0, 2.4}, {-0.1, 0.1}},
            coefficient(Parameter::a2),
            {Parameter::beta, {0.7, 1.1}, {-0.1, 0.1}},
            coefficient(Parameter::a3)};
  return s;
}

namespace {

double squared_deviation(const FractionalModel& model, const SampledSignal& observations,
                         double step) {
  const double horizon = static_cast<double>(observations.size() - 1) * step;
  const auto response = simulate(model, StepInput{}, step, horizon);
  long double sum = 0.0L;
  for (std::size_t k = 0; k < observations.size(); ++k) {
    const long double d = static_cast<long double>(observations.samples[k]) - response.samples[k];
    sum += d * d;
  }
  return static_cast<double>(sum);
}

void check_observations(const SampledSignal& observations) {
  observations.validate();
  if (observations.size() < 2) {
    throw std::invalid_argument("observations need at least two samples");
  }
  if (std::abs(observations.start_time) > 1e-9 * observations.period) {
    throw std::invalid_argument("step-response observations must start at t = 0");
  }
}

}  // namespace

double step_fitness(const FractionalModel& model, const SampledSignal& observations) {
  check_observations(observations);
  return squared_deviation(model, observations, observations.period);
}

FitnessFunction make_fitness(const SampledSignal& observations, const Scenario& scenario) {
  scenario.validate();
  check_observations(observations);
  if (std::abs(observations.period - scenario.observation_period) >
      1e-9 * scenario.observation_period) {
    std::ostringstream msg;
    msg << "observation period " << observations.period << " s does not match scenario period "
        << scenario.observation_period << " s";
    throw std::invalid_argument(msg.str());
  }
  if (observations.size() != scenario.sample_count()) {
    std::ostringstream msg;
    msg << "observations have " << observations.size() << " samples, scenario horizon needs "
        << scenario.sample_count();
    throw std::invalid_argument(msg.str());
  }
  const double step = scenario.observation_period;
  return [observations, scenario, step](std::span<const double> position) {
    return squared_deviation(scenario.decode(position), observations, step);
  };
}

SampledSignal corrupt(const SampledSignal& signal, double amplitude, std::uint64_t seed) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw std::invalid_argument("noise amplitude must be nonnegative");
  }
  SampledSignal out = signal;
  if (amplitude == 0.0) return out;
  Rng rng(seed);
  for (auto& x : out.samples) {
    // Clamp guards the half-open draw against rounding past the amplitude.
    x += std::clamp(rng.uniform(-amplitude, amplitude), -amplitude, amplitude);
  }
  return out;
}

double mean_of(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  long double sum = 0.0L;
  for (double x : xs) sum += x;
  return static_cast<double>(sum / static_cast<long double>(xs.size()));
}

double sample_std_dev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean_of(xs);
  long double ss = 0.0L;
  for (double x : xs) ss += (static_cast<long double>(x) - m) * (static_cast<long double>(x) - m);
  return std::sqrt(static_cast<double>(ss / static_cast<long double>(xs.size() - 1)));
}

std::optional<double> percent_error(double estimate, double truth) {
  if (truth == 0.0) return std::nullopt;
  return std::abs(estimate - truth) / std::abs(truth) * 100.0;
}

std::size_t RunReport::failed_runs() const {
  return static_cast<std::size_t>(
      std::count_if(runs.begin(), runs.end(), [](const auto& r) { return !r.ok; }));
}

void summarize(RunReport& report, const std::optional<FractionalModel>& truth) {
  report.best_run.reset();
  for (const auto& r : report.runs) {
    if (!r.ok) continue;
    if (!report.best_run || r.fitness < report.runs[*report.best_run].fitness) {
      report.best_run = r.index;
    }
  }
  report.stats.clear();
  for (auto p : report.order) {
    std::vector<double> values;
    for (const auto& r : report.runs) {
      if (r.ok) values.push_back(get(r.estimate, p));
    }
    ParameterStats st;
    st.name = p;
    st.mean = mean_of(values);
    st.std_dev = sample_std_dev(values);
    // Identical runs must report exactly zero spread.
    if (std::adjacent_find(values.begin(), values.end(), std::not_equal_to<>()) == values.end()) {
      st.std_dev = 0.0;
    }
    if (truth && !values.empty()) {
      st.truth = get(*truth, p);
      st.percent_error = percent_error(st.mean, *st.truth);
    }
    report.stats.push_back(st);
  }
}

RunReport identify(const SampledSignal& observations, const Scenario& scenario,
                   const SwarmConfig& swarm, const IdentifyOptions& options) {
  if (options.runs == 0) {
    throw std::invalid_argument("identify needs at least one run");
  }
  const SwarmConfig bound = scenario.bind(swarm);
  bound.validate();
  // Validates observations against the scenario before any run starts.
  (void)make_fitness(observations, scenario);

  auto one_run = [&](std::size_t i) {
    RunResult r;
    r.index = i;
    r.swarm_seed = derive_seed(swarm.seed, "pso-run", i);
    SampledSignal data = observations;
    if (options.noise) {
      r.noise_seed = derive_seed(options.noise->base_seed, "noise-run", i);
      data = corrupt(observations, options.noise->amplitude, *r.noise_seed);
    }
    try {
      SwarmConfig cfg = bound;
      cfg.seed = r.swarm_seed;
      auto result = optimize(make_fitness(data, scenario), cfg);
      r.position = result.best_position;
      r.estimate = scenario.decode(result.best_position);
      r.fitness = result.best_fitness;
      r.history = std::move(result.history);
      if (options.noise && options.report_clean_fitness) {
        r.clean_fitness = step_fitness(r.estimate, observations);
      }
      r.ok = true;
    } catch (const NumericalError& e) {
      r.ok = false;
      r.error = e.what();
    }
    return r;
  };

  RunReport report;
  for (const auto& f : scenario.free) report.order.push_back(f.name);
  report.runs.resize(options.runs);
  const std::size_t workers = std::max<std::size_t>(1, options.run_workers);
  for (std::size_t start = 0; start < options.runs; start += workers) {
    const std::size_t stop = std::min(options.runs, start + workers);
    if (workers == 1) {
      report.runs[start] = one_run(start);
      continue;
    }
    std::vector<std::future<RunResult>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, one_run, i));
    }
    for (std::size_t i = start; i < stop; ++i) report.runs[i] = batch[i - start].get();
  }
  summarize(report, options.truth);
  return report;
}

}  // namespace fracid
