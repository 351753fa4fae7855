#include "fracid/identify.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "fracid/random.hpp"

namespace fracid {
namespace {

SampledSignal reference_data() { return simulate(reference_model(), StepInput{}, 0.05, 10.0); }

SwarmConfig quick_swarm(const Scenario& s, std::uint64_t seed) {
  SwarmConfig c = s.default_swarm(seed);
  c.particle_count = 8;
  c.iterations = 6;
  return c;
}

TEST(Fitness, ZeroAtTrueParametersOnMatchedGrid) {
  const auto data = reference_data();
  for (const auto& scenario : {four_parameter_scenario(), five_parameter_scenario()}) {
    const auto fitness = make_fitness(data, scenario);
    EXPECT_EQ(fitness(scenario.encode(reference_model())), 0.0);
  }
}

TEST(Fitness, PositiveAwayFromTruthAndNeverNegative) {
  const auto data = reference_data();
  const auto scenario = five_parameter_scenario();
  const auto fitness = make_fitness(data, scenario);
  auto x = scenario.encode(reference_model());
  x[2] += 1e-6;
  EXPECT_GT(fitness(x), 0.0);

  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    std::vector<double> p;
    for (const auto& f : scenario.free) p.push_back(rng.uniform(f.search.min, f.search.max));
    EXPECT_GE(fitness(p), 0.0);
  }
}

TEST(Fitness, NoiseChangesTrueFitnessByAtMostNaSquared) {
  const auto data = reference_data();
  const auto scenario = five_parameter_scenario();
  const auto truth = scenario.encode(reference_model());
  const double a = 0.05;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto noisy = corrupt(data, a, seed);
    const double f = make_fitness(noisy, scenario)(truth);
    EXPECT_LE(f, static_cast<double>(data.size()) * a * a);
    EXPECT_GT(f, 0.0);
  }
}

TEST(Fitness, RejectsMismatchedObservations) {
  const auto scenario = four_parameter_scenario();
  const auto fine = simulate(reference_model(), StepInput{}, 0.01, 10.0);
  EXPECT_THROW(make_fitness(fine, scenario), std::invalid_argument);
  const auto shorter = simulate(reference_model(), StepInput{}, 0.05, 5.0);
  EXPECT_THROW(make_fitness(shorter, scenario), std::invalid_argument);
  auto shifted = reference_data();
  shifted.start_time = 1.0;
  EXPECT_THROW(make_fitness(shifted, scenario), std::invalid_argument);
}

TEST(Corrupt, ZeroAmplitudeIsIdentity) {
  const auto data = reference_data();
  EXPECT_EQ(corrupt(data, 0.0, 5).samples, data.samples);
}

TEST(Corrupt, StaysWithinAmplitudeAndIsDeterministic) {
  const auto data = reference_data();
  for (std::uint64_t seed : {0u, 1u, 99u}) {
    const auto noisy = corrupt(data, 0.05, seed);
    for (std::size_t k = 0; k < data.size(); ++k) {
      EXPECT_LE(std::abs(noisy.samples[k] - data.samples[k]), 0.05);
    }
    EXPECT_EQ(noisy.samples, corrupt(data, 0.05, seed).samples);
  }
  EXPECT_NE(corrupt(data, 0.05, 1).samples, corrupt(data, 0.05, 2).samples);
  EXPECT_THROW(corrupt(data, -0.1, 0), std::invalid_argument);
}

TEST(Statistics, SampleStandardDeviationOfFiveRuns) {
  const std::vector<double> a2{0.5, 0.5001, 0.5, 0.5, 0.5};
  EXPECT_NEAR(sample_std_dev(a2), 4.4721e-5, 5e-10);
  EXPECT_NEAR(mean_of(a2), 0.50002, 1e-15);
  EXPECT_NEAR(*percent_error(mean_of(a2), 0.5), 0.0040, 1e-9);
}

TEST(Statistics, PercentErrorOfMeanEstimate) {
  EXPECT_NEAR(*percent_error(0.5062, 0.5), 1.24, 1e-9);
  EXPECT_FALSE(percent_error(0.1, 0.0).has_value());
  EXPECT_EQ(sample_std_dev(std::vector<double>{0.7}), 0.0);
}

TEST(Summarize, BestRunAndFailedRunsExcluded) {
  RunReport report;
  report.order = {Parameter::a1, Parameter::a3};
  for (std::size_t i = 0; i < 4; ++i) {
    RunResult r;
    r.index = i;
    r.ok = i != 2;
    r.fitness = i == 2 ? -100.0 : 1.0 / static_cast<double>(i + 1);
    r.estimate = {0.8 + 0.01 * static_cast<double>(i), 2.2, 0.5, 0.9, 1.0};
    if (!r.ok) r.error = "simulated failure";
    report.runs.push_back(r);
  }
  summarize(report, reference_model());
  EXPECT_EQ(report.best_run, 3u);
  EXPECT_EQ(report.failed_runs(), 1u);
  ASSERT_EQ(report.stats.size(), 2u);
  EXPECT_NEAR(report.stats[0].mean, (0.80 + 0.81 + 0.83) / 3.0, 1e-12);
  EXPECT_EQ(report.stats[1].std_dev, 0.0);
  EXPECT_EQ(report.stats[1].percent_error, 0.0);
}

TEST(Scenario, DecodeEncodeRespectsDeclaredOrder) {
  const auto s = four_parameter_scenario();
  const std::vector<double> x{0.7, 2.3, 0.4, 1.1};
  const auto m = s.decode(x);
  EXPECT_EQ(m, (FractionalModel{0.7, 2.3, 0.4, 0.9, 1.1}));
  EXPECT_EQ(s.encode(m), x);
  EXPECT_THROW(s.decode(std::vector<double>{1.0}), std::invalid_argument);
}

TEST(Scenario, DefaultRangesAndSwarmSizes) {
  const auto five = five_parameter_scenario();
  five.validate();
  const auto swarm = five.default_swarm(3);
  EXPECT_EQ(swarm.particle_count, 50u);
  EXPECT_EQ(swarm.iterations, 200u);
  EXPECT_EQ(swarm.c1, 1.4);
  EXPECT_EQ(swarm.c2, 1.4);
  EXPECT_EQ(swarm.position_bounds[1], (Bounds{2.0, 2.4}));
  EXPECT_EQ(swarm.position_bounds[3], (Bounds{0.7, 1.1}));
  EXPECT_EQ(swarm.velocity_bounds[0], (Bounds{-0.5, 0.5}));
  EXPECT_EQ(swarm.velocity_bounds[3], (Bounds{-0.1, 0.1}));
  const auto four = four_parameter_scenario().default_swarm();
  EXPECT_EQ(four.particle_count, 40u);
  EXPECT_EQ(four.iterations, 150u);
}

TEST(Scenario, ValidationCatchesInconsistentBoxes) {
  auto s = five_parameter_scenario();
  s.fixed[Parameter::a3] = 1.0;
  EXPECT_THROW(s.validate(), std::invalid_argument);  // both free and fixed

  s = four_parameter_scenario();
  s.fixed.clear();
  EXPECT_THROW(s.validate(), std::invalid_argument);  // beta missing

  s = five_parameter_scenario();
  s.free[3].search = {0.7, 2.1};
  EXPECT_THROW(s.validate(), std::invalid_argument);  // beta may exceed alpha

  s = five_parameter_scenario();
  s.free[0].search = {0.0, 2.0};
  EXPECT_THROW(s.validate(), std::invalid_argument);  // a1 may reach zero

  s = five_parameter_scenario();
  s.free[2].velocity = {0.5, -0.5};
  EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Scenario, WithFixedMovesTarget) {
  const auto s = five_parameter_scenario().with_fixed(Parameter::beta, 0.85);
  EXPECT_EQ(s.dimension(), 4u);
  EXPECT_FALSE(s.is_free(Parameter::beta));
  EXPECT_EQ(s.fixed.at(Parameter::beta), 0.85);
  EXPECT_THROW(s.with_fixed(Parameter::beta, 0.9), std::invalid_argument);
}

TEST(Identify, FourParameterRunsRecoverTruth) {
  const auto s = four_parameter_scenario();
  IdentifyOptions opts;
  opts.runs = 2;
  opts.truth = reference_model();
  const auto report = identify(reference_data(), s, s.default_swarm(17), opts);
  ASSERT_TRUE(report.best_run);
  const auto& best = report.runs[*report.best_run];
  EXPECT_LE(best.fitness, 1e-6);
  for (auto p : report.order) {
    EXPECT_NEAR(get(best.estimate, p), get(reference_model(), p), 5e-5);
  }
}

TEST(Identify, SingleRunHasZeroSpread) {
  const auto s = five_parameter_scenario();
  IdentifyOptions opts;
  opts.runs = 1;
  const auto report = identify(reference_data(), s, quick_swarm(s, 1), opts);
  for (const auto& st : report.stats) {
    EXPECT_EQ(st.std_dev, 0.0);
    EXPECT_FALSE(st.percent_error.has_value());
  }
  EXPECT_EQ(report.best_run, 0u);
}

TEST(Identify, DeterministicAndIndependentOfRunCountAndWorkers) {
  const auto s = five_parameter_scenario();
  const auto data = reference_data();
  IdentifyOptions opts;
  opts.runs = 3;
  opts.noise = NoiseConfig{0.05, 42};
  opts.report_clean_fitness = true;
  const auto a = identify(data, s, quick_swarm(s, 8), opts);
  opts.run_workers = 3;
  const auto b = identify(data, s, quick_swarm(s, 8), opts);
  opts.runs = 2;
  opts.run_workers = 1;
  const auto c = identify(data, s, quick_swarm(s, 8), opts);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(a.runs[i].position, b.runs[i].position);
    EXPECT_EQ(a.runs[i].fitness, b.runs[i].fitness);
    EXPECT_EQ(a.runs[i].noise_seed, derive_seed(42, "noise-run", i));
    EXPECT_EQ(a.runs[i].swarm_seed, derive_seed(8, "pso-run", i));
    EXPECT_TRUE(a.runs[i].clean_fitness.has_value());
    if (i < 2) EXPECT_EQ(a.runs[i].position, c.runs[i].position);
  }
  // Each run saw a different noise realisation.
  EXPECT_NE(a.runs[0].noise_seed, a.runs[1].noise_seed);
}

TEST(Identify, RejectsZeroRuns) {
  const auto s = four_parameter_scenario();
  IdentifyOptions opts;
  opts.runs = 0;
  EXPECT_THROW(identify(reference_data(), s, quick_swarm(s, 1), opts), std::invalid_argument);
}

TEST(Parameters, NamesRoundTrip) {
  for (auto p : kAllParameters) EXPECT_EQ(parse_parameter(to_string(p)), p);
  EXPECT_THROW(parse_parameter("gamma"), std::invalid_argument);
}

}  // namespace
}  // namespace fracid
