#include "fracid/differint.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <thread>

#include "fracid/random.hpp"
#include "oracles.hpp"

namespace fracid {
namespace {

SampledSignal random_signal(Rng& rng, std::size_t n, double period) {
  SampledSignal s{0.0, period, std::vector<double>(n)};
  for (auto& x : s.samples) x = rng.uniform(-1.0, 1.0);
  return s;
}

TEST(GlCoefficients, IntegerOrdersAreFiniteDifferences) {
  EXPECT_EQ(gl_coefficients(1.0, 4).values, (std::vector<double>{1, -1, 0, 0}));
  EXPECT_EQ(gl_coefficients(0.0, 4).values, (std::vector<double>{1, 0, 0, 0}));
}

TEST(GlCoefficients, HalfOrderMatchesGammaOracle) {
  const auto b = gl_coefficients(0.5, 4);
  const std::vector<double> frozen{1.0, -0.5, -0.125, -0.0625};
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_NEAR(b.values[j], oracle::gl_weight(0.5, j), 1e-12);
    EXPECT_NEAR(b.values[j], frozen[j], 1e-12);
  }
}

TEST(GlCoefficients, RecursionMatchesBinomialForManyOrders) {
  for (double order : {-2.0, -1.0, -0.5, 0.3, 0.9, 1.7, 2.2}) {
    const auto b = gl_coefficients(order, 201);
    for (std::size_t j = 0; j <= 200; ++j) {
      const double expected = oracle::gl_weight(order, j);
      EXPECT_LE(std::abs(b.values[j] - expected), 1e-10 * std::abs(expected))
          << "order " << order << " j " << j;
    }
  }
}

TEST(GlCoefficients, RecursionInvariantHolds) {
  for (double order : {-1.3, 0.0, 0.45, 2.2}) {
    const auto b = gl_coefficients(order, 50);
    EXPECT_EQ(b.values[0], 1.0);
    for (std::size_t j = 1; j < 50; ++j) {
      EXPECT_DOUBLE_EQ(b.values[j], (1.0 - (1.0 + order) / static_cast<double>(j)) * b.values[j - 1]);
    }
  }
}

TEST(GlCoefficients, FractionalOrderBelowOneHasNegativeTailAndShrinkingPartialSums) {
  for (double order : {0.1, 0.5, 0.9}) {
    const auto b = gl_coefficients(order, 500);
    double partial = b.values[0];
    for (std::size_t j = 1; j < b.values.size(); ++j) {
      EXPECT_LT(b.values[j], 0.0);
      const double next = partial + b.values[j];
      EXPECT_GT(next, 0.0);
      EXPECT_LE(next, partial);
      partial = next;
    }
  }
}

TEST(GlCoefficients, RejectsZeroCount) {
  EXPECT_THROW(gl_coefficients(0.5, 0), std::invalid_argument);
}

TEST(GlDifferint, OrderZeroIsIdentity) {
  Rng rng(3);
  const auto s = random_signal(rng, 64, 0.1);
  const auto out = gl_differint(s, 0.0, 0.3);
  EXPECT_EQ(out.samples, s.samples);
  EXPECT_EQ(out.start_time, s.start_time);
  EXPECT_EQ(out.period, s.period);
}

TEST(GlDifferint, FirstOrderOfRampIsSlope) {
  SampledSignal ramp{0.0, 0.01, {}};
  for (std::size_t k = 0; k < 1001; ++k) ramp.samples.push_back(ramp.time_at(k));
  const auto d = gl_differint(ramp, 1.0, 100.0);
  for (std::size_t k = 1; k < d.size(); ++k) {
    EXPECT_NEAR(d.samples[k], 1.0, 1e-9) << k;
  }
}

TEST(GlDifferint, MinusOneOrderIsLeftRiemannSum) {
  const SampledSignal ones{0.0, 0.01, std::vector<double>(1001, 1.0)};
  const auto integral = gl_differint(ones, -1.0, 100.0);
  double direct = 0.0;
  for (std::size_t k = 0; k < ones.size(); ++k) {
    direct += ones.samples[k] * ones.period;
    EXPECT_NEAR(integral.samples[k], direct, 1e-12) << k;
    EXPECT_NEAR(integral.samples[k], ones.time_at(k) + 0.01, 1e-9);
  }
}

TEST(GlDifferint, IsLinear) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const double order = rng.uniform(-2.0, 2.5);
    const double a = rng.uniform(-3.0, 3.0);
    const double b = rng.uniform(-3.0, 3.0);
    const auto f = random_signal(rng, 300, 0.02);
    const auto g = random_signal(rng, 300, 0.02);
    SampledSignal mix = f;
    for (std::size_t k = 0; k < mix.size(); ++k) mix.samples[k] = a * f.samples[k] + b * g.samples[k];

    const auto lhs = gl_differint(mix, order, 10.0);
    const auto df = gl_differint(f, order, 10.0);
    const auto dg = gl_differint(g, order, 10.0);
    for (std::size_t k = 0; k < mix.size(); ++k) {
      const double rhs = a * df.samples[k] + b * dg.samples[k];
      const double scale = std::abs(a * df.samples[k]) + std::abs(b * dg.samples[k]);
      EXPECT_LE(std::abs(lhs.samples[k] - rhs), 1e-10 * std::max(scale, 1e-300))
          << "order " << order << " k " << k;
    }
  }
}

TEST(GlDifferint, DerivativeUndoesIntegral) {
  Rng rng(5);
  SampledSignal f{0.0, 0.01, std::vector<double>(2000)};
  for (std::size_t k = 0; k < f.size(); ++k) {
    f.samples[k] = std::sin(3.0 * f.time_at(k)) + 2.0 + rng.uniform(-0.1, 0.1);
  }
  const double full = 100.0;
  const auto back = gl_differint(gl_differint(f, -1.0, full), 1.0, full);
  for (std::size_t k = 1; k + 1 < f.size(); ++k) {
    EXPECT_LE(std::abs(back.samples[k] - f.samples[k]), 1e-8 * std::abs(f.samples[k])) << k;
  }
}

TEST(GlDifferint, LongMemoryEqualsFullMemoryBitForBit) {
  Rng rng(21);
  const auto f = random_signal(rng, 400, 0.05);
  const double horizon = f.end_time();
  for (double order : {-1.5, 0.7, 2.2}) {
    const auto exact = gl_differint(f, order, horizon);
    const auto longer = gl_differint(f, order, 10.0 * horizon);
    EXPECT_EQ(exact.samples, longer.samples);
  }
}

TEST(GlDifferint, ShortMemoryKeepsOnlyRecentTaps) {
  Rng rng(8);
  const auto f = random_signal(rng, 40, 0.1);
  const double order = 0.6;
  const auto out = gl_differint(f, order, 0.3);  // 3 taps of history
  const auto b = oracle::gl_weight;
  for (std::size_t k = 0; k < f.size(); ++k) {
    double expected = 0.0;
    for (std::size_t j = 0; j <= std::min<std::size_t>(k, 3); ++j) {
      expected += b(order, j) * f.samples[k - j];
    }
    expected *= std::pow(0.1, -order);
    EXPECT_NEAR(out.samples[k], expected, 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST(GlDifferint, MemoryIsFlooredToWholePeriods) {
  EXPECT_EQ(memory_taps(10.0, 0.001), 10000u);
  EXPECT_EQ(memory_taps(0.35, 0.1), 3u);
  EXPECT_EQ(memory_taps(0.1, 0.1), 1u);
}

TEST(GlDifferint, PointEvaluationMatchesFullSignal) {
  Rng rng(2);
  const auto f = random_signal(rng, 120, 0.05);
  const auto full = gl_differint(f, 1.3, 2.0);
  for (std::size_t k : {0u, 1u, 39u, 40u, 41u, 119u}) {
    EXPECT_EQ(gl_differint_at(f, 1.3, 2.0, k), full.samples[k]);
  }
}

TEST(GlDifferint, RejectsBadMemoryAndEmptySignals) {
  const SampledSignal s{0.0, 0.1, {1.0, 2.0}};
  EXPECT_THROW(gl_differint(s, 0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(gl_differint(s, 0.5, -1.0), std::invalid_argument);
  EXPECT_THROW(gl_differint(s, 0.5, 0.05), std::invalid_argument);
  EXPECT_THROW(gl_differint(SampledSignal{0.0, 0.1, {}}, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(gl_differint(SampledSignal{0.0, 0.0, {1.0}}, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(gl_differint_at(s, 0.5, 1.0, 2), std::out_of_range);
}

TEST(CoefficientCache, ServesSameValuesAsDirectComputation) {
  CoefficientCache cache;
  Rng rng(4);
  const auto f = random_signal(rng, 200, 0.01);
  EXPECT_EQ(gl_differint(f, 0.9, 1.0, cache).samples, gl_differint(f, 0.9, 1.0).samples);
  EXPECT_EQ(gl_differint_at(f, -1.1, 1.0, 150, cache), gl_differint_at(f, -1.1, 1.0, 150));
  EXPECT_EQ(cache.size(), 2u);

  const auto short_seq = cache.get(0.9, 10);
  EXPECT_GE(short_seq->size(), 10u);
  const auto long_seq = cache.get(0.9, 500);
  EXPECT_EQ(*long_seq, gl_coefficients(0.9, 500).values);
}

TEST(CoefficientCache, ConcurrentReadersAndWriters) {
  CoefficientCache cache;
  std::vector<std::jthread> threads;
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&cache, t] {
      for (int i = 0; i < 200; ++i) {
        const double order = 0.1 * ((i + t) % 13);
        const auto seq = cache.get(order, 64 + static_cast<std::size_t>(i % 5) * 64);
        ASSERT_EQ((*seq)[0], 1.0);
      }
    });
  }
  threads.clear();
  EXPECT_EQ(cache.size(), 13u);
}

}  // namespace
}  // namespace fracid
