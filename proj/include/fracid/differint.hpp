#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "fracid/signal.hpp"

namespace fracid {

/// Grünwald–Letnikov weights b_0..b_N for one differintegral order.
/// b_j = (-1)^j * binom(order, j), generated by the recursion
/// b_0 = 1, b_j = (1 - (1 + order) / j) * b_{j-1}.
struct GlCoefficients {
  double order = 0.0;
  std::vector<double> values;
};

/// Returns b_0..b_{count-1}. Throws std::invalid_argument when count == 0.
GlCoefficients gl_coefficients(double order, std::size_t count);

/// Thread-safe store of coefficient sequences keyed by the bit pattern of the
/// order. A request for fewer terms than already stored reuses the stored
/// sequence; a longer request recomputes and replaces it.
class CoefficientCache {
public:
  std::shared_ptr<const std::vector<double>> get(double order, std::size_t count);
  std::size_t size() const;
  void clear();

private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::uint64_t, std::shared_ptr<const std::vector<double>>> entries_;
};

/// Number of history taps ⌊memory_length / period⌋ retained by the GL sum.
/// Throws std::invalid_argument when memory_length < period.
std::size_t memory_taps(double memory_length, double period);

/// Fractional differintegral of `signal` of real `order` (negative orders
/// integrate). Output sample k is
///   period^-order * sum_{j=0}^{min(k, taps)} b_j * samples[k - j]
/// with the history before start_time taken as zero.
SampledSignal gl_differint(const SampledSignal& signal, double order, double memory_length);
SampledSignal gl_differint(const SampledSignal& signal, double order, double memory_length,
                           CoefficientCache& cache);

/// Single output sample of gl_differint, at sample index `k`. O(taps).
double gl_differint_at(const SampledSignal& signal, double order, double memory_length,
                       std::size_t k);
double gl_differint_at(const SampledSignal& signal, double order, double memory_length,
                       std::size_t k, CoefficientCache& cache);

}  // namespace fracid
