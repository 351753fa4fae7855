#include "fracid/differint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>

namespace fracid {

void SampledSignal::validate() const {
  if (!(period > 0.0) || !std::isfinite(period)) {
    throw std::invalid_argument("signal period must be positive and finite, got " +
                                std::to_string(period));
  }
  if (!std::isfinite(start_time)) {
    throw std::invalid_argument("signal start time must be finite");
  }
}

std::size_t whole_steps(double span, double period) {
  const double ratio = span / period;
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::size_t>(nearest);
  }
  return static_cast<std::size_t>(std::floor(ratio));
}

GlCoefficients gl_coefficients(double order, std::size_t count) {
  if (count == 0) {
    throw std::invalid_argument("gl_coefficients: count must be at least 1");
  }
  GlCoefficients out{order, std::vector<double>(count)};
  out.values[0] = 1.0;
  for (std::size_t j = 1; j < count; ++j) {
    out.values[j] = (1.0 - (1.0 + order) / static_cast<double>(j)) * out.values[j - 1];
  }
  return out;
}

std::shared_ptr<const std::vector<double>> CoefficientCache::get(double order,
                                                                 std::size_t count) {
  const auto key = std::bit_cast<std::uint64_t>(order);
  {
    std::shared_lock lock(mutex_);
    if (auto it = entries_.find(key); it != entries_.end() && it->second->size() >= count) {
      return it->second;
    }
  }
  auto fresh = std::make_shared<const std::vector<double>>(gl_coefficients(order, count).values);
  std::unique_lock lock(mutex_);
  auto& slot = entries_[key];
  if (!slot || slot->size() < fresh->size()) {
    slot = fresh;
  }
  return slot;
}

std::size_t CoefficientCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

void CoefficientCache::clear() {
  std::unique_lock lock(mutex_);
  entries_.clear();
}

std::size_t memory_taps(double memory_length, double period) {
  if (!(memory_length > 0.0)) {
    throw std::invalid_argument("memory length must be positive, got " +
                                std::to_string(memory_length));
  }
  if (memory_length < period * (1.0 - 1e-12)) {
    throw std::invalid_argument("memory length " + std::to_string(memory_length) +
                                " s is shorter than the sampling period " +
                                std::to_string(period) + " s");
  }
  return whole_steps(memory_length, period);
}

namespace {

void check_input(const SampledSignal& signal) {
  signal.validate();
  if (signal.empty()) {
    throw std::invalid_argument("gl_differint: signal has no samples");
  }
}

double weighted_history(const std::vector<double>& b, const std::vector<double>& x,
                        std::size_t k, std::size_t taps) {
  const std::size_t last = std::min(k, taps);
  long double acc = 0.0L;
  for (std::size_t j = 0; j <= last; ++j) {
    acc += static_cast<long double>(b[j]) * static_cast<long double>(x[k - j]);
  }
  return static_cast<double>(acc);
}

SampledSignal differint_with(const SampledSignal& signal, double order, std::size_t taps,
                             const std::vector<double>& b) {
  const double scale = std::pow(signal.period, -order);
  SampledSignal out{signal.start_time, signal.period, std::vector<double>(signal.size())};
  for (std::size_t k = 0; k < signal.size(); ++k) {
    out.samples[k] = scale * weighted_history(b, signal.samples, k, taps);
  }
  return out;
}

std::size_t needed_terms(const SampledSignal& signal, std::size_t taps) {
  return std::min(taps, signal.size() - 1) + 1;
}

}  // namespace

SampledSignal gl_differint(const SampledSignal& signal, double order, double memory_length) {
  check_input(signal);
  const auto taps = memory_taps(memory_length, signal.period);
  const auto b = gl_coefficients(order, needed_terms(signal, taps));
  return differint_with(signal, order, taps, b.values);
}

SampledSignal gl_differint(const SampledSignal& signal, double order, double memory_length,
                           CoefficientCache& cache) {
  check_input(signal);
  const auto taps = memory_taps(memory_length, signal.period);
  const auto b = cache.get(order, needed_terms(signal, taps));
  return differint_with(signal, order, taps, *b);
}

double gl_differint_at(const SampledSignal& signal, double order, double memory_length,
                       std::size_t k) {
  check_input(signal);
  if (k >= signal.size()) {
    throw std::out_of_range("gl_differint_at: sample index past end of signal");
  }
  const auto taps = memory_taps(memory_length, signal.period);
  const auto b = gl_coefficients(order, std::min(taps, k) + 1);
  return std::pow(signal.period, -order) * weighted_history(b.values, signal.samples, k, taps);
}

double gl_differint_at(const SampledSignal& signal, double order, double memory_length,
                       std::size_t k, CoefficientCache& cache) {
  check_input(signal);
  if (k >= signal.size()) {
    throw std::out_of_range("gl_differint_at: sample index past end of signal");
  }
  const auto taps = memory_taps(memory_length, signal.period);
  const auto b = cache.get(order, std::min(taps, k) + 1);
  return std::pow(signal.period, -order) * weighted_history(*b, signal.samples, k, taps);
}

}  // namespace fracid
