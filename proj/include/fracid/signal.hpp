#pragma once

#include <cstddef>
#include <vector>

namespace fracid {

/// Uniformly sampled real-valued time series. Sample k sits at
/// start_time + k * period.
struct SampledSignal {
  double start_time = 0.0;
  double period = 1.0;
  std::vector<double> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double time_at(std::size_t k) const { return start_time + static_cast<double>(k) * period; }
  double end_time() const { return empty() ? start_time : time_at(samples.size() - 1); }

  /// Throws std::invalid_argument unless period is positive and finite.
  void validate() const;
};

/// Number of whole periods in `span`, tolerating representation error in the
/// ratio (10 / 0.001 must give 10000, not 9999).
std::size_t whole_steps(double span, double period);

}  // namespace fracid
