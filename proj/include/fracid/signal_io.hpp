#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "fracid/signal.hpp"

namespace fracid {

/// Writes `t,value` CSV. Values use the shortest decimal form that parses
/// back to the same double.
void write_signal_csv(std::ostream& out, const SampledSignal& signal);
void write_signal_csv(const std::filesystem::path& path, const SampledSignal& signal);

/// Reads `t,value` CSV. The period is recovered from the time column and
/// rounded to 12 significant digits; every time stamp must then agree with
/// start + k * period to within 1e-6 of a period. Throws
/// std::invalid_argument on malformed or non-uniform input.
SampledSignal read_signal_csv(std::istream& in);
SampledSignal read_signal_csv(const std::filesystem::path& path);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace fracid
