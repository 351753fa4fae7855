#include "fracid/signal_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace fracid {

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) {
    throw std::runtime_error("format_double: conversion failed");
  }
  return std::string(buf.data(), end);
}

void write_signal_csv(std::ostream& out, const SampledSignal& signal) {
  signal.validate();
  out << "t,value\n";
  for (std::size_t k = 0; k < signal.size(); ++k) {
    out << format_double(signal.time_at(k)) << ',' << format_double(signal.samples[k]) << '\n';
  }
}

void write_signal_csv(const std::filesystem::path& path, const SampledSignal& signal) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::invalid_argument("cannot open '" + path.string() + "' for writing");
  }
  write_signal_csv(out, signal);
  if (!out) {
    throw std::runtime_error("write to '" + path.string() + "' failed");
  }
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view field, std::size_t line_no) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(value)) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": '" + std::string(field) +
                                "' is not a finite number");
  }
  return value;
}

double round_significant(double x, int digits) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return std::stod(s.str());
}

}  // namespace

SampledSignal read_signal_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("signal CSV is empty");
  }
  ++line_no;
  if (trim(line) != "t,value") {
    throw std::invalid_argument("signal CSV must start with header 't,value'");
  }
  std::vector<double> times;
  std::vector<double> values;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = trim(line);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected two columns");
    }
    times.push_back(parse_number(row.substr(0, comma), line_no));
    values.push_back(parse_number(row.substr(comma + 1), line_no));
  }
  if (times.size() < 2) {
    throw std::invalid_argument("signal CSV needs at least two samples to define a period");
  }
  const double raw_period = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(raw_period > 0.0)) {
    throw std::invalid_argument("signal CSV time column must be increasing");
  }
  SampledSignal signal{times.front(), round_significant(raw_period, 12), std::move(values)};
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (std::abs(times[k] - signal.time_at(k)) > 1e-6 * signal.period) {
      throw std::invalid_argument("signal CSV is not uniformly sampled near t=" +
                                  format_double(times[k]));
    }
  }
  return signal;
}

SampledSignal read_signal_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::invalid_argument("cannot open signal file '" + path.string() + "'");
  }
  return read_signal_csv(in);
}

}  // namespace fracid
