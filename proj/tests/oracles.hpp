#pragma once

// Reference computations used by the tests. None of these call into the
// coefficient recursion or the implicit simulator they are checking.

#include <cmath>
#include <cstddef>
#include <vector>

#include "fracid/differint.hpp"
#include "fracid/signal.hpp"
#include "fracid/simulate.hpp"

namespace fracid::oracle {

/// Sign of Gamma(x) for x not a nonpositive integer.
inline long double gamma_sign(long double x) {
  if (x > 0.0L) return 1.0L;
  return static_cast<long long>(std::ceil(-x)) % 2 == 0 ? 1.0L : -1.0L;
}

/// (-1)^j * binom(order, j) = Gamma(j - order) / (Gamma(-order) * Gamma(j + 1)),
/// valid for any order that is not a nonnegative integer.
inline double gl_weight(double order, std::size_t j) {
  const long double q = order;
  const long double jj = static_cast<long double>(j);
  const long double log_mag = std::lgamma(jj - q) - std::lgamma(-q) - std::lgamma(jj + 1.0L);
  return static_cast<double>(gamma_sign(jj - q) * gamma_sign(-q) * std::exp(log_mag));
}

/// Unit-step response of 1 / (a s^2 + b s + c) for the underdamped case.
inline double second_order_step(double a, double b, double c, double t) {
  const double wn = std::sqrt(c / a);
  const double zeta = b / (2.0 * a * wn);
  const double wd = wn * std::sqrt(1.0 - zeta * zeta);
  return (1.0 - std::exp(-zeta * wn * t) *
                    (std::cos(wd * t) + zeta / std::sqrt(1.0 - zeta * zeta) * std::sin(wd * t))) /
         c;
}

/// a1 D^alpha c + a2 D^beta c + a3 c evaluated sample by sample with
/// separate full-memory differintegrals.
inline std::vector<double> model_operator(const FractionalModel& m, const SampledSignal& c) {
  const double full = c.period * static_cast<double>(c.size());
  const auto da = gl_differint(c, m.alpha, full);
  const auto db = gl_differint(c, m.beta, full);
  std::vector<double> r(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    r[k] = m.a1 * da.samples[k] + m.a2 * db.samples[k] + m.a3 * c.samples[k];
  }
  return r;
}

}  // namespace fracid::oracle
