#include "fracid/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fracid/errors.hpp"
#include "fracid/identify.hpp"

namespace fracid {

namespace {

double differint_at(const SampledSignal& c, double order, double memory, std::size_t k,
                    CoefficientCache* cache) {
  // Order exactly zero is the raw sample.
  if (order == 0.0) return c.samples[k];
  return cache ? gl_differint_at(c, order, memory, k, *cache)
               : gl_differint_at(c, order, memory, k);
}

double level_input(int level, double t) {
  switch (level) {
    case 0: return 1.0;
    case 1: return t;
    default: return 0.5 * t * t;
  }
}

double norm1(const std::array<std::array<double, 3>, 3>& a) {
  double best = 0.0;
  for (int j = 0; j < 3; ++j) {
    best = std::max(best, std::abs(a[0][j]) + std::abs(a[1][j]) + std::abs(a[2][j]));
  }
  return best;
}

}  // namespace

namespace {

EquationRow make_row(const SampledSignal& c, double alpha, double beta, int level,
                     double eval_time, double memory, CoefficientCache* cache) {
  if (level < 0 || level > 2) {
    throw std::invalid_argument("equation level must be 0, 1 or 2");
  }
  c.validate();
  if (c.empty()) {
    throw std::invalid_argument("response signal is empty");
  }
  const double offset = eval_time - c.start_time;
  const double steps = offset / c.period;
  const double k_f = std::round(steps);
  if (k_f < 0.0 || std::abs(steps - k_f) > 1e-6 || k_f >= static_cast<double>(c.size())) {
    std::ostringstream msg;
    msg << "evaluation time " << eval_time << " s is not a sample instant of the response";
    throw std::invalid_argument(msg.str());
  }
  const auto k = static_cast<std::size_t>(k_f);
  const auto lv = static_cast<double>(level);

  EquationRow row;
  row.level = level;
  row.eval_time = eval_time;
  row.p = differint_at(c, alpha - lv, memory, k, cache);
  row.q = differint_at(c, beta - lv, memory, k, cache);
  row.r = differint_at(c, -lv, memory, k, cache);
  row.s = level_input(level, eval_time);
  return row;
}

}  // namespace

EquationRow build_equation(const SampledSignal& c, double alpha, double beta, int level,
                           double eval_time, double memory, CoefficientCache* cache) {
  if (eval_time < memory * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "evaluation time " << eval_time << " s is earlier than the memory length " << memory
        << " s; the history window would be incomplete";
    throw std::invalid_argument(msg.str());
  }
  return make_row(c, alpha, beta, level, eval_time, memory, cache);
}

Solve3Result solve3(const std::array<std::array<double, 3>, 3>& a,
                    const std::array<double, 3>& b,
                    const std::array<std::string, 3>& row_labels) {
  auto fail = [&](const std::string& why) {
    std::ostringstream msg;
    msg << why << " (rows: " << row_labels[0] << ", " << row_labels[1] << ", " << row_labels[2]
        << ")";
    throw NumericalError(msg.str());
  };

  std::array<std::array<double, 3>, 3> lu = a;
  std::array<int, 3> perm{0, 1, 2};
  const double scale = norm1(a);
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    fail("linear system is singular: all coefficients vanish");
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int i = col + 1; i < 3; ++i) {
      if (std::abs(lu[i][col]) > std::abs(lu[pivot][col])) pivot = i;
    }
    if (std::abs(lu[pivot][col]) <= scale * 1e-300 || lu[pivot][col] == 0.0) {
      std::ostringstream why;
      why << "linear system is singular: zero pivot in column " << col << " at "
          << row_labels[perm[pivot]];
      fail(why.str());
    }
    std::swap(lu[col], lu[pivot]);
    std::swap(perm[col], perm[pivot]);
    for (int i = col + 1; i < 3; ++i) {
      lu[i][col] /= lu[col][col];
      for (int j = col + 1; j < 3; ++j) lu[i][j] -= lu[i][col] * lu[col][j];
    }
  }

  auto lu_solve = [&](const std::array<double, 3>& rhs) {
    std::array<double, 3> y{rhs[perm[0]], rhs[perm[1]], rhs[perm[2]]};
    for (int i = 1; i < 3; ++i) {
      for (int j = 0; j < i; ++j) y[i] -= lu[i][j] * y[j];
    }
    for (int i = 2; i >= 0; --i) {
      for (int j = i + 1; j < 3; ++j) y[i] -= lu[i][j] * y[j];
      y[i] /= lu[i][i];
    }
    return y;
  };

  std::array<std::array<double, 3>, 3> inverse{};
  for (int j = 0; j < 3; ++j) {
    std::array<double, 3> e{};
    e[j] = 1.0;
    const auto col = lu_solve(e);
    for (int i = 0; i < 3; ++i) inverse[i][j] = col[i];
  }

  Solve3Result out;
  out.condition = scale * norm1(inverse);
  if (!std::isfinite(out.condition) || out.condition > kConditionLimit) {
    std::ostringstream why;
    why << "linear system is ill-conditioned: condition estimate " << out.condition
        << " exceeds " << kConditionLimit;
    fail(why.str());
  }
  out.x = lu_solve(b);
  return out;
}

namespace {

std::string row_label(const EquationRow& row) {
  std::ostringstream s;
  s << "level " << row.level << " @ t=" << row.eval_time;
  return s.str();
}

}  // namespace

Reconstruction reconstruct_coefficients(const SampledSignal& c, double alpha, double beta,
                                        double eval_time, double memory,
                                        CoefficientCache* cache) {
  Reconstruction out;
  std::array<std::array<double, 3>, 3> a{};
  std::array<double, 3> b{};
  std::array<std::string, 3> labels;
  for (int level = 0; level < 3; ++level) {
    const auto row = build_equation(c, alpha, beta, level, eval_time, memory, cache);
    a[level] = {row.p, row.q, row.r};
    b[level] = row.s;
    labels[level] = row_label(row);
    out.rows.push_back(row);
  }
  const auto solved = solve3(a, b, labels);
  out.a1 = solved.x[0];
  out.a2 = solved.x[1];
  out.a3 = solved.x[2];
  out.condition = solved.condition;
  return out;
}

Reconstruction reconstruct_coefficients_lsq(const SampledSignal& c, double alpha, double beta,
                                            std::span<const double> eval_times, double memory,
                                            CoefficientCache* cache) {
  if (eval_times.empty()) {
    throw std::invalid_argument("least-squares reconstruction needs at least one instant");
  }
  Reconstruction out;
  const double record_start = c.start_time;
  std::array<std::array<double, 3>, 3> normal{};
  std::array<double, 3> rhs{};
  for (double t : eval_times) {
    // Integrated rows equal t and t^2/2 only when the window reaches back to
    // the start of the record.
    if (t - record_start > memory * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "least-squares instant " << t << " s lies beyond the memory length " << memory
          << " s; integrated rows would lose history";
      throw std::invalid_argument(msg.str());
    }
    for (int level = 0; level < 3; ++level) {
      const auto row = make_row(c, alpha, beta, level, t, memory, cache);
      // Each row is scaled by its input value so late parabola rows do not
      // swamp the step rows.
      const double w = 1.0 / std::max(1.0, std::abs(row.s));
      const std::array<double, 3> v{row.p * w, row.q * w, row.r * w};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) normal[i][j] += v[i] * v[j];
        rhs[i] += v[i] * row.s * w;
      }
      out.rows.push_back(row);
    }
  }
  const auto solved = solve3(normal, rhs, {"normal a1", "normal a2", "normal a3"});
  out.a1 = solved.x[0];
  out.a2 = solved.x[1];
  out.a3 = solved.x[2];
  out.condition = solved.condition;
  return out;
}

std::vector<RankedModel> rank_models(std::span<const FractionalModel> candidates,
                                     const SampledSignal& observations) {
  if (candidates.empty()) {
    throw std::invalid_argument("rank_models needs at least one candidate");
  }
  observations.validate();
  if (observations.size() < 2) {
    throw std::invalid_argument("rank_models needs at least two observation samples");
  }
  std::vector<RankedModel> ranked;
  ranked.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    RankedModel m{candidates[i], i, std::nullopt, {}};
    try {
      m.fitness = step_fitness(candidates[i], observations);
    } catch (const NumericalError& e) {
      m.error = e.what();
    } catch (const std::invalid_argument& e) {
      m.error = e.what();
    }
    ranked.push_back(std::move(m));
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& x, const auto& y) {
    if (x.fitness && y.fitness) return *x.fitness < *y.fitness;
    return x.fitness.has_value() && !y.fitness.has_value();
  });
  return ranked;
}

}  // namespace fracid
