#include "commands.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

#include "fracid/errors.hpp"
#include "fracid/identify.hpp"
#include "fracid/json_io.hpp"
#include "fracid/random.hpp"
#include "fracid/refine.hpp"
#include "fracid/signal_io.hpp"
#include "fracid/simulate.hpp"
#include "fracid/verify.hpp"

#ifndef FRACID_VERSION
#define FRACID_VERSION "dev"
#endif

namespace fracid::cli {

std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "' for hashing");
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < length; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

struct Common {
  std::uint64_t seed = 0;
  std::string out;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& common, bool seed_used) {
  cmd->add_option("--seed", common.seed,
                   seed_used ? "Master seed (u64)" : "Recorded in the manifest; unused")
      ->capture_default_str();
  cmd->add_option("--out", common.out, "Output path")->required();
  cmd->add_flag("--quiet", common.quiet, "Suppress the progress summary");
}

/// The manifest's only nondeterministic field is "generated_at_utc".
Json manifest(const std::string& command, const Json& config, const Json& seeds,
              const std::vector<std::string>& inputs) {
  Json in = Json::array();
  for (const auto& path : inputs) {
    in.push_back(Json{{"path", path}, {"sha256", file_sha256(path)}});
  }
  return Json{{"tool", "fracid"},
              {"version", FRACID_VERSION},
              {"command", command},
              {"config", config},
              {"seeds", seeds},
              {"inputs", in},
              {"generated_at_utc", utc_now()}};
}

void require_file(const std::string& path, const char* flag) {
  if (!std::filesystem::is_regular_file(path)) {
    throw std::invalid_argument(std::string(flag) + ": no such file '" + path + "'");
  }
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  Common common;
  FractionalModel model = reference_model();
  std::string input = "step";
  double step = 0.05;
  std::optional<double> rate;
  double horizon = 10.0;
  std::optional<double> memory;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  InputKind input;
  if (a.input == "step") {
    input = StepInput{};
  } else if (a.input == "ramp") {
    input = RampInput{};
  } else if (a.input == "parabola") {
    input = ParabolaInput{};
  } else {
    throw std::invalid_argument("--input must be step, ramp or parabola");
  }
  try {
    a.model.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("--a1/--alpha/--a2/--beta/--a3: ") + e.what());
  }
  if (a.rate && !(*a.rate > 0.0)) throw std::invalid_argument("--rate must be positive");

  auto signal = simulate(a.model, input, a.step, a.horizon, SimulationOptions{a.memory});
  if (a.rate) {
    try {
      signal = downsample(signal, 1.0 / *a.rate);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string("--rate: ") + e.what());
    }
  }
  write_signal_csv(a.common.out, signal);

  Json config{{"model", to_json(a.model)},
              {"input", a.input},
              {"step", a.step},
              {"rate", a.rate ? Json(*a.rate) : Json(nullptr)},
              {"horizon", a.horizon},
              {"memory", a.memory ? Json(*a.memory) : Json(nullptr)}};
  Json m = manifest("simulate", config, Json{{"seed", a.common.seed}}, {});
  m["outputs"] = Json::array({Json{{"path", a.common.out}, {"sha256", file_sha256(a.common.out)}}});
  write_json(a.common.out + ".manifest.json", m);
  if (!a.common.quiet) {
    out << "simulate: wrote " << signal.size() << " samples to " << a.common.out << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- corrupt

struct CorruptArgs {
  Common common;
  std::string in;
  double amplitude = 0.05;
};

int cmd_corrupt(const CorruptArgs& a, std::ostream& out) {
  require_file(a.in, "--in");
  const auto clean = read_signal_csv(a.in);
  const auto noisy = corrupt(clean, a.amplitude, a.common.seed);
  write_signal_csv(a.common.out, noisy);
  Json m = manifest("corrupt", Json{{"amplitude", a.amplitude}}, Json{{"seed", a.common.seed}},
                    {a.in});
  m["outputs"] = Json::array({Json{{"path", a.common.out}, {"sha256", file_sha256(a.common.out)}}});
  write_json(a.common.out + ".manifest.json", m);
  if (!a.common.quiet) {
    out << "corrupt: added uniform noise of amplitude " << a.amplitude << " to " << noisy.size()
        << " samples\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- identify

struct SwarmOverrides {
  std::optional<std::size_t> particles;
  std::optional<std::size_t> iterations;
  std::size_t workers = 1;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--particles", particles, "Override particle count");
    cmd->add_option("--iterations", iterations, "Override iteration count");
    cmd->add_option("--workers", workers, "Concurrent runs / nominals")->capture_default_str();
  }
  void apply(SwarmConfig& s) const {
    if (particles) s.particle_count = *particles;
    if (iterations) s.iterations = *iterations;
  }
};

struct IdentifyArgs {
  Common common;
  std::string data;
  std::string scenario;
  std::size_t runs = 5;
  double noise = 0.0;
  std::optional<std::uint64_t> noise_seed;
  bool report_clean = false;
  SwarmOverrides swarm;
};

int cmd_identify(const IdentifyArgs& a, std::ostream& out) {
  require_file(a.data, "--data");
  require_file(a.scenario, "--scenario");
  if (a.runs == 0) throw std::invalid_argument("--runs must be at least 1");
  if (!(a.noise >= 0.0)) throw std::invalid_argument("--noise must be nonnegative");
  const auto observations = read_signal_csv(a.data);
  const auto doc = read_scenario(a.scenario);

  SwarmConfig swarm = doc.swarm;
  a.swarm.apply(swarm);
  swarm.seed = a.common.seed;

  IdentifyOptions opts;
  opts.runs = a.runs;
  opts.truth = doc.truth;
  opts.report_clean_fitness = a.report_clean;
  opts.run_workers = a.swarm.workers;
  Json seeds{{"master", a.common.seed}};
  if (a.noise > 0.0) {
    const auto base = a.noise_seed.value_or(derive_seed(a.common.seed, "noise", 0));
    opts.noise = NoiseConfig{a.noise, base};
    seeds["noise_base"] = base;
  }

  const auto report = identify(observations, doc.scenario, swarm, opts);

  Json run_seeds = Json::array();
  for (const auto& r : report.runs) {
    run_seeds.push_back(Json{{"run", r.index},
                             {"swarm", r.swarm_seed},
                             {"noise", r.noise_seed ? Json(*r.noise_seed) : Json(nullptr)}});
  }
  seeds["runs"] = run_seeds;
  Json config{{"scenario", to_json(doc)},
              {"swarm", to_json(doc.scenario.bind(swarm))},
              {"runs", a.runs},
              {"noise_amplitude", a.noise},
              {"report_clean_fitness", a.report_clean}};
  Json j = to_json(report);
  j["manifest"] = manifest("identify", config, seeds, {a.data, a.scenario});
  write_json(a.common.out, j);

  if (!a.common.quiet) {
    out << "identify: " << report.runs.size() - report.failed_runs() << "/" << report.runs.size()
        << " runs succeeded";
    if (report.best_run) {
      out << ", best fitness " << report.runs[*report.best_run].fitness << " (run "
          << *report.best_run << ")";
    }
    out << "\n";
  }
  return report.failed_runs() == report.runs.size() ? kExitNumerical : kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  Common common;
  std::string data;
  std::vector<double> alpha;
  std::vector<double> beta;
  double memory = 10.0;
  std::optional<double> period;
  std::optional<double> eval_time;
  std::vector<double> lsq_times;
  std::string observations;
  double obs_period = 0.05;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  require_file(a.data, "--data");
  if (a.alpha.size() != a.beta.size()) {
    throw std::invalid_argument("--alpha and --beta must be given the same number of times");
  }
  const auto c = read_signal_csv(a.data);
  if (a.period && std::abs(*a.period - c.period) > 1e-9 * c.period) {
    throw std::invalid_argument("--period " + format_double(*a.period) +
                                " does not match the data period " + format_double(c.period));
  }
  const double eval_time = a.eval_time.value_or(a.memory);

  std::vector<std::string> inputs{a.data};
  SampledSignal observations;
  if (!a.observations.empty()) {
    require_file(a.observations, "--observations");
    observations = read_signal_csv(a.observations);
    inputs.push_back(a.observations);
  } else {
    try {
      observations = downsample(c, a.obs_period);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(std::string("--obs-period: ") + e.what());
    }
  }

  CoefficientCache cache;
  Json candidates = Json::array();
  std::vector<FractionalModel> models;
  std::vector<std::size_t> model_source;
  bool any_failed = false;
  for (std::size_t i = 0; i < a.alpha.size(); ++i) {
    Json cand{{"alpha", a.alpha[i]}, {"beta", a.beta[i]}};
    try {
      const auto rec = a.lsq_times.empty()
                           ? reconstruct_coefficients(c, a.alpha[i], a.beta[i], eval_time,
                                                      a.memory, &cache)
                           : reconstruct_coefficients_lsq(c, a.alpha[i], a.beta[i], a.lsq_times,
                                                          a.memory, &cache);
      cand["reconstruction"] = to_json(rec);
      const FractionalModel m{rec.a1, a.alpha[i], rec.a2, a.beta[i], rec.a3};
      cand["model"] = to_json(m);
      models.push_back(m);
      model_source.push_back(i);
    } catch (const NumericalError& e) {
      any_failed = true;
      cand["error"] = e.what();
    }
    candidates.push_back(cand);
  }

  Json ranking = Json::array();
  if (!models.empty()) {
    for (auto ranked : rank_models(models, observations)) {
      ranked.input_index = model_source[ranked.input_index];
      if (ranked.fitness) candidates[ranked.input_index]["fitness"] = *ranked.fitness;
      ranking.push_back(to_json(ranked));
    }
  }

  Json config{{"alpha", a.alpha},
              {"beta", a.beta},
              {"memory", a.memory},
              {"period", c.period},
              {"eval_time", eval_time},
              {"lsq_times", a.lsq_times},
              {"obs_period", observations.period},
              {"condition_limit", kConditionLimit}};
  Json j{{"candidates", candidates}, {"ranking", ranking}};
  j["manifest"] = manifest("verify", config, Json{{"seed", a.common.seed}}, inputs);
  write_json(a.common.out, j);

  if (!a.common.quiet) {
    for (const auto& cand : candidates) {
      out << "verify: alpha=" << cand["alpha"].get<double>() << " beta=" << cand["beta"].get<double>();
      if (cand.contains("error")) {
        out << " failed: " << cand["error"].get<std::string>() << "\n";
      } else {
        const auto& s = cand["reconstruction"]["solution"];
        out << " -> a1=" << s["a1"].get<double>() << " a2=" << s["a2"].get<double>()
            << " a3=" << s["a3"].get<double>() << "\n";
      }
    }
  }
  return any_failed ? kExitNumerical : kExitOk;
}

// ---------------------------------------------------------------- refine

struct RefineArgs {
  Common common;
  std::string data;
  std::string scenario;
  std::string target = "beta";
  std::vector<double> range;
  std::size_t branching = 5;
  double tolerance = 0.002;
  SwarmOverrides swarm;
};

int cmd_refine(const RefineArgs& a, std::ostream& out, std::ostream& err) {
  require_file(a.data, "--data");
  require_file(a.scenario, "--scenario");
  const auto observations = read_signal_csv(a.data);
  const auto doc = read_scenario(a.scenario);
  const auto target = parse_parameter(a.target);
  if (!doc.scenario.is_free(target)) {
    throw std::invalid_argument("--target " + a.target + " is not a free parameter of the scenario");
  }

  Bounds range;
  if (a.range.empty()) {
    for (const auto& f : doc.scenario.free) {
      if (f.name == target) range = f.search;
    }
  } else if (a.range.size() == 2) {
    range = {a.range[0], a.range[1]};
  } else {
    throw std::invalid_argument("--range takes two values: lo hi");
  }

  // Inner problems have one fewer free parameter; size the swarm for that.
  SwarmConfig inner = doc.scenario.with_fixed(target, range.center()).default_swarm();
  inner.c1 = doc.swarm.c1;
  inner.c2 = doc.swarm.c2;
  inner.inertia_start = doc.swarm.inertia_start;
  inner.inertia_end = doc.swarm.inertia_end;
  a.swarm.apply(inner);

  std::vector<std::string> events;
  RefineOptions opts;
  opts.branching = a.branching;
  opts.width_tolerance = a.tolerance;
  opts.workers = a.swarm.workers;
  opts.log = [&](const std::string& line) {
    events.push_back(line);
    if (!a.common.quiet) err << "refine: " << line << "\n";
  };

  const auto result = concentrated_search(observations, doc.scenario, target, range, inner,
                                          a.common.seed, opts);

  Json config{{"scenario", to_json(doc)},
              {"target", a.target},
              {"range", Json::array({range.min, range.max})},
              {"branching", a.branching},
              {"tolerance", a.tolerance},
              {"inner_swarm", Json{{"particles", inner.particle_count},
                                   {"iterations", inner.iterations},
                                   {"c1", inner.c1},
                                   {"c2", inner.c2},
                                   {"inertia_start", inner.inertia_start},
                                   {"inertia_end", inner.inertia_end}}}};
  Json j = to_json(result);
  j["events"] = events;
  j["manifest"] = manifest("refine", config, Json{{"master", a.common.seed}},
                           {a.data, a.scenario});
  write_json(a.common.out, j);

  if (!a.common.quiet) {
    for (std::size_t l = 0; l < result.levels.size(); ++l) {
      const auto& row = result.levels[l].best();
      out << "refine: level " << l << " chose [" << row.range.min << ", " << row.range.max
          << "] nominal " << row.nominal << " fitness " << row.fitness << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fractional-order process identification by particle swarm optimisation"};
  app.name(args.empty() ? "fracid" : args[0]);
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Simulate the model response and write t,value CSV");
  add_common(c_sim, sim.common, false);
  c_sim->add_option("--a1", sim.model.a1)->capture_default_str();
  c_sim->add_option("--alpha", sim.model.alpha)->capture_default_str();
  c_sim->add_option("--a2", sim.model.a2)->capture_default_str();
  c_sim->add_option("--beta", sim.model.beta)->capture_default_str();
  c_sim->add_option("--a3", sim.model.a3)->capture_default_str();
  c_sim->add_option("--input", sim.input, "step | ramp | parabola")->capture_default_str();
  c_sim->add_option("--step", sim.step, "Simulation step (s)")->capture_default_str();
  c_sim->add_option("--rate", sim.rate, "Output sampling rate (Hz); downsamples when set");
  c_sim->add_option("--horizon", sim.horizon, "Simulated span (s)")->capture_default_str();
  c_sim->add_option("--memory", sim.memory, "Short-memory window (s); default full history");

  CorruptArgs cor;
  auto* c_cor = app.add_subcommand("corrupt", "Add uniform noise to a signal");
  add_common(c_cor, cor.common, true);
  c_cor->add_option("--in", cor.in, "Input CSV")->required();
  c_cor->add_option("--amplitude", cor.amplitude)->capture_default_str();

  IdentifyArgs idn;
  auto* c_idn = app.add_subcommand("identify", "Estimate model parameters by repeated PSO runs");
  add_common(c_idn, idn.common, true);
  c_idn->add_option("--data", idn.data, "Observed step response CSV")->required();
  c_idn->add_option("--scenario", idn.scenario, "Scenario JSON")->required();
  c_idn->add_option("--runs", idn.runs)->capture_default_str();
  c_idn->add_option("--noise", idn.noise, "Uniform noise amplitude added per run (0 = off)")
      ->capture_default_str();
  c_idn->add_option("--noise-seed", idn.noise_seed, "Base seed for per-run noise");
  c_idn->add_flag("--report-clean-fitness", idn.report_clean,
                  "Also score noisy runs against the clean data");
  idn.swarm.add_to(c_idn);

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand(
      "verify", "Reconstruct a1, a2, a3 from a response for given orders and rank the models");
  add_common(c_ver, ver.common, false);
  c_ver->add_option("--data", ver.data, "Step response CSV (fine grid)")->required();
  c_ver->add_option("--alpha", ver.alpha, "Higher order (repeatable)")->required();
  c_ver->add_option("--beta", ver.beta, "Lower order (repeatable)")->required();
  c_ver->add_option("--memory", ver.memory, "Memory length L (s)")->capture_default_str();
  c_ver->add_option("--period", ver.period, "Expected sampling period T (s)");
  c_ver->add_option("--eval-time", ver.eval_time, "Evaluation instant (s); default L");
  c_ver->add_option("--lsq-times", ver.lsq_times, "Least-squares over these instants");
  c_ver->add_option("--observations", ver.observations, "CSV for fitness ranking");
  c_ver->add_option("--obs-period", ver.obs_period,
                    "Downsampling period for ranking when --observations is absent")
      ->capture_default_str();

  RefineArgs ref;
  auto* c_ref = app.add_subcommand("refine", "Concentrated search over one parameter");
  add_common(c_ref, ref.common, true);
  c_ref->add_option("--data", ref.data, "Observed step response CSV")->required();
  c_ref->add_option("--scenario", ref.scenario, "Scenario JSON")->required();
  c_ref->add_option("--target", ref.target)->capture_default_str();
  c_ref->add_option("--range", ref.range, "lo hi (default: scenario search range)")
      ->expected(2);
  c_ref->add_option("--branching", ref.branching)->capture_default_str();
  c_ref->add_option("--tolerance", ref.tolerance, "Stop once the interval is this narrow")
      ->capture_default_str();
  ref.swarm.add_to(c_ref);

  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (c_sim->parsed()) return cmd_simulate(sim, out);
    if (c_cor->parsed()) return cmd_corrupt(cor, out);
    if (c_idn->parsed()) return cmd_identify(idn, out);
    if (c_ver->parsed()) return cmd_verify(ver, out);
    if (c_ref->parsed()) return cmd_refine(ref, out, err);
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace fracid::cli
