#include "flmc/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

#include "flmc/c_alpha.hpp"
#include "flmc/errors.hpp"
#include "flmc/parallel.hpp"
#include "flmc/stable.hpp"
#include "flmc/vec.hpp"

namespace flmc {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Stream tags for auxiliary randomness, kept away from replica indices.
constexpr std::uint64_t kCurveStreamTag = 0x43555256u;      // bootstrap for curves
constexpr std::uint64_t kPosteriorStreamTag = 0x47424253u;  // gibbs reference draws
constexpr std::uint64_t kVerifyStreamTag = 0x56455246u;     // certificate sweeps

const std::set<std::string> kConstantKeys = {"M",      "gamma", "m",           "b",
                                             "B",      "L",     "lambda_star", "C_erg",
                                             "C_pi",   "C_thm", "c_x1",        "c_b"};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  if (!out.good()) throw IoError("failed writing '" + path.string() + "'");
}

void write_json_file(const fs::path& path, const json& j) {
  write_file(path, j.dump(2) + "\n");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "'");
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ConfigError& err) {
    std::cerr << "config validation failed:\n";
    for (const auto& violation : err.violations()) std::cerr << "  - " << violation << "\n";
    return kExitValidation;
  } catch (const json::parse_error& err) {
    std::cerr << "config parse error: " << err.what() << "\n";
    return kExitValidation;
  } catch (const IoError& err) {
    std::cerr << "io error: " << err.what() << "\n";
    return kExitIo;
  } catch (const DivergenceError& err) {
    std::cerr << "divergence: " << err.what() << "\n";
    return kExitDivergence;
  } catch (const CoverageError& err) {
    std::cerr << "coverage error: " << err.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitValidation;
  }
}

ExperimentConfig prepare(const std::string& config_path, const HarnessOptions& options,
                         StudySpec::Kind expected) {
  ExperimentConfig cfg = load_config_file(config_path);
  if (options.seed) {
    cfg.run.seed = *options.seed;
    cfg.seed_given = true;
  }
  if (options.out) cfg.output_dir = *options.out;
  std::vector<std::string> violations;
  if (cfg.study.kind != expected) {
    violations.push_back("study.kind is '" + to_string(cfg.study.kind) +
                         "' but this command expects '" + to_string(expected) + "'");
  }
  const bool needs_seed = expected != StudySpec::Kind::bounds &&
                          expected != StudySpec::Kind::plan;
  if (needs_seed && !cfg.seed_given) {
    violations.push_back("run.seed must be explicit (wall-clock seeding is not supported)");
  }
  if (!violations.empty()) throw ConfigError(std::move(violations));
  return cfg;
}

json trajectory_manifest_entry(const Trajectory& trajectory) {
  json j;
  j["replica"] = trajectory.replica_id;
  j["step"] = trajectory.divergence_step;
  return j;
}

json manifest_json(const ExperimentConfig& cfg, const Objective& obj,
                   const std::vector<std::string>& warnings,
                   const std::vector<Trajectory>* trajectories,
                   const std::optional<PlanResult>& plan) {
  json m;
  m["schema_version"] = kConfigSchemaVersion;
  m["tool_version"] = kToolVersion;
  m["command"] = to_string(cfg.study.kind);
  m["config"] = config_to_json(cfg);

  json derived;
  derived["c_alpha"] = c_alpha(cfg.run.alpha);
  derived["noise_scale"] = std::pow(cfg.run.eta / cfg.run.beta, 1.0 / cfg.run.alpha);
  derived["warnings"] = warnings;
  if (obj.minimizer()) {
    derived["minimizer"] = obj.minimizer()->point;
    derived["f_star"] = obj.minimizer()->value;
  }
  if (plan && plan->feasible) {
    derived["plan"] = {{"p", plan->plan.p},
                       {"q", plan->plan.q},
                       {"p1", plan->plan.p1},
                       {"q1", plan->plan.q1}};
  }
  m["derived"] = derived;

  if (trajectories != nullptr) {
    std::vector<std::uint64_t> seeds;
    json divergences = json::array();
    seeds.reserve(trajectories->size());
    for (const auto& trajectory : *trajectories) {
      seeds.push_back(trajectory.stream_seed);
      if (trajectory.diverged) divergences.push_back(trajectory_manifest_entry(trajectory));
    }
    m["replica_seeds"] = seeds;
    m["divergences"] = divergences;
  }
  return m;
}

void write_metrics(const fs::path& dir, double wall_seconds, double total_steps) {
  json metrics;
  metrics["wall_clock_seconds"] = wall_seconds;
  metrics["steps_per_second"] = wall_seconds > 0.0 ? total_steps / wall_seconds : 0.0;
  write_json_file(dir / "metrics.json", metrics);
}

std::string trajectories_csv(const std::vector<Trajectory>& trajectories, int dim) {
  std::string csv = "replica,step,time,f_value";
  for (int c = 0; c < dim; ++c) csv += ",x_" + std::to_string(c);
  csv += "\n";
  for (const auto& trajectory : trajectories) {
    for (std::size_t row = 0; row < trajectory.rows(); ++row) {
      csv += std::to_string(trajectory.replica_id);
      csv += ",";
      csv += std::to_string(trajectory.steps[row]);
      csv += ",";
      csv += format_double(trajectory.times[row]);
      csv += ",";
      csv += format_double(trajectory.f_values[row]);
      const auto state = trajectory.state_row(row);
      for (double x : state) {
        csv += ",";
        csv += format_double(x);
      }
      csv += "\n";
    }
  }
  return csv;
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::string csv = "step,mean_gap,ci_lo,ci_hi\n";
  for (const auto& point : curve) {
    csv += std::to_string(point.step) + "," + format_double(point.mean_gap) + "," +
           format_double(point.ci_lo) + "," + format_double(point.ci_hi) + "\n";
  }
  return csv;
}

int run_dynamics_command(const std::string& config_path, const HarnessOptions& options,
                         StudySpec::Kind kind) {
  ExperimentConfig cfg = prepare(config_path, options, kind);
  const Objective obj = objective_from_config(cfg);
  const auto violations = cfg.run.validate(&obj);
  if (!violations.empty()) throw ConfigError(violations);
  const auto warnings = cfg.run.warnings(obj);
  for (const auto& warning : warnings) std::cerr << "warning: " << warning << "\n";

  const fs::path dir = cfg.output_dir;
  ensure_dir(dir);

  const auto t0 = std::chrono::steady_clock::now();
  const auto trajectories = run(obj, cfg.run, options.threads);
  const auto t1 = std::chrono::steady_clock::now();

  write_file(dir / "trajectories.csv", trajectories_csv(trajectories, obj.dim()));

  std::size_t alive = 0;
  for (const auto& trajectory : trajectories) {
    if (!trajectory.diverged) ++alive;
  }
  if (alive > 0 && obj.minimizer()) {
    Rng curve_rng = Rng::substream(cfg.run.seed, kCurveStreamTag);
    const auto curve = suboptimality_curve(trajectories, obj, curve_rng);
    write_file(dir / "suboptimality.csv", curve_csv(curve));
  }

  if (kind == StudySpec::Kind::sample && obj.dim() == 1 && alive > 0) {
    const auto finals = EmpiricalDistribution::from_final_states(trajectories, "chain");
    double lo = finals.samples[0], hi = finals.samples[0];
    for (double x : finals.samples) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    // Widen until the quadrature grid covers the support.
    double pad = 2.0;
    std::optional<GibbsReference1D> reference;
    for (int attempt = 0; attempt < 6 && !reference; ++attempt, pad *= 2.0) {
      try {
        reference = gibbs_reference_1d(obj, cfg.run.beta, lo - pad, hi + pad, 1 << 15);
      } catch (const CoverageError&) {
      }
    }
    if (!reference) {
      throw CoverageError("posterior check: could not cover the Gibbs support", 1.0);
    }
    Rng gibbs_rng = Rng::substream(cfg.run.seed, kPosteriorStreamTag);
    std::vector<double> draws(finals.n);
    for (double& draw : draws) draw = reference->sample(gibbs_rng);
    const double q = cfg.study.q > 0.0 ? cfg.study.q : 1.0;
    const auto gibbs = EmpiricalDistribution::scalar(std::move(draws), "gibbs");
    json posterior;
    posterior["q"] = q;
    posterior["n_samples"] = finals.n;
    posterior["wq_to_gibbs"] = wasserstein_q_1d(finals, gibbs, q);
    posterior["grid_lo"] = reference->grid.front();
    posterior["grid_hi"] = reference->grid.back();
    posterior["e_pi_f"] = reference->mean_f(obj);
    write_json_file(dir / "posterior.json", posterior);
  }

  write_json_file(dir / "manifest.json",
                  manifest_json(cfg, obj, warnings, &trajectories, std::nullopt));
  const double seconds = std::chrono::duration<double>(t1 - t0).count();
  write_metrics(dir, seconds,
                static_cast<double>(cfg.run.steps) * static_cast<double>(cfg.run.replicas));

  if (alive == 0 && cfg.run.replicas > 0 && cfg.run.steps > 0) {
    std::cerr << "all " << cfg.run.replicas << " replicas diverged\n";
    return kExitDivergence;
  }
  return kExitOk;
}

}  // namespace

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error(violations.empty() ? "invalid config"
                                            : "invalid config: " + violations.front()),
      violations_(std::move(violations)) {}

std::string to_string(StudySpec::Kind kind) {
  switch (kind) {
    case StudySpec::Kind::optimize: return "optimize";
    case StudySpec::Kind::sample: return "sample";
    case StudySpec::Kind::weak_error: return "weak_error";
    case StudySpec::Kind::bounds: return "bounds";
    case StudySpec::Kind::plan: return "plan";
    case StudySpec::Kind::verify: return "verify";
  }
  return "optimize";
}

StudySpec::Kind study_kind_from_string(const std::string& name) {
  if (name == "optimize") return StudySpec::Kind::optimize;
  if (name == "sample") return StudySpec::Kind::sample;
  if (name == "weak_error") return StudySpec::Kind::weak_error;
  if (name == "bounds") return StudySpec::Kind::bounds;
  if (name == "plan") return StudySpec::Kind::plan;
  if (name == "verify") return StudySpec::Kind::verify;
  throw ParameterError("unknown study kind '" + name + "'");
}

ExperimentConfig parse_config(const json& j) {
  std::vector<std::string> violations;
  ExperimentConfig cfg;

  const auto note = [&](const std::string& violation) { violations.push_back(violation); };

  if (!j.is_object()) {
    throw ConfigError({"config root must be a JSON object"});
  }
  cfg.schema_version = j.value("schema_version", 0);
  if (cfg.schema_version != kConfigSchemaVersion) {
    note("schema_version must be " + std::to_string(kConfigSchemaVersion));
  }

  if (!j.contains("objective") || !j["objective"].is_object()) {
    note("missing 'objective' object");
  } else {
    const auto& objective = j["objective"];
    if (!objective.contains("name")) {
      note("objective.name is required");
    } else {
      cfg.objective_name = objective["name"].get<std::string>();
    }
    cfg.dim = objective.value("dim", 1);
    if (cfg.dim < 1) note("objective.dim must be >= 1");
    if (objective.contains("params")) {
      if (!objective["params"].is_object()) {
        note("objective.params must be an object");
      } else {
        for (const auto& [key, value] : objective["params"].items()) {
          if (!value.is_number()) {
            note("objective.params." + key + " must be a number");
          } else {
            cfg.objective_params[key] = value.get<double>();
          }
        }
      }
    }
  }

  if (j.contains("run")) {
    const auto& run = j["run"];
    if (!run.is_object()) {
      note("'run' must be an object");
    } else {
      try {
        cfg.run.algorithm = algorithm_from_string(run.value("algorithm", "fla"));
      } catch (const ParameterError& err) {
        note(err.what());
      }
      cfg.run.alpha = run.value("alpha", 2.0);
      cfg.run.beta = run.value("beta", 1.0);
      cfg.run.eta = run.value("eta", 1e-3);
      cfg.run.steps = run.value("k", 0L);
      cfg.run.replicas = run.value("replicas", 1);
      cfg.run.record_every = run.value("record_every", 1L);
      cfg.run.suppress_noise = run.value("suppress_noise", false);
      if (run.contains("batch_size")) cfg.run.batch_size = run["batch_size"].get<int>();
      if (run.contains("seed")) {
        cfg.run.seed = run["seed"].get<std::uint64_t>();
        cfg.seed_given = true;
      }
      if (run.contains("init")) {
        const auto& init = run["init"];
        const std::string kind = init.value("kind", "deterministic");
        if (kind == "deterministic") {
          cfg.run.init.kind = InitSpec::Kind::deterministic;
          if (init.contains("point")) {
            cfg.run.init.point = init["point"].get<std::vector<double>>();
          }
        } else if (kind == "gaussian") {
          cfg.run.init.kind = InitSpec::Kind::gaussian;
          cfg.run.init.sigma = init.value("sigma", 1.0);
        } else {
          note("run.init.kind must be 'deterministic' or 'gaussian'");
        }
      }
    }
  }

  if (!j.contains("study") || !j["study"].is_object() || !j["study"].contains("kind")) {
    note("missing 'study' object with a 'kind'");
  } else {
    const auto& study = j["study"];
    try {
      cfg.study.kind = study_kind_from_string(study["kind"].get<std::string>());
    } catch (const ParameterError& err) {
      note(err.what());
    }
    if (study.contains("etas")) cfg.study.etas = study["etas"].get<std::vector<double>>();
    cfg.study.refinement = study.value("refinement", 8);
    cfg.study.replicas = study.value("replicas", 256);
    cfg.study.q = study.value("q", 0.0);
    cfg.study.k_eval = study.value("k", 1000.0);
    cfg.study.eta_eval = study.value("eta", 1e-3);
    if (study.contains("k_grid")) cfg.study.k_grid = study["k_grid"].get<std::vector<double>>();
    if (study.contains("eta_grid")) {
      cfg.study.eta_grid = study["eta_grid"].get<std::vector<double>>();
    }
    if (study.contains("gamma")) cfg.study.gamma = study["gamma"].get<double>();
    cfg.study.margin = study.value("margin", 0.5);
    cfg.study.n_probes = study.value("n_probes", 100000L);
    cfg.study.box_halfwidth = study.value("box", 10.0);

    if (cfg.study.kind == StudySpec::Kind::weak_error && cfg.study.etas.size() < 3) {
      note("study.etas must list at least 3 step sizes for a weak-error fit");
    }
  }

  cfg.output_dir = j.value("output_dir", std::string("out"));
  if (cfg.output_dir.empty()) note("output_dir must not be empty");

  if (j.contains("constants")) {
    if (!j["constants"].is_object()) {
      note("'constants' must be an object");
    } else {
      for (const auto& [key, value] : j["constants"].items()) {
        if (!kConstantKeys.contains(key)) {
          note("unknown constants key '" + key + "'");
          continue;
        }
        if (!value.is_number()) {
          note("constants." + key + " must be a number");
          continue;
        }
        cfg.constant_overrides[key] = value.get<double>();
      }
      cfg.constants_supplied = cfg.constant_overrides.contains("C_thm") &&
                               cfg.constant_overrides.contains("lambda_star");
    }
  }

  if (!violations.empty()) throw ConfigError(std::move(violations));
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  json j = json::parse(in);  // parse_error carries the byte offset
  return parse_config(j);
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["schema_version"] = cfg.schema_version;
  j["objective"] = {{"name", cfg.objective_name}, {"dim", cfg.dim}};
  if (!cfg.objective_params.empty()) {
    json params;
    for (const auto& [key, value] : cfg.objective_params) params[key] = value;
    j["objective"]["params"] = params;
  }

  json run;
  run["algorithm"] = to_string(cfg.run.algorithm);
  run["alpha"] = cfg.run.alpha;
  run["beta"] = cfg.run.beta;
  run["eta"] = cfg.run.eta;
  run["k"] = cfg.run.steps;
  run["replicas"] = cfg.run.replicas;
  run["record_every"] = cfg.run.record_every;
  if (cfg.run.suppress_noise) run["suppress_noise"] = true;
  if (cfg.run.batch_size) run["batch_size"] = *cfg.run.batch_size;
  if (cfg.seed_given) run["seed"] = cfg.run.seed;
  json init;
  if (cfg.run.init.kind == InitSpec::Kind::deterministic) {
    init["kind"] = "deterministic";
    if (!cfg.run.init.point.empty()) init["point"] = cfg.run.init.point;
  } else {
    init["kind"] = "gaussian";
    init["sigma"] = cfg.run.init.sigma;
  }
  run["init"] = init;
  j["run"] = run;

  json study;
  study["kind"] = to_string(cfg.study.kind);
  switch (cfg.study.kind) {
    case StudySpec::Kind::weak_error:
      study["etas"] = cfg.study.etas;
      study["refinement"] = cfg.study.refinement;
      study["replicas"] = cfg.study.replicas;
      if (cfg.study.q > 0.0) study["q"] = cfg.study.q;
      break;
    case StudySpec::Kind::bounds:
      study["k"] = cfg.study.k_eval;
      study["eta"] = cfg.study.eta_eval;
      if (!cfg.study.k_grid.empty()) study["k_grid"] = cfg.study.k_grid;
      if (!cfg.study.eta_grid.empty()) study["eta_grid"] = cfg.study.eta_grid;
      if (cfg.study.gamma) study["gamma"] = *cfg.study.gamma;
      study["margin"] = cfg.study.margin;
      break;
    case StudySpec::Kind::plan:
      if (cfg.study.gamma) study["gamma"] = *cfg.study.gamma;
      study["margin"] = cfg.study.margin;
      break;
    case StudySpec::Kind::verify:
      study["n_probes"] = cfg.study.n_probes;
      study["box"] = cfg.study.box_halfwidth;
      break;
    case StudySpec::Kind::sample:
      if (cfg.study.q > 0.0) study["q"] = cfg.study.q;
      break;
    case StudySpec::Kind::optimize:
      break;
  }
  j["study"] = study;
  j["output_dir"] = cfg.output_dir;
  if (!cfg.constant_overrides.empty()) {
    json constants;
    for (const auto& [key, value] : cfg.constant_overrides) constants[key] = value;
    j["constants"] = constants;
  }
  return j;
}

Objective objective_from_config(const ExperimentConfig& cfg) {
  try {
    return make_benchmark(cfg.objective_name, cfg.dim, cfg.objective_params);
  } catch (const ParameterError& err) {
    throw ConfigError({std::string("objective: ") + err.what()});
  }
}

AssumptionConstants constants_from_config(const ExperimentConfig& cfg,
                                          const Objective& obj) {
  AssumptionConstants c;
  if (obj.constants()) {
    c = AssumptionConstants::from_objective(obj, cfg.run.alpha, cfg.run.beta);
  } else {
    c.alpha = cfg.run.alpha;
    c.beta = cfg.run.beta;
    c.d = obj.dim();
  }
  const auto apply = [&](const char* key, double& slot) {
    auto it = cfg.constant_overrides.find(key);
    if (it != cfg.constant_overrides.end()) slot = it->second;
  };
  apply("M", c.M);
  apply("gamma", c.gamma);
  apply("m", c.m);
  apply("b", c.b);
  apply("B", c.B);
  apply("L", c.L);
  apply("lambda_star", c.lambda_star);
  apply("C_erg", c.C_erg);
  apply("C_pi", c.C_pi);
  apply("C_thm", c.C_thm);
  apply("c_x1", c.c_x1);
  apply("c_b", c.c_b);
  c.constants_supplied = cfg.constants_supplied;
  c.validate();
  return c;
}

int cmd_sample_stable(double alpha, double scale, long n, std::uint64_t seed,
                      const std::string& out_path) {
  return guarded([&]() {
    if (n < 0) throw ParameterError("sample-stable: n must be >= 0");
    StableParams params{alpha, scale};
    params.validate();
    Rng rng(seed);
    std::vector<double> draws(static_cast<std::size_t>(n));
    std::string body;
    body.reserve(static_cast<std::size_t>(n) * 24);
    for (auto& draw : draws) {
      draw = sample_sas(params, rng);
      body += format_double(draw);
      body += "\n";
    }
    write_file(out_path, body);

    if (n >= 10000) {
      const std::vector<double> omegas = {0.25, 0.5, 1.0, 2.0, 4.0};
      const auto points = charfn_check(draws, alpha, scale, omegas);
      double worst = 0.0;
      for (const auto& point : points) {
        std::cerr << "charfn omega=" << point.omega << " empirical=" << point.empirical
                  << " target=" << point.target << " abs_err=" << point.abs_err << "\n";
        worst = std::max(worst, point.abs_err);
      }
      std::cerr << "charfn fit: " << (worst <= 0.01 ? "pass" : "FAIL")
                << " (max abs err " << worst << ", tolerance 0.01)\n";
    } else if (n > 0) {
      std::cerr << "charfn fit: skipped (n < 10000)\n";
    }
    return kExitOk;
  });
}

int cmd_optimize(const std::string& config_path, const HarnessOptions& options) {
  return guarded([&]() {
    return run_dynamics_command(config_path, options, StudySpec::Kind::optimize);
  });
}

int cmd_sample_posterior(const std::string& config_path, const HarnessOptions& options) {
  return guarded([&]() {
    return run_dynamics_command(config_path, options, StudySpec::Kind::sample);
  });
}

int cmd_weak_error(const std::string& config_path, const HarnessOptions& options) {
  return guarded([&]() {
    ExperimentConfig cfg = prepare(config_path, options, StudySpec::Kind::weak_error);
    const Objective obj = objective_from_config(cfg);
    const auto violations = cfg.run.validate(&obj);
    if (!violations.empty()) throw ConfigError(violations);

    std::optional<PlanResult> plan;
    double q = cfg.study.q;
    if (q <= 0.0) {
      if (!obj.constants()) {
        throw ConfigError({"weak_error: no study.q given and the objective has no "
                           "certificate to plan from"});
      }
      plan = plan_exponents(obj.constants()->gamma, cfg.run.alpha, cfg.study.margin);
      if (!plan->feasible) {
        throw ConfigError({"weak_error: no feasible exponent plan (" + plan->violated +
                           "); supply study.q explicitly"});
      }
      q = plan->plan.q;
    }

    const fs::path dir = cfg.output_dir;
    ensure_dir(dir);
    const auto t0 = std::chrono::steady_clock::now();
    const auto study = weak_error_study(obj, cfg.run, cfg.study.etas, cfg.study.refinement,
                                        cfg.study.replicas, q, options.threads);
    const auto t1 = std::chrono::steady_clock::now();

    std::string csv = "eta,wq,ci_lo,ci_hi\n";
    for (const auto& point : study.points) {
      csv += format_double(point.eta) + "," + format_double(point.wq) + "," +
             format_double(point.ci_lo) + "," + format_double(point.ci_hi) + "\n";
    }
    write_file(dir / "weak_error.csv", csv);

    json summary;
    summary["q"] = q;
    summary["refinement"] = cfg.study.refinement;
    summary["replicas"] = cfg.study.replicas;
    summary["k"] = cfg.run.steps;
    summary["slope_valid"] = study.slope_valid;
    if (study.slope_valid) {
      summary["fitted_slope"] = study.slope;
      summary["fitted_intercept"] = study.intercept;
    }
    write_json_file(dir / "summary.json", summary);
    write_json_file(dir / "manifest.json", manifest_json(cfg, obj, {}, nullptr, plan));

    double total_steps = 0.0;
    for (double eta : cfg.study.etas) {
      (void)eta;
      total_steps += static_cast<double>(cfg.run.steps) * cfg.study.replicas *
                     (1.0 + cfg.study.refinement);
    }
    write_metrics(dir, std::chrono::duration<double>(t1 - t0).count(), total_steps);
    return kExitOk;
  });
}

int cmd_bounds(const std::string& config_path, const HarnessOptions& options) {
  return guarded([&]() {
    ExperimentConfig cfg = prepare(config_path, options, StudySpec::Kind::bounds);
    const Objective obj = objective_from_config(cfg);
    AssumptionConstants constants = constants_from_config(cfg, obj);

    const double gamma = cfg.study.gamma.value_or(constants.gamma);
    constants.gamma = gamma;
    const auto plan = plan_exponents(gamma, constants.alpha, cfg.study.margin);
    if (!plan.feasible) {
      throw ConfigError({"bounds: no feasible exponent plan for gamma = " +
                         std::to_string(gamma) + " (" + plan.violated + ")"});
    }

    const fs::path dir = cfg.output_dir;
    ensure_dir(dir);

    const double k = cfg.study.k_eval;
    const double eta = cfg.study.eta_eval;
    const auto breakdown = suboptimality_bound(constants, plan.plan, k, eta);

    json out;
    out["shape_only"] = breakdown.shape_only;
    out["alpha"] = constants.alpha;
    out["beta"] = constants.beta;
    out["d"] = constants.d;
    out["gamma"] = constants.gamma;
    out["constants"] = {{"M", constants.M},         {"m", constants.m},
                        {"b", constants.b},         {"B", constants.B},
                        {"L", constants.L},         {"lambda_star", constants.lambda_star},
                        {"C_erg", constants.C_erg}, {"C_pi", constants.C_pi},
                        {"C_thm", constants.C_thm}, {"c_x1", constants.c_x1},
                        {"c_b", constants.c_b}};
    out["plan"] = {{"p", plan.plan.p},   {"q", plan.plan.q},   {"p1", plan.plan.p1},
                   {"q1", plan.plan.q1}, {"q_lo", plan.q_lo},  {"q_hi", plan.q_hi}};
    out["k"] = k;
    out["eta"] = eta;
    out["suboptimality"] = {{"a1", breakdown.a1},
                            {"a2", breakdown.a2},
                            {"a3", breakdown.a3},
                            {"a4", breakdown.a4},
                            {"total", breakdown.total},
                            {"k_exponent_from_gamma", breakdown.k_exponent_from_gamma},
                            {"eta_warning", breakdown.eta_warning}};
    out["gibbs_suboptimality_bound"] = gibbs_suboptimality_bound(constants);

    InitialMoments init = InitialMoments::origin();
    if (cfg.run.init.kind == InitSpec::Kind::gaussian) {
      init = InitialMoments::gaussian(cfg.run.init.sigma, constants.d);
    } else if (!cfg.run.init.point.empty()) {
      init = InitialMoments::point(norm(cfg.run.init.point));
    }
    if (eta <= constants.eta_max()) {
      const auto sampling = sampling_bound(constants, plan.plan, k, eta);
      out["sampling"] = {{"term_time", sampling.term_time},
                         {"term_dim", sampling.term_dim},
                         {"term_ergodic", sampling.term_ergodic},
                         {"total", sampling.total},
                         {"branch_q_plus_gamma", sampling.branch_q_plus_gamma}};
      out["weak_error_wq_bound"] = detailed_weak_error_bound(constants, plan.plan, k, eta, init);
      out["weak_error_mean_gap_bound"] =
          weak_error_mean_gap_bound(constants, plan.plan, k, eta, init);
    } else {
      out["sampling"] = nullptr;
      out["weak_error_wq_bound"] = nullptr;
      out["weak_error_mean_gap_bound"] = nullptr;
      out["eta_note"] = "eta exceeds m/M^2; step-size-conditional bounds omitted";
    }
    out["x1_x3_wq_bound"] = x1_x3_bound(constants, plan.plan, k, eta);
    write_json_file(dir / "bounds.json", out);

    std::vector<double> ks = cfg.study.k_grid.empty() ? std::vector<double>{k} : cfg.study.k_grid;
    std::vector<double> etas =
        cfg.study.eta_grid.empty() ? std::vector<double>{eta} : cfg.study.eta_grid;
    std::string csv = "k,eta,a1,a2,a3,a4,total\n";
    for (double kk : ks) {
      for (double ee : etas) {
        const auto row = suboptimality_bound(constants, plan.plan, kk, ee);
        csv += format_double(kk) + "," + format_double(ee) + "," + format_double(row.a1) +
               "," + format_double(row.a2) + "," + format_double(row.a3) + "," +
               format_double(row.a4) + "," + format_double(row.total) + "\n";
      }
    }
    write_file(dir / "bounds_sweep.csv", csv);
    return kExitOk;
  });
}

int cmd_plan(const std::string& config_path, const HarnessOptions& options) {
  return guarded([&]() {
    ExperimentConfig cfg = prepare(config_path, options, StudySpec::Kind::plan);
    const Objective obj = objective_from_config(cfg);
    double gamma;
    if (cfg.study.gamma) {
      gamma = *cfg.study.gamma;
    } else if (obj.constants()) {
      gamma = obj.constants()->gamma;
    } else {
      throw ConfigError({"plan: study.gamma missing and the objective has no certificate"});
    }
    const auto plan = plan_exponents(gamma, cfg.run.alpha, cfg.study.margin);

    const fs::path dir = cfg.output_dir;
    ensure_dir(dir);
    json out;
    out["gamma"] = gamma;
    out["alpha"] = cfg.run.alpha;
    out["margin"] = cfg.study.margin;
    out["gamma_threshold"] = gamma_feasibility_threshold();
    out["feasible"] = plan.feasible;
    if (plan.feasible) {
      out["p"] = plan.plan.p;
      out["q"] = plan.plan.q;
      out["p1"] = plan.plan.p1;
      out["q1"] = plan.plan.q1;
      out["q_lo"] = plan.q_lo;
      out["q_hi"] = plan.q_hi;
    } else {
      out["violated"] = plan.violated;
    }
    write_json_file(dir / "plan.json", out);
    return kExitOk;
  });
}

int cmd_verify(const std::string& config_path, const HarnessOptions& options) {
  return guarded([&]() {
    ExperimentConfig cfg = prepare(config_path, options, StudySpec::Kind::verify);
    const Objective obj = objective_from_config(cfg);
    if (!obj.constants()) {
      throw ConfigError({"verify: objective carries no certificate constants"});
    }
    const auto& oc = *obj.constants();
    const double alpha = cfg.run.alpha;
    const double ca = c_alpha(alpha);

    const double sweep_halfwidth =
        oc.local_only ? oc.certificate_halfwidth : cfg.study.box_halfwidth;
    const Box box = Box::cube(obj.dim(), -sweep_halfwidth, sweep_halfwidth);
    const long n = cfg.study.n_probes;

    json checks = json::array();
    bool all_passed = true;
    const auto push = [&](const std::string& name, bool passed, json detail) {
      detail["check"] = name;
      detail["passed"] = passed;
      checks.push_back(detail);
      all_passed = all_passed && passed;
    };

    {  // gradient vs central finite differences
      Rng rng = Rng::substream(cfg.run.seed, kVerifyStreamTag);
      double worst = 0.0;
      std::vector<double> fd(obj.dim()), xp, xm;
      for (int trial = 0; trial < 100; ++trial) {
        const auto x = box.sample(rng);
        const auto g = obj.gradient(x);
        const double h = 1e-5 * (1.0 + norm(x));
        for (int i = 0; i < obj.dim(); ++i) {
          xp = x;
          xm = x;
          xp[static_cast<std::size_t>(i)] += h;
          xm[static_cast<std::size_t>(i)] -= h;
          fd[static_cast<std::size_t>(i)] = (obj.value(xp) - obj.value(xm)) / (2.0 * h);
        }
        worst = std::max(worst, dist(fd, g) / (1.0 + norm(g)));
      }
      push("gradient_finite_difference", worst < 1e-5, {{"max_rel_err", worst}});
    }

    {  // Holder certificate
      Rng rng = Rng::substream(cfg.run.seed, kVerifyStreamTag + 1);
      const auto report =
          check_holder(obj, alpha, oc.gamma, ca * oc.holder_M, n, box, rng);
      push("holder", report.passed,
           {{"max_ratio", report.max_ratio},
            {"bound", ca * oc.holder_M},
            {"local_only", oc.local_only},
            {"box_halfwidth", sweep_halfwidth}});
    }

    {  // dissipativity certificate (global for all shipped benchmarks)
      Rng rng = Rng::substream(cfg.run.seed, kVerifyStreamTag + 2);
      const Box dissip_box = Box::cube(obj.dim(), -cfg.study.box_halfwidth,
                                       cfg.study.box_halfwidth);
      const auto report = check_dissipative(obj, alpha, ca * oc.dissip_m, ca * oc.dissip_b,
                                            oc.gamma, n, dissip_box, rng);
      push("dissipativity", report.passed, {{"min_slack", report.min_slack}});
    }

    {  // gradient growth: c_a ||grad f|| <= M ||x||^gamma + B
      Rng rng = Rng::substream(cfg.run.seed, kVerifyStreamTag + 3);
      const Box growth_box = Box::cube(obj.dim(), -cfg.study.box_halfwidth,
                                       cfg.study.box_halfwidth);
      double min_slack = std::numeric_limits<double>::infinity();
      for (long i = 0; i < n; ++i) {
        const auto x = growth_box.sample(rng);
        const auto g = obj.gradient(x);
        const double slack = ca * oc.holder_M * std::pow(norm(x), oc.gamma) +
                             ca * oc.grad_zero_B - ca * norm(g);
        min_slack = std::min(min_slack, slack);
      }
      push("gradient_growth", min_slack >= 0.0, {{"min_slack", min_slack}});
    }

    if (obj.has_components()) {  // finite-sum consistency
      Rng rng = Rng::substream(cfg.run.seed, kVerifyStreamTag + 4);
      double worst = 0.0;
      for (int trial = 0; trial < 100; ++trial) {
        const auto x = box.sample(rng);
        const auto g = obj.gradient(x);
        const auto sg = stochastic_gradient(obj, x, obj.n_components(), rng);
        worst = std::max(worst, dist(g, sg));
      }
      push("finite_sum_full_batch", worst == 0.0, {{"max_abs_diff", worst}});
    }

    const fs::path dir = cfg.output_dir;
    ensure_dir(dir);
    json out;
    out["objective"] = cfg.objective_name;
    out["alpha"] = alpha;
    out["c_alpha"] = ca;
    out["n_probes"] = n;
    out["all_passed"] = all_passed;
    out["checks"] = checks;
    write_json_file(dir / "verify.json", out);
    return all_passed ? kExitOk : kExitValidation;
  });
}

}  // namespace flmc
