#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "flmc/bounds.hpp"
#include "flmc/diagnostics.hpp"
#include "flmc/dynamics.hpp"

namespace flmc {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kConfigSchemaVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitDivergence = 2;
inline constexpr int kExitIo = 3;

/// Study selector plus its kind-specific knobs.
struct StudySpec {
  enum class Kind { optimize, sample, weak_error, bounds, plan, verify };
  Kind kind = Kind::optimize;

  // weak_error
  std::vector<double> etas;
  int refinement = 8;
  int replicas = 256;
  double q = 0.0;  // <= 0 takes q from the exponent plan

  // bounds
  double k_eval = 1000.0;
  double eta_eval = 1e-3;
  std::vector<double> k_grid;
  std::vector<double> eta_grid;

  // plan (gamma falls back to the objective's certificate)
  std::optional<double> gamma;
  double margin = 0.5;

  // verify
  long n_probes = 100000;
  double box_halfwidth = 10.0;
};

std::string to_string(StudySpec::Kind kind);
StudySpec::Kind study_kind_from_string(const std::string& name);

/// Parsed experiment file. Seeds must be explicit: a config that runs any
/// randomized study without a seed fails validation.
struct ExperimentConfig {
  int schema_version = kConfigSchemaVersion;
  std::string objective_name;
  int dim = 1;
  BenchmarkParams objective_params;
  RunConfig run;
  bool seed_given = false;
  StudySpec study;
  std::string output_dir = "out";
  std::map<std::string, double> constant_overrides;
  bool constants_supplied = false;  // C_thm and lambda_star both user-set
};

/// Validation failure carrying every violation found, not just the first.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

private:
  std::vector<std::string> violations_;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config_file(const std::string& path);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

/// Builds the configured objective.
Objective objective_from_config(const ExperimentConfig& cfg);

/// Certificate constants scaled to the run's alpha/beta, with the config's
/// overrides applied on top.
AssumptionConstants constants_from_config(const ExperimentConfig& cfg,
                                          const Objective& obj);

struct HarnessOptions {
  int threads = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

/// Subcommand drivers. Each returns a process exit code (0 ok, 1 validation,
/// 2 all replicas diverged, 3 io) and reports problems on stderr.
int cmd_sample_stable(double alpha, double scale, long n, std::uint64_t seed,
                      const std::string& out_path);
int cmd_optimize(const std::string& config_path, const HarnessOptions& options);
int cmd_sample_posterior(const std::string& config_path, const HarnessOptions& options);
int cmd_weak_error(const std::string& config_path, const HarnessOptions& options);
int cmd_bounds(const std::string& config_path, const HarnessOptions& options);
int cmd_plan(const std::string& config_path, const HarnessOptions& options);
int cmd_verify(const std::string& config_path, const HarnessOptions& options);

/// %.17g rendering used for all CSV numerics (round-trip exact).
std::string format_double(double value);

}  // namespace flmc
