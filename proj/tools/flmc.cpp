// Command-line front end: heavy-tailed Langevin runs, weak-error studies,
// bound evaluation, exponent planning, and certificate verification.

#include <CLI11.hpp>

#include "flmc/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config;
  flmc::HarnessOptions options;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("config", flags.config, "experiment config (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.options.seed, "override run.seed");
  cmd->add_option("--out", flags.options.out, "override output_dir");
  cmd->add_option("--threads", flags.options.threads,
                  "worker threads (default: FLMC_THREADS or hardware)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fractional Langevin Monte Carlo toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", flmc::kToolVersion);

  // sample-stable is flag-driven; everything else reads a config file.
  double ss_alpha = 2.0, ss_scale = 1.0;
  long ss_n = 0;
  std::uint64_t ss_seed = 0;
  std::string ss_out = "samples.txt";
  auto* sample_stable =
      app.add_subcommand("sample-stable", "draw symmetric alpha-stable variates");
  sample_stable->add_option("--alpha", ss_alpha, "characteristic index in (1, 2]");
  sample_stable->add_option("--scale", ss_scale, "scale parameter > 0");
  sample_stable->add_option("--n", ss_n, "number of draws")->required();
  sample_stable->add_option("--seed", ss_seed, "stream seed")->required();
  sample_stable->add_option("--out", ss_out, "output path (one draw per line)");

  CommonFlags optimize, posterior, weak_error, bounds, plan, verify;
  add_common(app.add_subcommand("optimize", "run replicated optimization"), optimize);
  add_common(app.add_subcommand("sample-posterior",
                                "run sampling plus a 1-d Gibbs reference comparison"),
             posterior);
  add_common(app.add_subcommand("weak-error", "step-size scaling study against the "
                                              "fine-step reference"),
             weak_error);
  add_common(app.add_subcommand("bounds", "evaluate the closed-form bounds"), bounds);
  add_common(app.add_subcommand("plan", "exponent feasibility and plan construction"), plan);
  add_common(app.add_subcommand("verify", "sweep the objective's certificates"), verify);

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand("sample-stable")) {
    return flmc::cmd_sample_stable(ss_alpha, ss_scale, ss_n, ss_seed, ss_out);
  }
  if (app.got_subcommand("optimize")) {
    return flmc::cmd_optimize(optimize.config, optimize.options);
  }
  if (app.got_subcommand("sample-posterior")) {
    return flmc::cmd_sample_posterior(posterior.config, posterior.options);
  }
  if (app.got_subcommand("weak-error")) {
    return flmc::cmd_weak_error(weak_error.config, weak_error.options);
  }
  if (app.got_subcommand("bounds")) {
    return flmc::cmd_bounds(bounds.config, bounds.options);
  }
  if (app.got_subcommand("plan")) {
    return flmc::cmd_plan(plan.config, plan.options);
  }
  if (app.got_subcommand("verify")) {
    return flmc::cmd_verify(verify.config, verify.options);
  }
  return flmc::kExitValidation;
}
