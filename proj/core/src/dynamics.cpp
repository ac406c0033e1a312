#include "flmc/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "flmc/c_alpha.hpp"
#include "flmc/errors.hpp"
#include "flmc/parallel.hpp"
#include "flmc/stable.hpp"
#include "flmc/vec.hpp"

namespace flmc {

namespace {

// Shared update kernel. ULA is the alpha = 2 member evaluated through the
// same expressions, which is what makes the reduction test bit-exact.
class Stepper {
public:
  Stepper(const Objective& obj, const RunConfig& cfg)
      : obj_(obj),
        cfg_(cfg),
        drift_coef_(cfg.eta * c_alpha(cfg.alpha)),
        grad_(static_cast<std::size_t>(obj.dim())),
        noise_(static_cast<std::size_t>(obj.dim())) {}

  void advance(std::vector<double>& state, Rng& rng, long step_index, int replica) {
    if (cfg_.algorithm == Algorithm::sgfla) {
      const auto g = stochastic_gradient(obj_, state, *cfg_.batch_size, rng);
      std::copy(g.begin(), g.end(), grad_.begin());
    } else {
      obj_.gradient(state, grad_);
    }
    if (!all_finite(grad_)) {
      throw DivergenceError("non-finite gradient", state, step_index, replica);
    }
    if (cfg_.suppress_noise) {
      for (std::size_t i = 0; i < state.size(); ++i) state[i] -= drift_coef_ * grad_[i];
    } else {
      sample_levy_increment(cfg_.alpha, cfg_.eta, cfg_.beta, noise_, rng);
      for (std::size_t i = 0; i < state.size(); ++i) {
        state[i] = state[i] - drift_coef_ * grad_[i] + noise_[i];
      }
    }
    if (!all_finite(state)) {
      throw DivergenceError("non-finite state", state, step_index, replica);
    }
  }

private:
  const Objective& obj_;
  const RunConfig& cfg_;
  double drift_coef_;
  std::vector<double> grad_;
  std::vector<double> noise_;
};

std::vector<double> initial_state(const Objective& obj, const RunConfig& cfg, Rng& rng) {
  std::vector<double> state(static_cast<std::size_t>(obj.dim()), 0.0);
  if (cfg.init.kind == InitSpec::Kind::deterministic) {
    if (!cfg.init.point.empty()) state = cfg.init.point;
  } else {
    for (double& x : state) x = cfg.init.sigma * rng.gaussian();
  }
  return state;
}

// Returns false (and marks divergence) when the objective value is no longer
// representable; the state itself may still be finite after a huge jump.
bool record(Trajectory& trajectory, long step, double eta, const Objective& obj,
            const std::vector<double>& state) {
  const double f = obj.value(state);
  if (!std::isfinite(f)) {
    trajectory.diverged = true;
    trajectory.divergence_step = step;
    return false;
  }
  trajectory.steps.push_back(step);
  trajectory.times.push_back(static_cast<double>(step) * eta);
  trajectory.states.insert(trajectory.states.end(), state.begin(), state.end());
  trajectory.f_values.push_back(f);
  return true;
}

Trajectory run_single(const Objective& obj, const RunConfig& cfg, int replica) {
  Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(replica));
  Trajectory trajectory;
  trajectory.replica_id = replica;
  trajectory.stream_seed = derive_stream_seed(cfg.seed, static_cast<std::uint64_t>(replica));
  trajectory.dim = obj.dim();

  auto state = initial_state(obj, cfg, rng);
  if (!record(trajectory, 0, cfg.eta, obj, state)) return trajectory;
  Stepper stepper(obj, cfg);
  for (long j = 1; j <= cfg.steps; ++j) {
    try {
      stepper.advance(state, rng, j, replica);
    } catch (const DivergenceError& err) {
      trajectory.diverged = true;
      trajectory.divergence_step = err.step;
      return trajectory;
    }
    if (j % cfg.record_every == 0 || j == cfg.steps) {
      if (!record(trajectory, j, cfg.eta, obj, state)) return trajectory;
    }
  }
  return trajectory;
}

}  // namespace

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::fla: return "fla";
    case Algorithm::ula: return "ula";
    case Algorithm::sgfla: return "sgfla";
  }
  return "fla";
}

Algorithm algorithm_from_string(const std::string& name) {
  if (name == "fla") return Algorithm::fla;
  if (name == "ula") return Algorithm::ula;
  if (name == "sgfla") return Algorithm::sgfla;
  throw ParameterError("unknown algorithm '" + name + "' (expected fla | ula | sgfla)");
}

std::vector<std::string> RunConfig::validate(const Objective* obj) const {
  std::vector<std::string> violations;
  if (!(alpha > 1.0) || !(alpha <= 2.0)) violations.push_back("alpha must lie in (1, 2]");
  if (algorithm == Algorithm::ula && alpha != 2.0) {
    violations.push_back("algorithm 'ula' forces alpha = 2");
  }
  if (!(beta > 0.0)) violations.push_back("beta must be > 0");
  if (!(eta > 0.0)) violations.push_back("eta must be > 0");
  if (steps < 0) violations.push_back("k must be >= 0");
  if (replicas < 1) violations.push_back("replicas must be >= 1");
  if (record_every < 1) violations.push_back("record_every must be >= 1");
  if (init.kind == InitSpec::Kind::gaussian && !(init.sigma > 0.0)) {
    violations.push_back("gaussian init requires sigma > 0");
  }
  if (algorithm == Algorithm::sgfla) {
    if (!batch_size) {
      violations.push_back("sgfla requires batch_size");
    } else if (obj != nullptr) {
      if (!obj->has_components()) {
        violations.push_back("sgfla requires an objective with finite-sum components");
      } else if (*batch_size < 1 || *batch_size > obj->n_components()) {
        violations.push_back("batch_size must lie in [1, n_components]");
      }
    }
  }
  if (obj != nullptr) {
    if (init.kind == InitSpec::Kind::deterministic && !init.point.empty() &&
        static_cast<int>(init.point.size()) != obj->dim()) {
      violations.push_back("init point dimension does not match the objective");
    }
  }
  return violations;
}

void RunConfig::throw_if_invalid(const Objective* obj) const {
  const auto violations = validate(obj);
  if (violations.empty()) return;
  std::string what = "invalid run config:";
  for (const auto& v : violations) what += " [" + v + "]";
  throw ParameterError(what);
}

std::vector<std::string> RunConfig::warnings(const Objective& obj) const {
  std::vector<std::string> out;
  if (obj.constants()) {
    const double ca = c_alpha(alpha);
    const auto& oc = *obj.constants();
    const double eta_cap = oc.dissip_m / (ca * oc.holder_M * oc.holder_M);
    if (eta > eta_cap) {
      out.push_back("eta = " + std::to_string(eta) + " exceeds the certified m/M^2 = " +
                    std::to_string(eta_cap) + "; discretization bounds do not apply");
    }
  }
  return out;
}

std::span<const double> Trajectory::state_row(std::size_t row) const {
  return {states.data() + row * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim)};
}

std::vector<double> Trajectory::final_state() const {
  if (rows() == 0) throw ParameterError("trajectory has no recorded states");
  const auto row = state_row(rows() - 1);
  return {row.begin(), row.end()};
}

namespace {

std::vector<double> one_step(std::span<const double> w, const Objective& obj,
                             const RunConfig& cfg, Rng& rng) {
  cfg.throw_if_invalid(&obj);
  std::vector<double> state(w.begin(), w.end());
  Stepper(obj, cfg).advance(state, rng, 0, -1);
  return state;
}

}  // namespace

std::vector<double> fla_step(std::span<const double> w, const Objective& obj,
                             const RunConfig& cfg, Rng& rng) {
  RunConfig local = cfg;
  local.algorithm = Algorithm::fla;
  return one_step(w, obj, local, rng);
}

std::vector<double> ula_step(std::span<const double> w, const Objective& obj,
                             const RunConfig& cfg, Rng& rng) {
  if (cfg.alpha != 2.0) throw ParameterError("ula_step requires alpha = 2");
  RunConfig local = cfg;
  local.algorithm = Algorithm::ula;
  return one_step(w, obj, local, rng);
}

std::vector<double> sgfla_step(std::span<const double> w, const Objective& obj,
                               const RunConfig& cfg, Rng& rng) {
  RunConfig local = cfg;
  local.algorithm = Algorithm::sgfla;
  return one_step(w, obj, local, rng);
}

std::vector<Trajectory> run(const Objective& obj, const RunConfig& cfg, int n_threads) {
  cfg.throw_if_invalid(&obj);
  std::vector<Trajectory> trajectories(static_cast<std::size_t>(cfg.replicas));
  parallel_for(static_cast<std::size_t>(cfg.replicas), n_threads, [&](std::size_t r) {
    trajectories[r] = run_single(obj, cfg, static_cast<int>(r));
  });
  return trajectories;
}

Trajectory simulate_reference(const Objective& obj, const RunConfig& cfg, int refinement,
                              Rng& rng) {
  cfg.throw_if_invalid(&obj);
  if (refinement < 1) throw ParameterError("simulate_reference: refinement must be >= 1");
  RunConfig fine = cfg;
  fine.eta = cfg.eta / refinement;

  Trajectory trajectory;
  trajectory.replica_id = 0;
  trajectory.dim = obj.dim();
  auto state = initial_state(obj, cfg, rng);
  if (!record(trajectory, 0, cfg.eta, obj, state)) return trajectory;
  Stepper stepper(obj, fine);
  for (long j = 1; j <= cfg.steps; ++j) {
    try {
      for (int s = 0; s < refinement; ++s) {
        stepper.advance(state, rng, j, 0);
      }
    } catch (const DivergenceError& err) {
      trajectory.diverged = true;
      trajectory.divergence_step = err.step;
      return trajectory;
    }
    if (j % cfg.record_every == 0 || j == cfg.steps) {
      if (!record(trajectory, j, cfg.eta, obj, state)) return trajectory;
    }
  }
  return trajectory;
}

CoupledEndpoints coupled_endpoints(const Objective& obj, const RunConfig& cfg,
                                   int refinement, Rng& rng) {
  cfg.throw_if_invalid(&obj);
  if (refinement < 1) throw ParameterError("coupled_endpoints: refinement must be >= 1");
  const auto dim = static_cast<std::size_t>(obj.dim());
  const double fine_eta = cfg.eta / refinement;
  const double drift_fine = fine_eta * c_alpha(cfg.alpha);
  const double drift_coarse = cfg.eta * c_alpha(cfg.alpha);

  CoupledEndpoints out;
  out.fine = initial_state(obj, cfg, rng);
  out.coarse = out.fine;

  std::vector<double> grad(dim), noise(dim), noise_sum(dim);
  auto advance = [&](std::vector<double>& state, double drift, std::span<const double> kick,
                     long step) {
    obj.gradient(state, grad);
    if (!all_finite(grad)) throw DivergenceError("non-finite gradient", state, step);
    for (std::size_t i = 0; i < dim; ++i) state[i] = state[i] - drift * grad[i] + kick[i];
    if (!all_finite(state)) throw DivergenceError("non-finite state", state, step);
  };

  try {
    for (long j = 1; j <= cfg.steps; ++j) {
      std::fill(noise_sum.begin(), noise_sum.end(), 0.0);
      for (int s = 0; s < refinement; ++s) {
        sample_levy_increment(cfg.alpha, fine_eta, cfg.beta, noise, rng);
        advance(out.fine, drift_fine, noise, j);
        for (std::size_t i = 0; i < dim; ++i) noise_sum[i] += noise[i];
      }
      advance(out.coarse, drift_coarse, noise_sum, j);
    }
  } catch (const DivergenceError&) {
    out.diverged = true;
  }
  return out;
}

long first_passage_step(const Trajectory& trajectory, std::span<const double> target,
                        double radius) {
  if (static_cast<int>(target.size()) != trajectory.dim) {
    throw ParameterError("first_passage_step: target dimension mismatch");
  }
  for (std::size_t row = 0; row < trajectory.rows(); ++row) {
    if (dist(trajectory.state_row(row), target) <= radius) return trajectory.steps[row];
  }
  return -1;
}

}  // namespace flmc
