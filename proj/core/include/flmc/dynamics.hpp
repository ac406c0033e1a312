#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flmc/objectives.hpp"
#include "flmc/rng.hpp"

namespace flmc {

enum class Algorithm { fla, ula, sgfla };

std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);

/// Initial condition: a fixed point (empty point means the origin) or an
/// isotropic Gaussian with per-coordinate deviation sigma.
struct InitSpec {
  enum class Kind { deterministic, gaussian };
  Kind kind = Kind::deterministic;
  std::vector<double> point;
  double sigma = 1.0;
};

/// One run's parameters. `suppress_noise` is a test mode that skips the noise
/// term (and its stream consumption) so the pure drift step can be checked.
struct RunConfig {
  Algorithm algorithm = Algorithm::fla;
  double alpha = 2.0;          // characteristic index, (1, 2]; ula forces 2
  double beta = 1.0;           // inverse temperature
  double eta = 1e-3;           // step size
  long steps = 0;              // iteration count k
  InitSpec init;
  std::uint64_t seed = 0;      // master seed; replica r uses derive_stream_seed(seed, r)
  int replicas = 1;
  std::optional<int> batch_size;  // required by sgfla
  long record_every = 1;
  bool suppress_noise = false;

  /// All violations (empty when valid). The objective enables the
  /// finite-sum and dimension checks.
  std::vector<std::string> validate(const Objective* obj = nullptr) const;
  void throw_if_invalid(const Objective* obj = nullptr) const;

  /// Warnings that do not block a run, e.g. eta above the certified m/M^2.
  std::vector<std::string> warnings(const Objective& obj) const;
};

/// Recorded states of one replica. Step 0 and the final step are always
/// recorded; in between every record_every-th step. f_values[r] is exactly
/// f(states row r). A diverged replica keeps its records up to the failing
/// step and carries the step index.
struct Trajectory {
  int replica_id = 0;
  std::uint64_t stream_seed = 0;
  int dim = 1;
  std::vector<long> steps;
  std::vector<double> times;
  std::vector<double> states;  // row-major, recorded x dim
  std::vector<double> f_values;
  bool diverged = false;
  long divergence_step = -1;

  std::size_t rows() const { return steps.size(); }
  std::span<const double> state_row(std::size_t row) const;
  std::vector<double> final_state() const;
};

/// One iteration of the fractional scheme:
///   w' = w - eta c_alpha grad f(w) + (eta/beta)^(1/alpha) dL.
/// Throws DivergenceError when the gradient or the updated state is
/// non-finite.
std::vector<double> fla_step(std::span<const double> w, const Objective& obj,
                             const RunConfig& cfg, Rng& rng);

/// The Gaussian member (alpha = 2):
///   w' = w - eta grad f(w) + sqrt(2 eta / beta) dB.
/// Identical code path to fla_step at alpha = 2, so the two consume the
/// stream identically and produce bit-equal iterates.
std::vector<double> ula_step(std::span<const double> w, const Objective& obj,
                             const RunConfig& cfg, Rng& rng);

/// fla_step with the minibatch gradient; a full batch consumes no extra
/// randomness and reproduces fla_step bitwise on a shared stream.
std::vector<double> sgfla_step(std::span<const double> w, const Objective& obj,
                               const RunConfig& cfg, Rng& rng);

/// Runs cfg.replicas independent chains; deterministic given (seed, cfg),
/// independent of the worker count. Divergences are recorded per replica,
/// not thrown.
std::vector<Trajectory> run(const Objective& obj, const RunConfig& cfg, int n_threads = 0);

/// Fine-step proxy for the continuous-time law: Euler steps of size
/// eta/refinement with drift -c_alpha grad f, reported at the coarse grid
/// times j*eta. refinement = 1 coincides with the discrete scheme itself.
Trajectory simulate_reference(const Objective& obj, const RunConfig& cfg, int refinement,
                              Rng& rng);

/// Final states of one replica of the discrete chain and of its fine-step
/// reference when both are driven by the same Levy path: the chain's
/// increment over each coarse interval is the sum of the reference's
/// `refinement` fine increments (exact in law by stability).
struct CoupledEndpoints {
  std::vector<double> coarse;
  std::vector<double> fine;
  bool diverged = false;
};

CoupledEndpoints coupled_endpoints(const Objective& obj, const RunConfig& cfg,
                                   int refinement, Rng& rng);

/// First recorded step whose state lies within `radius` of `target`
/// (Euclidean), or -1 when the trajectory never enters the ball.
long first_passage_step(const Trajectory& trajectory, std::span<const double> target,
                        double radius);

}  // namespace flmc
