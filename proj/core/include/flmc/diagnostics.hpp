#pragma once

#include <span>
#include <string>
#include <vector>

#include "flmc/dynamics.hpp"
#include "flmc/objectives.hpp"
#include "flmc/rng.hpp"

namespace flmc {

/// A finite sample of a d-dimensional law, row-major.
struct EmpiricalDistribution {
  std::size_t n = 0;
  int dim = 1;
  std::vector<double> samples;
  std::string label;

  static EmpiricalDistribution scalar(std::vector<double> values, std::string label = "");
  /// Final recorded states of the non-diverged replicas.
  static EmpiricalDistribution from_final_states(const std::vector<Trajectory>& trajectories,
                                                 std::string label = "");

  std::span<const double> row(std::size_t i) const;
  void validate() const;  // n >= 1, entries finite
};

/// Exact q-Wasserstein distance between two equal-size scalar empirical
/// measures via the order-statistics coupling:
///   ( (1/N) sum_i |a_(i) - b_(i)|^q )^(1/q).
/// Throws unless both have dim 1, equal sample counts, and q >= 1.
double wasserstein_q_1d(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                        double q);

/// Unequal sample counts are resolved by downsampling the larger set without
/// replacement (never by reweighting); `downsampled` reports whether that
/// happened.
double wasserstein_q_1d(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                        double q, Rng& rng, bool* downsampled = nullptr);

/// Sliced surrogate for d > 1: the average over random unit directions of the
/// 1-d distance between the projected samples. Deterministic given the
/// stream; equals wasserstein_q_1d exactly when dim = 1.
double sliced_wasserstein_q(const EmpiricalDistribution& a, const EmpiricalDistribution& b,
                            double q, int n_projections, Rng& rng);

/// Quadrature Gibbs law pi propto exp(-beta f) on a 1-d grid.
struct GibbsReference1D {
  double beta = 1.0;
  std::vector<double> grid;
  std::vector<double> density;  // trapezoid-normalized
  std::vector<double> cdf;      // non-decreasing, ends at 1

  double cdf_at(double x) const;
  double quantile(double u) const;  // inverse cdf, linear interpolation
  double sample(Rng& rng) const { return quantile(rng.uniform01()); }
  double mean_f(const Objective& obj) const;  // E_pi[f] by trapezoid
  double mass_within(double center, double radius) const;
};

/// Builds the reference law. The grid must cover the effective support: the
/// endpoint-density tail proxy (density at either end times the grid width)
/// must stay below 1e-8, otherwise a CoverageError carries the measured value.
GibbsReference1D gibbs_reference_1d(const Objective& obj, double beta, double grid_lo,
                                    double grid_hi, int n_grid);

/// Cross-replica mean of f(W^j) - f* at each recorded step with a bootstrap
/// 95% confidence interval (resamples replica indices).
struct CurvePoint {
  long step = 0;
  double time = 0.0;
  double mean_gap = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

std::vector<CurvePoint> suboptimality_curve(const std::vector<Trajectory>& trajectories,
                                            const Objective& obj, Rng& rng,
                                            int resamples = 1000);

/// Median-of-means estimate (32 blocks) of E||X||^lambda, 0 <= lambda <= 2.
double fractional_moment(const EmpiricalDistribution& dist, double lambda);

/// Wasserstein distance between the chain at step k and the fine-step
/// reference at time k*eta, across step sizes at fixed k, with the fitted
/// log-log slope. Chain and reference replicas share a Levy path
/// (coupled increments), which removes most estimator variance without
/// changing the two marginal laws being compared.
struct WeakErrorPoint {
  double eta = 0.0;
  double wq = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct WeakErrorStudy {
  std::vector<WeakErrorPoint> points;
  double slope = 0.0;  // least squares on (log eta, log wq)
  double intercept = 0.0;
  bool slope_valid = false;
  int n_projections = 64;  // used when dim > 1
};

WeakErrorStudy weak_error_study(const Objective& obj, const RunConfig& base_cfg,
                                const std::vector<double>& etas, int refinement,
                                int replicas, double q, int n_threads = 0,
                                int bootstrap_resamples = 1000);

/// Bootstrap percentile interval of the mean of `values` (replica-level
/// resampling), 95% by construction.
struct BootstrapInterval {
  double mean = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

BootstrapInterval bootstrap_mean_ci(std::span<const double> values, Rng& rng,
                                    int resamples = 1000);

}  // namespace flmc
