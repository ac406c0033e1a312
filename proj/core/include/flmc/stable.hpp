#pragma once

#include <span>
#include <vector>

#include "flmc/rng.hpp"

namespace flmc {

/// Parameters of a symmetric alpha-stable law SaS(scale) with characteristic
/// function E exp(i w X) = exp(-(scale*|w|)^alpha). Under this convention the
/// alpha = 2 member is the centered Gaussian with variance 2*scale^2 and the
/// log-characteristic function of the associated Levy motion is linear in time.
struct StableParams {
  double alpha = 2.0;  // characteristic index, (1, 2]
  double scale = 1.0;  // > 0

  void validate() const;
};

/// One draw from SaS(scale). Chambers-Mallows-Stuck transform for alpha < 2;
/// at alpha = 2 the draw is scale*sqrt(2)*gaussian() so that the Gaussian
/// member consumes the stream exactly like a direct normal draw.
/// Both paths consume exactly two 64-bit words.
double sample_sas(const StableParams& params, Rng& rng);

/// Increment of the d-dimensional alpha-stable Levy motion, scaled by the
/// inverse temperature: each coordinate is (dt/beta)^(1/alpha) * SaS(1),
/// independent across coordinates. Additive in dt by stability.
std::vector<double> sample_levy_increment(double alpha, double dt, double beta, int dim,
                                          Rng& rng);

/// In-place variant of sample_levy_increment.
void sample_levy_increment(double alpha, double dt, double beta, std::span<double> out,
                           Rng& rng);

/// Closed-form absolute moment E|X|^lambda of the unit-scale SaS law,
///   2^lambda * G((1+lambda)/2) * G(1 - lambda/alpha) / (G(1/2) * G(1 - lambda/2)),
/// valid for -1 < lambda < alpha <= 2 (G is the Gamma function).
/// Throws DivergenceError for lambda >= alpha.
double sas_abs_moment(double alpha, double lambda);

/// Upper bound on E||L(1)||^lambda for the d-dimensional motion:
///   d^lambda * m(lambda) for 1 < lambda < alpha,
///   d * m(lambda)        for 0 <= lambda <= 1,
/// with m(lambda) = sas_abs_moment(alpha, lambda).
double levy_norm_moment_bound(double alpha, double lambda, int dim);

/// Empirical characteristic function E cos(w X) of scalar samples against the
/// target exp(-(scale*|w|)^alpha); one row per probe frequency.
struct CharFnPoint {
  double omega = 0.0;
  double empirical = 0.0;
  double target = 0.0;
  double abs_err = 0.0;
};

std::vector<CharFnPoint> charfn_check(std::span<const double> samples, double alpha,
                                      double scale, std::span<const double> omegas);

}  // namespace flmc
