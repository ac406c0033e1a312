#pragma once

namespace flmc {

/// Drift correction constant of the fractional Langevin schemes,
///   c_alpha = Gamma(alpha - 1) / Gamma(alpha / 2)^2,
/// equal to 1 at alpha = 2 and diverging as alpha -> 1+.
/// Throws DivergenceError at alpha <= 1 (Gamma pole).
double c_alpha(double alpha);

}  // namespace flmc
