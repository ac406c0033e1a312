#include "flmc/special.hpp"
#include "flmc/c_alpha.hpp"

#include <cmath>
#include <string>

#include "flmc/errors.hpp"

namespace flmc::special {

namespace {

// Lanczos g = 7, n = 9 coefficient set (Godfrey).
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kLogSqrtTwoPi = 0.91893853320467274178;  // log(sqrt(2*pi))
constexpr double kPi = 3.14159265358979323846;

double log_gamma_lanczos(double x) {
  // Valid for x >= 0.5.
  const double g = 7.0;
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) {
    acc += kLanczos[i] / (x - 1.0 + static_cast<double>(i));
  }
  const double t = x - 0.5 + g;
  return kLogSqrtTwoPi + (x - 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw ParameterError("log_gamma: requires x > 0, got x = " + std::to_string(x));
  }
  if (x < 0.5) {
    // Gamma(x) Gamma(1-x) = pi / sin(pi x); sin(pi x) > 0 on (0, 0.5).
    return std::log(kPi / std::sin(kPi * x)) - log_gamma_lanczos(1.0 - x);
  }
  return log_gamma_lanczos(x);
}

double gamma_fn(double x) { return std::exp(log_gamma(x)); }

}  // namespace flmc::special

namespace flmc {

double c_alpha(double alpha) {
  if (!(alpha > 1.0)) {
    throw DivergenceError("c_alpha: Gamma(alpha - 1) pole at alpha <= 1, got alpha = " +
                          std::to_string(alpha));
  }
  if (!(alpha <= 2.0)) {
    throw ParameterError("c_alpha: alpha must lie in (1, 2], got " + std::to_string(alpha));
  }
  if (alpha == 2.0) return 1.0;  // Gamma(1)/Gamma(1)^2, exact
  using special::log_gamma;
  return std::exp(log_gamma(alpha - 1.0) - 2.0 * log_gamma(0.5 * alpha));
}

}  // namespace flmc
