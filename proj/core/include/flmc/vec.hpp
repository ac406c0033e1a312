#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace flmc {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double norm_sq(std::span<const double> a) { return dot(a, a); }

inline double norm(std::span<const double> a) { return std::sqrt(norm_sq(a)); }

inline bool all_finite(std::span<const double> a) {
  for (double x : a) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

inline std::vector<double> sub(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline double dist(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double di = a[i] - b[i];
    acc += di * di;
  }
  return std::sqrt(acc);
}

}  // namespace flmc
