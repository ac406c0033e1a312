#pragma once

// Shared statistical helpers for the test suites: these are the independent
// oracles (two-sample KS distance, permutation brute force, sign test), kept
// apart from the library code they check.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace testsupport {

inline double ks_distance(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    const double fa = static_cast<double>(i) / a.size();
    const double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

/// One-sample KS distance against a CDF.
template <typename Cdf>
double ks_distance_to(std::vector<double> samples, Cdf&& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs((i + 1) / n - f));
    d = std::max(d, std::abs(i / n - f));
  }
  return d;
}

inline double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

/// Exact minimal-coupling W_q over all pairings of two equal-size sample
/// sets (factorial cost; N <= 8).
inline double brute_force_wq(std::vector<double> a, std::vector<double> b, double q) {
  std::vector<std::size_t> perm(b.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      acc += std::pow(std::abs(a[i] - b[perm[i]]), q);
    }
    best = std::min(best, acc);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::pow(best / static_cast<double>(a.size()), 1.0 / q);
}

/// One-sided sign test: p-value of seeing at least `wins` successes out of
/// `wins + losses` fair coin flips (ties must already be dropped).
inline double sign_test_p(long wins, long losses) {
  const long n = wins + losses;
  if (n == 0) return 1.0;
  // log C(n, k) via lgamma; sum the upper tail.
  double p = 0.0;
  for (long k = wins; k <= n; ++k) {
    const double log_choose =
        std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    p += std::exp(log_choose - n * std::log(2.0));
  }
  return std::min(1.0, p);
}

/// Path of the CLI binary under test (exported by ctest).
inline std::string cli_path() {
  const char* env = std::getenv("FLMC_CLI");
  return env != nullptr ? env : "./tools/flmc";
}

}  // namespace testsupport
