#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace flmc {

/// Invalid argument outside a routine's stated domain.
class ParameterError : public std::invalid_argument {
public:
  explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// A quantity that is infinite (or diverged to non-finite values) was requested.
/// For trajectory divergence the offending state, step and replica are attached.
class DivergenceError : public std::runtime_error {
public:
  explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
  DivergenceError(const std::string& what, std::vector<double> state, long step,
                  int replica = -1)
      : std::runtime_error(what), state(std::move(state)), step(step), replica(replica) {}

  std::vector<double> state;
  long step = -1;
  int replica = -1;
};

/// A quadrature grid does not cover the effective support of a density.
class CoverageError : public std::runtime_error {
public:
  CoverageError(const std::string& what, double tail_mass)
      : std::runtime_error(what), tail_mass(tail_mass) {}
  double tail_mass = 0.0;
};

/// Filesystem failures while reading configs or writing outputs.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace flmc
