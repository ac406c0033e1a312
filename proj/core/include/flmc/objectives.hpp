#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flmc/rng.hpp"

namespace flmc {

/// Certificate constants for the gradient conditions, stated without the
/// c_alpha factor. For a run at characteristic index alpha the effective
/// constants are the c_alpha-scaled ones:
///   c_a * ||grad f(0)||           <= c_a * grad_zero_B
///   c_a * ||grad f(x)-grad f(y)|| <= (c_a * holder_M) * ||x-y||^gamma
///   c_a * <x, grad f(x)>          >= (c_a * dissip_m) * ||x||^(1+gamma) - c_a * dissip_b
struct ObjectiveConstants {
  double holder_M = 0.0;
  double gamma = 0.0;  // in [0, 1)
  double dissip_m = 0.0;
  double dissip_b = 0.0;
  double grad_zero_B = 0.0;
  // When true the Holder certificate holds only on the centered cube
  // [-certificate_halfwidth, certificate_halfwidth]^dim, not on all of R^d.
  bool local_only = false;
  double certificate_halfwidth = 10.0;
};

struct Minimizer {
  std::vector<double> point;
  double value = 0.0;
};

/// A differentiable target f with optional finite-sum structure
/// f = (1/n) sum_i f_i and optional certificate/minimizer metadata.
/// Immutable after construction; eval and grad are re-entrant.
class Objective {
public:
  using EvalFn = std::function<double(std::span<const double>)>;
  using GradFn = std::function<void(std::span<const double>, std::span<double>)>;

  struct Component {
    EvalFn eval;
    GradFn grad;
  };

  Objective(std::string name, int dim, EvalFn eval, GradFn grad);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }

  double value(std::span<const double> x) const;

  /// When components are present this is exactly the index-ordered average of
  /// the component gradients, so a full-batch stochastic gradient reproduces
  /// it bitwise.
  void gradient(std::span<const double> x, std::span<double> out) const;
  std::vector<double> gradient(std::span<const double> x) const;

  bool has_components() const { return !components_.empty(); }
  int n_components() const { return static_cast<int>(components_.size()); }
  const std::vector<Component>& components() const { return components_; }

  const std::optional<ObjectiveConstants>& constants() const { return constants_; }
  const std::optional<Minimizer>& minimizer() const { return minimizer_; }

  void set_components(std::vector<Component> components);
  void set_constants(ObjectiveConstants constants) { constants_ = constants; }
  void set_minimizer(Minimizer minimizer) { minimizer_ = std::move(minimizer); }

private:
  std::string name_;
  int dim_;
  EvalFn eval_;
  GradFn grad_;
  std::vector<Component> components_;
  std::optional<ObjectiveConstants> constants_;
  std::optional<Minimizer> minimizer_;
};

/// Axis-aligned box used by the empirical assumption checkers.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  static Box cube(int dim, double lo, double hi);
  void validate() const;
  std::vector<double> sample(Rng& rng) const;
};

/// Benchmark registry. Known names and their parameters (all optional):
///   fractional_power_well: a, eps0, gamma, n_components, component_spread
///       f(x) = a * (eps0 + ||x||^2)^((1+gamma)/2); globally certified.
///   double_well_1d: c in (0, 0.5)
///       f(x) = (x^2 - 1)^2 + c x, dim 1; Holder certificate is local.
///   perturbed_fractional: a, eps0, gamma, ripple, omega
///       fractional_power_well plus ripple * sum_i cos(omega * x_i), dim <= 2;
///       multimodal, minimizer located by grid refinement.
using BenchmarkParams = std::map<std::string, double>;

Objective make_benchmark(const std::string& name, int dim,
                         const BenchmarkParams& params = {});

/// Empirical sweep of the gradient Holder condition at index alpha:
/// max over sampled pairs of c_alpha * ||g(x)-g(y)|| / ||x-y||^gamma.
struct HolderReport {
  double max_ratio = 0.0;
  std::vector<double> worst_x;
  std::vector<double> worst_y;
  bool passed = false;
};

HolderReport check_holder(const Objective& obj, double alpha, double gamma, double M,
                          long n_pairs, const Box& box, Rng& rng);

/// Empirical sweep of dissipativity at index alpha:
/// min over sampled points of c_alpha * <x, g(x)> - m ||x||^(1+gamma) + b.
struct DissipativityReport {
  double min_slack = 0.0;
  std::vector<double> worst_point;
  bool passed = false;
};

DissipativityReport check_dissipative(const Objective& obj, double alpha, double m,
                                      double b, double gamma, long n_points,
                                      const Box& box, Rng& rng);

/// Minibatch gradient (1/|B|) sum_{i in B} grad f_i(x) with B drawn uniformly
/// without replacement. batch_size == n consumes no randomness and reproduces
/// Objective::gradient bitwise.
std::vector<double> stochastic_gradient(const Objective& obj, std::span<const double> x,
                                        int batch_size, Rng& rng);

}  // namespace flmc
