#include "flmc/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>

#include "flmc/c_alpha.hpp"
#include "flmc/errors.hpp"
#include "flmc/vec.hpp"

namespace flmc {

namespace {

double get_param(const BenchmarkParams& params, const std::string& key, double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void reject_unknown_params(const BenchmarkParams& params,
                           const std::set<std::string>& known, const std::string& name) {
  for (const auto& [key, value] : params) {
    if (!known.contains(key)) {
      throw ParameterError("benchmark '" + name + "': unknown parameter '" + key + "'");
    }
  }
}

std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
  return rng.next_u64() % bound;
}

// --- fractional power well -------------------------------------------------
//
// f(x) = a * (eps0 + ||x||^2)^((1+g)/2)
// grad f(x) = a (1+g) (eps0 + ||x||^2)^((g-1)/2) x
//
// Certificates (without the c_alpha factor), with C = a (1+g):
//   Holder:        M0 = 2^(1+g) C       (two-case segment/far-pair argument,
//                                        using ||Dg(z)|| <= C ||z||^(g-1))
//   dissipativity: <x, grad f> = C ||x||^2 u^((g-1)/2) >= m0 ||x||^(1+g) - b0
//                  with m0 = C 2^((g-1)/2) and b0 = m0 eps0^((1+g)/2)
//   grad at zero:  B0 = 0
struct PowerWell {
  double a, eps0, gamma;

  double operator()(std::span<const double> x) const {
    return a * std::pow(eps0 + norm_sq(x), 0.5 * (1.0 + gamma));
  }
  void grad(std::span<const double> x, std::span<double> out) const {
    const double factor = a * (1.0 + gamma) * std::pow(eps0 + norm_sq(x), 0.5 * (gamma - 1.0));
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = factor * x[i];
  }
};

Objective make_power_well(int dim, const BenchmarkParams& params) {
  reject_unknown_params(params, {"a", "eps0", "gamma", "n_components", "component_spread"},
                        "fractional_power_well");
  const double a = get_param(params, "a", 1.0);
  const double eps0 = get_param(params, "eps0", 0.01);
  const double gamma = get_param(params, "gamma", 0.3);
  if (!(a > 0.0) || !(eps0 > 0.0)) {
    throw ParameterError("fractional_power_well: a and eps0 must be > 0");
  }
  if (!(gamma >= 0.0) || !(gamma < 1.0)) {
    throw ParameterError("fractional_power_well: gamma must lie in [0, 1)");
  }

  const PowerWell well{a, eps0, gamma};
  Objective obj(
      "fractional_power_well", dim, [well](std::span<const double> x) { return well(x); },
      [well](std::span<const double> x, std::span<double> g) { well.grad(x, g); });

  const double c = a * (1.0 + gamma);
  ObjectiveConstants constants;
  constants.gamma = gamma;
  constants.holder_M = std::pow(2.0, 1.0 + gamma) * c;
  constants.dissip_m = c * std::pow(2.0, 0.5 * (gamma - 1.0));
  constants.dissip_b = constants.dissip_m * std::pow(eps0, 0.5 * (1.0 + gamma));
  constants.grad_zero_B = 0.0;
  obj.set_constants(constants);
  obj.set_minimizer({std::vector<double>(dim, 0.0), a * std::pow(eps0, 0.5 * (1.0 + gamma))});

  const int n_components = static_cast<int>(get_param(params, "n_components", 0.0));
  if (n_components > 0) {
    // Finite-sum structure by deterministic multiplicative weights
    // (1 + e_i) with sum_i e_i = 0, so the average recovers f exactly.
    const double spread = get_param(params, "component_spread", 0.5);
    if (n_components < 2) {
      throw ParameterError("fractional_power_well: n_components must be >= 2");
    }
    if (!(spread >= 0.0) || !(spread < 1.0)) {
      throw ParameterError("fractional_power_well: component_spread must lie in [0, 1)");
    }
    std::vector<Objective::Component> components;
    components.reserve(static_cast<std::size_t>(n_components));
    for (int i = 0; i < n_components; ++i) {
      const double factor =
          1.0 + spread * (2.0 * i - (n_components - 1)) / (n_components - 1);
      components.push_back(
          {[well, factor](std::span<const double> x) { return factor * well(x); },
           [well, factor](std::span<const double> x, std::span<double> g) {
             well.grad(x, g);
             for (double& v : g) v *= factor;
           }});
    }
    obj.set_components(std::move(components));
  }
  return obj;
}

// --- double well -------------------------------------------------------------
//
// f(x) = (x^2 - 1)^2 + c x on R, c in (0, 0.5): asymmetric two-minima
// landscape with the global minimizer on the negative side. The quartic
// gradient is not globally Holder for gamma < 1, so the Holder certificate is
// local to [-R, R]: M0 = max|f''| * (2R)^(1-g). Dissipativity holds globally,
// b0 found by a dense 1-d scan with a safety margin.
Objective make_double_well(int dim, const BenchmarkParams& params) {
  reject_unknown_params(params, {"c"}, "double_well_1d");
  if (dim != 1) throw ParameterError("double_well_1d: dim must be 1");
  const double c = get_param(params, "c", 0.2);
  if (!(c > 0.0) || !(c < 0.5)) {
    throw ParameterError("double_well_1d: c must lie in (0, 0.5)");
  }

  auto eval = [c](std::span<const double> x) {
    const double v = x[0] * x[0] - 1.0;
    return v * v + c * x[0];
  };
  auto grad = [c](std::span<const double> x, std::span<double> g) {
    g[0] = 4.0 * x[0] * (x[0] * x[0] - 1.0) + c;
  };
  Objective obj("double_well_1d", 1, eval, grad);

  const double gamma = 0.3;
  const double box_halfwidth = 2.0;
  ObjectiveConstants constants;
  constants.gamma = gamma;
  constants.local_only = true;
  constants.certificate_halfwidth = box_halfwidth;
  const double max_curvature = 12.0 * box_halfwidth * box_halfwidth - 4.0;
  constants.holder_M = max_curvature * std::pow(2.0 * box_halfwidth, 1.0 - gamma);
  constants.grad_zero_B = c;
  constants.dissip_m = 1.0;
  // b0 >= sup_x ( m0 |x|^(1+g) - x f'(x) ); the expression tends to -inf, a
  // scan of [-3, 3] covers the sup.
  double b0 = 0.0;
  for (int i = 0; i <= 60000; ++i) {
    const double x = -3.0 + 1e-4 * i;
    const double xfp = x * (4.0 * x * (x * x - 1.0) + c);
    b0 = std::max(b0, constants.dissip_m * std::pow(std::abs(x), 1.0 + gamma) - xfp);
  }
  constants.dissip_b = b0 + 0.05;  // covers between-grid error
  obj.set_constants(constants);

  // Global minimizer: dense scan plus Newton polish on f'.
  double best_x = -2.0;
  double best_f = eval(std::span<const double>(&best_x, 1));
  for (int i = 0; i <= 400000; ++i) {
    const double x = -2.0 + 1e-5 * i;
    const double f = (x * x - 1.0) * (x * x - 1.0) + c * x;
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
  }
  for (int iter = 0; iter < 8; ++iter) {
    const double fp = 4.0 * best_x * (best_x * best_x - 1.0) + c;
    const double fpp = 12.0 * best_x * best_x - 4.0;
    best_x -= fp / fpp;
  }
  obj.set_minimizer({{best_x}, eval(std::span<const double>(&best_x, 1))});
  return obj;
}

// --- perturbed fractional well ----------------------------------------------
//
// f(x) = power well + r * sum_i cos(w x_i): multimodal, with certificates
// degraded by the ripple:
//   Holder:   M0' = M0 + max(r w^2, 2 r w sqrt(d))
//   dissip.:  <x, ripple grad> >= -r w sqrt(d) ||x|| >= -r w sqrt(d)(||x||^(1+g) + 1)
//             so m0' = m0 - r w sqrt(d) (must stay > 0), b0' = b0 + r w sqrt(d)
// Minimizer by staged grid refinement (dims 1 and 2 only).
Objective make_perturbed(int dim, const BenchmarkParams& params) {
  reject_unknown_params(params, {"a", "eps0", "gamma", "ripple", "omega"},
                        "perturbed_fractional");
  if (dim < 1 || dim > 2) {
    throw ParameterError("perturbed_fractional: dim must be 1 or 2 (grid minimizer)");
  }
  const double a = get_param(params, "a", 1.0);
  // A flat well (large eps0) plus a ripple strong enough to pull the global
  // minimizer off the origin, yet weak enough to keep the dissipativity
  // certificate margin m0 - ripple*omega*sqrt(d) positive.
  const double eps0 = get_param(params, "eps0", 9.0);
  const double gamma = get_param(params, "gamma", 0.3);
  const double ripple = get_param(params, "ripple", 0.2);
  const double omega = get_param(params, "omega", 3.0);
  if (!(a > 0.0) || !(eps0 > 0.0)) {
    throw ParameterError("perturbed_fractional: a and eps0 must be > 0");
  }
  if (!(gamma >= 0.0) || !(gamma < 1.0)) {
    throw ParameterError("perturbed_fractional: gamma must lie in [0, 1)");
  }
  if (!(ripple > 0.0) || !(omega > 0.0)) {
    throw ParameterError("perturbed_fractional: ripple and omega must be > 0");
  }

  const PowerWell well{a, eps0, gamma};
  auto eval = [well, ripple, omega](std::span<const double> x) {
    double f = well(x);
    for (double xi : x) f += ripple * std::cos(omega * xi);
    return f;
  };
  auto grad = [well, ripple, omega](std::span<const double> x, std::span<double> g) {
    well.grad(x, g);
    for (std::size_t i = 0; i < x.size(); ++i) g[i] -= ripple * omega * std::sin(omega * x[i]);
  };
  Objective obj("perturbed_fractional", dim, eval, grad);

  const double root_d = std::sqrt(static_cast<double>(dim));
  const double c = a * (1.0 + gamma);
  ObjectiveConstants constants;
  constants.gamma = gamma;
  constants.holder_M = std::pow(2.0, 1.0 + gamma) * c +
                       std::max(ripple * omega * omega, 2.0 * ripple * omega * root_d);
  const double m0 = c * std::pow(2.0, 0.5 * (gamma - 1.0));
  const double perturbation = ripple * omega * root_d;
  if (!(m0 > perturbation)) {
    throw ParameterError(
        "perturbed_fractional: ripple*omega*sqrt(dim) >= base dissipativity constant; "
        "reduce the ripple");
  }
  constants.dissip_m = m0 - perturbation;
  constants.dissip_b = m0 * std::pow(eps0, 0.5 * (1.0 + gamma)) + perturbation;
  constants.grad_zero_B = 0.0;
  obj.set_constants(constants);

  // Staged grid refinement: coarse pass over [-4, 4]^dim, then two zooms.
  std::vector<double> best(dim, 0.0);
  double best_f = eval(best);
  auto scan = [&](const std::vector<double>& center, double halfwidth, int cells) {
    std::vector<double> x(dim);
    const double step = 2.0 * halfwidth / cells;
    if (dim == 1) {
      for (int i = 0; i <= cells; ++i) {
        x[0] = center[0] - halfwidth + step * i;
        const double f = eval(x);
        if (f < best_f) {
          best_f = f;
          best = x;
        }
      }
    } else {
      for (int i = 0; i <= cells; ++i) {
        x[0] = center[0] - halfwidth + step * i;
        for (int j = 0; j <= cells; ++j) {
          x[1] = center[1] - halfwidth + step * j;
          const double f = eval(x);
          if (f < best_f) {
            best_f = f;
            best = x;
          }
        }
      }
    }
  };
  scan(best, 4.0, dim == 1 ? 8000 : 400);
  scan(best, dim == 1 ? 2e-3 : 4e-2, 400);
  scan(best, dim == 1 ? 1e-5 : 2e-4, 400);
  obj.set_minimizer({best, best_f});
  return obj;
}

}  // namespace

Objective::Objective(std::string name, int dim, EvalFn eval, GradFn grad)
    : name_(std::move(name)), dim_(dim), eval_(std::move(eval)), grad_(std::move(grad)) {
  if (dim_ < 1) throw ParameterError("objective dim must be >= 1");
  if (!eval_ || !grad_) throw ParameterError("objective requires eval and grad");
}

double Objective::value(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != dim_) throw ParameterError("objective: wrong dimension");
  return eval_(x);
}

void Objective::gradient(std::span<const double> x, std::span<double> out) const {
  if (static_cast<int>(x.size()) != dim_ || out.size() != x.size()) {
    throw ParameterError("objective gradient: wrong dimension");
  }
  if (components_.empty()) {
    grad_(x, out);
    return;
  }
  std::vector<double> part(x.size());
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& component : components_) {
    component.grad(x, part);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += part[i];
  }
  const double inv_n = 1.0 / static_cast<double>(components_.size());
  for (double& v : out) v *= inv_n;
}

std::vector<double> Objective::gradient(std::span<const double> x) const {
  std::vector<double> out(x.size());
  gradient(x, out);
  return out;
}

void Objective::set_components(std::vector<Component> components) {
  for (const auto& component : components) {
    if (!component.eval || !component.grad) {
      throw ParameterError("objective component requires eval and grad");
    }
  }
  components_ = std::move(components);
}

Box Box::cube(int dim, double lo, double hi) {
  Box box;
  box.lo.assign(static_cast<std::size_t>(dim), lo);
  box.hi.assign(static_cast<std::size_t>(dim), hi);
  box.validate();
  return box;
}

void Box::validate() const {
  if (lo.empty() || lo.size() != hi.size()) throw ParameterError("box: mismatched bounds");
  for (std::size_t i = 0; i < lo.size(); ++i) {
    if (!(lo[i] < hi[i])) throw ParameterError("box: requires lo < hi in every coordinate");
  }
}

std::vector<double> Box::sample(Rng& rng) const {
  std::vector<double> x(lo.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = lo[i] + rng.uniform01() * (hi[i] - lo[i]);
  }
  return x;
}

Objective make_benchmark(const std::string& name, int dim, const BenchmarkParams& params) {
  if (dim < 1) throw ParameterError("make_benchmark: dim must be >= 1");
  if (name == "fractional_power_well") return make_power_well(dim, params);
  if (name == "double_well_1d") return make_double_well(dim, params);
  if (name == "perturbed_fractional") return make_perturbed(dim, params);
  throw ParameterError("make_benchmark: unknown benchmark '" + name + "'");
}

HolderReport check_holder(const Objective& obj, double alpha, double gamma, double M,
                          long n_pairs, const Box& box, Rng& rng) {
  if (n_pairs < 1) throw ParameterError("check_holder: n_pairs must be >= 1");
  box.validate();
  if (static_cast<int>(box.lo.size()) != obj.dim()) {
    throw ParameterError("check_holder: box dimension mismatch");
  }
  const double ca = c_alpha(alpha);
  HolderReport report;
  std::vector<double> gx(obj.dim()), gy(obj.dim());
  for (long i = 0; i < n_pairs; ++i) {
    const auto x = box.sample(rng);
    const auto y = box.sample(rng);
    const double separation = dist(x, y);
    if (separation == 0.0) continue;
    obj.gradient(x, gx);
    obj.gradient(y, gy);
    const double ratio = ca * dist(gx, gy) / std::pow(separation, gamma);
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.worst_x = x;
      report.worst_y = y;
    }
  }
  report.passed = report.max_ratio <= M;
  return report;
}

DissipativityReport check_dissipative(const Objective& obj, double alpha, double m,
                                      double b, double gamma, long n_points,
                                      const Box& box, Rng& rng) {
  if (n_points < 1) throw ParameterError("check_dissipative: n_points must be >= 1");
  box.validate();
  if (static_cast<int>(box.lo.size()) != obj.dim()) {
    throw ParameterError("check_dissipative: box dimension mismatch");
  }
  const double ca = c_alpha(alpha);
  DissipativityReport report;
  report.min_slack = std::numeric_limits<double>::infinity();
  std::vector<double> g(obj.dim());
  for (long i = 0; i < n_points; ++i) {
    const auto x = box.sample(rng);
    obj.gradient(x, g);
    const double slack = ca * dot(x, g) - m * std::pow(norm(x), 1.0 + gamma) + b;
    if (slack < report.min_slack) {
      report.min_slack = slack;
      report.worst_point = x;
    }
  }
  report.passed = report.min_slack >= 0.0;
  return report;
}

std::vector<double> stochastic_gradient(const Objective& obj, std::span<const double> x,
                                        int batch_size, Rng& rng) {
  if (!obj.has_components()) {
    throw ParameterError("stochastic_gradient: objective has no finite-sum structure");
  }
  const int n = obj.n_components();
  if (batch_size < 1 || batch_size > n) {
    throw ParameterError("stochastic_gradient: batch_size must lie in [1, n]");
  }
  if (batch_size == n) return obj.gradient(x);  // exact, consumes no randomness

  // Partial Fisher-Yates draw of batch_size distinct indices.
  std::vector<int> indices(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) indices[static_cast<std::size_t>(i)] = i;
  for (int j = 0; j < batch_size; ++j) {
    const auto pick = j + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n - j)));
    std::swap(indices[static_cast<std::size_t>(j)], indices[static_cast<std::size_t>(pick)]);
  }

  std::vector<double> out(x.size(), 0.0);
  std::vector<double> part(x.size());
  for (int j = 0; j < batch_size; ++j) {
    obj.components()[static_cast<std::size_t>(indices[static_cast<std::size_t>(j)])].grad(x, part);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += part[i];
  }
  const double inv = 1.0 / static_cast<double>(batch_size);
  for (double& v : out) v *= inv;
  return out;
}

}  // namespace flmc
