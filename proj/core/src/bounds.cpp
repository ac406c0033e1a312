#include "flmc/bounds.hpp"

#include <cmath>
#include <string>

#include "flmc/errors.hpp"
#include "flmc/special.hpp"
#include "flmc/stable.hpp"
#include "flmc/vec.hpp"

namespace flmc {

namespace {

constexpr double kGolden = 1.61803398874989484820;  // (1 + sqrt(5)) / 2

void require_positive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw ParameterError(std::string("assumption constants: ") + name + " must be > 0");
  }
}

void require_eta(const AssumptionConstants& c, double eta) {
  if (!(eta > 0.0) || eta > c.eta_max()) {
    throw ParameterError("step size must satisfy 0 < eta <= m/M^2 = " +
                         std::to_string(c.eta_max()) + ", got eta = " + std::to_string(eta));
  }
}

void require_plan(const ExponentPlan& plan, const AssumptionConstants& c) {
  const auto violations = check_plan(plan, c.gamma, c.alpha);
  if (!violations.empty()) {
    std::string what = "exponent plan violates:";
    for (const auto& v : violations) what += " [" + v + "]";
    throw ParameterError(what);
  }
}

// log of the Gibbs normalization ratio,
//   log( (2e(b + d/beta))^(d/2) Gamma(d/2 + 1) beta^d / (d m)^(d/2) ),
// assembled in log space so large d stays representable.
double log_gibbs_volume_ratio(const AssumptionConstants& c) {
  const double d = static_cast<double>(c.d);
  using special::log_gamma;
  return 0.5 * d * (std::log(2.0) + 1.0 + std::log(c.b + d / c.beta)) +
         log_gamma(0.5 * d + 1.0) + d * std::log(c.beta) - 0.5 * d * std::log(d * c.m);
}

}  // namespace

void AssumptionConstants::validate() const {
  if (!(alpha > 1.0) || !(alpha <= 2.0)) {
    throw ParameterError("assumption constants: alpha must lie in (1, 2]");
  }
  if (!(gamma >= 0.0) || !(gamma < 1.0)) {
    throw ParameterError("assumption constants: gamma must lie in [0, 1)");
  }
  if (d < 1) throw ParameterError("assumption constants: d must be >= 1");
  require_positive(beta, "beta");
  require_positive(M, "M");
  require_positive(m, "m");
  if (!(b >= 0.0)) throw ParameterError("assumption constants: b must be >= 0");
  if (!(B >= 0.0)) throw ParameterError("assumption constants: B must be >= 0");
  require_positive(L, "L");
  if (!(L < m)) throw ParameterError("assumption constants: requires L < m");
  require_positive(lambda_star, "lambda_star");
  require_positive(C_erg, "C_erg");
  require_positive(C_pi, "C_pi");
  require_positive(C_thm, "C_thm");
  require_positive(c_x1, "c_x1");
  require_positive(c_b, "c_b");
}

AssumptionConstants AssumptionConstants::from_objective(const Objective& obj, double alpha,
                                                        double beta) {
  if (!obj.constants()) {
    throw ParameterError("objective '" + obj.name() + "' carries no certificate constants");
  }
  const auto& oc = *obj.constants();
  const double ca = c_alpha(alpha);
  AssumptionConstants c;
  c.alpha = alpha;
  c.beta = beta;
  c.d = obj.dim();
  c.gamma = oc.gamma;
  c.M = ca * oc.holder_M;
  c.m = ca * oc.dissip_m;
  c.b = ca * oc.dissip_b;
  c.B = ca * oc.grad_zero_B;
  c.L = 0.5 * c.m;  // placeholder drift gap; a user input in truth
  c.validate();
  return c;
}

double gamma_feasibility_threshold() { return 0.5 * (3.0 - std::sqrt(5.0)); }

std::vector<std::string> check_plan(const ExponentPlan& plan, double gamma, double alpha) {
  std::vector<std::string> violations;
  if (!(plan.p > 0.0 && plan.q > 0.0 && plan.p1 > 0.0 && plan.q1 > 0.0)) {
    violations.push_back("p, q, p1, q1 > 0");
    return violations;
  }
  constexpr double tol = 1e-12;
  if (std::abs(1.0 / plan.p + 1.0 / plan.q - 1.0) > tol) {
    violations.push_back("1/p + 1/q = 1");
  }
  if (std::abs(1.0 / plan.p1 + 1.0 / plan.q1 - 1.0) > tol) {
    violations.push_back("1/p1 + 1/q1 = 1");
  }
  if (!(plan.q < alpha)) violations.push_back("q < alpha");
  if (!(gamma * plan.p < 1.0)) violations.push_back("gamma * p < 1");
  if (!(gamma * plan.q1 < 1.0)) violations.push_back("gamma * q1 < 1");
  if (!((plan.q - 1.0) * plan.p1 < 1.0)) violations.push_back("(q - 1) * p1 < 1");
  return violations;
}

PlanResult plan_exponents(double gamma, double alpha, double margin) {
  if (!(gamma >= 0.0) || !(gamma < 1.0)) {
    throw ParameterError("plan_exponents: gamma must lie in [0, 1)");
  }
  if (!(alpha > 1.0) || !(alpha <= 2.0)) {
    throw ParameterError("plan_exponents: alpha must lie in (1, 2]");
  }
  if (!(margin > 0.0) || !(margin < 1.0)) {
    throw ParameterError("plan_exponents: margin must lie in (0, 1)");
  }

  PlanResult result;
  if (gamma >= gamma_feasibility_threshold()) {
    result.feasible = false;
    result.violated = "gamma < (3 - sqrt(5))/2";
    return result;
  }
  // With p = q1 and p1 = q the five relations collapse to
  //   q > 1/(1 - gamma)   (from gamma * p < 1 with p = q/(q-1))
  //   q < golden ratio    (from (q - 1) q < 1)
  //   q < alpha.
  result.q_lo = std::max(1.0, 1.0 / (1.0 - gamma));
  result.q_hi = std::min(alpha, kGolden);
  if (!(result.q_lo < result.q_hi)) {
    result.feasible = false;
    result.violated = "q < alpha";
    return result;
  }
  const double q = result.q_lo + margin * (result.q_hi - result.q_lo);
  result.plan.q = q;
  result.plan.p = q / (q - 1.0);
  result.plan.p1 = q;
  result.plan.q1 = result.plan.p;
  result.feasible = check_plan(result.plan, gamma, alpha).empty();
  if (!result.feasible) result.violated = "constructed plan failed verification";
  return result;
}

BoundBreakdown suboptimality_bound(const AssumptionConstants& c, const ExponentPlan& plan,
                                   double k, double eta) {
  c.validate();
  require_plan(plan, c);
  if (!(k >= 0.0)) throw ParameterError("suboptimality_bound: k must be >= 0");
  if (!(eta > 0.0)) throw ParameterError("suboptimality_bound: eta must be > 0");

  BoundBreakdown out;
  out.eta_warning = eta > c.eta_max();
  out.shape_only = !c.constants_supplied;

  const double q = plan.q;
  const double exp_plain = 1.0 / q;
  const double exp_gamma = c.gamma + c.gamma / q;
  out.k_exponent_from_gamma = exp_gamma > exp_plain;
  const double k_exponent = 1.0 + std::max(exp_plain, exp_gamma);
  const double d = static_cast<double>(c.d);

  out.a1 = c.C_thm * std::pow(k, k_exponent) * std::pow(eta, 1.0 / q);
  out.a2 = c.C_thm * std::pow(k, k_exponent) *
           std::pow(eta, 1.0 / q + c.gamma / (c.alpha * q)) * d /
           std::pow(c.beta, (q - 1.0) * c.gamma / (c.alpha * q));
  out.a3 = c.C_thm * c.beta * (c.b + d / c.beta) / c.m *
           std::exp(-c.lambda_star * k * eta / c.beta);
  out.a4 = c.M / (c_alpha(c.alpha) * std::pow(c.beta, c.gamma + 1.0) * (1.0 + c.gamma)) +
           log_gibbs_volume_ratio(c) / c.beta;
  out.total = out.a1 + out.a2 + out.a3 + out.a4;
  return out;
}

InitialMoments InitialMoments::origin() { return InitialMoments{}; }

InitialMoments InitialMoments::point(double initial_norm) {
  if (!(initial_norm >= 0.0)) throw ParameterError("initial moments: norm must be >= 0");
  InitialMoments im;
  im.kind_ = Kind::point;
  im.norm_ = initial_norm;
  return im;
}

InitialMoments InitialMoments::gaussian(double sigma, int dim) {
  if (!(sigma > 0.0) || dim < 1) {
    throw ParameterError("initial moments: gaussian requires sigma > 0, dim >= 1");
  }
  InitialMoments im;
  im.kind_ = Kind::gaussian;
  im.sigma_ = sigma;
  im.dim_ = dim;
  return im;
}

double InitialMoments::moment(double lambda) const {
  if (!(lambda >= 0.0)) throw ParameterError("initial moments: lambda must be >= 0");
  if (lambda == 0.0) return 1.0;
  switch (kind_) {
    case Kind::zero:
      return 0.0;
    case Kind::point:
      return std::pow(norm_, lambda);
    case Kind::gaussian: {
      // E||X||^lambda for X ~ N(0, sigma^2 I_d) via the chi distribution.
      using special::log_gamma;
      const double half_d = 0.5 * static_cast<double>(dim_);
      return std::pow(sigma_, lambda) *
             std::exp(0.5 * lambda * std::log(2.0) + log_gamma(half_d + 0.5 * lambda) -
                      log_gamma(half_d));
    }
  }
  return 0.0;
}

WeakErrorConstants weak_error_constants(const AssumptionConstants& c,
                                        const ExponentPlan& plan, double eta,
                                        const InitialMoments& init) {
  c.validate();
  require_plan(plan, c);
  if (!(eta > 0.0)) throw ParameterError("weak_error_constants: eta must be > 0");

  const double d = static_cast<double>(c.d);
  const double q = plan.q, p = plan.p, p1 = plan.p1, q1 = plan.q1;
  const double cx = c.c_x1;
  const auto l = [&](double lambda) { return levy_norm_moment_bound(c.alpha, lambda, c.d); };
  const double eta_beta = eta / c.beta;
  const double drift_sq = 2.0 * eta * (c.b + c.m);

  WeakErrorConstants k;
  k.p1_term =
      std::pow(cx * eta * d / std::pow(c.beta, 1.0 / c.alpha), 1.0 / p1) +
      std::pow(cx * eta, 1.0 / p1) + std::pow(drift_sq, 0.5 * (q - 1.0)) +
      std::pow(2.0, 0.5 * (q - 1.0)) * std::pow(eta * c.B, q - 1.0) +
      std::pow(eta_beta, (q - 1.0) / c.alpha) * std::pow(l((q - 1.0) * p1), 1.0 / p1) +
      std::pow(eta, q - 1.0) * std::pow(c.M, q - 1.0) *
          (std::pow(drift_sq, 0.5 * (q - 1.0) * c.gamma) +
           std::pow(2.0, 0.5 * (q - 1.0) * c.gamma) * std::pow(eta * c.B, (q - 1.0) * c.gamma) +
           std::pow(eta_beta, (q - 1.0) * c.gamma / c.alpha) *
               std::pow(l((q - 1.0) * p1 * c.gamma), 1.0 / p1));

  k.p2_term = c.M * (std::pow(cx * eta * d / std::pow(c.beta, 1.0 / c.alpha), 1.0 / q1) +
                     std::pow(cx * eta, 1.0 / q1) + std::pow(drift_sq, 0.5 * c.gamma) +
                     std::pow(2.0, 0.5 * c.gamma) * std::pow(eta * c.B, c.gamma) +
                     std::pow(eta_beta, c.gamma / c.alpha) * std::pow(l(c.gamma * q1), 1.0 / q1));

  k.q1_term = std::pow(cx, 1.0 / p1) + std::pow(init.moment((q - 1.0) * p1), 1.0 / p1) +
              std::pow(eta, q - 1.0) *
                  (std::pow(c.M, q - 1.0) *
                       std::pow(init.moment((q - 1.0) * p1 * c.gamma), 1.0 / p1) +
                   std::pow(c.B, q - 1.0)) +
              std::pow(eta_beta, (q - 1.0) / c.alpha) * std::pow(l((q - 1.0) * p1), 1.0 / p1);

  k.q2_term = c.M * std::pow(init.moment(c.gamma * q1), 1.0 / q1) + c.M * std::pow(cx, 1.0 / q1);

  k.p3_term = c.M * (std::pow(cx * eta * d / std::pow(c.beta, 1.0 / c.alpha), 1.0 / p) +
                     std::pow(cx * eta, 1.0 / p) + std::pow(drift_sq, 0.5 * c.gamma) +
                     std::pow(2.0, 0.5 * c.gamma) * std::pow(eta * c.B, c.gamma) +
                     std::pow(eta_beta, c.gamma / c.alpha) * std::pow(l(c.gamma * p), 1.0 / p));

  k.q3_term = c.M * std::pow(init.moment(c.gamma * p), 1.0 / p) + c.M * std::pow(cx, 1.0 / p) +
              c.B;
  return k;
}

double detailed_weak_error_bound(const AssumptionConstants& c, const ExponentPlan& plan,
                                 double k, double eta, const InitialMoments& init) {
  require_eta(c, eta);
  if (!(k >= 0.0)) throw ParameterError("detailed_weak_error_bound: k must be >= 0");
  const auto w = weak_error_constants(c, plan, eta, init);
  const double q = plan.q;
  return q * eta *
         (k * k * w.p1_term * w.p2_term +
          std::pow(k, 1.0 + 1.0 / plan.p1) * w.p1_term * w.q2_term +
          std::pow(k, 1.0 + 1.0 / plan.q1) * w.p2_term * w.q1_term +
          k * w.q1_term * w.q2_term);
}

double weak_error_mean_gap_bound(const AssumptionConstants& c, const ExponentPlan& plan,
                                 double k, double eta, const InitialMoments& init) {
  require_eta(c, eta);
  if (!(k >= 0.0)) throw ParameterError("weak_error_mean_gap_bound: k must be >= 0");
  const auto w = weak_error_constants(c, plan, eta, init);
  const double q = plan.q;
  const double inv_q = 1.0 / q;
  const double p12 = std::pow(w.p1_term * w.p2_term, inv_q);
  const double p1q2 = std::pow(w.p1_term * w.q2_term, inv_q);
  const double p2q1 = std::pow(w.p2_term * w.q1_term, inv_q);
  const double q12 = std::pow(w.q1_term * w.q2_term, inv_q);
  const double lead = std::pow(q * eta, inv_q);
  const double sum =
      std::pow(k, 1.0 + inv_q) * p12 * w.p3_term +
      std::pow(k, 1.0 + 1.0 / (q * plan.p1)) * p1q2 * w.p3_term +
      std::pow(k, 1.0 + 1.0 / (q * plan.q1)) * p2q1 * w.p3_term + k * q12 * w.p3_term +
      std::pow(k, 2.0 * inv_q) * p12 * w.q3_term +
      std::pow(k, inv_q + 1.0 / (q * plan.p1)) * p1q2 * w.q3_term +
      std::pow(k, inv_q + 1.0 / (q * plan.q1)) * p2q1 * w.q3_term +
      std::pow(k, inv_q) * q12 * w.q3_term;
  return lead * sum / c_alpha(c.alpha);
}

double x1_x3_bound(const AssumptionConstants& c, const ExponentPlan& plan, double k,
                   double eta) {
  c.validate();
  require_plan(plan, c);
  if (!(k >= 0.0) || !(eta > 0.0)) {
    throw ParameterError("x1_x3_bound: requires k >= 0 and eta > 0");
  }
  const double t = k * eta;
  const double q = plan.q;
  const double horizon =
      t * (static_cast<double>(c.d) / std::pow(c.beta, 1.0 / c.alpha) + 1.0) + 1.0;
  const double moment_sum = std::pow(c.c_x1, q - 1.0) + std::pow(c.c_b, q - 1.0);
  const double gamma_sum = std::pow(c.c_x1, c.gamma) + std::pow(c.c_b, c.gamma);
  return q * t *
         (c.M * moment_sum * gamma_sum * std::pow(horizon, q - 1.0 + c.gamma) +
          c.L * moment_sum * std::pow(horizon, q - 1.0));
}

double discrete_moment_bound(const AssumptionConstants& c, long j, double eta,
                             double lambda, MomentCase moment_case,
                             const InitialMoments& init) {
  c.validate();
  require_eta(c, eta);
  if (j < 0) throw ParameterError("discrete_moment_bound: j must be >= 0");

  const double drift_sq = 2.0 * eta * (c.b + c.m);
  const double jd = static_cast<double>(j);

  switch (moment_case) {
    case MomentCase::b: {
      if (!(lambda >= 0.0) || !(lambda <= 1.0)) {
        throw ParameterError("discrete_moment_bound case b: requires 0 <= lambda <= 1");
      }
      const double l = levy_norm_moment_bound(c.alpha, lambda, c.d);
      return init.moment(lambda) +
             jd * (std::pow(drift_sq, 0.5 * lambda) +
                   std::pow(2.0, 0.5 * lambda) * std::pow(eta * c.B, lambda) +
                   std::pow(eta / c.beta, lambda / c.alpha) * l);
    }
    case MomentCase::a:
      if (!(c.gamma * lambda > 1.0) || !(c.gamma * lambda < c.alpha)) {
        throw ParameterError(
            "discrete_moment_bound case a: requires 1 < gamma*lambda < alpha");
      }
      [[fallthrough]];
    case MomentCase::c: {
      if (!(lambda > 1.0) || !(lambda < c.alpha)) {
        throw ParameterError("discrete_moment_bound: requires 1 < lambda < alpha");
      }
      if (moment_case == MomentCase::c &&
          !(c.gamma * lambda >= 0.0 && c.gamma * lambda <= 1.0)) {
        throw ParameterError(
            "discrete_moment_bound case c: requires 0 <= gamma*lambda <= 1");
      }
      const double l = levy_norm_moment_bound(c.alpha, lambda, c.d);
      const double root = std::pow(init.moment(lambda), 1.0 / lambda) +
                          jd * (std::pow(drift_sq, 0.5) + std::sqrt(2.0) * eta * c.B +
                                std::pow(eta / c.beta, 1.0 / c.alpha) *
                                    std::pow(l, 1.0 / lambda));
      return std::pow(root, lambda);
    }
  }
  throw ParameterError("discrete_moment_bound: unknown case");
}

double gibbs_suboptimality_bound(const AssumptionConstants& c) {
  c.validate();
  return log_gibbs_volume_ratio(c) / c.beta +
         c.M / (c_alpha(c.alpha) * std::pow(c.beta, c.gamma + 1.0) * (1.0 + c.gamma));
}

SamplingBound sampling_bound(const AssumptionConstants& c, const ExponentPlan& plan,
                             double k, double eta) {
  c.validate();
  require_plan(plan, c);
  require_eta(c, eta);
  if (!(k >= 0.0)) throw ParameterError("sampling_bound: k must be >= 0");

  const double q = plan.q;
  const double mx = std::max(2.0, q + c.gamma);
  const double d = static_cast<double>(c.d);

  SamplingBound out;
  out.branch_q_plus_gamma = q + c.gamma > 2.0;
  out.shape_only = !c.constants_supplied;
  out.term_time = c.C_thm * std::pow(k, mx / q) * std::pow(eta, 1.0 / q);
  out.term_dim = c.C_thm * std::pow(k, mx / q) *
                 std::pow(eta, 1.0 / q + c.gamma / (q * c.alpha)) *
                 std::pow(c.beta, -c.gamma * (q - 1.0) / (q * c.alpha)) *
                 std::pow(d, 1.0 / q);
  out.term_ergodic = c.C_thm * c.beta * std::exp(-c.lambda_star * k * eta / c.beta);
  out.total = out.term_time + out.term_dim + out.term_ergodic;
  return out;
}

EpsilonSchedule epsilon_schedule(const AssumptionConstants& c, const ExponentPlan& plan,
                                 double epsilon) {
  c.validate();
  require_plan(plan, c);
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw ParameterError("epsilon_schedule: epsilon must lie in (0, 1)");
  }
  const double q = plan.q;
  EpsilonSchedule out;
  out.regime_one_over_q = 1.0 / q > c.gamma + c.gamma / q;
  out.k = static_cast<long>(std::ceil(1.0 / epsilon));
  out.eta_max = out.regime_one_over_q
                    ? std::pow(epsilon, 2.0 * q + 1.0)
                    : std::pow(epsilon, 2.0 * q + c.gamma + c.gamma * q);
  const double horizon_needed = (c.beta / c.lambda_star) * std::log(1.0 / epsilon);
  const double horizon = static_cast<double>(out.k) * out.eta_max;
  out.horizon_ok = horizon > horizon_needed;
  out.k_multiplier = out.horizon_ok ? 1.0 : horizon_needed / horizon;
  return out;
}

double hoelder_descent_slack(const AssumptionConstants& c, std::span<const double> x,
                             std::span<const double> y, const Objective& obj) {
  c.validate();
  const auto gy = obj.gradient(y);
  const auto delta = sub(x, y);
  const double lhs =
      c_alpha(c.alpha) * std::abs(obj.value(x) - obj.value(y) - dot(gy, delta));
  const double rhs = c.M / (1.0 + c.gamma) * std::pow(norm(delta), 1.0 + c.gamma);
  return rhs - lhs;
}

}  // namespace flmc
