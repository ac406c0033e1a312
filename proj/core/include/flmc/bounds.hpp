#pragma once

#include <span>
#include <string>
#include <vector>

#include "flmc/c_alpha.hpp"
#include "flmc/objectives.hpp"

namespace flmc {

/// Every symbol the bound evaluators consume. M, m, b, B are the
/// c_alpha-scaled gradient-condition constants; the remaining entries
/// (lambda_star, C_erg, C_pi, C_thm, c_x1, c_b) are existence constants with
/// no computable value -- they are user inputs defaulting to 1, and outputs
/// derived from defaults are marked shape-only.
struct AssumptionConstants {
  double alpha = 2.0;  // characteristic index, (1, 2]
  double beta = 1.0;   // inverse temperature, > 0
  int d = 1;           // state dimension

  double M = 1.0;      // gradient Holder constant
  double gamma = 0.0;  // gradient Holder exponent, [0, 1)
  double m = 1.0;      // dissipativity slope
  double b = 1.0;      // dissipativity offset
  double B = 0.0;      // gradient norm at the origin

  double L = 0.5;          // sup-norm gap between the exact and scaled-gradient drifts; < m
  double lambda_star = 1.0;  // ergodic rate of the Gibbs-drift process
  double C_erg = 1.0;        // ergodic prefactor
  double C_pi = 1.0;         // fractional-moment constant of the invariant law
  double C_thm = 1.0;        // global constant of the suboptimality bound
  double c_x1 = 1.0;         // moment constant of the continuous-time process
  double c_b = 1.0;          // moment constant of the Gibbs-drift process

  bool constants_supplied = false;  // user provided the unexplicit constants

  void validate() const;

  /// Largest step size the discretization bounds tolerate, m / M^2.
  double eta_max() const { return m / (M * M); }

  /// Scale an objective's certificate by c_alpha into effective constants.
  static AssumptionConstants from_objective(const Objective& obj, double alpha,
                                            double beta);
};

/// Conjugate-exponent tuple (p, q, p1, q1) required by the bounds:
/// 1/p + 1/q = 1/p1 + 1/q1 = 1, q < alpha, gamma*p < 1, gamma*q1 < 1,
/// (q-1)*p1 < 1.
struct ExponentPlan {
  double p = 2.0;
  double q = 2.0;
  double p1 = 2.0;
  double q1 = 2.0;
};

struct PlanResult {
  bool feasible = false;
  ExponentPlan plan;
  std::string violated;  // the failing constraint when infeasible
  double q_lo = 0.0;     // open feasibility interval for q when feasible
  double q_hi = 0.0;
};

/// Evaluates the five plan relations exactly; empty result means the plan
/// passes. Conjugacy identities are checked to 1e-12.
std::vector<std::string> check_plan(const ExponentPlan& plan, double gamma, double alpha);

/// Feasibility threshold for the Holder exponent, (3 - sqrt(5))/2.
double gamma_feasibility_threshold();

/// Constructs a feasible plan with p = q1 and p1 = q, choosing q inside the
/// open interval (1/(1-gamma), min(alpha, golden ratio)) at relative position
/// `margin`. Infeasible iff gamma >= (3-sqrt(5))/2 or the interval is emptied
/// by the q < alpha cap.
PlanResult plan_exponents(double gamma, double alpha, double margin = 0.5);

/// The four-term suboptimality bound at iteration k and step size eta:
///   A1 = C k^(1+e) eta^(1/q),   e = max(1/q, gamma + gamma/q)
///   A2 = C k^(1+e) eta^(1/q + gamma/(alpha q)) d / beta^((q-1) gamma / (alpha q))
///   A3 = C beta (b + d/beta) / m * exp(-lambda_star k eta / beta)
///   A4 = M / (c_alpha beta^(gamma+1) (1+gamma))
///        + (1/beta) log( (2e(b + d/beta))^(d/2) Gamma(d/2+1) beta^d / (dm)^(d/2) )
struct BoundBreakdown {
  double a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
  double total = 0.0;
  bool k_exponent_from_gamma = false;  // true when gamma + gamma/q attains the max
  bool shape_only = true;
  bool eta_warning = false;  // eta exceeded m / M^2
};

BoundBreakdown suboptimality_bound(const AssumptionConstants& c, const ExponentPlan& plan,
                                   double k, double eta);

/// E||X2(0)||^lambda for the supported initial conditions.
class InitialMoments {
public:
  static InitialMoments origin();
  static InitialMoments point(double initial_norm);
  static InitialMoments gaussian(double sigma, int dim);  // N(0, sigma^2 I_d)

  double moment(double lambda) const;

private:
  enum class Kind { zero, point, gaussian };
  Kind kind_ = Kind::zero;
  double norm_ = 0.0;
  double sigma_ = 0.0;
  int dim_ = 1;
};

/// The explicit per-step constants of the discretization bound. All gamma /
/// moment terms use the closed-form Levy moment bound and the supplied
/// initial moments; `c` is the unexplicit continuous-process moment constant
/// (AssumptionConstants::c_x1).
struct WeakErrorConstants {
  double p1_term = 0.0;  // P1(eta)
  double p2_term = 0.0;  // P2(eta)
  double q1_term = 0.0;  // Q1(eta)
  double q2_term = 0.0;  // Q2
  double p3_term = 0.0;  // P3(eta)
  double q3_term = 0.0;  // Q3
};

WeakErrorConstants weak_error_constants(const AssumptionConstants& c,
                                        const ExponentPlan& plan, double eta,
                                        const InitialMoments& init);

/// W_q^q bound between the discrete chain's interpolation and its
/// continuous-time limit at time k*eta:
///   q eta ( k^2 P1 P2 + k^(1+1/p1) P1 Q2 + k^(1+1/q1) P2 Q1 + k Q1 Q2 ).
/// Requires 0 < eta <= m/M^2.
double detailed_weak_error_bound(const AssumptionConstants& c, const ExponentPlan& plan,
                                 double k, double eta, const InitialMoments& init);

/// Companion bound on the expected f-gap between the same two processes,
/// assembled from the eight displayed k-powers with P3 and Q3.
double weak_error_mean_gap_bound(const AssumptionConstants& c, const ExponentPlan& plan,
                                 double k, double eta, const InitialMoments& init);

/// W_q^q bound between the continuous-time limit and the Gibbs-drift process
/// over horizon t = k*eta, in terms of the user-supplied moment constants
/// c_x1 and c_b and the drift gap L.
double x1_x3_bound(const AssumptionConstants& c, const ExponentPlan& plan, double k,
                   double eta);

/// Which of the displayed discrete-moment estimates applies.
enum class MomentCase { a, b, c };

/// Grid-time moment bound for the interpolated chain:
///   case b (0 <= lambda <= 1):
///     m0 + j ( (2 eta (b+m))^(lambda/2) + 2^(lambda/2) (eta B)^lambda
///              + (eta/beta)^(lambda/alpha) l(lambda) )
///   cases a, c (1 < lambda < alpha):
///     ( m0^(1/lambda) + j ( (2 eta (b+m))^(1/2) + sqrt(2) eta B
///                           + (eta/beta)^(1/alpha) l(lambda)^(1/lambda) ) )^lambda
/// Requires 0 < eta <= m/M^2 and lambda within the case's stated range.
double discrete_moment_bound(const AssumptionConstants& c, long j, double eta,
                             double lambda, MomentCase moment_case,
                             const InitialMoments& init);

/// Expected suboptimality of an exact Gibbs sample:
///   (1/beta) log( (2e(b+d/beta))^(d/2) Gamma(d/2+1) beta^d / (dm)^(d/2) )
///   + beta^(-gamma-1) M / (c_alpha (1+gamma)).
double gibbs_suboptimality_bound(const AssumptionConstants& c);

/// Wasserstein bound between the chain's law and the Gibbs measure:
///   C ( k^(mx/q) eta^(1/q) + k^(mx/q) eta^(1/q + gamma/(q alpha))
///       beta^(-gamma(q-1)/(q alpha)) d^(1/q) + beta exp(-lambda_star k eta / beta) ),
/// mx = max(2, q + gamma). Requires 0 < eta <= m/M^2.
struct SamplingBound {
  double term_time = 0.0;
  double term_dim = 0.0;
  double term_ergodic = 0.0;
  double total = 0.0;
  bool branch_q_plus_gamma = false;  // true when q + gamma > 2 attains the max
  bool shape_only = true;
};

SamplingBound sampling_bound(const AssumptionConstants& c, const ExponentPlan& plan,
                             double k, double eta);

/// Accuracy schedule: k ~ 1/eps iterations; the step-size threshold is
/// eps^(2q+1) when 1/q > gamma + gamma/q and eps^(2q + gamma + gamma q)
/// otherwise; the horizon condition k eta > (beta/lambda_star) log(1/eps)
/// controls the ergodic term.
struct EpsilonSchedule {
  long k = 0;
  double eta_max = 0.0;
  bool regime_one_over_q = true;
  bool horizon_ok = false;
  double k_multiplier = 1.0;  // factor on k needed when horizon_ok is false
};

EpsilonSchedule epsilon_schedule(const AssumptionConstants& c, const ExponentPlan& plan,
                                 double epsilon);

/// Slack of the Holder descent inequality at (x, y):
///   (M/(1+gamma)) ||x-y||^(1+gamma) - c_alpha |f(x) - f(y) - <grad f(y), x-y>|.
/// Non-negative whenever the certificate is valid.
double hoelder_descent_slack(const AssumptionConstants& c, std::span<const double> x,
                             std::span<const double> y, const Objective& obj);

}  // namespace flmc
