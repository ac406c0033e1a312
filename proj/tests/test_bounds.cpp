#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "flmc/bounds.hpp"
#include "flmc/diagnostics.hpp"
#include "flmc/errors.hpp"
#include "flmc/vec.hpp"
#include "flmc/rng.hpp"
#include "flmc/stable.hpp"
#include "support.hpp"

using namespace flmc;

namespace {

AssumptionConstants base_constants() {
  AssumptionConstants c;
  c.alpha = 1.8;
  c.beta = 2.0;
  c.d = 3;
  c.M = 2.0;
  c.gamma = 0.2;
  c.m = 1.0;
  c.b = 0.5;
  c.B = 0.3;
  c.L = 0.5;
  c.lambda_star = 1.0;
  c.c_x1 = 1.3;
  c.c_b = 1.1;
  return c;
}

ExponentPlan plan_35_14() { return {3.5, 1.4, 1.4, 3.5}; }

// Closed-form Levy norm moment bound, re-derived with std::lgamma.
double l_independent(double alpha, double lambda, int d) {
  if (lambda == 0.0) return static_cast<double>(d);
  const double moment = std::exp(lambda * std::log(2.0) + std::lgamma(0.5 * (1 + lambda)) +
                                 std::lgamma(1.0 - lambda / alpha) - std::lgamma(0.5) -
                                 std::lgamma(1.0 - 0.5 * lambda));
  return (lambda > 1.0 ? std::pow(d, lambda) : static_cast<double>(d)) * moment;
}

}  // namespace

TEST_CASE("constants validation", "[bounds]") {
  auto c = base_constants();
  c.validate();
  c.L = 1.5;  // must stay below m
  REQUIRE_THROWS_AS(c.validate(), ParameterError);
  c = base_constants();
  c.gamma = 1.0;
  REQUIRE_THROWS_AS(c.validate(), ParameterError);
  c = base_constants();
  c.alpha = 1.0;
  REQUIRE_THROWS_AS(c.validate(), ParameterError);
}

TEST_CASE("plan feasibility boundary", "[bounds]") {
  REQUIRE(plan_exponents(0.38, 2.0).feasible);
  REQUIRE_FALSE(plan_exponents(0.39, 2.0).feasible);
  REQUIRE_FALSE(plan_exponents(0.5, 2.0).feasible);
  REQUIRE(plan_exponents(0.39, 2.0).violated == "gamma < (3 - sqrt(5))/2");
  REQUIRE(gamma_feasibility_threshold() > 0.38);
  REQUIRE(gamma_feasibility_threshold() < 0.39);

  // The q < alpha cap can also empty the interval.
  REQUIRE_FALSE(plan_exponents(0.3, 1.3).feasible);
  REQUIRE(plan_exponents(0.3, 1.3).violated == "q < alpha");
}

TEST_CASE("every planner output satisfies the five relations", "[bounds]") {
  for (double gamma : {0.0, 0.1, 0.2, 0.3, 0.35, 0.38}) {
    for (double alpha : {1.7, 1.9, 2.0}) {
      for (double margin : {0.1, 0.5, 0.9}) {
        const auto result = plan_exponents(gamma, alpha, margin);
        if (!result.feasible) continue;
        INFO("gamma=" << gamma << " alpha=" << alpha << " margin=" << margin);
        REQUIRE(check_plan(result.plan, gamma, alpha).empty());
        REQUIRE(result.plan.q > result.q_lo);
        REQUIRE(result.plan.q < result.q_hi);
      }
    }
  }
}

TEST_CASE("planner interval for gamma = 0.2", "[bounds]") {
  const auto result = plan_exponents(0.2, 2.0, 0.5);
  REQUIRE(result.feasible);
  REQUIRE(result.q_lo == Catch::Approx(1.25));
  REQUIRE(result.q_hi == Catch::Approx(0.5 * (1.0 + std::sqrt(5.0))));
  REQUIRE(result.plan.q > 1.25);
  REQUIRE(result.plan.q < 1.618034);
  REQUIRE(result.plan.p == Catch::Approx(result.plan.q / (result.plan.q - 1.0)));
  REQUIRE(result.plan.p1 == result.plan.q);
  REQUIRE(result.plan.q1 == result.plan.p);
}

TEST_CASE("check_plan reports the violated relations", "[bounds]") {
  REQUIRE(check_plan(plan_35_14(), 0.2, 1.9).empty());

  auto too_large_q = plan_35_14();
  const auto violations = check_plan(too_large_q, 0.2, 1.3);
  REQUIRE(std::find(violations.begin(), violations.end(), "q < alpha") != violations.end());

  ExponentPlan broken{3.0, 1.4, 1.4, 3.5};  // 1/3 + 1/1.4 != 1
  const auto conj = check_plan(broken, 0.2, 1.9);
  REQUIRE(std::find(conj.begin(), conj.end(), "1/p + 1/q = 1") != conj.end());
}

TEST_CASE("suboptimality bound: trivial limits", "[bounds]") {
  const auto c = base_constants();
  const auto plan = plan_35_14();

  const auto at_zero = suboptimality_bound(c, plan, 0.0, 1e-3);
  REQUIRE(at_zero.a1 == 0.0);
  REQUIRE(at_zero.a2 == 0.0);
  REQUIRE(at_zero.a3 > 0.0);

  auto killed = c;
  killed.lambda_star = 1e9;
  const auto no_ergodic = suboptimality_bound(killed, plan, 100.0, 1e-3);
  REQUIRE(no_ergodic.a3 < 1e-300);
  REQUIRE(no_ergodic.total == Catch::Approx(no_ergodic.a1 + no_ergodic.a2 + no_ergodic.a4));
}

TEST_CASE("fourth term against an independent evaluation", "[bounds]") {
  // d=1, beta=1, b=m=M=1, alpha=2 (c_alpha=1), gamma=0.3:
  // A4 = log(sqrt(4e) Gamma(1.5)) + 1/1.3.
  AssumptionConstants c;
  c.alpha = 2.0;
  c.beta = 1.0;
  c.d = 1;
  c.M = 1.0;
  c.m = 1.0;
  c.b = 1.0;
  c.B = 0.0;
  c.gamma = 0.3;
  c.L = 0.5;
  const auto plan = plan_exponents(0.3, 2.0).plan;
  const auto breakdown = suboptimality_bound(c, plan, 10.0, 1e-3);
  const double expected = std::log(std::sqrt(4.0 * M_E) * std::tgamma(1.5)) + 1.0 / 1.3;
  REQUIRE(breakdown.a4 == Catch::Approx(expected).epsilon(1e-10));
}

TEST_CASE("term monotonicity in k and eta", "[bounds]") {
  const auto c = base_constants();
  const auto plan = plan_35_14();
  const double ks[] = {10.0, 20.0, 40.0};
  const double etas[] = {1e-4, 2e-4, 4e-4};
  for (int i = 0; i + 1 < 3; ++i) {
    const auto small_k = suboptimality_bound(c, plan, ks[i], 1e-4);
    const auto large_k = suboptimality_bound(c, plan, ks[i + 1], 1e-4);
    REQUIRE(large_k.a1 > small_k.a1);
    REQUIRE(large_k.a2 > small_k.a2);
    REQUIRE(large_k.a3 < small_k.a3);  // kEta grows
    REQUIRE(large_k.a4 == small_k.a4);

    const auto small_eta = suboptimality_bound(c, plan, 20.0, etas[i]);
    const auto large_eta = suboptimality_bound(c, plan, 20.0, etas[i + 1]);
    REQUIRE(large_eta.a1 > small_eta.a1);
    REQUIRE(large_eta.a2 > small_eta.a2);
    REQUIRE(large_eta.a3 < small_eta.a3);
    REQUIRE(large_eta.a4 == small_eta.a4);
  }
}

TEST_CASE("k-exponent branch: feasible plans always take 1/q", "[bounds]") {
  for (double gamma : {0.0, 0.1, 0.2, 0.3, 0.38}) {
    const auto result = plan_exponents(gamma, 2.0);
    REQUIRE(result.feasible);
    REQUIRE(gamma * (result.plan.q + 1.0) < 1.0);
    auto c = base_constants();
    c.alpha = 2.0;
    c.gamma = gamma;
    const auto breakdown = suboptimality_bound(c, result.plan, 5.0, 1e-4);
    REQUIRE_FALSE(breakdown.k_exponent_from_gamma);
  }
}

TEST_CASE("initial moments", "[bounds]") {
  REQUIRE(InitialMoments::origin().moment(0.7) == 0.0);
  REQUIRE(InitialMoments::origin().moment(0.0) == 1.0);
  REQUIRE(InitialMoments::point(0.7).moment(2.0) == Catch::Approx(0.49));
  // Chi moments: E||Z||^2 = d sigma^2, E||Z|| = sigma sqrt(2) G((d+1)/2)/G(d/2).
  const auto g3 = InitialMoments::gaussian(1.0, 3);
  REQUIRE(g3.moment(2.0) == Catch::Approx(3.0).epsilon(1e-12));
  const double expected_1 =
      std::sqrt(2.0) * std::exp(std::lgamma(2.0) - std::lgamma(1.5));
  REQUIRE(g3.moment(1.0) == Catch::Approx(expected_1).epsilon(1e-12));
}

TEST_CASE("weak-error constants: origin init collapses Q2", "[bounds]") {
  const auto c = base_constants();
  const auto plan = plan_35_14();
  const auto w = weak_error_constants(c, plan, 1e-3, InitialMoments::origin());
  REQUIRE(w.q2_term ==
          Catch::Approx(c.M * std::pow(c.c_x1, 1.0 / plan.q1)).epsilon(1e-13));
  REQUIRE(w.q3_term ==
          Catch::Approx(c.M * std::pow(c.c_x1, 1.0 / plan.p) + c.B).epsilon(1e-13));
}

TEST_CASE("weak-error bound vanishes with the step size", "[bounds]") {
  const auto c = base_constants();
  const auto plan = plan_35_14();
  const auto init = InitialMoments::origin();
  const double big = detailed_weak_error_bound(c, plan, 100.0, 1e-2, init);
  const double mid = detailed_weak_error_bound(c, plan, 100.0, 1e-5, init);
  const double tiny = detailed_weak_error_bound(c, plan, 100.0, 1e-10, init);
  REQUIRE(big > mid);
  REQUIRE(mid > tiny);
  REQUIRE(tiny < 1e-6);
  REQUIRE_THROWS_AS(detailed_weak_error_bound(c, plan, 100.0, 0.3, init), ParameterError);
}

TEST_CASE("weak-error bound against a hand expansion", "[bounds]") {
  const auto c = base_constants();
  const auto plan = plan_35_14();
  const double k = 50.0, eta = 0.01;
  const auto init = InitialMoments::point(0.7);
  const auto m0 = [&](double lambda) { return std::pow(0.7, lambda); };

  // Re-derived term by term with std::lgamma-based moment bounds.
  const double q = 1.4, p = 3.5, p1 = 1.4, q1 = 3.5;
  const double alpha = c.alpha, gamma = c.gamma, M = c.M, B = c.B, beta = c.beta;
  const double cx = c.c_x1;
  const double d = 3.0;
  const double drift = 2.0 * eta * (c.b + c.m);
  const auto l = [&](double lambda) { return l_independent(alpha, lambda, 3); };

  const double P1 =
      std::pow(cx * eta * d / std::pow(beta, 1.0 / alpha), 1.0 / p1) +
      std::pow(cx * eta, 1.0 / p1) + std::pow(drift, (q - 1.0) / 2.0) +
      std::pow(2.0, (q - 1.0) / 2.0) * std::pow(eta * B, q - 1.0) +
      std::pow(eta / beta, (q - 1.0) / alpha) * std::pow(l((q - 1.0) * p1), 1.0 / p1) +
      std::pow(eta, q - 1.0) * std::pow(M, q - 1.0) *
          (std::pow(drift, (q - 1.0) * gamma / 2.0) +
           std::pow(2.0, (q - 1.0) * gamma / 2.0) * std::pow(eta * B, (q - 1.0) * gamma) +
           std::pow(eta / beta, (q - 1.0) * gamma / alpha) *
               std::pow(l((q - 1.0) * p1 * gamma), 1.0 / p1));
  const double P2 =
      M * (std::pow(cx * eta * d / std::pow(beta, 1.0 / alpha), 1.0 / q1) +
           std::pow(cx * eta, 1.0 / q1) + std::pow(drift, gamma / 2.0) +
           std::pow(2.0, gamma / 2.0) * std::pow(eta * B, gamma) +
           std::pow(eta / beta, gamma / alpha) * std::pow(l(gamma * q1), 1.0 / q1));
  const double Q1 =
      std::pow(cx, 1.0 / p1) + std::pow(m0((q - 1.0) * p1), 1.0 / p1) +
      std::pow(eta, q - 1.0) *
          (std::pow(M, q - 1.0) * std::pow(m0((q - 1.0) * p1 * gamma), 1.0 / p1) +
           std::pow(B, q - 1.0)) +
      std::pow(eta / beta, (q - 1.0) / alpha) * std::pow(l((q - 1.0) * p1), 1.0 / p1);
  const double Q2 = M * std::pow(m0(gamma * q1), 1.0 / q1) + M * std::pow(cx, 1.0 / q1);

  const double expected =
      q * eta *
      (k * k * P1 * P2 + std::pow(k, 1.0 + 1.0 / p1) * P1 * Q2 +
       std::pow(k, 1.0 + 1.0 / q1) * P2 * Q1 + k * Q1 * Q2);
  REQUIRE(detailed_weak_error_bound(c, plan, k, eta, init) ==
          Catch::Approx(expected).epsilon(1e-10));

  // Companion P3/Q3 constants.
  const auto w = weak_error_constants(c, plan, eta, init);
  const double P3 =
      M * (std::pow(cx * eta * d / std::pow(beta, 1.0 / alpha), 1.0 / p) +
           std::pow(cx * eta, 1.0 / p) + std::pow(drift, gamma / 2.0) +
           std::pow(2.0, gamma / 2.0) * std::pow(eta * B, gamma) +
           std::pow(eta / beta, gamma / alpha) * std::pow(l(gamma * p), 1.0 / p));
  const double Q3 = M * std::pow(m0(gamma * p), 1.0 / p) + M * std::pow(cx, 1.0 / p) + B;
  REQUIRE(w.p3_term == Catch::Approx(P3).epsilon(1e-12));
  REQUIRE(w.q3_term == Catch::Approx(Q3).epsilon(1e-12));
  REQUIRE(weak_error_mean_gap_bound(c, plan, k, eta, init) > 0.0);
}

TEST_CASE("continuous-vs-Gibbs-drift bound", "[bounds]") {
  const auto c = base_constants();
  const auto plan = plan_35_14();
  const double k = 20.0, eta = 0.01;
  const double t = k * eta;
  const double horizon = t * (3.0 / std::pow(c.beta, 1.0 / c.alpha) + 1.0) + 1.0;
  const double ms = std::pow(c.c_x1, plan.q - 1.0) + std::pow(c.c_b, plan.q - 1.0);
  const double gs = std::pow(c.c_x1, c.gamma) + std::pow(c.c_b, c.gamma);
  const double expected =
      plan.q * t *
      (c.M * ms * gs * std::pow(horizon, plan.q - 1.0 + c.gamma) +
       c.L * ms * std::pow(horizon, plan.q - 1.0));
  REQUIRE(x1_x3_bound(c, plan, k, eta) == Catch::Approx(expected).epsilon(1e-12));
  REQUIRE(x1_x3_bound(c, plan, 2.0 * k, eta) > x1_x3_bound(c, plan, k, eta));
}

TEST_CASE("discrete moment bound", "[bounds]") {
  const auto c = base_constants();
  const auto origin = InitialMoments::origin();
  const double eta = 0.01;

  REQUIRE(discrete_moment_bound(c, 0, eta, 0.15, MomentCase::b, origin) == 0.0);

  // Case-b grid bounds grow linearly in j.
  const double b3 = discrete_moment_bound(c, 3, eta, 0.15, MomentCase::b, origin);
  const double b4 = discrete_moment_bound(c, 4, eta, 0.15, MomentCase::b, origin);
  const double b5 = discrete_moment_bound(c, 5, eta, 0.15, MomentCase::b, origin);
  REQUIRE(b4 - b3 == Catch::Approx(b5 - b4).epsilon(1e-12));
  REQUIRE(b3 > 0.0);

  // Hand expansion of the case-b formula.
  const double l = l_independent(c.alpha, 0.15, c.d);
  const double increment = std::pow(2.0 * eta * (c.b + c.m), 0.075) +
                           std::pow(2.0, 0.075) * std::pow(eta * c.B, 0.15) +
                           std::pow(eta / c.beta, 0.15 / c.alpha) * l;
  REQUIRE(b3 == Catch::Approx(3.0 * increment).epsilon(1e-12));

  // Case c needs 1 < lambda < alpha with gamma*lambda <= 1.
  const double c5 = discrete_moment_bound(c, 5, eta, 1.2, MomentCase::c, origin);
  const double c6 = discrete_moment_bound(c, 6, eta, 1.2, MomentCase::c, origin);
  REQUIRE(c6 > c5);

  REQUIRE_THROWS_AS(discrete_moment_bound(c, 1, eta, 1.2, MomentCase::b, origin),
                    ParameterError);
  REQUIRE_THROWS_AS(discrete_moment_bound(c, 1, eta, 0.8, MomentCase::c, origin),
                    ParameterError);
  REQUIRE_THROWS_AS(discrete_moment_bound(c, 1, eta, 1.2, MomentCase::a, origin),
                    ParameterError);  // gamma*lambda = 0.24 < 1
  REQUIRE_THROWS_AS(discrete_moment_bound(c, 1, eta, 1.9, MomentCase::c, origin),
                    ParameterError);  // lambda >= alpha
  REQUIRE_THROWS_AS(discrete_moment_bound(c, 1, 0.3, 0.15, MomentCase::b, origin),
                    ParameterError);  // eta above m/M^2
}

TEST_CASE("Gibbs suboptimality bound", "[bounds]") {
  // Independent evaluation at fixed inputs.
  const auto c = base_constants();
  const double d = 3.0;
  const double log_ratio = 0.5 * d * std::log(2.0 * M_E * (c.b + d / c.beta)) +
                           std::lgamma(0.5 * d + 1.0) + d * std::log(c.beta) -
                           0.5 * d * std::log(d * c.m);
  const double ca = std::exp(std::lgamma(c.alpha - 1.0) - 2.0 * std::lgamma(0.5 * c.alpha));
  const double expected =
      log_ratio / c.beta + c.M / (ca * std::pow(c.beta, c.gamma + 1.0) * (1.0 + c.gamma));
  REQUIRE(gibbs_suboptimality_bound(c) == Catch::Approx(expected).epsilon(1e-10));

  // Large beta: the power term dies, the log term scales like (d/beta) log beta.
  auto cold = base_constants();
  cold.beta = 1e8;
  const double bound = gibbs_suboptimality_bound(cold);
  const double log_term = d * std::log(cold.beta) / cold.beta;
  REQUIRE(bound == Catch::Approx(log_term).epsilon(0.05));

  // Gaussian f(x) = x^2/2 at alpha = 2: E_pi[f] - f* = 1/(2 beta) sits below the
  // bound evaluated with (gamma=0.5, M=4, m=1, b=1) for beta in {1, 10, 100}.
  for (double beta : {1.0, 10.0, 100.0}) {
    AssumptionConstants g;
    g.alpha = 2.0;
    g.beta = beta;
    g.d = 1;
    g.M = 4.0;
    g.gamma = 0.5;
    g.m = 1.0;
    g.b = 1.0;
    g.L = 0.5;
    REQUIRE(gibbs_suboptimality_bound(g) >= 1.0 / (2.0 * beta));
  }
}

TEST_CASE("sampling bound", "[bounds]") {
  const auto c = base_constants();
  const auto plan = plan_35_14();

  const auto at_zero = sampling_bound(c, plan, 0.0, 1e-3);
  REQUIRE(at_zero.term_time == 0.0);
  REQUIRE(at_zero.term_dim == 0.0);
  REQUIRE(at_zero.total == Catch::Approx(c.C_thm * c.beta));

  // Feasible plans keep q + gamma below 2, so the max branch stays at 2.
  for (double gamma : {0.0, 0.2, 0.38}) {
    const auto result = plan_exponents(gamma, 2.0);
    auto cg = base_constants();
    cg.alpha = 2.0;
    cg.gamma = gamma;
    REQUIRE(result.plan.q + gamma < 2.0);
    REQUIRE_FALSE(sampling_bound(cg, result.plan, 10.0, 1e-3).branch_q_plus_gamma);
  }

  // Long horizons make the ergodic term negligible.
  auto ch = base_constants();
  ch.beta = 1.0;
  ch.alpha = 1.9;
  const double eta = 0.01;
  const double k = 40.0 / eta;  // lambda* k eta / beta = 40
  const auto long_run = sampling_bound(ch, plan, k, eta);
  REQUIRE(long_run.term_ergodic / long_run.term_time < 1e-6);
}

TEST_CASE("epsilon schedules", "[bounds]") {
  auto c = base_constants();
  c.alpha = 1.9;
  const auto plan = plan_35_14();

  // gamma = 0 forces the 1/q regime.
  auto c0 = c;
  c0.gamma = 0.0;
  const auto s0 = epsilon_schedule(c0, plan, 0.1);
  REQUIRE(s0.regime_one_over_q);
  REQUIRE(s0.eta_max == Catch::Approx(std::pow(0.1, 2.0 * plan.q + 1.0)).epsilon(1e-12));

  // eps = 0.1, q = 1.4, gamma = 0.2: 1/q = 0.714 beats 0.343, threshold 0.1^3.8.
  const auto s = epsilon_schedule(c, plan, 0.1);
  REQUIRE(s.regime_one_over_q);
  REQUIRE(s.k == 10);
  REQUIRE(s.eta_max == Catch::Approx(std::pow(0.1, 3.8)).epsilon(1e-12));
  const bool direct = static_cast<double>(s.k) * s.eta_max >
                      (c.beta / c.lambda_star) * std::log(10.0);
  REQUIRE(s.horizon_ok == direct);
  if (!s.horizon_ok) {
    REQUIRE(s.k_multiplier ==
            Catch::Approx(((c.beta / c.lambda_star) * std::log(10.0)) /
                          (static_cast<double>(s.k) * s.eta_max)));
  }
}

TEST_CASE("Holder descent slack", "[bounds]") {
  const auto obj = make_benchmark("fractional_power_well", 2);
  auto c = AssumptionConstants::from_objective(obj, 1.5, 1.0);

  const std::vector<double> x = {0.7, -0.3};
  REQUIRE(hoelder_descent_slack(c, x, x, obj) == 0.0);

  // Linear objective: the first-order remainder vanishes, slack is the
  // right-hand side itself.
  const auto linear =
      Objective("linear", 2, [](std::span<const double> p) { return 2.0 * p[0] + p[1]; },
                [](std::span<const double>, std::span<double> g) {
                  g[0] = 2.0;
                  g[1] = 1.0;
                });
  const std::vector<double> y = {0.1, 0.4};
  const double rhs = c.M / (1.0 + c.gamma) * std::pow(dist(x, y), 1.0 + c.gamma);
  REQUIRE(hoelder_descent_slack(c, x, y, linear) == Catch::Approx(rhs).epsilon(1e-12));

  // 1e5 random pairs: certificate implies non-negative slack.
  Rng rng(31415);
  const auto box = Box::cube(2, -10.0, 10.0);
  double min_slack = 1e300;
  for (int i = 0; i < 100000; ++i) {
    min_slack = std::min(min_slack,
                         hoelder_descent_slack(c, box.sample(rng), box.sample(rng), obj));
  }
  REQUIRE(min_slack >= 0.0);
}

TEST_CASE("closed-form weak-error bound dominates the measured distance", "[bounds]") {
  // Calibrated-regression check: with the free moment constant at its default
  // the displayed bound must sit far above the measured W_q^q.
  const auto obj = make_benchmark("fractional_power_well", 1);
  RunConfig cfg;
  cfg.algorithm = Algorithm::fla;
  cfg.alpha = 1.5;
  cfg.beta = 1.0;
  cfg.steps = 50;
  cfg.seed = 59;
  const auto plan = plan_exponents(obj.constants()->gamma, cfg.alpha);
  REQUIRE(plan.feasible);
  const auto constants = AssumptionConstants::from_objective(obj, cfg.alpha, cfg.beta);
  const auto study = weak_error_study(obj, cfg, {4e-3, 2e-3, 1e-3}, 4, 256, plan.plan.q,
                                      0, 100);
  for (const auto& point : study.points) {
    const double measured = std::pow(point.wq, plan.plan.q);
    const double bound = detailed_weak_error_bound(constants, plan.plan, 50.0, point.eta,
                                                   InitialMoments::origin());
    INFO("eta = " << point.eta);
    REQUIRE(measured <= bound);
  }
}

TEST_CASE("subadditive power inequality survives the power routine", "[bounds]") {
  Rng rng(27182);
  for (int i = 0; i < 1000000; ++i) {
    const double a = 100.0 * rng.uniform01();
    const double b = 100.0 * rng.uniform01();
    const double gamma = rng.uniform01();
    REQUIRE(std::pow(a + b, gamma) <= std::pow(a, gamma) + std::pow(b, gamma) + 1e-12);
  }
}
