#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "flmc/c_alpha.hpp"
#include "flmc/errors.hpp"
#include "flmc/objectives.hpp"
#include "flmc/vec.hpp"
#include "support.hpp"

using namespace flmc;

namespace {

Objective linear_objective() {
  return Objective("linear", 2, [](std::span<const double> x) { return 3.0 * x[0] - x[1]; },
                   [](std::span<const double>, std::span<double> g) {
                     g[0] = 3.0;
                     g[1] = -1.0;
                   });
}

Objective negative_quadratic() {
  return Objective("neg_quad", 2,
                   [](std::span<const double> x) { return -norm_sq(x); },
                   [](std::span<const double> x, std::span<double> g) {
                     for (std::size_t i = 0; i < x.size(); ++i) g[i] = -2.0 * x[i];
                   });
}

double fd_gradient_error(const Objective& obj, Rng& rng, const Box& box) {
  double worst = 0.0;
  std::vector<double> fd(obj.dim());
  for (int trial = 0; trial < 100; ++trial) {
    auto x = box.sample(rng);
    const auto g = obj.gradient(x);
    const double h = 1e-5 * (1.0 + norm(x));
    for (int i = 0; i < obj.dim(); ++i) {
      auto xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      fd[i] = (obj.value(xp) - obj.value(xm)) / (2.0 * h);
    }
    worst = std::max(worst, dist(fd, g) / (1.0 + norm(g)));
  }
  return worst;
}

}  // namespace

TEST_CASE("registry rejects unknown names and bad params", "[objectives]") {
  REQUIRE_THROWS_AS(make_benchmark("unknown_name", 1), ParameterError);
  REQUIRE_THROWS_AS(make_benchmark("double_well_1d", 2), ParameterError);
  REQUIRE_THROWS_AS(make_benchmark("double_well_1d", 1, {{"c", 0.7}}), ParameterError);
  REQUIRE_THROWS_AS(make_benchmark("double_well_1d", 1, {{"bogus", 1.0}}), ParameterError);
  REQUIRE_THROWS_AS(make_benchmark("fractional_power_well", 2, {{"gamma", 1.0}}),
                    ParameterError);
  REQUIRE_THROWS_AS(make_benchmark("perturbed_fractional", 3), ParameterError);
}

TEST_CASE("gradients match central finite differences", "[objectives]") {
  Rng rng(101);
  for (const auto& [name, dim] :
       std::vector<std::pair<std::string, int>>{{"fractional_power_well", 3},
                                                {"double_well_1d", 1},
                                                {"perturbed_fractional", 2}}) {
    const auto obj = make_benchmark(name, dim);
    const auto box = Box::cube(dim, -10.0, 10.0);
    INFO(name);
    REQUIRE(fd_gradient_error(obj, rng, box) < 1e-5);
  }
  // The finite-sum variant goes through the component-average path.
  const auto summed =
      make_benchmark("fractional_power_well", 2, {{"n_components", 8.0}});
  const auto box = Box::cube(2, -10.0, 10.0);
  REQUIRE(fd_gradient_error(summed, rng, box) < 1e-5);
}

TEST_CASE("power well: zero gradient at the origin, B = 0", "[objectives]") {
  const auto obj = make_benchmark("fractional_power_well", 4);
  const std::vector<double> origin(4, 0.0);
  REQUIRE(norm(obj.gradient(origin)) == 0.0);
  REQUIRE(obj.constants()->grad_zero_B == 0.0);
  REQUIRE(obj.minimizer()->point == origin);
}

TEST_CASE("double well: minimizer from an independent dense scan", "[objectives]") {
  const double c = 0.2;
  const auto obj = make_benchmark("double_well_1d", 1, {{"c", c}});
  const auto f = [&](double x) { return (x * x - 1.0) * (x * x - 1.0) + c * x; };

  double best_x = -2.0, best_f = f(-2.0);
  for (int i = 0; i <= 400000; ++i) {
    const double x = -2.0 + 1e-5 * i;
    if (f(x) < best_f) {
      best_f = f(x);
      best_x = x;
    }
  }
  REQUIRE(obj.minimizer().has_value());
  REQUIRE(obj.minimizer()->point[0] == Catch::Approx(best_x).margin(1e-4));
  REQUIRE(obj.minimizer()->point[0] == Catch::Approx(-1.025).margin(5e-3));

  // The positive-side local minimum sits strictly above the global one.
  double local_best = f(0.2);
  for (int i = 0; i <= 200000; ++i) local_best = std::min(local_best, f(0.2 + 1e-5 * i));
  REQUIRE(obj.minimizer()->value < local_best);
  REQUIRE(obj.constants()->local_only);
}

TEST_CASE("perturbed well: grid minimizer beats random probes", "[objectives]") {
  Rng rng(211);
  for (int dim : {1, 2}) {
    const auto obj = make_benchmark("perturbed_fractional", dim);
    REQUIRE(obj.minimizer().has_value());
    const double f_star = obj.minimizer()->value;
    REQUIRE(norm(obj.gradient(obj.minimizer()->point)) < 1e-3);
    const auto box = Box::cube(dim, -6.0, 6.0);
    for (int i = 0; i < 20000; ++i) {
      REQUIRE(f_star <= obj.value(box.sample(rng)) + 1e-12);
    }
    // Away from the origin: the ripple moves the minimizer off zero.
    REQUIRE(norm(obj.minimizer()->point) > 0.1);
  }
}

TEST_CASE("component average equals the gradient exactly", "[objectives]") {
  const auto obj = make_benchmark("fractional_power_well", 3,
                                  {{"n_components", 10.0}, {"component_spread", 0.5}});
  REQUIRE(obj.has_components());
  REQUIRE(obj.n_components() == 10);
  Rng rng(303);
  const auto box = Box::cube(3, -5.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = box.sample(rng);
    const auto g = obj.gradient(x);
    const auto sg = stochastic_gradient(obj, x, 10, rng);  // full batch
    REQUIRE(g == sg);  // bitwise
  }
}

TEST_CASE("stochastic gradient: unbiasedness and domain errors", "[objectives]") {
  const auto obj = make_benchmark("fractional_power_well", 2,
                                  {{"n_components", 20.0}, {"component_spread", 0.6}});
  const std::vector<double> x = {1.3, -0.4};
  const auto exact = obj.gradient(x);

  Rng rng(404);
  const int batches = 10000, batch_size = 2;
  std::vector<double> mean(2, 0.0);
  std::vector<double> m2(2, 0.0);
  for (int bidx = 0; bidx < batches; ++bidx) {
    const auto g = stochastic_gradient(obj, x, batch_size, rng);
    for (int i = 0; i < 2; ++i) {
      mean[i] += g[i];
      m2[i] += g[i] * g[i];
    }
  }
  for (int i = 0; i < 2; ++i) {
    mean[i] /= batches;
    const double var = m2[i] / batches - mean[i] * mean[i];
    const double se = std::sqrt(var / batches);
    REQUIRE(std::abs(mean[i] - exact[i]) <= 3.0 * se + 1e-12);
  }

  Rng r2(1);
  REQUIRE_THROWS_AS(stochastic_gradient(obj, x, 0, r2), ParameterError);
  REQUIRE_THROWS_AS(stochastic_gradient(obj, x, 21, r2), ParameterError);
  const auto plain = make_benchmark("fractional_power_well", 2);
  REQUIRE_THROWS_AS(stochastic_gradient(plain, x, 1, r2), ParameterError);
}

TEST_CASE("holder check: linear objective has zero ratio", "[objectives]") {
  const auto obj = linear_objective();
  Rng rng(7);
  const auto report = check_holder(obj, 1.5, 0.4, 1.0, 2000, Box::cube(2, -5.0, 5.0), rng);
  REQUIRE(report.max_ratio == 0.0);
  REQUIRE(report.passed);
}

TEST_CASE("certified constants pass their own sweeps", "[objectives]") {
  Rng rng(505);
  for (double alpha : {1.5, 2.0}) {
    const double ca = c_alpha(alpha);
    for (const auto& [name, dim] :
         std::vector<std::pair<std::string, int>>{{"fractional_power_well", 2},
                                                  {"perturbed_fractional", 2}}) {
      const auto obj = make_benchmark(name, dim);
      const auto& oc = *obj.constants();
      REQUIRE_FALSE(oc.local_only);
      const auto box = Box::cube(dim, -10.0, 10.0);
      const auto holder =
          check_holder(obj, alpha, oc.gamma, ca * oc.holder_M, 100000, box, rng);
      INFO(name << " alpha=" << alpha << " max_ratio=" << holder.max_ratio);
      REQUIRE(holder.passed);
      const auto dissip = check_dissipative(obj, alpha, ca * oc.dissip_m, ca * oc.dissip_b,
                                            oc.gamma, 100000, box, rng);
      INFO(name << " min_slack=" << dissip.min_slack);
      REQUIRE(dissip.passed);
    }
    // double well: certificate is local; it must hold on its own box.
    const auto dw = make_benchmark("double_well_1d", 1);
    const auto& oc = *dw.constants();
    const auto box = Box::cube(1, -oc.certificate_halfwidth, oc.certificate_halfwidth);
    REQUIRE(check_holder(dw, alpha, oc.gamma, ca * oc.holder_M, 100000, box, rng).passed);
    REQUIRE(check_dissipative(dw, alpha, ca * oc.dissip_m, ca * oc.dissip_b, oc.gamma,
                              100000, Box::cube(1, -10.0, 10.0), rng)
                .passed);
  }
}

TEST_CASE("double well is not globally 0.3-Holder", "[objectives]") {
  const auto obj = make_benchmark("double_well_1d", 1);
  const auto& oc = *obj.constants();
  const double ca = c_alpha(1.5);
  // The pair (10, 9) already exceeds the local certificate.
  const std::vector<double> x = {10.0}, y = {9.0};
  const double ratio =
      ca * dist(obj.gradient(x), obj.gradient(y)) / std::pow(1.0, oc.gamma);
  REQUIRE(ratio > ca * oc.holder_M);

  Rng rng(606);
  const auto report = check_holder(obj, 1.5, oc.gamma, ca * oc.holder_M, 20000,
                                   Box::cube(1, -10.0, 10.0), rng);
  REQUIRE_FALSE(report.passed);
}

TEST_CASE("dissipativity: slack at the origin is b, sign flips fail", "[objectives]") {
  const auto obj = make_benchmark("fractional_power_well", 2);
  Rng rng(707);
  const double b = 0.37;
  // A vanishing box pins the probe at the origin, where slack = b exactly.
  const auto report = check_dissipative(obj, 1.5, 1.0, b, 0.3, 100,
                                        Box::cube(2, -1e-13, 1e-13), rng);
  REQUIRE(report.min_slack == Catch::Approx(b).margin(1e-9));

  const auto bad = negative_quadratic();
  const auto fail = check_dissipative(bad, 1.5, 0.5, 1.0, 0.3, 20000,
                                      Box::cube(2, -10.0, 10.0), rng);
  REQUIRE_FALSE(fail.passed);
}

TEST_CASE("gradient growth bound from the certificate", "[objectives]") {
  Rng rng(808);
  for (const auto& [name, dim] :
       std::vector<std::pair<std::string, int>>{{"fractional_power_well", 2},
                                                {"perturbed_fractional", 1}}) {
    const auto obj = make_benchmark(name, dim);
    const auto& oc = *obj.constants();
    const double ca = c_alpha(1.7);
    const auto box = Box::cube(dim, -10.0, 10.0);
    double min_slack = 1e300;
    for (int i = 0; i < 100000; ++i) {
      const auto x = box.sample(rng);
      min_slack = std::min(min_slack, ca * oc.holder_M * std::pow(norm(x), oc.gamma) +
                                          ca * oc.grad_zero_B - ca * norm(obj.gradient(x)));
    }
    INFO(name);
    REQUIRE(min_slack >= 0.0);
  }
}

TEST_CASE("minimizer dominates sampled probes", "[objectives]") {
  Rng rng(909);
  for (const auto& [name, dim] :
       std::vector<std::pair<std::string, int>>{{"fractional_power_well", 3},
                                                {"double_well_1d", 1}}) {
    const auto obj = make_benchmark(name, dim);
    const auto box = Box::cube(dim, -8.0, 8.0);
    const double f_star = obj.minimizer()->value;
    for (int i = 0; i < 20000; ++i) {
      REQUIRE(f_star <= obj.value(box.sample(rng)) + 1e-12);
    }
  }
}
