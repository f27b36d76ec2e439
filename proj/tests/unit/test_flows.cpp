#include <doctest.h>

#include <cmath>
#include <numbers>

#include "raplab/catalog.hpp"
#include "raplab/error.hpp"
#include "raplab/flows.hpp"

using namespace raplab;

namespace {

SampledSignal solve(const Rhs& rhs, double x0, double a, double b, double tol = 1e-10, double max_step = 0.01) {
  IVP ivp{rhs, {x0}, {a, b}, tol, tol * 1e-2, max_step};
  return integrate(ivp);
}

double last(const SampledSignal& s) { return s.value(s.size() - 1); }

}  // namespace

TEST_CASE("integrate: closed-form solutions") {
  const auto decay = catalog_rhs("decay");
  const auto s = solve(decay, 1.0, 0.0, 10.0);
  CHECK(std::abs(last(s) - std::exp(-10.0)) <= 1e-7);
  CHECK(s.t_end() == doctest::Approx(10.0));
  CHECK(s.dt() == doctest::Approx(1e-3));  // span / 1e4

  const auto z = solve(catalog_rhs("zero"), 3.25, 0.0, 5.0);
  for (std::size_t i = 0; i < z.size(); ++i) REQUIRE(z.value(i) == 3.25);

  const auto q = solve(catalog_rhs("abs_damped"), 1.0, 0.0, 9.0);
  CHECK(std::abs(last(q) - 0.1) <= 1e-6);
}

TEST_CASE("integrate: dense output between steps tracks the exact solution") {
  // Large max_step so that several output points fall inside one step.
  const auto rhs = catalog_rhs("linear_sin");
  IVP ivp{rhs, {0.0}, {0.0, 20.0}, 1e-8, 1e-10, 0.5};
  const auto s = integrate(ivp);
  CHECK(s.dt() == doctest::Approx(0.002));
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double t = s.time(i);
    // x' = -x + sin t, x(0) = 0: x = (sin t - cos t + e^{-t}) / 2.
    const double exact = 0.5 * (std::sin(t) - std::cos(t) + std::exp(-t));
    worst = std::max(worst, std::abs(s.value(i) - exact));
  }
  CHECK(worst <= 1e-7);
}

TEST_CASE("integrate: errors") {
  const Rhs blowup("blowup", 1, [](double, const double* x, double* o) { o[0] = x[0] * x[0]; });
  IVP ivp{blowup, {1.0}, {0.0, 2.0}, 1e-8, 1e-10, 0.01};
  CHECK_THROWS_AS(integrate(ivp), Error);
  try {
    integrate(ivp);
  } catch (const Error& e) {
    const bool expected = e.code() == ErrorCode::StepSizeUnderflow || e.code() == ErrorCode::NonFiniteRhs;
    CHECK(expected);
  }
  const Rhs nan_rhs("nan", 1, [](double, const double*, double* o) { o[0] = NAN; });
  IVP bad{nan_rhs, {1.0}, {0.0, 1.0}, 1e-8, 1e-10, 0.01};
  try {
    integrate(bad);
    FAIL("expected NonFiniteRhs");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteRhs);
  }
  IVP loose{catalog_rhs("decay"), {1.0}, {0.0, 1.0}, 0.5, 1e-10, 0.01};
  CHECK_THROWS_AS(loose.validate(), Error);
}

TEST_CASE("expression rhs matches the catalog rhs") {
  const auto expr = Rhs::from_expressions({"-abs(x)*x + sin(t)"}, {});
  const auto cat = catalog_rhs("heq1_sin");
  const auto a = solve(expr, 0.5, 0.0, 30.0);
  const auto b = solve(cat, 0.5, 0.0, 30.0);
  CHECK(sup_distance(a, b, a.domain()) <= 1e-12);

  const auto forced = Rhs::from_expressions({"-k*x0 + f"}, {{"k", 2.0}}, catalog_forcing("sin"));
  double out = 0.0;
  const double x = 1.5;
  forced(0.3, &x, &out);
  CHECK(out == doctest::Approx(-3.0 + std::sin(0.3)));
}

TEST_CASE("condition (H) margin") {
  ConditionHParams p;
  p.kappa = 0.5;
  p.alpha = 3.0;
  p.box_lo = {-10.0};
  p.box_hi = {10.0};
  p.n_pairs = 10000;
  const std::vector<double> ts{0.0, 1.0, 2.5};
  const auto h = condition_h_margin(catalog_rhs("heq1"), p, ts);
  CHECK(h.holds);
  CHECK(h.margin >= 0.0);
  CHECK(h.samples > 10000);

  // -x: -r^2 <= -r^3 / 2 iff r <= 2.
  p.box_lo = {-0.1};
  p.box_hi = {0.1};
  CHECK(condition_h_margin(catalog_rhs("decay"), p, ts).holds);
  p.box_lo = {-10.0};
  p.box_hi = {10.0};
  CHECK_FALSE(condition_h_margin(catalog_rhs("decay"), p, ts).holds);
  CHECK(condition_h_margin(catalog_rhs("zero"), p, ts).margin < 0.0);

  p.alpha = 2.0;
  CHECK_THROWS_AS(condition_h_margin(catalog_rhs("zero"), p, ts), Error);
}

TEST_CASE("contraction modulus and attraction time") {
  CHECK(contraction_modulus(0.0, 0.7, 0.5, 3.0) == doctest::Approx(0.7));
  CHECK(contraction_modulus(4.0, 2.0, 0.5, 3.0) == doctest::Approx(1.0 / (0.5 + 2.0)));
  CHECK(contraction_modulus_unit(1.0, 1.0, 3.0) == doctest::Approx(0.5));

  CHECK(attraction_time(1.0, 0.1, 1.0, 3.0) == doctest::Approx(9.0));
  CHECK(attraction_time(1.0, 0.1, 0.5, 3.0) == doctest::Approx(18.0));
  CHECK(attraction_time(1.0, 1.0 - 1e-9, 0.5, 3.0) < 1e-7);
  try {
    attraction_time(1.0, 1.0, 0.5, 3.0);
    FAIL("expected BadOrder");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadOrder);
  }
  // Solving modulus(L, delta0) = eps returns eps.
  for (double alpha : {2.5, 3.0, 4.0}) {
    const double L = attraction_time(2.0, 0.05, 0.3, alpha);
    CHECK(contraction_modulus(L, 2.0, 0.3, alpha) == doctest::Approx(0.05));
  }
}

TEST_CASE("contraction bound along solutions") {
  const auto rhs = catalog_rhs("heq1_sin");
  const auto a = solve(rhs, 0.0, 0.0, 100.0);
  const auto b = solve(rhs, 2.0, 0.0, 100.0);
  const auto c = contraction_bound_check(a, b, 0.5, 3.0, 1e-6);
  CHECK(c.holds);
  CHECK(c.r0 == doctest::Approx(2.0));
  CHECK(contraction_bound_check(a, a, 0.5, 3.0).holds);
  const auto other = solve(rhs, 0.0, 0.0, 50.0);
  CHECK_THROWS_AS(contraction_bound_check(a, other, 0.5, 3.0), Error);
}

TEST_CASE("separation estimate") {
  const auto z1 = solve(catalog_rhs("zero"), 1.0, 0.0, 10.0);
  const auto z2 = solve(catalog_rhs("zero"), 3.5, 0.0, 10.0);
  CHECK(separation_estimate(z1, z2, {0, 10}).inf_distance == doctest::Approx(2.5));
  const auto l0 = solve(catalog_rhs("linear_sin"), 0.0, 0.0, 10.0);
  const auto l1 = solve(catalog_rhs("linear_sin"), 1.0, 0.0, 10.0);
  const auto sep = separation_estimate(l0, l1, {0, 10});
  CHECK(std::abs(sep.inf_distance - std::exp(-10.0)) <= 1e-7);
  CHECK(sep.at_time == doctest::Approx(10.0));
  CHECK(separation_estimate(l0, l0, {0, 10}).inf_distance == 0.0);
}

TEST_CASE("hull solutions and the cocycle identity") {
  const auto rhs = catalog_rhs("linear_sin");
  const double tau = 3.7, t = 5.0, tol = 1e-10;
  const auto full = solve(rhs, 0.4, 0.0, tau + t, tol, 0.001);
  const auto first = solve(rhs, 0.4, 0.0, tau, tol, 0.001);
  const double mid = last(first);
  const std::vector<double> shifts{tau};
  const auto restarted = hull_solutions(rhs, shifts, {{mid}}, t, tol, tol * 1e-2, 0.001);
  REQUIRE(restarted.size() == 1);
  CHECK(std::abs(last(restarted[0].solution) - last(full)) <= 5 * tol + 1e-12);

  const std::vector<double> zero{0.0};
  const auto h0 = hull_solutions(rhs, zero, {{0.4}}, 8.0, tol, tol * 1e-2, 0.001);
  const auto direct = solve(rhs, 0.4, 0.0, 8.0, tol, 0.001);
  CHECK(sup_distance(h0[0].solution, direct, direct.domain()) == 0.0);

  const std::vector<double> many{0.0, 1.3, 7.9};
  const auto aut = hull_solutions(catalog_rhs("decay"), many, {{1.0}}, 5.0);
  CHECK(sup_distance(aut[0].solution, aut[2].solution, aut[0].solution.domain()) == 0.0);

  const Rhs tab = Rhs::from_expressions({"-x + f"}, {}, Forcing(SampledSignal::tabulate(0, 0.1, 101, [](double s) {
                                                          return std::sin(s);
                                                        })));
  const std::vector<double> far{8.0};
  CHECK_THROWS_AS(hull_solutions(tab, far, {{0.0}}, 5.0), Error);
}

TEST_CASE("fiber count") {
  const std::vector<double> shifts{0.0, 1.0, 2.0};
  const auto lin = hull_solutions(catalog_rhs("linear_sin"), shifts, {{-2.0}, {0.0}, {2.0}}, 40.0);
  const auto fc = fiber_count(lin, 20.0, 1e-3);
  CHECK(fc.m == 1);
  CHECK(fc.constant);
  // The representative follows (sin t - cos t) / 2.
  const auto& rep = fc.representatives[0][0];
  double worst = 0.0;
  for (std::size_t i = 0; i < rep.size(); ++i) {
    const double t = rep.time(i);
    worst = std::max(worst, std::abs(rep.value(i) - 0.5 * (std::sin(t) - std::cos(t))));
  }
  CHECK(worst <= 2.0 * std::exp(-20.0) + 1e-8);

  const auto z = hull_solutions(catalog_rhs("zero"), shifts, {{0.0}, {1.0}}, 10.0);
  const auto fz = fiber_count(z, 5.0, 1e-3);
  CHECK(fz.m == 2);
  CHECK(fz.min_separation == doctest::Approx(1.0));

  // Halving the cluster tolerance below the separation floor keeps m.
  CHECK(fiber_count(z, 5.0, 5e-4).m == 2);
}

TEST_CASE("uniform stability probe: linear contraction") {
  StabilityProbeConfig cfg;
  cfg.x_ref = {0.0};
  cfg.restart_times = {0.0, 3.0, 10.0};
  cfg.deltas = {0.05, 0.1, 0.2};
  cfg.epsilons = {0.1, 0.2};
  cfg.delta0 = 1.0;
  cfg.horizon = 15.0;
  const auto r = uniform_stability_probe(catalog_rhs("linear_sin"), cfg);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.uniformly_stable);
  CHECK(r.uniformly_attracting);
  CHECK(*r.rows[0].delta == doctest::Approx(0.1));
  CHECK(*r.rows[1].delta == doctest::Approx(0.2));
  for (const auto& row : r.rows) {
    const double expected = std::log(cfg.delta0 / row.epsilon);
    CHECK(std::abs(*row.L_observed - expected) <= 0.1 * expected);
  }
}

TEST_CASE("uniform stability probe: x' = 0 is stable but not attracting") {
  StabilityProbeConfig cfg;
  cfg.x_ref = {0.0};
  cfg.restart_times = {0.0, 5.0};
  cfg.deltas = {0.05, 0.1};
  cfg.epsilons = {0.1};
  cfg.delta0 = 1.0;
  cfg.horizon = 10.0;
  const auto r = uniform_stability_probe(catalog_rhs("zero"), cfg);
  CHECK(r.uniformly_stable);
  CHECK(*r.rows[0].delta == doctest::Approx(0.1));
  CHECK_FALSE(r.uniformly_attracting);
  CHECK_FALSE(r.rows[0].L_observed.has_value());
}

TEST_CASE("boundedness of x' = -|x| x + b(t)") {
  // |b| <= B keeps |x| <= max(|x0|, 1 + B).
  for (double x0 : {-4.0, -0.5, 0.0, 3.0}) {
    const auto s = solve(catalog_rhs("heq1"), x0, 0.0, 200.0, 1e-9, 0.05);
    const double B = 2.0;
    CHECK(sup_norm(s) <= std::max(std::abs(x0), 1.0 + B) + 1e-9);
  }
}
