// Cross-module invariants checked on families of inputs.
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "raplab/catalog.hpp"
#include "raplab/delay.hpp"
#include "raplab/flows.hpp"
#include "raplab/maps.hpp"
#include "raplab/recurrence.hpp"

using namespace raplab;

namespace {

constexpr double kPi = std::numbers::pi;

struct RandomSignal {
  double amp, omega, phase, decay_amp, decay, chirp;
};

SampledSignal make(const RandomSignal& r, double T, double dt) {
  return SampledSignal::tabulate(0, dt, SampledSignal::points_for(0, T, dt), [r](double t) {
    return r.amp * std::sin(r.omega * t + r.phase) + r.decay_amp * std::exp(-r.decay * t) +
           r.chirp * std::sin(0.005 * t * t);
  });
}

std::vector<RandomSignal> family(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<RandomSignal> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({0.5 + U(rng), 0.5 + 1.5 * U(rng), 2 * kPi * U(rng), U(rng) < 0.5 ? 0.0 : 2 * U(rng),
                   0.2 + U(rng), U(rng) < 0.3 ? 0.5 : 0.0});
  }
  return out;
}

Thresholds default_thresholds() {
  Thresholds th;
  th.epsilon_grid = {0.05, 0.1};
  th.tau = TauCandidates::uniform(0.05, 20.0, 0.05, true);
  th.tau.min_tail = 10.0;
  return th;
}

}  // namespace

TEST_CASE("classify flag implications hold on a random family") {
  const auto th = default_thresholds();
  for (const auto& r : family(12, 42)) {
    const auto rep = classify(make(r, 200, 0.02), th);
    if (rep.flags.ap) CHECK(rep.flags.aap);
    if (rep.flags.aap) CHECK(rep.flags.rap);
    if (rep.flags.remotely_tau_periodic) CHECK(rep.flags.rap);
    if (rep.flags.remotely_stationary) CHECK(rep.flags.remotely_tau_periodic);
    for (const auto& ev : rep.evidence) {
      if (ev.ap) CHECK(ev.aap);
      if (ev.aap) CHECK(ev.rap);
      for (const auto* ts : {&ev.global, &ev.tail, &ev.remote}) {
        for (const auto& e : ts->entries) {
          if (e.accepted) {
            CHECK(e.tail_sup < ev.epsilon);
            REQUIRE(e.L.has_value());
            CHECK(*e.L >= rep.window.a);
            CHECK(*e.L <= rep.window.b);
          }
        }
        CHECK(ts->max_gap == accepted_max_gap(ts->entries, ts->scan_range));
      }
    }
  }
}

TEST_CASE("accepted sets grow with epsilon and L shrinks") {
  const auto cands = TauCandidates::uniform(0.1, 20.0, 0.1);
  for (const auto& r : family(6, 7)) {
    const auto s = make(r, 200, 0.02);
    const double eps[] = {0.02, 0.05, 0.1, 0.3};
    for (int k = 0; k + 1 < 4; ++k) {
      const auto g1 = translation_set_global(s, eps[k], s.domain(), cands);
      const auto g2 = translation_set_global(s, eps[k + 1], s.domain(), cands);
      const auto r1 = translation_set_remote(s, eps[k], cands);
      const auto r2 = translation_set_remote(s, eps[k + 1], cands);
      for (std::size_t i = 0; i < cands.taus.size(); ++i) {
        if (g1.entries[i].accepted) CHECK(g2.entries[i].accepted);
        if (r1.entries[i].accepted) {
          CHECK(r2.entries[i].accepted);
          CHECK(*r2.entries[i].L <= *r1.entries[i].L);
        }
        // Global acceptance implies remote acceptance from the window start.
        if (g1.entries[i].accepted) {
          CHECK(r1.entries[i].accepted);
          CHECK(*r1.entries[i].L == s.t0());
        }
      }
    }
  }
}

TEST_CASE("rap with Lagrange stability gives an equi-AP omega-limit sample") {
  Thresholds th;
  th.epsilon_grid = {0.05, 0.1};
  th.tau = TauCandidates::uniform(0.05, 20.0, 0.05, true);
  const double dt = 0.01;
  for (auto f : {+[](double t) { return std::sin(t) + std::exp(-t); },
                 +[](double t) { return std::cos(2 * t) + 1.0 / (1.0 + t); }}) {
    const auto s = SampledSignal::tabulate(0, dt, 30001, f);
    const auto rep = classify(s, th);
    REQUIRE(rep.flags.rap);
    REQUIRE(rep.flags.lagrange_stable_proxy);
    std::vector<double> shifts;
    for (int k = 0; k < 12; ++k) shifts.push_back(150.0 + 0.7 * k);
    const auto hull = omega_limit_sample(s, shifts, 100.0, 0.02);
    const auto eq = equi_ap_test(hull, th.epsilon_grid.back(), {0, 100}, TauCandidates::uniform(0.05, 25, 0.05, true));
    CHECK(eq.equi_ap);
  }
}

TEST_CASE("remote tau-periodicity carries over to every hull member") {
  const auto s = SampledSignal::tabulate(0, 0.01, 50001, [](double t) { return std::sin(t) + 2.0 / (1.0 + t); });
  const std::vector<double> eps{0.02};
  const auto tp = remotely_tau_periodic_test(s, 2 * kPi, eps, 20.0);
  REQUIRE(tp.passed);
  std::vector<double> shifts;
  for (int k = 0; k < 10; ++k) shifts.push_back(*tp.table[0].L + 1.3 * k);
  const auto hull = omega_limit_sample(s, shifts, 60.0, 0.005);
  for (const auto& m : hull.members) {
    const auto moved = translate(m, 2 * kPi);
    CHECK(sup_distance(moved, m, moved.domain()) < eps[0]);
  }
}

TEST_CASE("cocycle identity on every catalog rhs") {
  const double tau = 2.3, t = 3.1, tol = 1e-10;
  for (const auto& e : catalog()) {
    if (e.kind != CatalogKind::Rhs || e.id == "growth") continue;
    CAPTURE(e.id);
    const auto rhs = catalog_rhs(e.id);
    const std::vector<double> x0(rhs.dim(), 0.4);
    const auto full = integrate(IVP{rhs, x0, {0, tau + t}, tol, tol * 1e-2, 0.001});
    const auto head = integrate(IVP{rhs, x0, {0, tau}, tol, tol * 1e-2, 0.001});
    const auto mid = head.at(head.size() - 1);
    const std::vector<double> shifts{tau};
    const auto tail = hull_solutions(rhs, shifts, {{mid.begin(), mid.end()}}, t, tol, tol * 1e-2, 0.001);
    const auto& sol = tail[0].solution;
    CHECK(sample_distance(sol, sol.size() - 1, full, full.size() - 1) <= 5 * tol * (1 + sup_norm(full)));
  }
  // Exponential growth: compare relative to the size of the solution.
  const auto g = catalog_rhs("growth");
  const auto full = integrate(IVP{g, {1.0}, {0, 5}, tol, tol * 1e-2, 0.001});
  CHECK(std::abs(full.value(full.size() - 1) - std::exp(5.0)) <= 5 * tol * std::exp(5.0) * 10);
}

TEST_CASE("condition (H) on a box implies the contraction bound for pairs in it") {
  const auto rhs = catalog_rhs("heq1_sin");
  ConditionHParams p;
  p.box_lo = {-3.0};
  p.box_hi = {3.0};
  std::vector<double> ts;
  for (int k = 0; k < 40; ++k) ts.push_back(0.25 * k);
  REQUIRE(condition_h_margin(rhs, p, ts).margin >= 0.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.5, 1.5);
  for (int k = 0; k < 10; ++k) {
    const double a = U(rng), b = U(rng);
    const auto s1 = integrate(IVP{rhs, {a}, {0, 40}, 1e-10, 1e-12, 0.01});
    const auto s2 = integrate(IVP{rhs, {b}, {0, 40}, 1e-10, 1e-12, 0.01});
    CHECK(contraction_bound_check(s1, s2, p.kappa, p.alpha).holds);
  }
}

TEST_CASE("fiber count is stable under halving the cluster tolerance") {
  const std::vector<double> shifts{0.0, 0.5, 1.7};
  const auto sols = hull_solutions(catalog_rhs("heq1_sin"), shifts, {{-2.0}, {0.0}, {2.0}}, 200.0, 1e-9, 1e-11, 0.02);
  const auto a = fiber_count(sols, 150.0, 1e-4);
  const auto b = fiber_count(sols, 150.0, 5e-5);
  CHECK(a.m == 1);
  CHECK(b.m == a.m);
}

TEST_CASE("contracting rhs with remotely stationary forcing gives an asymptotically stationary solution") {
  const auto sol = integrate(IVP{catalog_rhs("rs_linear"), {3.0}, {0, 400}, 1e-10, 1e-12, 0.05});
  Thresholds th;
  th.epsilon_grid = {0.01};
  th.tau = TauCandidates::uniform(0.5, 20.0, 0.5);
  th.tau.min_tail = 20.0;
  const auto rep = classify(sol, th);
  CHECK(rep.flags.remotely_stationary);
  CHECK(rep.flags.rap);
  // x -> c = 0.5 like 1/t.
  CHECK(std::abs(sol.value(sol.size() - 1) - 0.5) <= 1.1 / 400.0);
}

TEST_CASE("delay solver with lag 0 agrees with the ODE solver") {
  const auto dde = integrate_dde(catalog_delay("dde_linear_sin"), HistorySegment::constant(1.0, {0.7}), 20.0);
  const auto ode = integrate(IVP{catalog_rhs("linear_sin"), {0.7}, {0, 20}, 1e-10, 1e-12, 0.01});
  double worst = 0.0;
  for (std::size_t i = 0; i < dde.u.size(); ++i) {
    worst = std::max(worst, std::abs(dde.u.value(i) - ode.interpolate_value(dde.u.time(i))));
  }
  // RK4 on dt = 0.01 against a 1e-10 adaptive solution; the ODE output grid
  // adds linear interpolation error of at most dt_ode^2 / 8.
  CHECK(worst <= 10 * 1e-9 + ode.dt() * ode.dt() / 8);
}

TEST_CASE("segment distance dominates endpoint distance") {
  const auto u = integrate_dde(catalog_delay("dde_rap"), HistorySegment::constant(1.0, {0.5}), 60.0).u;
  const auto v = integrate_dde(catalog_delay("dde_rap"), HistorySegment::constant(1.0, {-1.0}), 60.0).u;
  const std::vector<double> times{1.0, 7.5, 30.0, 59.0};
  const auto su = segment_trajectory(u, 1.0, times);
  const auto sv = segment_trajectory(v, 1.0, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto i = u.nearest_index(times[k]);
    CHECK(segment_distance(su[k], sv[k]) >= std::abs(u.value(i) - v.value(i)));
    CHECK(su[k].samples.value(su[k].samples.size() - 1) == u.value(i));
  }
}

TEST_CASE("maps: exact iteration and integer-tau recurrence") {
  const std::vector<double> x{0.3};
  const auto a = iterate(catalog_map("affine_sin"), x, 500);
  const auto b = iterate(catalog_map("affine_sin"), x, 500);
  CHECK(a.data() == b.data());

  // Remotely stationary forcing c + 1/(1+t): fixed point 2c.
  const std::vector<long> shifts{0, 3};
  const auto fc = discrete_fiber_count(catalog_map("affine_rs"), shifts, {{-4.0}, {4.0}}, 3000, 2000, 1e-6, 4);
  CHECK(fc.m == 1);
  CHECK(fc.period == 1);
  const auto& rep = fc.representatives[0][0];
  CHECK(std::abs(rep.value(rep.size() - 1) - 1.0) <= 1e-3);

  // sin(n + ln(1+n)) on the integers: rap through integer translations near 2 pi k.
  const auto s = SampledSignal::tabulate(0, 1.0, 40001, [](double n) { return std::sin(n + std::log1p(n)); });
  Thresholds th;
  th.epsilon_grid = {0.2};
  th.tau = TauCandidates::integers(1, 400);
  th.tau.min_tail = 100.0;
  const auto r = classify(s, th);
  CHECK(r.flags.rap);
  for (double tau : r.evidence[0].remote.accepted_taus()) {
    CHECK(tau == std::round(tau));
    CHECK(2 * std::abs(std::sin(tau / 2)) < 0.2);
  }
}
