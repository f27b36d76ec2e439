#include <doctest.h>

#include <cmath>
#include <numbers>

#include "raplab/error.hpp"
#include "raplab/recurrence.hpp"

using namespace raplab;

namespace {

constexpr double kPi = std::numbers::pi;

SampledSignal tab(double a, double b, double dt, double (*f)(double)) {
  return SampledSignal::tabulate(a, dt, SampledSignal::points_for(a, b, dt), f);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("candidate factories") {
  const auto u = TauCandidates::uniform(0.5, 2.0, 0.5);
  CHECK(u.taus == std::vector<double>{0.5, 1.0, 1.5, 2.0});
  CHECK(u.max_tau() == 2.0);
  const auto i = TauCandidates::integers(1, 4);
  CHECK(i.taus.size() == 4);
  CHECK(i.step == 1.0);
  const std::vector<double> extra{1.25, 1.0, 7.0};
  const auto w = u.with_extra(extra);
  CHECK(w.taus == std::vector<double>{0.5, 1.0, 1.25, 1.5, 2.0, 7.0});
}

TEST_CASE("accepted_max_gap counts boundary gaps") {
  std::vector<TranslationEntry> es{{1.0, false, {}, 1}, {2.0, true, 0.0, 0}, {5.0, true, 0.0, 0}, {6.0, false, {}, 1}};
  CHECK(accepted_max_gap(es, {0, 6}) == 3.0);
  std::vector<TranslationEntry> none{{1.0, false, {}, 1}};
  CHECK(std::isinf(accepted_max_gap(none, {0, 6})));
}

TEST_CASE("global translation set of sin matches 2|sin(tau/2)| < eps") {
  const auto s = tab(0, 200, 0.01, [](double t) { return std::sin(t); });
  const double eps = 0.1;
  const auto cands = TauCandidates::uniform(0.05, 20.0, 0.05);
  const auto ts = translation_set_global(s, eps, s.domain(), cands);
  REQUIRE(ts.entries.size() == cands.taus.size());
  int checked = 0;
  for (const auto& e : ts.entries) {
    const double exact = 2 * std::abs(std::sin(e.tau / 2));
    // Skip the boundary band where grid and interpolation error can flip the answer.
    if (std::abs(exact - eps) < 2e-3) continue;
    CHECK(e.accepted == (exact < eps));
    if (e.accepted) CHECK(e.tail_sup == doctest::Approx(exact).epsilon(1e-2));
    ++checked;
  }
  CHECK(checked > 380);
  CHECK(ts.relatively_dense(3.0));
  CHECK(ts.max_gap <= 2 * kPi + 0.2);

  CHECK(code_of([&] { translation_set_global(s, eps, {0, 300}, cands); }) == ErrorCode::WindowOutOfDomain);
  CHECK(code_of([&] { translation_set_global(s, eps, {0, 50}, cands); }) == ErrorCode::WindowTooShort);
}

TEST_CASE("refinement searches near-miss runs without an acceptance") {
  // At eps = 0.15 the grid points 6.0 and 6.5 are near misses (0.28, 0.22 < 2 eps)
  // but neither is accepted; bisection must reach the band |tau - 2 pi| < 0.15.
  const auto s = tab(0, 200, 0.001, [](double t) { return std::sin(t); });
  const auto coarse = TauCandidates::uniform(0.5, 10.0, 0.5);
  CHECK(translation_set_global(s, 0.15, s.domain(), coarse).accepted_taus().empty());
  auto refined = coarse;
  refined.refine = true;
  const auto ts = translation_set_global(s, 0.15, s.domain(), refined);
  const auto acc = ts.accepted_taus();
  REQUIRE_FALSE(acc.empty());
  for (double tau : acc) CHECK(2 * std::abs(std::sin(tau / 2)) < 0.15);
  CHECK(ts.entries.size() > coarse.taus.size());
}

TEST_CASE("remote L for a decaying exponential") {
  // |e^{-(t+tau)} - e^{-t}| = e^{-t} (1 - e^{-tau}) < eps  iff  t > ln((1 - e^{-tau}) / eps).
  const double dt = 0.01;
  const auto s = tab(0, 60, dt, [](double t) { return std::exp(-t); });
  const double eps = 0.01;
  const auto ts = translation_set_remote(s, eps, TauCandidates::uniform(0.5, 10.0, 0.5));
  for (const auto& e : ts.entries) {
    REQUIRE(e.accepted);
    REQUIRE(e.L.has_value());
    const double oracle = std::max(0.0, std::log((1 - std::exp(-e.tau)) / eps));
    CHECK(std::abs(*e.L - oracle) <= dt + 1e-9);
    CHECK(e.tail_sup < eps);
  }
  CHECK(ts.max_gap == doctest::Approx(0.5));
}

TEST_CASE("remote test rejects when the residual tail is too short") {
  const auto s = tab(0, 30, 0.01, [](double t) { return std::exp(-t); });
  auto cands = TauCandidates::uniform(1.0, 5.0, 1.0);
  cands.min_tail = 100.0;
  const auto ts = translation_set_remote(s, 0.1, cands);
  CHECK(ts.accepted_taus().empty());
  CHECK(std::isinf(ts.max_gap));
  CHECK(code_of([&] { translation_set_remote(s, 0.1, TauCandidates::uniform(1.0, 10.0, 1.0)); }) ==
        ErrorCode::DomainTooShort);
}

TEST_CASE("remote tau-periodicity of sin(t) + 1/(1+t)") {
  const auto s = tab(0, 2000, 0.01, [](double t) { return std::sin(t) + 1.0 / (1.0 + t); });
  const std::vector<double> eps{0.01, 0.05};
  const auto r = remotely_tau_periodic_test(s, 2 * kPi, eps, 10.0);
  CHECK(r.passed);
  REQUIRE(r.table.size() == 2);
  for (const auto& row : r.table) {
    REQUIRE(row.L.has_value());
    // tau / ((1+t)(1+t+tau)) < eps, plus interpolation slack on sin.
    const double tau = 2 * kPi;
    const double oracle = (-(2 + tau) + std::sqrt(tau * tau + 4 * tau / row.epsilon)) / 2;
    CHECK(*row.L == doctest::Approx(oracle).epsilon(0.02));
  }
  CHECK_FALSE(remotely_tau_periodic_test(s, 3.0, eps).passed);
}

TEST_CASE("remote stationarity") {
  const auto slow = tab(0, 4000, 0.05, [](double t) { return 1.0 / (1.0 + t); });
  const std::vector<double> eps{0.01};
  CHECK(remotely_stationary_test(slow, TauCandidates::uniform(0.5, 10, 0.5), eps));
  const auto osc = tab(0, 400, 0.05, [](double t) { return std::sin(t); });
  CHECK_FALSE(remotely_stationary_test(osc, TauCandidates::uniform(0.5, 10, 0.5), eps));
}

TEST_CASE("omega-limit sample clusters translates") {
  const auto s = tab(0, 100, 0.01, [](double t) { return std::sin(t); });
  const std::vector<double> shifts{10.0, 10.0 + 2 * kPi, 10.0 + kPi, 10.0 + 4 * kPi, 10.0 + 3 * kPi};
  const auto h = omega_limit_sample(s, shifts, 20.0, 0.05);
  REQUIRE(h.size() == 2);
  CHECK(h.dist[0][1] == doctest::Approx(2.0).epsilon(1e-3));
  CHECK(h.dist[0][0] == 0.0);
  CHECK(code_of([&] { omega_limit_sample(s, std::vector<double>{90.0}, 20.0, 0.05); }) == ErrorCode::DomainTooShort);
}

TEST_CASE("aap decomposition of sin(t) + e^{-t}") {
  const auto s = tab(0, 200, 0.01, [](double t) { return std::sin(t) + std::exp(-t); });
  std::vector<double> shifts;
  for (int k = 0; k < 20; ++k) shifts.push_back(100.0 + 0.5 * k);
  // Members must be long enough to show relative density of 2 pi k up to 20.
  const auto hull = omega_limit_sample(s, shifts, 80.0, 0.05);
  const auto ap = TauCandidates::uniform(0.05, 20.0, 0.05, true);
  const auto r = aap_test(s, hull, 0.05, ap, 0.75);
  CHECK(r.aap);
  CHECK(r.residual < 1e-3);

  const auto chirp = tab(0, 200, 0.01, [](double t) { return std::sin(0.01 * t * t); });
  const auto bad = omega_limit_sample(chirp, std::vector<double>{100.0}, 80.0, 0.05);
  CHECK(code_of([&] { aap_test(chirp, bad, 0.05, ap, 0.75); }) == ErrorCode::HullNotAP);
}

TEST_CASE("equi-AP and minimality for translates of sin") {
  const auto s = tab(0, 200, 0.01, [](double t) { return std::sin(t); });
  std::vector<double> shifts{0.0, 1.0, 2.5, 4.0};
  const auto hull = omega_limit_sample(s, shifts, 100.0, 0.05);
  CHECK(hull.size() == 4);
  const auto eq = equi_ap_test(hull, 0.1, {0, 100}, TauCandidates::uniform(0.05, 20, 0.05, true));
  CHECK(eq.equi_ap);
  CHECK(eq.common.find(2 * kPi, 0.06) != nullptr);

  const auto mt = minimality_test(hull, 0.05, 2 * kPi + 0.1, 50.0);
  CHECK(mt.consistent);
  CHECK(mt.worst_distance < 0.05);

  const auto zero = SampledSignal::tabulate(0, 0.01, hull.members[0].size(), [](double) { return 0.0; });
  const auto mixed = make_hull({hull.members[0], zero}, {0.0, 1.0});
  const auto mm = minimality_test(mixed, 0.05, 2 * kPi, 50.0);
  CHECK_FALSE(mm.consistent);
  CHECK(mm.worst_distance >= 0.05);
  CHECK(code_of([&] { minimality_test(mixed, 0.05, 80, 50); }) == ErrorCode::WindowTooShort);
}

TEST_CASE("lagrange proxy") {
  CHECK(lagrange_stability_proxy(tab(0, 100, 0.01, [](double t) { return std::sin(t); })).passed);
  CHECK_FALSE(lagrange_stability_proxy(tab(0, 100, 0.01, [](double t) { return t; })).passed);
  // Increments of sin(t^2) reach 2 t dt = 2 at t = 100.
  CHECK_FALSE(lagrange_stability_proxy(tab(0, 100, 0.01, [](double t) { return std::sin(t * t); })).passed);
}

TEST_CASE("classify") {
  Thresholds th;
  th.epsilon_grid = {0.05, 0.1};
  th.tau = TauCandidates::uniform(0.05, 20.0, 0.05, true);
  // Without a minimum tail a chirp matches its own phase on the last few samples.
  th.tau.min_tail = 20.0;

  SUBCASE("sin is almost periodic") {
    const auto r = classify(tab(0, 200, 0.01, [](double t) { return std::sin(t); }), th);
    CHECK(r.flags.ap);
    CHECK(r.flags.aap);
    CHECK(r.flags.rap);
    CHECK(r.flags.remotely_tau_periodic);
    REQUIRE(r.flags.tau.has_value());
    CHECK(*r.flags.tau == doctest::Approx(2 * kPi).epsilon(0.01));
    CHECK_FALSE(r.flags.remotely_stationary);
    CHECK(r.flags.lagrange_stable_proxy);
    CHECK(r.evidence.size() == 2);
  }
  SUBCASE("a transient breaks AP but not AAP") {
    const auto r = classify(tab(0, 200, 0.01, [](double t) { return std::sin(t) + std::exp(-t); }), th);
    CHECK_FALSE(r.flags.ap);
    CHECK(r.flags.aap);
    CHECK(r.flags.rap);
  }
  SUBCASE("a chirp is not recurrent") {
    const auto r = classify(tab(0, 200, 0.01, [](double t) { return std::sin(0.01 * t * t); }), th);
    CHECK_FALSE(r.flags.ap);
    CHECK_FALSE(r.flags.aap);
    CHECK_FALSE(r.flags.rap);
    CHECK_FALSE(r.flags.remotely_tau_periodic);
  }
  SUBCASE("a constant is remotely stationary") {
    const auto r = classify(tab(0, 200, 0.01, [](double) { return 0.3; }), th);
    CHECK(r.flags.remotely_stationary);
    CHECK(r.flags.ap);
  }
  SUBCASE("domain too short") {
    CHECK(code_of([&] { classify(tab(0, 60, 0.01, [](double t) { return std::sin(t); }), th); }) ==
          ErrorCode::DomainTooShort);
  }
  SUBCASE("bad thresholds") {
    th.epsilon_grid = {0.1, 0.05};
    CHECK(code_of([&] { classify(tab(0, 200, 0.01, [](double t) { return t; }), th); }) ==
          ErrorCode::InvalidArgument);
  }
}

TEST_CASE("two-sided remote sets agree") {
  const auto s = tab(-30, 300, 0.01, [](double t) { return std::sin(t) + 1.0 / (1.0 + t * t); });
  CHECK(thap4_equivalence_check(s, 0.05, TauCandidates::uniform(0.1, 20.0, 0.1)));
  const auto one = tab(0, 300, 0.01, [](double t) { return std::sin(t) + std::exp(-t); });
  CHECK(thap4_equivalence_check(one, 0.05, TauCandidates::uniform(0.1, 20.0, 0.1)));
}

TEST_CASE("equi-AP: simultaneous approximation for sin t and sin(sqrt3 t)") {
  // Joint acceptance needs |tau mod 2 pi| and |sqrt3 tau mod 2 pi| both small;
  // scanning near 2 pi k only keeps this cheap.
  const double dt = 0.01, eps = 0.01;
  const auto a = tab(0, 16000, dt, [](double t) { return std::sin(t); });
  const auto b = tab(0, 16000, dt, [](double t) { return std::sin(std::sqrt(3.0) * t); });
  const auto hull = make_hull({a, b}, {0.0, 0.0});
  std::vector<double> taus;
  for (int k = 1; 2 * kPi * k < 4000.0; ++k) {
    for (int j = -20; j <= 20; ++j) taus.push_back(2 * kPi * k + 0.0005 * j);
  }
  taus.push_back(4000.0);
  const auto cands = TauCandidates::list(taus, 0.0005);
  const auto r = equi_ap_test(hull, eps, {0, 16000}, cands);

  // Brute-force oracle: sup over t of the member differences is known in closed form.
  auto joint = [](double tau) {
    return std::max(2 * std::abs(std::sin(tau / 2)), 2 * std::abs(std::sin(std::sqrt(3.0) * tau / 2)));
  };
  int agree = 0, total = 0;
  for (const auto& e : r.common.entries) {
    const double exact = joint(e.tau);
    if (std::abs(exact - eps) < 5e-4) continue;
    ++total;
    agree += e.accepted == (exact < eps) ? 1 : 0;
  }
  CHECK(agree == total);
  CHECK(r.common.accepted_taus().size() >= 3);
  CHECK(r.equi_ap);
}

TEST_CASE("equi-AP and minimality edge cases") {
  const auto zero = tab(0, 100, 0.01, [](double) { return 0.0; });
  const auto z = equi_ap_test(make_hull({zero}, {0.0}), 0.01, {0, 100}, TauCandidates::uniform(0.5, 20, 0.5));
  CHECK(z.common.accepted_taus().size() == z.common.entries.size());
  CHECK(minimality_test(make_hull({zero}, {0.0}), 0.01, 5, 50).consistent);

  // Constants picked out of sin(ln(1+t)) are separate invariant sets.
  const auto c1 = tab(0, 100, 0.01, [](double) { return 0.3; });
  const auto c2 = tab(0, 100, 0.01, [](double) { return -0.7; });
  CHECK_FALSE(minimality_test(make_hull({c1, c2}, {0.0, 1.0}), 0.05, 10, 50).consistent);
}

TEST_CASE("classify e^{-t}") {
  Thresholds th;
  th.epsilon_grid = {0.05};
  th.tau = TauCandidates::uniform(0.05, 20.0, 0.05, true);
  const auto r = classify(tab(0, 200, 0.01, [](double t) { return std::exp(-t); }), th);
  CHECK_FALSE(r.flags.ap);
  CHECK(r.flags.aap);
  CHECK(r.flags.rap);
  CHECK(r.flags.remotely_stationary);
}

TEST_CASE("two-sided check on drifting, quasi-periodic and constant signals") {
  const auto cands = TauCandidates::uniform(0.1, 20.0, 0.1);
  CHECK(thap4_equivalence_check(tab(0, 300, 0.01, [](double t) { return std::sin(t + std::log1p(t)); }), 0.1, cands));
  CHECK(thap4_equivalence_check(tab(-40, 300, 0.01, [](double t) { return std::sin(t) + std::sin(std::sqrt(2.0) * t); }),
                                0.1, cands));
  CHECK(thap4_equivalence_check(tab(-40, 300, 0.01, [](double) { return 1.0; }), 0.1, cands));
}

TEST_CASE("classify: a drifting phase is rap but not aap") {
  Thresholds th;
  th.epsilon_grid = {0.05};
  th.tau = TauCandidates::uniform(0.05, 200.0, 0.05, true);
  th.tau.min_tail = 20.0;
  const auto r = classify(tab(0, 4000, 0.05, [](double t) { return std::sin(t + std::log1p(t)); }), th);
  CHECK_FALSE(r.flags.ap);
  CHECK_FALSE(r.flags.aap);
  CHECK(r.flags.rap);
  CHECK(r.evidence[0].tail.scan_range.b == doctest::Approx(750.0));
  // The tail still tolerates the short translations.
  CHECK(r.evidence[0].tail.find(2 * std::numbers::pi, 0.05) != nullptr);
}
