#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "raplab/error.hpp"
#include "raplab/signal.hpp"
#include "raplab/signal_io.hpp"

using namespace raplab;

namespace {

SampledSignal sin_on(double a, double b, double dt, double phase = 0.0) {
  const auto n = SampledSignal::points_for(a, b, dt);
  return SampledSignal::tabulate(a, dt, n, [phase](double t) { return std::sin(t + phase); });
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

TEST_CASE("construction rejects bad input") {
  CHECK(code_of([] { SampledSignal::scalar(0.0, 0.0, {1.0}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { SampledSignal::scalar(0.0, 0.1, {}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { SampledSignal::scalar(0.0, 0.1, {1.0, NAN}); }) == ErrorCode::NonFiniteValue);
  CHECK(code_of([] { SampledSignal::scalar(0.0, 0.1, {INFINITY}); }) == ErrorCode::NonFiniteValue);
}

TEST_CASE("domain is derived from t0, dt and length") {
  const auto s = SampledSignal::scalar(2.0, 0.5, {1, 2, 3, 4, 5});
  CHECK(s.domain().a == 2.0);
  CHECK(s.domain().b == doctest::Approx(4.0));
}

TEST_CASE("translate") {
  SUBCASE("identity") {
    const auto s = sin_on(0, 10, 0.01);
    const auto t = translate(s, 0.0);
    CHECK(t.size() == s.size());
    CHECK(sup_distance(s, t, s.domain()) == 0.0);
  }
  SUBCASE("sin is 2pi-periodic up to interpolation error") {
    const auto s = sin_on(0, 100, 0.001);
    const auto t = translate(s, 2 * std::numbers::pi);
    CHECK(sup_distance(t, s, {0, 50}) <= 1e-5);
  }
  SUBCASE("shift beyond the span") {
    const auto s = sin_on(0, 10, 0.01);
    CHECK(code_of([&] { translate(s, 11.0); }) == ErrorCode::EmptyDomain);
  }
  SUBCASE("negative shift is rejected") {
    const auto s = sin_on(0, 10, 0.01);
    CHECK(code_of([&] { translate(s, -1.0); }) == ErrorCode::InvalidArgument);
  }
  SUBCASE("off-grid shift interpolates linearly") {
    const auto s = SampledSignal::scalar(0.0, 1.0, {0, 10, 20, 30});
    const auto t = translate(s, 0.25);
    CHECK(t.value(0) == doctest::Approx(2.5));
    CHECK(t.value(1) == doctest::Approx(12.5));
  }
}

TEST_CASE("sup_distance") {
  const auto s = sin_on(0, 10, 0.01);
  CHECK(sup_distance(s, s, {0, 10}) == 0.0);

  const double dt = 2 * std::numbers::pi / 20000;
  const auto a = sin_on(0, 2 * std::numbers::pi, dt);
  const auto b = sin_on(0, 2 * std::numbers::pi, dt, std::numbers::pi);
  CHECK(sup_distance(a, b, a.domain()) == doctest::Approx(2.0).epsilon(1e-5));

  const auto c3 = SampledSignal::tabulate(0, 0.1, 50, [](double) { return 3.0; });
  const auto c1 = SampledSignal::tabulate(0, 0.1, 50, [](double) { return 1.0; });
  CHECK(sup_distance(c3, c1, {1, 2}) == 2.0);

  const auto v2 = SampledSignal(0, 0.1, 2, false, std::vector<double>(20, 0.0));
  CHECK(code_of([&] { sup_distance(c3, v2, {0, 0.5}); }) == ErrorCode::DimMismatch);
  CHECK(code_of([&] { sup_distance(c3, c1, {0, 50}); }) == ErrorCode::WindowOutOfDomain);
}

TEST_CASE("tail_sup_distance") {
  const auto e = SampledSignal::tabulate(0, 0.001, 20001, [](double t) { return std::exp(-t); });
  const auto z = SampledSignal::tabulate(0, 0.001, 20001, [](double) { return 0.0; });
  CHECK(std::abs(tail_sup_distance(e, z, 10.0) - std::exp(-10.0)) <= 1e-6);
  CHECK(tail_sup_distance(e, e, 3.0) == 0.0);

  const auto s = sin_on(0, 200, 0.001);
  const auto z2 = SampledSignal::tabulate(0, 0.001, s.size(), [](double) { return 0.0; });
  for (double L : {0.0, 17.3, 120.0}) CHECK(tail_sup_distance(s, z2, L) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("d_infinity_estimate") {
  const auto s = sin_on(0, 100, 0.001);
  CHECK(d_infinity_estimate(s, s, 0.25) == 0.0);
  const auto s2 = SampledSignal::tabulate(0, 0.001, s.size(), [](double t) { return std::sin(t) + std::exp(-t); });
  CHECK(d_infinity_estimate(s, s2, 0.25) <= 1e-6);
  const auto c = SampledSignal::tabulate(0, 0.001, s.size(), [](double t) { return std::cos(t); });
  CHECK(d_infinity_estimate(s, c, 0.25) == doctest::Approx(std::numbers::sqrt2).epsilon(1e-3));
}

TEST_CASE("segment extracts a rebased piece") {
  const auto s = SampledSignal::tabulate(0, 0.5, 21, [](double t) { return t; });
  const auto seg = segment(s, 2.0, 3.0);
  CHECK(seg.t0() == 0.0);
  CHECK(seg.size() == 7);
  CHECK(seg.value(0) == doctest::Approx(2.0));
  CHECK(seg.value(6) == doctest::Approx(5.0));
  CHECK(code_of([&] { segment(s, 8.0, 3.0); }) == ErrorCode::DomainTooShort);
}

TEST_CASE("grid compatibility") {
  const auto a = sin_on(0, 10, 0.1);
  const auto b = sin_on(0.05, 10, 0.1);
  const auto c = sin_on(1.0, 10, 0.1);
  CHECK_FALSE(same_grid(a, b));
  CHECK(same_grid(a, c));
  CHECK(code_of([&] { sup_distance(a, b, {1, 2}); }) == ErrorCode::GridMismatch);
}

TEST_CASE("properties: translation composes, sup_distance is a metric, tails shrink") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 5.0);
  const double dt = 0.01;
  const auto s = SampledSignal::tabulate(0, dt, 4001, [](double t) { return std::sin(t) + 0.5 * std::cos(3.1 * t); });
  for (int k = 0; k < 25; ++k) {
    const double a = U(rng), b = U(rng);
    const auto ab = translate(translate(s, a), b);
    const auto sum = translate(s, a + b);
    const Window w = common_domain(ab, sum);
    // Linear interpolation error per application: h^2 / 8 * max|s''| (here <= 5.81).
    const double interp = dt * dt / 8 * 5.81;
    CHECK(sup_distance(ab, sum, w) <= 2 * interp * 2 + 1e-12);
  }
  const auto f = sin_on(0, 40, dt);
  const auto g = sin_on(0, 40, dt, 0.7);
  const auto h = SampledSignal::tabulate(0, dt, f.size(), [](double t) { return 0.3 * std::cos(2 * t); });
  const Window w{0, 40};
  CHECK(sup_distance(f, g, w) == sup_distance(g, f, w));
  CHECK(sup_distance(f, h, w) <= sup_distance(f, g, w) + sup_distance(g, h, w));
  double prev = INFINITY;
  for (double L = 0; L < 39; L += 1.3) {
    const double d = tail_sup_distance(f, h, L);
    CHECK(d <= prev);
    prev = d;
  }
  for (double rho : {0.1, 0.5, 1.0}) CHECK(d_infinity_estimate(f, h, rho) <= sup_distance(f, h, w));
}

TEST_CASE("csv round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "raplab_test_signal";
  std::filesystem::create_directories(dir);
  const auto real = SampledSignal(1.5, 0.25, 2, false, {1, 2, 3, 4, 5, 6}, "pair");
  write_signal_csv(dir / "real.csv", real);
  const auto back = read_signal_csv(dir / "real.csv");
  CHECK(back.dim() == 2);
  CHECK(back.label() == "pair");
  CHECK(back.t0() == 1.5);
  CHECK(back.data() == real.data());

  const auto cx = SampledSignal::tabulate_complex(0, 0.1, 11, [](double t) { return std::polar(1.0, t); }, "z");
  write_signal_csv(dir / "cx.csv", cx);
  const auto cb = read_signal_csv(dir / "cx.csv");
  CHECK(cb.is_complex());
  CHECK(cb.data() == cx.data());

  {
    std::FILE* f = std::fopen((dir / "bad.csv").c_str(), "w");
    std::fputs("t,v0\n0,1\n0.1,1\n0.25,1\n", f);
    std::fclose(f);
  }
  CHECK(code_of([&] { read_signal_csv(dir / "bad.csv"); }) == ErrorCode::ParseError);
  std::filesystem::remove_all(dir);
}
