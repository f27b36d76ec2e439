#include <doctest.h>

#include <cmath>
#include <numbers>
#include <string>

#include "raplab/error.hpp"
#include "raplab/expr.hpp"

using namespace raplab;

namespace {

double ev(const std::string& src, std::vector<double> vals = {}, std::vector<std::string> names = {"x", "y"}) {
  vals.resize(names.size(), 0.0);
  return Expr::compile(src, names).eval(vals.data());
}

bool parse_fails(const std::string& src) {
  try {
    Expr::compile(src, {"x"});
  } catch (const Error& e) {
    return e.code() == ErrorCode::ParseError;
  }
  return false;
}

}  // namespace

TEST_CASE("arithmetic and precedence") {
  CHECK(ev("1 + 2 * 3") == 7.0);
  CHECK(ev("(1 + 2) * 3") == 9.0);
  CHECK(ev("2 ^ 3 ^ 2") == 512.0);  // right associative
  CHECK(ev("-2 ^ 2") == -4.0);
  CHECK(ev("2 * -x", {3.0}) == -6.0);
  CHECK(ev("8 / 4 / 2") == 1.0);
  CHECK(ev("1e-3 * 2.5E2") == doctest::Approx(0.25));
  CHECK(ev("x - y", {5.0, 7.0}) == -2.0);
}

TEST_CASE("functions and constants") {
  CHECK(ev("sin(pi / 2)") == doctest::Approx(1.0));
  CHECK(ev("cos(0)") == 1.0);
  CHECK(ev("ln(exp(2))") == doctest::Approx(2.0));
  CHECK(ev("log(1)") == 0.0);
  CHECK(ev("abs(-3)") == 3.0);
  CHECK(ev("sqrt(16)") == 4.0);
  CHECK(ev("pow(2, 10)") == 1024.0);
  CHECK(ev("norm(3, 4)") == 5.0);
  CHECK(ev("norm(x)", {-2.0}) == 2.0);
  CHECK(ev("pi") == std::numbers::pi);
}

TEST_CASE("slots take part in evaluation") {
  const auto e = Expr::compile("-abs(x)*x + sin(t)", {"t", "x"});
  const double v[] = {0.3, -1.5};
  CHECK(e.eval(v) == doctest::Approx(1.5 * 1.5 + std::sin(0.3)));
  CHECK(e.source() == "-abs(x)*x + sin(t)");
}

TEST_CASE("syntax errors") {
  CHECK(parse_fails(""));
  CHECK(parse_fails("1 +"));
  CHECK(parse_fails("(1 + 2"));
  CHECK(parse_fails("1 + 2)"));
  CHECK(parse_fails("z + 1"));
  CHECK(parse_fails("sin 1"));
  CHECK(parse_fails("foo(1)"));
  CHECK(parse_fails("pow(1)"));
  CHECK(parse_fails("1 $ 2"));
}

TEST_CASE("depth limit") {
  std::string ok = "x";
  for (int i = 1; i < Expr::kMaxDepth; ++i) ok = "sin(" + ok + ")";
  const auto e = Expr::compile(ok, {"x"});
  CHECK(e.depth() <= Expr::kMaxDepth);
  std::string deep = "x";
  for (int i = 0; i < Expr::kMaxDepth + 5; ++i) deep = "(" + deep + " + 1)";
  CHECK(parse_fails(deep));
}
