#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "digest.hpp"
#include "experiment.hpp"
#include "raplab/catalog.hpp"
#include "raplab/error.hpp"
#include "raplab/polypath_io.hpp"
#include "runner.hpp"

using namespace raplab;
using namespace raplab::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("raplab_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string config_error(const json& cfg) {
  try {
    parse_experiment(cfg, ".");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    return e.what();
  }
  return "";
}

json ode_config() {
  return json::parse(R"({
    "schema": 1, "kind": "ode", "name": "t",
    "rhs": {"catalog": "heq1_sin"}, "x0": [0.5], "t_span": [0, 5], "max_step": 0.05
  })");
}

// Small, fast config exercising one catalog entry.
json smoke_config(const CatalogEntry& e) {
  const json zeros = json(std::vector<double>(e.dim, 0.1));
  switch (e.kind) {
    case CatalogKind::Forcing:
      return {{"schema", 1}, {"kind", "classify"}, {"name", e.id},
              {"signal", {{"catalog", e.id}, {"t0", 0}, {"t1", 40}, {"dt", 0.05}}},
              {"classify", {{"thresholds", {{"epsilon", {0.2}}, {"tau", {{"uniform", {0.5, 5, 0.5}}}}}}}}};
    case CatalogKind::Rhs:
      return {{"schema", 1}, {"kind", "ode"}, {"name", e.id}, {"rhs", {{"catalog", e.id}}},
              {"x0", zeros}, {"t_span", {0, 2}}, {"max_step", 0.05}};
    case CatalogKind::Map:
      return {{"schema", 1}, {"kind", "map"}, {"name", e.id}, {"map", {{"catalog", e.id}}},
              {"u0", zeros}, {"n_steps", 20}};
    case CatalogKind::Delay:
      return {{"schema", 1}, {"kind", "dde"}, {"name", e.id}, {"rhs", {{"catalog", e.id}}},
              {"history", zeros}, {"horizon", 5}, {"dt_hint", 0.05}};
  }
  return {};
}

}  // namespace

TEST_CASE("sha256 matches the published test vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  const auto dir = scratch("sha");
  std::ofstream(dir / "f.txt") << "abc";
  CHECK(sha256_file(dir / "f.txt") == sha256_hex("abc"));
}

TEST_CASE("every catalog entry runs from a config") {
  const auto root = scratch("catalog");
  for (const auto& e : catalog()) {
    CAPTURE(e.id);
    const auto ex = parse_experiment(smoke_config(e), ".");
    const auto res = run_experiment(ex, root);
    CHECK(res.passed);
    CHECK(res.manifest["status"] == "pass");
    for (const auto& a : res.manifest["artifacts"]) {
      CHECK(sha256_file(res.dir / a["path"].get<std::string>()) == a["sha256"].get<std::string>());
    }
    CHECK(fs::exists(res.dir / "report.json"));
    CHECK(fs::exists(res.dir / "config.json"));
  }
}

TEST_CASE("config errors name the offending key") {
  auto cfg = ode_config();
  cfg.erase("rhs");
  CHECK(config_error(cfg).find("'rhs'") != std::string::npos);

  cfg = ode_config();
  cfg["rhs"]["catalog"] = "affine_alt";
  CHECK(config_error(cfg).find("rhs.catalog") != std::string::npos);

  cfg = ode_config();
  cfg["rhs"] = {{"expressions", {"-x0 + sin("}}};
  CHECK(config_error(cfg).find("rhs.expressions") != std::string::npos);

  cfg = ode_config();
  cfg["x_0"] = 1;
  CHECK(config_error(cfg).find("x_0") != std::string::npos);

  cfg = ode_config();
  cfg["schema"] = 2;
  CHECK(config_error(cfg).find("schema") != std::string::npos);

  cfg = ode_config();
  cfg["kind"] = "pde";
  CHECK(config_error(cfg).find("unknown kind") != std::string::npos);

  cfg = ode_config();
  cfg["expect"] = {{{"path", "a"}, {"min", 1}, {"max", 2}}};
  CHECK(config_error(cfg).find("expect") != std::string::npos);
}

TEST_CASE("numbers accept constant expressions") {
  auto cfg = ode_config();
  cfg["t_span"] = {0, "2*pi"};
  const auto ex = parse_experiment(cfg, ".");
  CHECK(std::get<OdeRun>(ex.run).t_span.b == doctest::Approx(2 * std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("expectations: operators, wildcards and missing paths") {
  const ojson facts = ojson::parse(R"({"a": {"b": [1.0, 2.0, 3.0]}, "f": true, "rows": [{"x": 1}, {"x": 5}]})");
  auto exp = [](const std::string& path, Expectation::Op op, json v, double tol = 0.0) {
    return Expectation{path, op, std::move(v), tol};
  };
  const auto r = check_expectations({exp("a.b[1]", Expectation::Op::Approx, 2.05, 0.1),
                                     exp("a.b[*]", Expectation::Op::Max, 3.0),
                                     exp("rows[*].x", Expectation::Op::Min, 2.0),
                                     exp("f", Expectation::Op::Equals, true),
                                     exp("a.c", Expectation::Op::Equals, 1),
                                     exp("a.b[7]", Expectation::Op::Min, 0.0)},
                                    facts);
  REQUIRE(r.size() == 6);
  CHECK(r[0].passed);
  CHECK(r[1].passed);
  CHECK_FALSE(r[2].passed);
  CHECK(r[2].actual == json::parse("[1, 5]"));
  CHECK(r[3].passed);
  CHECK_FALSE(r[4].passed);
  CHECK(r[4].actual.is_null());
  CHECK_FALSE(r[5].passed);
}

TEST_CASE("runs are reproducible and failures are recorded") {
  auto cfg = ode_config();
  cfg["expect"] = {{{"path", "solution.x_end[0]"}, {"max", -100}}};
  const auto ex = parse_experiment(cfg, ".");
  const auto r1 = run_experiment(ex, scratch("repro1"));
  const auto r2 = run_experiment(ex, scratch("repro2"));
  CHECK_FALSE(r1.passed);
  CHECK(r1.manifest["status"] == "fail");
  CHECK(fs::exists(r1.dir / "failures.json"));
  CHECK(r1.dir.filename().string() == "t-" + ex.config_sha256.substr(0, 12));
  CHECK(r1.manifest["artifacts"] == r2.manifest["artifacts"]);
  CHECK(parse_experiment(cfg, ".").config_sha256 == ex.config_sha256);
}

TEST_CASE("output root: environment beats config beats default") {
  auto cfg = ode_config();
  auto ex = parse_experiment(cfg, "/base");
  ::unsetenv("RAPLAB_OUTPUT_ROOT");
  CHECK(output_root_for(ex) == fs::path("runs"));
  cfg["output_root"] = "out";
  ex = parse_experiment(cfg, "/base");
  CHECK(output_root_for(ex) == fs::path("/base/out"));
  ::setenv("RAPLAB_OUTPUT_ROOT", "/elsewhere", 1);
  CHECK(output_root_for(ex) == fs::path("/elsewhere"));
  ::unsetenv("RAPLAB_OUTPUT_ROOT");
}

TEST_CASE("roots from a polynomial path manifest") {
  const auto dir = scratch("polypath");
  const auto p = PolyPath::tabulate(0.0, 0.01, 2001,
                                    {[](double) { return cplx(0.0); },
                                     [](double t) { return cplx(-(3 + std::sin(t) + std::sin(std::sqrt(2.0) * t))); }},
                                    "quadratic");
  write_polypath(dir / "quad.json", p);
  const json cfg = {{"schema", 1},
                    {"kind", "roots"},
                    {"name", "from_file"},
                    {"polypath", "quad.json"},
                    {"separation_alpha", 1.9},
                    {"expect", {{{"path", "certificate.holds"}, {"equals", true}}}}};
  const auto ex = parse_experiment(cfg, dir);
  const auto res = run_experiment(ex, dir / "runs");
  CHECK(res.passed);
  // Branches of x^2 = p are +-sqrt p with p >= 1: separation 2 sqrt(min p).
  double min_p = INFINITY;
  for (std::size_t i = 0; i < p.size(); ++i) min_p = std::min(min_p, -p.coeffs[1].complex_value(i).real());
  const auto report = ojson::parse(std::ifstream(res.dir / "report.json"));
  CHECK(report["separation_min"].get<double>() == doctest::Approx(2 * std::sqrt(min_p)).epsilon(1e-9));

  auto bad = cfg;
  bad["t0"] = 0;
  CHECK(config_error(bad).find("t0") != std::string::npos);
}
