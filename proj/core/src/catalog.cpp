#include "raplab/catalog.hpp"

#include <cmath>
#include <numbers>

#include "raplab/error.hpp"

namespace raplab {

namespace {

using P = std::map<std::string, double>;

void check_params(const CatalogEntry& e, const P& over) {
  for (const auto& [k, v] : over) {
    if (!e.params.contains(k)) {
      throw Error(ErrorCode::ConfigError, "catalog entry '" + e.id + "' has no parameter '" + k + "'");
    }
  }
}

double param(const CatalogEntry& e, const P& over, const std::string& name) {
  const auto it = over.find(name);
  return it != over.end() ? it->second : e.params.at(name);
}

double rap_sin(double t) { return std::sin(t + std::log1p(t)); }

void require_kind(const CatalogEntry& e, CatalogKind k) {
  if (e.kind != k) {
    throw Error(ErrorCode::ConfigError,
                "catalog entry '" + e.id + "' is a " + std::string(to_string(e.kind)) + ", not a " +
                    std::string(to_string(k)));
  }
}

}  // namespace

std::string_view to_string(CatalogKind k) {
  switch (k) {
    case CatalogKind::Forcing: return "forcing";
    case CatalogKind::Rhs: return "rhs";
    case CatalogKind::Map: return "map";
    case CatalogKind::Delay: return "delay";
  }
  return "?";
}

double heq1_forcing(double t) {
  const double s = std::numbers::sqrt2 * t;
  return std::sin(t + std::log1p(t)) + std::sin(s + std::log1p(s));
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = {
      {"heq1_forcing", CatalogKind::Forcing, "sin(t + ln(1+t)) + sin(sqrt2 t + ln(1 + sqrt2 t))", 1, {}},
      {"rap_sin", CatalogKind::Forcing, "sin(t + ln(1+t))", 1, {}},
      {"qp_sin", CatalogKind::Forcing, "sin t + sin(sqrt2 t)", 1, {}},
      {"sin", CatalogKind::Forcing, "sin t", 1, {}},
      {"rs_const", CatalogKind::Forcing, "c + 1/(1+t)", 1, {{"c", 0.5}}},
      {"zhikov_surrogate", CatalogKind::Forcing, "2 + sin t + sin(sqrt2 t)", 1, {}},
      {"alt_sign", CatalogKind::Forcing, "cos(pi t)  ((-1)^t on the integers)", 1, {}},
      {"zero_forcing", CatalogKind::Forcing, "0", 1, {}},

      {"heq1", CatalogKind::Rhs, "x' = -|x| x + heq1_forcing(t)", 1, {}},
      {"heq1_sin", CatalogKind::Rhs, "x' = -|x| x + sin t", 1, {}},
      {"abs_damped", CatalogKind::Rhs, "x' = -|x| x", 1, {}},
      {"linear_sin", CatalogKind::Rhs, "x' = -x + sin t", 1, {}},
      {"rs_linear", CatalogKind::Rhs, "x' = -x + c + 1/(1+t)", 1, {{"c", 0.5}}},
      {"decay", CatalogKind::Rhs, "x' = -k x", 1, {{"k", 1.0}}},
      {"growth", CatalogKind::Rhs, "x' = x", 1, {}},
      {"zero", CatalogKind::Rhs, "x' = 0", 1, {}},

      {"halve", CatalogKind::Map, "u(t+1) = u(t) / 2", 1, {}},
      {"increment", CatalogKind::Map, "u(t+1) = u(t) + 1", 1, {}},
      {"affine_sin", CatalogKind::Map, "u(t+1) = a u(t) + sin t", 1, {{"a", 0.5}}},
      {"affine_rs", CatalogKind::Map, "u(t+1) = a u(t) + c + 1/(1+t)", 1, {{"a", 0.5}, {"c", 0.5}}},
      {"affine_alt", CatalogKind::Map, "u(t+1) = a u(t) + (-1)^t", 1, {{"a", 0.5}}},
      {"flip", CatalogKind::Map, "u(t+1) = -u(t)", 1, {}},

      {"dde_lag_decay", CatalogKind::Delay, "u'(t) = -u(t - r)", 1, {{"r", 1.0}}},
      {"dde_decay", CatalogKind::Delay, "u'(t) = -u(t)", 1, {{"r", 1.0}}},
      {"dde_linear_sin", CatalogKind::Delay, "u'(t) = -u(t) + sin t", 1, {{"r", 1.0}}},
      {"dde_growth", CatalogKind::Delay, "u'(t) = u(t)", 1, {{"r", 1.0}}},
      {"dde_zero", CatalogKind::Delay, "u'(t) = 0", 1, {{"r", 1.0}}},
      {"dde_rap", CatalogKind::Delay, "u'(t) = -a u(t) + b u(t - r) + sin(t + ln(1+t))", 1,
       {{"a", 2.0}, {"b", 0.5}, {"r", 1.0}}},
  };
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& id) {
  for (const auto& e : catalog()) {
    if (e.id == id) return e;
  }
  throw Error(ErrorCode::ConfigError, "unknown catalog id '" + id + "'");
}

Forcing catalog_forcing(const std::string& id, const P& params) {
  const auto& e = catalog_entry(id);
  require_kind(e, CatalogKind::Forcing);
  check_params(e, params);
  if (id == "heq1_forcing") return {id, heq1_forcing};
  if (id == "rap_sin") return {id, rap_sin};
  if (id == "qp_sin") return {id, [](double t) { return std::sin(t) + std::sin(std::numbers::sqrt2 * t); }};
  if (id == "sin") return {id, [](double t) { return std::sin(t); }};
  if (id == "rs_const") {
    const double c = param(e, params, "c");
    return {id, [c](double t) { return c + 1.0 / (1.0 + t); }};
  }
  if (id == "zhikov_surrogate") {
    return {id, [](double t) { return 2.0 + std::sin(t) + std::sin(std::numbers::sqrt2 * t); }};
  }
  if (id == "alt_sign") return {id, [](double t) { return std::cos(std::numbers::pi * t); }};
  return {id, [](double) { return 0.0; }};
}

Rhs catalog_rhs(const std::string& id, const P& params) {
  const auto& e = catalog_entry(id);
  require_kind(e, CatalogKind::Rhs);
  check_params(e, params);
  auto scalar = [&](auto f) {
    return Rhs(id, 1, [f](double t, const double* x, double* out) { out[0] = f(t, x[0]); });
  };
  if (id == "heq1") return scalar([](double t, double x) { return -std::abs(x) * x + heq1_forcing(t); });
  if (id == "heq1_sin") return scalar([](double t, double x) { return -std::abs(x) * x + std::sin(t); });
  if (id == "abs_damped") return scalar([](double, double x) { return -std::abs(x) * x; });
  if (id == "linear_sin") return scalar([](double t, double x) { return -x + std::sin(t); });
  if (id == "rs_linear") {
    const double c = param(e, params, "c");
    return scalar([c](double t, double x) { return -x + c + 1.0 / (1.0 + t); });
  }
  if (id == "decay") {
    const double k = param(e, params, "k");
    return scalar([k](double, double x) { return -k * x; });
  }
  if (id == "growth") return scalar([](double, double x) { return x; });
  return scalar([](double, double) { return 0.0; });
}

MapSpec catalog_map(const std::string& id, const P& params) {
  const auto& e = catalog_entry(id);
  require_kind(e, CatalogKind::Map);
  check_params(e, params);
  auto scalar = [&](auto f) {
    return MapSpec(id, 1, [f](double t, const double* u, double* out) { out[0] = f(t, u[0]); });
  };
  if (id == "halve") return scalar([](double, double u) { return u / 2.0; });
  if (id == "increment") return scalar([](double, double u) { return u + 1.0; });
  if (id == "affine_sin") {
    const double a = param(e, params, "a");
    return scalar([a](double t, double u) { return a * u + std::sin(t); });
  }
  if (id == "affine_rs") {
    const double a = param(e, params, "a"), c = param(e, params, "c");
    return scalar([a, c](double t, double u) { return a * u + c + 1.0 / (1.0 + t); });
  }
  if (id == "affine_alt") {
    const double a = param(e, params, "a");
    return scalar([a](double t, double u) { return a * u + (std::lround(t) % 2 == 0 ? 1.0 : -1.0); });
  }
  return scalar([](double, double u) { return -u; });
}

DelayRhs catalog_delay(const std::string& id, const P& params) {
  const auto& e = catalog_entry(id);
  require_kind(e, CatalogKind::Delay);
  check_params(e, params);
  const double r = param(e, params, "r");
  if (id == "dde_lag_decay") {
    return DelayRhs(id, 1, {r}, [](double, const double* u, double* out) { out[0] = -u[0]; });
  }
  if (id == "dde_decay") return DelayRhs(id, 1, {0.0}, [](double, const double* u, double* out) { out[0] = -u[0]; });
  if (id == "dde_linear_sin") {
    return DelayRhs(id, 1, {0.0}, [](double t, const double* u, double* out) { out[0] = -u[0] + std::sin(t); });
  }
  if (id == "dde_growth") return DelayRhs(id, 1, {0.0}, [](double, const double* u, double* out) { out[0] = u[0]; });
  if (id == "dde_rap") {
    const double a = param(e, params, "a"), b = param(e, params, "b");
    return DelayRhs(id, 1, {0.0, r}, [a, b](double t, const double* u, double* out) {
      out[0] = -a * u[0] + b * u[1] + rap_sin(t);
    });
  }
  return DelayRhs(id, 1, {0.0}, [](double, const double*, double* out) { out[0] = 0.0; });
}

}  // namespace raplab
