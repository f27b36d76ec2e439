#include "runner.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "digest.hpp"
#include "raplab/catalog.hpp"
#include "raplab/error.hpp"
#include "raplab/expr.hpp"
#include "raplab/polypath_io.hpp"
#include "raplab/signal_io.hpp"

#ifndef RAPLAB_VERSION
#define RAPLAB_VERSION "unknown"
#endif

namespace raplab::cli {

namespace fs = std::filesystem;

namespace {

ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

template <class T>
ojson opt(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

class Writer {
 public:
  Writer(fs::path dir, std::vector<std::string>& artifacts) : dir_(std::move(dir)), artifacts_(artifacts) {}

  void text(const std::string& name, const std::string& body) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + (dir_ / name).string());
    out << body;
    artifacts_.push_back(name);
  }
  void record(const std::string& name) { artifacts_.push_back(name); }
  void json_file(const std::string& name, const ojson& j) { text(name, j.dump(2) + "\n"); }
  void signal(const std::string& name, const SampledSignal& s) {
    write_signal_csv(dir_ / name, s);
    artifacts_.push_back(name);
    artifacts_.push_back(sidecar_path(fs::path(name)).string());
  }

 private:
  fs::path dir_;
  std::vector<std::string>& artifacts_;
};

SampledSignal load_signal(const SignalSpec& s) {
  if (!s.csv.empty()) return read_signal_csv(s.csv);
  const std::size_t n = SampledSignal::points_for(s.t0, s.t1, s.dt);
  if (!s.catalog.empty()) {
    const Forcing f = catalog_forcing(s.catalog, s.params);
    return SampledSignal::tabulate(s.t0, s.dt, n, [&](double t) { return f(t); }, s.label);
  }
  std::vector<std::string> slots{"t"};
  std::vector<double> vals{0.0};
  for (const auto& [k, v] : s.params) {
    slots.push_back(k);
    vals.push_back(v);
  }
  const Expr e = Expr::compile(s.expression, slots);
  return SampledSignal::tabulate(
      s.t0, s.dt, n,
      [&](double t) {
        vals[0] = t;
        return e.eval(vals.data());
      },
      s.label);
}

Forcing make_forcing(const std::optional<ForcingSpec>& f) {
  return f ? catalog_forcing(f->catalog, f->params) : Forcing{};
}

Rhs make_rhs(const RhsSpec& r) {
  if (!r.catalog.empty()) return catalog_rhs(r.catalog, r.params);
  return Rhs::from_expressions(r.expressions, r.params, make_forcing(r.forcing));
}

MapSpec make_map(const RhsSpec& r) {
  if (!r.catalog.empty()) return catalog_map(r.catalog, r.params);
  return MapSpec::from_expressions(r.expressions, r.params, make_forcing(r.forcing));
}

DelayRhs make_delay(const DelaySpec& d) {
  if (!d.catalog.empty()) return catalog_delay(d.catalog, d.params);
  return DelayRhs::from_expressions(d.expressions, d.lags, d.params, make_forcing(d.forcing));
}

ojson signal_summary(const SampledSignal& s) {
  return {{"label", s.label()}, {"t0", s.t0()}, {"t_end", s.t_end()}, {"dt", s.dt()}, {"n", s.size()}};
}

std::string eps_tag(std::size_t k) { return "eps" + std::to_string(k); }

// Least-squares phases c_k of sum_k sin(w_k t + c_k) (unit amplitudes):
// linear projection onto sin/cos pairs, then Gauss-Newton on the phases.
struct PhaseFit {
  std::vector<double> phases;
  double sup_residual = 0.0;
};

std::vector<double> solve(std::vector<std::vector<double>> A, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
    }
    std::swap(A[c], A[piv]);
    std::swap(b[c], b[piv]);
    if (A[c][c] == 0.0) throw Error(ErrorCode::NonConvergence, "singular phase-fit system");
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = A[r][c] / A[c][c];
      for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t k = r + 1; k < n; ++k) acc -= A[r][k] * x[k];
    x[r] = acc / A[r][r];
  }
  return x;
}

PhaseFit fit_phases(const SampledSignal& m, const std::vector<double>& w) {
  const std::size_t K = w.size(), n = m.size();
  std::vector<std::vector<double>> A(2 * K, std::vector<double>(2 * K, 0.0));
  std::vector<double> b(2 * K, 0.0), phi(2 * K);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = m.time(i);
    for (std::size_t k = 0; k < K; ++k) {
      phi[2 * k] = std::sin(w[k] * t);
      phi[2 * k + 1] = std::cos(w[k] * t);
    }
    for (std::size_t r = 0; r < 2 * K; ++r) {
      b[r] += phi[r] * m.value(i);
      for (std::size_t c = 0; c < 2 * K; ++c) A[r][c] += phi[r] * phi[c];
    }
  }
  const auto x = solve(A, b);
  PhaseFit f;
  for (std::size_t k = 0; k < K; ++k) f.phases.push_back(std::atan2(x[2 * k + 1], x[2 * k]));
  for (int it = 0; it < 5; ++it) {
    std::vector<std::vector<double>> J(K, std::vector<double>(K, 0.0));
    std::vector<double> g(K, 0.0), d(K);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = m.time(i);
      double r = -m.value(i);
      for (std::size_t k = 0; k < K; ++k) {
        r += std::sin(w[k] * t + f.phases[k]);
        d[k] = std::cos(w[k] * t + f.phases[k]);
      }
      for (std::size_t a = 0; a < K; ++a) {
        g[a] += d[a] * r;
        for (std::size_t c = 0; c < K; ++c) J[a][c] += d[a] * d[c];
      }
    }
    const auto step = solve(J, g);
    for (std::size_t k = 0; k < K; ++k) f.phases[k] -= step[k];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double t = m.time(i);
    double r = -m.value(i);
    for (std::size_t k = 0; k < K; ++k) r += std::sin(w[k] * t + f.phases[k]);
    f.sup_residual = std::max(f.sup_residual, std::abs(r));
  }
  for (auto& c : f.phases) c = std::remainder(c, 2 * std::numbers::pi);
  return f;
}

ojson classify_facts(const SampledSignal& raw, const ClassifySpec& cfg, Writer& out, const std::string& prefix,
                     bool segments = false, double lag = 0.0) {
  const SampledSignal s = cfg.burn_in > 0.0 ? restrict_to(raw, {raw.t0() + cfg.burn_in, raw.t_end()}) : raw;
  const auto& th = cfg.thresholds;
  const RecurrenceReport rep = segments ? classify_segment_trajectory(s, lag, th) : classify(s, th);
  ojson j;
  j["report"] = to_json(rep, cfg.with_entries);
  for (std::size_t k = 0; k < rep.evidence.size(); ++k) {
    const auto& ev = rep.evidence[k];
    out.text(prefix + "translations_" + eps_tag(k) + "_global.csv", translation_set_csv(ev.global));
    out.text(prefix + "translations_" + eps_tag(k) + "_tail.csv", translation_set_csv(ev.tail));
    out.text(prefix + "translations_" + eps_tag(k) + "_remote.csv", translation_set_csv(ev.remote));
  }

  if (!cfg.scans.empty()) {
    ojson scans = ojson::object();
    for (const auto& sc : cfg.scans) {
      TranslationSet ts;
      if (sc.mode == ScanSpec::Mode::Remote) {
        ts = translation_set_remote(s, sc.eps, sc.cands);
      } else {
        ts = translation_set_global(s, sc.eps, sc.window.value_or(s.domain()), sc.cands);
      }
      ojson sj = to_json(ts);
      sj["mode"] = sc.mode == ScanSpec::Mode::Remote ? "remote" : "global";
      double max_L = -INFINITY;
      for (const auto& e : ts.entries) {
        if (e.accepted && e.L) max_L = std::max(max_L, *e.L);
      }
      sj["max_L"] = num(max_L);
      sj["all_accepted"] = sj["n_accepted"] == sj["n_candidates"];
      out.text(prefix + "scan_" + sc.name + ".csv", translation_set_csv(ts));
      scans[sc.name] = std::move(sj);
    }
    j["scans"] = std::move(scans);
  }

  if (cfg.decomposition) {
    const auto& d = *cfg.decomposition;
    const SampledSignal ref = load_signal(d.reference);
    const auto hull = make_hull({ref}, {0.0});
    const auto a = aap_test(s, hull, d.eps, d.ap_cands, d.tail_fraction);
    j["decomposition"] = {{"epsilon", d.eps},
                          {"residual", num(a.residual)},
                          {"aap", a.aap},
                          {"best_phase", a.best_phase}};
  }

  if (cfg.coherence) {
    const auto& c = *cfg.coherence;
    const auto& f = rep.flags;
    const bool implications = (!f.ap || f.aap) && (!f.aap || f.rap) && (!f.remotely_tau_periodic || f.rap) &&
                              (!f.remotely_stationary || f.rap);
    const double eps = th.epsilon_grid.back();
    const auto hull = omega_limit_sample(s, c.omega_shifts, c.window, eps / 4);
    const auto eq = equi_ap_test(hull, eps, {0.0, c.window}, c.cands, th.gap_bound_factor);
    const bool lhs = f.rap && f.lagrange_stable_proxy;
    j["coherence"] = {{"implications", implications},
                      {"rap_and_lagrange", lhs},
                      {"omega_equi_ap", eq.equi_ap},
                      {"omega_representatives", hull.size()},
                      {"lrap1_consistent", lhs == eq.equi_ap},
                      {"two_sided_consistent", thap4_equivalence_check(s, th.epsilon_grid.front(), th.tau)}};
  }
  return j;
}

ojson run_classify(const ClassifyRun& r, Writer& out) {
  const SampledSignal s = load_signal(r.signal);
  if (r.write_signal) out.signal("signal.csv", s);
  ojson j;
  j["signal"] = signal_summary(s);
  j.update(classify_facts(s, r.classify, out, ""));
  return j;
}

ojson run_omega(const OmegaRun& r, Writer& out) {
  const SampledSignal s = load_signal(r.signal);
  const HullSample hull = omega_limit_sample(s, r.shifts, r.window, r.cluster_tol);
  out.json_file("hull.json", to_json(hull));
  ojson j;
  j["signal"] = signal_summary(s);
  j["n_shifts"] = r.shifts.size();
  j["representatives"] = hull.size();
  if (r.minimality) {
    const auto m = minimality_test(hull, r.minimality->eps, r.minimality->max_shift, r.minimality->compare_length);
    j["minimality"] = {{"epsilon", r.minimality->eps},
                       {"consistent", m.consistent},
                       {"worst_distance", num(m.worst_distance)},
                       {"worst_pair", {m.worst_from, m.worst_to}}};
  }
  if (r.equi_ap) {
    const auto e = equi_ap_test(hull, r.equi_ap->eps, {0.0, r.window}, r.equi_ap->cands);
    j["equi_ap"] = {{"epsilon", r.equi_ap->eps}, {"equi_ap", e.equi_ap}, {"common", to_json(e.common)}};
    out.text("equi_ap.csv", translation_set_csv(e.common));
  }
  if (!r.fit_frequencies.empty()) {
    double worst = 0.0;
    ojson phases = ojson::array();
    for (const auto& m : hull.members) {
      const auto f = fit_phases(m, r.fit_frequencies);
      worst = std::max(worst, f.sup_residual);
      phases.push_back(f.phases);
    }
    j["phase_fit"] = {{"frequencies", r.fit_frequencies}, {"max_sup_residual", worst}, {"phases", phases}};
  }
  return j;
}

ojson run_ode(const OdeRun& r, Writer& out) {
  const Rhs rhs = make_rhs(r.rhs);
  const SampledSignal sol = integrate(IVP{rhs, r.x0, r.t_span, r.rel_tol, r.abs_tol, r.max_step});
  out.signal("solution.csv", sol);
  ojson j;
  j["solution"] = signal_summary(sol);
  j["solution"]["x_end"] = std::vector<double>(sol.at(sol.size() - 1).begin(), sol.at(sol.size() - 1).end());
  if (r.condition_h) j["condition_h"] = to_json(condition_h_margin(rhs, *r.condition_h, r.condition_h_times));
  if (r.contraction) {
    const auto other = integrate(IVP{rhs, r.contraction->x0_other, r.t_span, r.rel_tol, r.abs_tol, r.max_step});
    j["contraction"] =
        to_json(contraction_bound_check(sol, other, r.contraction->kappa, r.contraction->alpha, r.contraction->tol));
  }
  if (r.fiber_count) {
    const auto& f = *r.fiber_count;
    const auto sols = hull_solutions(rhs, f.shifts, f.x0s, f.horizon, r.rel_tol, r.abs_tol, r.max_step);
    j["fiber_count"] = to_json(fiber_count(sols, f.burn_in, f.cluster_tol));
  }
  if (r.stability_probe) j["stability_probe"] = to_json(uniform_stability_probe(rhs, *r.stability_probe));
  if (r.attraction_time) {
    const auto& a = *r.attraction_time;
    j["attraction_time"] = num(attraction_time(a.delta0, a.eps, a.kappa, a.alpha));
  }
  if (r.deviation) {
    double sup = 0.0;
    for (std::size_t i = 0; i < sol.size(); ++i) {
      if (sol.time(i) < r.deviation->t_from) continue;
      double acc = 0.0;
      for (double v : sol.at(i)) acc += (v - r.deviation->value) * (v - r.deviation->value);
      sup = std::max(sup, std::sqrt(acc));
    }
    j["deviation"] = {{"value", r.deviation->value}, {"t_from", r.deviation->t_from}, {"sup", sup}};
  }
  if (r.classify) j["classify"] = classify_facts(sol, *r.classify, out, "");
  return j;
}

ojson run_dde(const DdeRun& r, Writer& out) {
  const DelayRhs rhs = make_delay(r.rhs);
  const auto init = HistorySegment::constant(r.r, r.history);
  const DdeSolution sol = integrate_dde(rhs, init, r.horizon, r.dt_hint);
  out.signal("solution.csv", sol.u);
  ojson j;
  j["solution"] = signal_summary(sol.u);
  j["r"] = sol.r;
  if (r.precompactness) j["precompactness"] = to_json(precompactness_proxy(sol));
  if (r.classify) j["classify"] = classify_facts(sol.u, *r.classify, out, "", r.segments, sol.r);
  return j;
}

ojson run_map(const MapRun& r, Writer& out) {
  const MapSpec m = make_map(r.map);
  const SampledSignal orbit = iterate(m, r.u0, r.n_steps, r.t0);
  out.signal("orbit.csv", orbit);
  ojson j;
  j["orbit"] = signal_summary(orbit);
  if (r.period) {
    const auto tail = restrict_to(orbit, {orbit.t0() + static_cast<double>(r.period->burn_in), orbit.t_end()});
    j["period"] = opt(asymptotic_period(tail, r.period->max_period, r.period->tol));
  }
  if (r.fiber_count) {
    const auto& f = *r.fiber_count;
    j["fiber_count"] = to_json(discrete_fiber_count(m, f.shifts, f.x0s, f.n_steps, f.burn_in, f.cluster_tol,
                                                    f.max_period, f.forcing_period));
  }
  if (r.classify) j["classify"] = classify_facts(orbit, *r.classify, out, "");
  return j;
}

ojson run_roots(const RootsRun& r, Writer& out, const fs::path& dir) {
  PolyPath p;
  if (!r.polypath.empty()) {
    p = read_polypath(r.polypath);
  } else {
    std::vector<std::function<cplx(double)>> coeffs;
    for (const auto& [re, im] : r.coeffs) {
      const Expr a = Expr::compile(re, {"t"});
      const std::optional<Expr> b = im.empty() ? std::nullopt : std::optional<Expr>(Expr::compile(im, {"t"}));
      coeffs.push_back([a, b](double t) { return cplx(a.eval(&t), b ? b->eval(&t) : 0.0); });
    }
    p = PolyPath::tabulate(r.t0, r.dt, SampledSignal::points_for(r.t0, r.t1, r.dt), coeffs, "roots");
    if (r.write_branches) {
      write_polypath(dir / "polypath.json", p);
      out.record("polypath.json");
      for (std::size_t k = 0; k < p.degree(); ++k) {
        const std::string name = "polypath_a" + std::to_string(k + 1);
        out.record(name + ".csv");
        out.record(name + ".json");
      }
    }
  }
  std::optional<RootBranches> rb;
  std::optional<Window> collision;
  std::string collision_message;
  try {
    rb = track_branches(p);
  } catch (const BranchCollision& e) {
    collision = e.interval();
    collision_message = e.what();
  }
  ojson j = root_branches_json(rb ? &*rb : nullptr, collision);
  j["collision_found"] = collision.has_value();
  if (collision) j["collision_message"] = collision_message;
  if (rb) {
    if (r.separation_alpha) j["certificate"] = to_json(separation_certificate(*rb, *r.separation_alpha));
    if (r.bound_check) j["bound"] = to_json(root_bound_check(*rb, p));
    if (r.write_branches) {
      for (std::size_t b = 0; b < rb->branches.size(); ++b) out.signal("branch_" + std::to_string(b) + ".csv", rb->branches[b]);
    }
    if (r.classify) {
      ojson reps = ojson::array();
      for (const auto& rep : classify_branches(*rb, *r.classify)) reps.push_back(to_json(rep));
      j["branches"] = std::move(reps);
    }
  }
  return j;
}

ojson run_zhikov(const ZhikovRun& r, Writer&) {
  const SampledSignal f = load_signal(r.f);
  ojson j = to_json(zhikov_pipeline(f, r.options));
  j["signal"] = signal_summary(f);
  return j;
}

// Resolves a dotted path with [i] indices and * wildcards.
void collect(const ojson& node, const std::vector<std::string>& parts, std::size_t k, std::vector<const ojson*>& hits,
             bool& missing) {
  if (k == parts.size()) {
    hits.push_back(&node);
    return;
  }
  const std::string& p = parts[k];
  if (p == "*") {
    if (!node.is_array() && !node.is_object()) {
      missing = true;
      return;
    }
    if (node.empty()) missing = true;
    for (const auto& c : node) collect(c, parts, k + 1, hits, missing);
    return;
  }
  if (!p.empty() && std::isdigit(static_cast<unsigned char>(p[0])) && node.is_array()) {
    const std::size_t i = std::stoul(p);
    if (i >= node.size()) {
      missing = true;
      return;
    }
    collect(node[i], parts, k + 1, hits, missing);
    return;
  }
  if (!node.is_object() || !node.contains(p)) {
    missing = true;
    return;
  }
  collect(node[p], parts, k + 1, hits, missing);
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '.' || c == '[' || c == ']') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

const char* op_name(Expectation::Op op) {
  switch (op) {
    case Expectation::Op::Equals:
      return "equals";
    case Expectation::Op::Min:
      return "min";
    case Expectation::Op::Max:
      return "max";
    case Expectation::Op::Approx:
      return "approx";
  }
  return "?";
}

bool satisfies(const Expectation& e, const ojson& v) {
  if (e.op == Expectation::Op::Equals) {
    return json::parse(v.dump()) == e.value;
  }
  if (!v.is_number()) return false;
  const double x = v.get<double>(), ref = e.value.get<double>();
  switch (e.op) {
    case Expectation::Op::Min:
      return x >= ref;
    case Expectation::Op::Max:
      return x <= ref;
    case Expectation::Op::Approx:
      return std::abs(x - ref) <= e.tol;
    default:
      return false;
  }
}

ojson assertion_json(const AssertionResult& a) {
  ojson j;
  j["path"] = a.expect.path;
  j["op"] = op_name(a.expect.op);
  j["expected"] = ojson::parse(a.expect.value.dump());
  if (a.expect.op == Expectation::Op::Approx) j["tol"] = a.expect.tol;
  j["actual"] = ojson::parse(a.actual.dump());
  j["passed"] = a.passed;
  if (!a.message.empty()) j["message"] = a.message;
  return j;
}

}  // namespace

std::vector<AssertionResult> check_expectations(const std::vector<Expectation>& expect, const ojson& facts) {
  std::vector<AssertionResult> out;
  for (const auto& e : expect) {
    AssertionResult a;
    a.expect = e;
    std::vector<const ojson*> hits;
    bool missing = false;
    collect(facts, split_path(e.path), 0, hits, missing);
    if (missing || hits.empty()) {
      a.actual = nullptr;
      a.message = "path not found in the results";
    } else {
      a.passed = true;
      json vals = json::array();
      for (const auto* h : hits) {
        vals.push_back(json::parse(h->dump()));
        a.passed = a.passed && satisfies(e, *h);
      }
      a.actual = hits.size() == 1 ? vals[0] : vals;
    }
    out.push_back(std::move(a));
  }
  return out;
}

fs::path output_root_for(const Experiment& ex) {
  if (const char* env = std::getenv("RAPLAB_OUTPUT_ROOT"); env != nullptr && *env != '\0') return env;
  if (!ex.output_root.empty()) return ex.base_dir / ex.output_root;
  return "runs";
}

ojson execute(const Experiment& ex, const fs::path& dir, std::vector<std::string>& artifacts) {
  Writer out(dir, artifacts);
  return std::visit(
      [&](const auto& r) -> ojson {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, ClassifyRun>) return run_classify(r, out);
        if constexpr (std::is_same_v<T, OmegaRun>) return run_omega(r, out);
        if constexpr (std::is_same_v<T, OdeRun>) return run_ode(r, out);
        if constexpr (std::is_same_v<T, DdeRun>) return run_dde(r, out);
        if constexpr (std::is_same_v<T, MapRun>) return run_map(r, out);
        if constexpr (std::is_same_v<T, RootsRun>) return run_roots(r, out, dir);
        if constexpr (std::is_same_v<T, ZhikovRun>) return run_zhikov(r, out);
      },
      ex.run);
}

RunResult run_experiment(const Experiment& ex, const fs::path& root) {
  const auto t0 = std::chrono::steady_clock::now();
  RunResult res;
  res.dir = root / (ex.name + "-" + ex.config_sha256.substr(0, 12));
  std::error_code ec;
  fs::remove_all(res.dir, ec);
  fs::create_directories(res.dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + res.dir.string() + ": " + ec.message());

  std::vector<std::string> artifacts;
  Writer out(res.dir, artifacts);
  out.text("config.json", ex.config.dump(2) + "\n");
  ojson facts = execute(ex, res.dir, artifacts);
  out.json_file("report.json", facts);

  res.assertions = check_expectations(ex.expect, facts);
  res.passed = true;
  ojson asserts = ojson::array();
  for (const auto& a : res.assertions) {
    res.passed = res.passed && a.passed;
    asserts.push_back(assertion_json(a));
  }

  ojson m;
  m["schema"] = kSchemaVersion;
  m["tool"] = "raplab";
  m["version"] = RAPLAB_VERSION;
  m["name"] = ex.name;
  m["kind"] = ex.kind;
  m["seed"] = ex.seed;
  m["config_sha256"] = ex.config_sha256;
  ojson list = ojson::array();
  for (const auto& a : artifacts) {
    const fs::path p = res.dir / a;
    list.push_back({{"path", a}, {"sha256", sha256_file(p)}, {"bytes", fs::file_size(p)}});
  }
  m["artifacts"] = std::move(list);
  m["assertions"] = asserts;
  m["status"] = res.passed ? "pass" : "fail";
  m["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.manifest = m;

  std::ofstream(res.dir / "manifest.json") << m.dump(2) << "\n";
  if (!res.passed) {
    ojson failed = ojson::array();
    for (const auto& a : asserts) {
      if (!a["passed"].get<bool>()) failed.push_back(a);
    }
    std::ofstream(res.dir / "failures.json") << ojson{{"name", ex.name}, {"failed", failed}}.dump(2) << "\n";
  }
  return res;
}

}  // namespace raplab::cli
