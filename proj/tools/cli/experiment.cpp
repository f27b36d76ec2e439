#include "experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "digest.hpp"
#include "raplab/catalog.hpp"
#include "raplab/error.hpp"
#include "raplab/expr.hpp"

namespace raplab::cli {

namespace {

// Runs a library constructor and re-raises its error against the key.
template <class F>
auto guarded(const Node& n, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    n.fail(e.what());
  }
}

Params parse_params(const Node& n) {
  if (!n.is_object()) n.fail("expected an object of name: value pairs");
  Params p;
  for (const auto& [k, v] : n.raw().items()) p[k] = Node(v, n.path() + "." + k).number();
  return p;
}

Params params_of(const Node& n) { return n.has("params") ? parse_params(n.at("params")) : Params{}; }

void require_kind(const Node& n, const std::string& id, CatalogKind kind) {
  const auto& e = guarded(n, [&]() -> const CatalogEntry& { return catalog_entry(id); });
  if (e.kind != kind) {
    n.fail("catalog id '" + id + "' is a " + std::string(to_string(e.kind)) + ", expected a " +
           std::string(to_string(kind)));
  }
}

TauCandidates parse_tau(const Node& n) {
  n.allow({"uniform", "list", "integers", "multiples", "step", "refine", "refine_depth", "min_tail"});
  const bool refine = n.boolean("refine", false);
  TauCandidates c;
  int forms = 0;
  if (auto u = n.find("uniform")) {
    ++forms;
    const auto v = u->numbers();
    if (v.size() != 3) u->fail("expected [lo, hi, step]");
    if (!(v[0] > 0.0 && v[1] >= v[0] && v[2] > 0.0)) u->fail("need 0 < lo <= hi and step > 0");
    c = TauCandidates::uniform(v[0], v[1], v[2], refine);
  }
  if (auto l = n.find("list")) {
    ++forms;
    auto v = l->numbers();
    if (v.empty()) l->fail("empty tau list");
    for (double t : v) {
      if (!(t > 0.0)) l->fail("taus must be positive");
    }
    const double step = n.has("step") ? n.at("step").number() : 1.0;
    if (!(step > 0.0)) n.at("step").fail("step must be positive");
    c = TauCandidates::list(std::move(v), step, refine);
  }
  if (auto i = n.find("integers")) {
    ++forms;
    const auto v = i->numbers();
    if (v.size() != 2) i->fail("expected [lo, hi]");
    const long lo = i->at(0).integer(), hi = i->at(1).integer();
    if (!(lo >= 1 && hi >= lo)) i->fail("need 1 <= lo <= hi");
    c = TauCandidates::integers(lo, hi);
  }
  if (auto m = n.find("multiples")) {
    ++forms;
    m->allow({"of", "count"});
    const double base = m->at("of").number();
    const std::size_t count = m->at("count").count();
    if (!(base > 0.0) || count == 0) m->fail("need of > 0 and count >= 1");
    std::vector<double> v;
    for (std::size_t k = 1; k <= count; ++k) v.push_back(base * static_cast<double>(k));
    c = TauCandidates::list(std::move(v), base, refine);
  }
  if (forms != 1) n.fail("give exactly one of uniform, list, integers, multiples");
  if (n.has("refine_depth")) c.refine_depth = static_cast<int>(n.at("refine_depth").integer());
  c.min_tail = n.number("min_tail", 0.0);
  if (c.min_tail < 0.0) n.at("min_tail").fail("must be non-negative");
  return c;
}

Thresholds parse_thresholds(const Node& n) {
  n.allow({"epsilon", "tau", "cluster_tol", "tail_fraction", "gap_bound_factor", "lagrange"});
  Thresholds th;
  th.epsilon_grid = n.at("epsilon").numbers();
  if (n.has("tau")) th.tau = parse_tau(n.at("tau"));
  th.cluster_tol = n.number("cluster_tol", th.cluster_tol);
  th.tail_fraction = n.number("tail_fraction", th.tail_fraction);
  th.gap_bound_factor = n.number("gap_bound_factor", th.gap_bound_factor);
  if (auto l = n.find("lagrange")) {
    l->allow({"range_limit", "growth_factor", "increment_tol"});
    th.lagrange_range_limit = l->number("range_limit", th.lagrange_range_limit);
    th.lagrange_growth_factor = l->number("growth_factor", th.lagrange_growth_factor);
    th.lagrange_increment_tol = l->number("increment_tol", th.lagrange_increment_tol);
  }
  guarded(n, [&] {
    th.validate();
    return 0;
  });
  return th;
}

SignalSpec parse_signal(const Node& n, const std::filesystem::path& base) {
  n.allow({"catalog", "expression", "csv", "params", "t0", "t1", "dt", "label"});
  SignalSpec s;
  const int forms = int(n.has("catalog")) + int(n.has("expression")) + int(n.has("csv"));
  if (forms != 1) n.fail("give exactly one of catalog, expression, csv");
  s.label = n.string("label", "");
  if (n.has("csv")) {
    s.csv = base / n.at("csv").string();
    return s;
  }
  s.params = params_of(n);
  if (n.has("catalog")) {
    s.catalog = n.at("catalog").string();
    require_kind(n.at("catalog"), s.catalog, CatalogKind::Forcing);
    guarded(n.at("catalog"), [&] { return catalog_forcing(s.catalog, s.params); });
  } else {
    s.expression = n.at("expression").string();
    std::vector<std::string> slots{"t"};
    for (const auto& [k, v] : s.params) slots.push_back(k);
    guarded(n.at("expression"), [&] { return Expr::compile(s.expression, slots); });
  }
  s.t0 = n.at("t0").number();
  s.t1 = n.at("t1").number();
  s.dt = n.at("dt").number();
  if (!(s.dt > 0.0)) n.at("dt").fail("must be positive");
  if (!(s.t1 > s.t0)) n.at("t1").fail("must exceed t0");
  if ((s.t1 - s.t0) / s.dt > 5e7) n.at("dt").fail("more than 5e7 samples");
  if (s.label.empty()) s.label = s.catalog.empty() ? s.expression : s.catalog;
  return s;
}

std::optional<ForcingSpec> parse_forcing(const Node& n) {
  if (!n.has("forcing")) return std::nullopt;
  const Node f = n.at("forcing");
  f.allow({"catalog", "params"});
  ForcingSpec fs{f.at("catalog").string(), params_of(f)};
  require_kind(f.at("catalog"), fs.catalog, CatalogKind::Forcing);
  guarded(f, [&] { return catalog_forcing(fs.catalog, fs.params); });
  return fs;
}

RhsSpec parse_rhs(const Node& n, CatalogKind kind) {
  n.allow({"catalog", "expressions", "params", "forcing"});
  RhsSpec r;
  if (n.has("catalog") == n.has("expressions")) n.fail("give exactly one of catalog, expressions");
  r.params = params_of(n);
  r.forcing = parse_forcing(n);
  if (n.has("catalog")) {
    if (r.forcing) n.at("forcing").fail("forcing only applies to expressions");
    r.catalog = n.at("catalog").string();
    require_kind(n.at("catalog"), r.catalog, kind);
    if (kind == CatalogKind::Rhs) {
      guarded(n, [&] { return catalog_rhs(r.catalog, r.params); });
    } else {
      guarded(n, [&] { return catalog_map(r.catalog, r.params); });
    }
  } else {
    r.expressions = n.at("expressions").strings();
    if (r.expressions.empty()) n.at("expressions").fail("need at least one component");
    if (kind == CatalogKind::Rhs) {
      guarded(n.at("expressions"), [&] { return Rhs::from_expressions(r.expressions, r.params); });
    } else {
      guarded(n.at("expressions"), [&] { return MapSpec::from_expressions(r.expressions, r.params); });
    }
  }
  return r;
}

DelaySpec parse_delay(const Node& n) {
  n.allow({"catalog", "expressions", "lags", "params", "forcing"});
  DelaySpec d;
  if (n.has("catalog") == n.has("expressions")) n.fail("give exactly one of catalog, expressions");
  d.params = params_of(n);
  d.forcing = parse_forcing(n);
  if (n.has("catalog")) {
    d.catalog = n.at("catalog").string();
    require_kind(n.at("catalog"), d.catalog, CatalogKind::Delay);
    guarded(n, [&] { return catalog_delay(d.catalog, d.params); });
  } else {
    d.expressions = n.at("expressions").strings();
    d.lags = n.at("lags").numbers();
    guarded(n, [&] { return DelayRhs::from_expressions(d.expressions, d.lags, d.params); });
  }
  return d;
}

std::vector<double> parse_shifts(const Node& n) {
  if (n.is_object()) {
    n.allow({"start", "step", "count"});
    const double start = n.at("start").number(), step = n.at("step").number();
    const std::size_t count = n.at("count").count();
    if (count == 0) n.at("count").fail("must be positive");
    std::vector<double> v;
    for (std::size_t k = 0; k < count; ++k) v.push_back(start + step * static_cast<double>(k));
    return v;
  }
  auto v = n.numbers();
  if (v.empty()) n.fail("no shifts");
  return v;
}

std::vector<std::vector<double>> parse_states(const Node& n) {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const Node e = n.at(i);
    out.push_back(e.is_array() ? e.numbers() : std::vector<double>{e.number()});
  }
  if (out.empty()) n.fail("no initial states");
  return out;
}

ClassifySpec parse_classify(const Node& n, const std::filesystem::path& base) {
  n.allow({"thresholds", "burn_in", "with_entries", "scans", "decomposition", "coherence"});
  ClassifySpec c;
  c.thresholds = parse_thresholds(n.at("thresholds"));
  c.burn_in = n.number("burn_in", 0.0);
  c.with_entries = n.boolean("with_entries", false);
  if (auto scans = n.find("scans")) {
    for (std::size_t i = 0; i < scans->size(); ++i) {
      const Node s = scans->at(i);
      s.allow({"name", "mode", "epsilon", "tau", "window"});
      ScanSpec sc;
      sc.name = s.at("name").string();
      if (sc.name.empty() || sc.name.find_first_of("/\\. ") != std::string::npos) s.at("name").fail("not a file stem");
      const auto mode = s.string("mode", "remote");
      if (mode == "remote") {
        sc.mode = ScanSpec::Mode::Remote;
      } else if (mode == "global") {
        sc.mode = ScanSpec::Mode::Global;
      } else {
        s.at("mode").fail("expected global or remote");
      }
      sc.eps = s.at("epsilon").number();
      if (!(sc.eps > 0.0)) s.at("epsilon").fail("must be positive");
      sc.cands = parse_tau(s.at("tau"));
      if (auto w = s.find("window")) {
        const auto v = w->numbers();
        if (v.size() != 2) w->fail("expected [a, b]");
        sc.window = Window{v[0], v[1]};
      }
      c.scans.push_back(std::move(sc));
    }
  }
  if (auto d = n.find("decomposition")) {
    d->allow({"reference", "epsilon", "tail_fraction", "ap_tau"});
    DecompositionSpec ds;
    ds.reference = parse_signal(d->at("reference"), base);
    ds.eps = d->at("epsilon").number();
    ds.tail_fraction = d->number("tail_fraction", 0.75);
    ds.ap_cands = parse_tau(d->at("ap_tau"));
    c.decomposition = std::move(ds);
  }
  if (auto h = n.find("coherence")) {
    h->allow({"omega_shifts", "window", "tau"});
    CoherenceSpec cs;
    cs.omega_shifts = parse_shifts(h->at("omega_shifts"));
    cs.window = h->at("window").number();
    cs.cands = parse_tau(h->at("tau"));
    c.coherence = std::move(cs);
  }
  return c;
}

Expectation parse_expectation(const Node& n) {
  n.allow({"path", "equals", "min", "max", "approx", "tol"});
  Expectation e;
  e.path = n.at("path").string();
  int ops = 0;
  if (n.has("equals")) {
    ++ops;
    e.op = Expectation::Op::Equals;
    e.value = n.at("equals").raw();
  }
  if (n.has("min")) {
    ++ops;
    e.op = Expectation::Op::Min;
    e.value = n.at("min").number();
  }
  if (n.has("max")) {
    ++ops;
    e.op = Expectation::Op::Max;
    e.value = n.at("max").number();
  }
  if (n.has("approx")) {
    ++ops;
    e.op = Expectation::Op::Approx;
    e.value = n.at("approx").number();
    e.tol = n.at("tol").number();
  } else if (n.has("tol")) {
    n.at("tol").fail("tol only goes with approx");
  }
  if (ops != 1) n.fail("give exactly one of equals, min, max, approx");
  return e;
}

OdeRun parse_ode(const Node& n, const std::filesystem::path& base, std::uint64_t seed) {
  OdeRun r;
  r.rhs = parse_rhs(n.at("rhs"), CatalogKind::Rhs);
  r.x0 = n.at("x0").numbers();
  const auto span = n.at("t_span").numbers();
  if (span.size() != 2 || !(span[1] > span[0])) n.at("t_span").fail("expected [a, b] with b > a");
  r.t_span = {span[0], span[1]};
  r.rel_tol = n.number("rel_tol", r.rel_tol);
  r.abs_tol = n.number("abs_tol", r.abs_tol);
  r.max_step = n.number("max_step", r.max_step);
  if (auto h = n.find("condition_h")) {
    h->allow({"kappa", "alpha", "box_lo", "box_hi", "n_pairs", "times"});
    ConditionHParams p;
    p.kappa = h->at("kappa").number();
    p.alpha = h->at("alpha").number();
    p.box_lo = h->at("box_lo").numbers();
    p.box_hi = h->at("box_hi").numbers();
    p.n_pairs = h->has("n_pairs") ? h->at("n_pairs").count() : p.n_pairs;
    p.seed = seed;
    r.condition_h_times = h->has("times") ? h->at("times").numbers() : std::vector<double>{r.t_span.a};
    r.condition_h = p;
  }
  if (auto c = n.find("contraction")) {
    c->allow({"x0_other", "kappa", "alpha", "tol"});
    r.contraction = OdeRun::Contraction{c->at("x0_other").numbers(), c->at("kappa").number(), c->at("alpha").number(),
                                        c->number("tol", 1e-6)};
  }
  if (auto f = n.find("fiber_count")) {
    f->allow({"shifts", "x0s", "horizon", "burn_in", "cluster_tol"});
    r.fiber_count = OdeRun::Fibers{parse_shifts(f->at("shifts")), parse_states(f->at("x0s")), f->at("horizon").number(),
                                   f->at("burn_in").number(), f->number("cluster_tol", 1e-4)};
  }
  if (auto p = n.find("stability_probe")) {
    p->allow({"x_ref", "t_ref", "restart_times", "deltas", "epsilons", "delta0", "horizon", "rel_tol", "abs_tol",
              "max_step", "kappa", "alpha"});
    StabilityProbeConfig c;
    c.x_ref = p->has("x_ref") ? p->at("x_ref").numbers() : r.x0;
    c.t_ref = p->number("t_ref", r.t_span.a);
    c.restart_times = p->at("restart_times").numbers();
    c.deltas = p->at("deltas").numbers();
    c.epsilons = p->at("epsilons").numbers();
    c.delta0 = p->number("delta0", c.delta0);
    c.horizon = p->number("horizon", c.horizon);
    c.rel_tol = p->number("rel_tol", c.rel_tol);
    c.abs_tol = p->number("abs_tol", c.abs_tol);
    c.max_step = p->number("max_step", c.max_step);
    if (p->has("kappa")) c.kappa = p->at("kappa").number();
    if (p->has("alpha")) c.alpha = p->at("alpha").number();
    r.stability_probe = std::move(c);
  }
  if (auto a = n.find("attraction_time")) {
    a->allow({"delta0", "epsilon", "kappa", "alpha"});
    r.attraction_time = OdeRun::AttractionTime{a->at("delta0").number(), a->at("epsilon").number(),
                                               a->at("kappa").number(), a->at("alpha").number()};
  }
  if (auto d = n.find("deviation")) {
    d->allow({"value", "t_from"});
    r.deviation = OdeRun::Deviation{d->at("value").number(), d->at("t_from").number()};
  }
  if (auto c = n.find("classify")) r.classify = parse_classify(*c, base);
  return r;
}

}  // namespace

Experiment parse_experiment(const json& config, const std::filesystem::path& base_dir) {
  const Node root(config, "");
  if (!config.is_object()) root.fail("config must be a JSON object");
  Experiment ex;
  ex.config = config;
  ex.base_dir = base_dir;
  ex.config_sha256 = sha256_hex(config.dump());

  const long schema = root.at("schema").integer();
  if (schema != kSchemaVersion) root.at("schema").fail("unsupported schema " + std::to_string(schema));
  ex.kind = root.at("kind").string();
  ex.name = root.at("name").string();
  if (ex.name.empty() || ex.name.find_first_of("/\\ ") != std::string::npos) root.at("name").fail("not a directory name");
  const long seed = root.integer("seed", 0);
  if (seed < 0) root.at("seed").fail("must be non-negative");
  ex.seed = static_cast<std::uint64_t>(seed);
  ex.output_root = root.string("output_root", "");
  if (auto e = root.find("expect")) {
    for (std::size_t i = 0; i < e->size(); ++i) ex.expect.push_back(parse_expectation(e->at(i)));
  }

  const std::initializer_list<std::string_view> common = {"schema", "kind", "name", "seed", "output_root", "description", "expect"};
  auto allow_with = [&](std::initializer_list<std::string_view> extra) {
    std::vector<std::string_view> keys(common);
    keys.insert(keys.end(), extra);
    for (const auto& [k, v] : config.items()) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) Node(v, k).fail("unknown key for kind " + ex.kind);
    }
  };

  if (ex.kind == "classify") {
    allow_with({"signal", "classify", "write_signal"});
    ClassifyRun r;
    r.signal = parse_signal(root.at("signal"), base_dir);
    r.classify = parse_classify(root.at("classify"), base_dir);
    r.write_signal = root.boolean("write_signal", false);
    ex.run = std::move(r);
  } else if (ex.kind == "omega") {
    allow_with({"signal", "shifts", "window", "cluster_tol", "minimality", "equi_ap", "fit_frequencies"});
    OmegaRun r;
    r.signal = parse_signal(root.at("signal"), base_dir);
    r.shifts = parse_shifts(root.at("shifts"));
    r.window = root.at("window").number();
    if (!(r.window > 0.0)) root.at("window").fail("must be positive");
    r.cluster_tol = root.number("cluster_tol", r.cluster_tol);
    if (auto m = root.find("minimality")) {
      m->allow({"epsilon", "max_shift", "compare_length"});
      r.minimality = OmegaRun::Minimality{m->at("epsilon").number(), m->at("max_shift").number(),
                                          m->at("compare_length").number()};
    }
    if (auto q = root.find("equi_ap")) {
      q->allow({"epsilon", "tau"});
      r.equi_ap = OmegaRun::EquiAp{q->at("epsilon").number(), parse_tau(q->at("tau"))};
    }
    if (auto f = root.find("fit_frequencies")) r.fit_frequencies = f->numbers();
    ex.run = std::move(r);
  } else if (ex.kind == "ode") {
    allow_with({"rhs", "x0", "t_span", "rel_tol", "abs_tol", "max_step", "condition_h", "contraction", "fiber_count",
                "stability_probe", "attraction_time", "deviation", "classify"});
    ex.run = parse_ode(root, base_dir, ex.seed);
  } else if (ex.kind == "dde") {
    allow_with({"rhs", "history", "r", "horizon", "dt_hint", "precompactness", "classify", "segments"});
    DdeRun r;
    r.rhs = parse_delay(root.at("rhs"));
    r.history = root.at("history").numbers();
    r.r = root.number("r", 0.0);
    if (r.r < 0.0) root.at("r").fail("must be positive");
    if (r.r == 0.0 && !r.rhs.catalog.empty()) {
      const auto& e = catalog_entry(r.rhs.catalog);
      if (auto it = r.rhs.params.find("r"); it != r.rhs.params.end()) {
        r.r = it->second;
      } else if (auto d = e.params.find("r"); d != e.params.end()) {
        r.r = d->second;
      }
    }
    if (r.r == 0.0 && !r.rhs.lags.empty()) r.r = *std::max_element(r.rhs.lags.begin(), r.rhs.lags.end());
    if (!(r.r > 0.0)) root.fail("give the history length r (no positive lag to default to)");
    r.horizon = root.at("horizon").number();
    r.dt_hint = root.number("dt_hint", r.dt_hint);
    r.precompactness = root.boolean("precompactness", false);
    r.segments = root.boolean("segments", false);
    if (auto c = root.find("classify")) r.classify = parse_classify(*c, base_dir);
    ex.run = std::move(r);
  } else if (ex.kind == "map") {
    allow_with({"map", "u0", "n_steps", "t0", "fiber_count", "period", "classify"});
    MapRun r;
    r.map = parse_rhs(root.at("map"), CatalogKind::Map);
    r.u0 = root.at("u0").numbers();
    r.n_steps = root.at("n_steps").count();
    r.t0 = root.integer("t0", 0);
    if (auto f = root.find("fiber_count")) {
      f->allow({"shifts", "x0s", "n_steps", "burn_in", "cluster_tol", "max_period", "forcing_period"});
      MapRun::Fibers fc;
      for (double h : parse_shifts(f->at("shifts"))) fc.shifts.push_back(static_cast<long>(std::llround(h)));
      fc.x0s = parse_states(f->at("x0s"));
      fc.n_steps = f->at("n_steps").count();
      fc.burn_in = f->at("burn_in").count();
      fc.cluster_tol = f->number("cluster_tol", 1e-9);
      fc.max_period = f->integer("max_period", 16);
      if (f->has("forcing_period")) fc.forcing_period = f->at("forcing_period").integer();
      r.fiber_count = std::move(fc);
    }
    if (auto p = root.find("period")) {
      p->allow({"burn_in", "max_period", "tol"});
      r.period = MapRun::Period{p->at("burn_in").count(), p->integer("max_period", 16), p->number("tol", 1e-9)};
    }
    if (auto c = root.find("classify")) r.classify = parse_classify(*c, base_dir);
    ex.run = std::move(r);
  } else if (ex.kind == "roots") {
    allow_with({"coefficients", "polypath", "t0", "t1", "dt", "separation_alpha", "bound_check", "thresholds",
                "write_branches"});
    RootsRun r;
    if (root.has("coefficients") == root.has("polypath")) root.fail("give exactly one of coefficients, polypath");
    if (root.has("polypath")) {
      r.polypath = base_dir / root.at("polypath").string();
      for (const char* k : {"t0", "t1", "dt"}) {
        if (root.has(k)) root.at(k).fail("the grid comes from the polypath manifest");
      }
    } else {
      const Node cs = root.at("coefficients");
      for (std::size_t i = 0; i < cs.size(); ++i) {
        const Node c = cs.at(i);
        std::pair<std::string, std::string> e;
        if (c.is_object()) {
          c.allow({"re", "im"});
          e = {c.string("re", "0"), c.string("im", "")};
        } else {
          e = {c.string(), ""};
        }
        for (const auto& src : {e.first, e.second}) {
          if (!src.empty()) guarded(c, [&] { return Expr::compile(src, {"t"}); });
        }
        r.coeffs.push_back(std::move(e));
      }
      if (r.coeffs.empty()) cs.fail("need at least one coefficient");
      r.t0 = root.at("t0").number();
      r.t1 = root.at("t1").number();
      r.dt = root.at("dt").number();
      if (!(r.dt > 0.0)) root.at("dt").fail("must be positive");
      if (!(r.t1 > r.t0)) root.at("t1").fail("must exceed t0");
    }
    if (root.has("separation_alpha")) r.separation_alpha = root.at("separation_alpha").number();
    r.bound_check = root.boolean("bound_check", true);
    r.write_branches = root.boolean("write_branches", true);
    if (auto t = root.find("thresholds")) r.classify = parse_thresholds(*t);
    ex.run = std::move(r);
  } else if (ex.kind == "zhikov") {
    allow_with({"f", "with_decay", "discriminant_floor", "thresholds"});
    ZhikovRun r;
    r.f = parse_signal(root.at("f"), base_dir);
    r.options.with_decay = root.boolean("with_decay", true);
    r.options.discriminant_floor = root.number("discriminant_floor", r.options.discriminant_floor);
    r.options.classify = root.has("thresholds");
    if (r.options.classify) r.options.thresholds = parse_thresholds(root.at("thresholds"));
    ex.run = std::move(r);
  } else {
    std::string list;
    for (const auto& k : experiment_kinds()) list += (list.empty() ? "" : ", ") + k;
    root.at("kind").fail("unknown kind '" + ex.kind + "' (expected one of " + list + ")");
  }
  return ex;
}

Experiment load_experiment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  return parse_experiment(j, path.parent_path());
}

}  // namespace raplab::cli
