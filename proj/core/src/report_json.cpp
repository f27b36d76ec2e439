#include "raplab/report_json.hpp"

#include <cmath>
#include <cstdio>

namespace raplab {

namespace {

// JSON has no infinity; unbounded values are written as null.
ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

template <class T>
ojson opt(const std::optional<T>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

}  // namespace

ojson to_json(const Window& w) { return ojson::array({w.a, w.b}); }

ojson to_json(const TranslationSet& ts, bool with_entries) {
  ojson j;
  j["epsilon"] = ts.epsilon;
  j["scan_range"] = to_json(ts.scan_range);
  j["max_gap"] = num(ts.max_gap);
  std::size_t accepted = 0;
  for (const auto& e : ts.entries) accepted += e.accepted ? 1 : 0;
  j["n_candidates"] = ts.entries.size();
  j["n_accepted"] = accepted;
  if (with_entries) {
    ojson rows = ojson::array();
    for (const auto& e : ts.entries) {
      rows.push_back({{"tau", e.tau}, {"accepted", e.accepted}, {"L", opt(e.L)}, {"tail_sup", num(e.tail_sup)}});
    }
    j["entries"] = std::move(rows);
  }
  return j;
}

ojson to_json(const Thresholds& th) {
  ojson j;
  j["epsilon_grid"] = th.epsilon_grid;
  j["tau_candidates"] = {{"range", {th.tau.taus.empty() ? 0.0 : th.tau.taus.front(), th.tau.max_tau()}},
                         {"count", th.tau.taus.size()},
                         {"step", th.tau.step},
                         {"refine", th.tau.refine},
                         {"refine_depth", th.tau.refine_depth},
                         {"min_tail", th.tau.effective_min_tail()}};
  j["cluster_tol"] = th.cluster_tol;
  j["tail_fraction"] = th.tail_fraction;
  j["gap_bound_factor"] = th.gap_bound_factor;
  j["lagrange"] = {{"range_limit", th.lagrange_range_limit},
                   {"growth_factor", th.lagrange_growth_factor},
                   {"increment_tol", th.lagrange_increment_tol}};
  return j;
}

ojson to_json(const RecurrenceReport& r, bool with_entries) {
  ojson j;
  j["label"] = r.label;
  j["flags"] = {{"ap", r.flags.ap},
                {"aap", r.flags.aap},
                {"rap", r.flags.rap},
                {"remotely_tau_periodic", r.flags.remotely_tau_periodic},
                {"tau", opt(r.flags.tau)},
                {"remotely_stationary", r.flags.remotely_stationary},
                {"lagrange_stable_proxy", r.flags.lagrange_stable_proxy}};
  ojson per_eps = ojson::array();
  for (const auto& ev : r.evidence) {
    per_eps.push_back({{"epsilon", ev.epsilon},
                       {"ap", ev.ap},
                       {"aap", ev.aap},
                       {"rap", ev.rap},
                       {"global", to_json(ev.global, with_entries)},
                       {"tail", to_json(ev.tail, with_entries)},
                       {"remote", to_json(ev.remote, with_entries)}});
  }
  ojson evidence;
  evidence["per_epsilon"] = std::move(per_eps);
  if (r.tau_periodicity) {
    ojson table = ojson::array();
    for (const auto& row : r.tau_periodicity->table) {
      table.push_back({{"epsilon", row.epsilon}, {"L", opt(row.L)}, {"tail_sup", num(row.tail_sup)}});
    }
    evidence["tau_periodicity"] = {
        {"tau", r.tau_periodicity->tau}, {"passed", r.tau_periodicity->passed}, {"table", std::move(table)}};
  }
  evidence["lagrange"] = {{"passed", r.lagrange.passed},
                          {"range_bound", r.lagrange.range_bound},
                          {"head_max", r.lagrange.head_max},
                          {"tail_max", r.lagrange.tail_max},
                          {"max_increment", r.lagrange.max_increment}};
  evidence["tail_window"] = to_json(r.tail_window);
  j["evidence"] = std::move(evidence);
  j["thresholds"] = to_json(r.thresholds);
  j["window"] = to_json(r.window);
  return j;
}

ojson to_json(const HullSample& h) {
  ojson j;
  j["size"] = h.size();
  j["shifts"] = h.shifts;
  j["dist"] = h.dist;
  return j;
}

ojson to_json(const ConditionHResult& c) {
  return {{"margin", c.margin}, {"holds", c.holds},      {"samples", c.samples},
          {"worst_x1", c.worst_x1}, {"worst_x2", c.worst_x2}, {"worst_t", c.worst_t}};
}

ojson to_json(const ContractionCheck& c) {
  return {{"holds", c.holds}, {"max_violation", c.max_violation}, {"at_time", c.at_time}, {"r0", c.r0}};
}

ojson to_json(const FiberCount& f) {
  return {{"m", f.m},
          {"constant", f.constant},
          {"shifts", f.shifts},
          {"counts", f.counts},
          {"min_separation", num(f.min_separation)}};
}

ojson to_json(const StabilityProbeResult& s) {
  ojson rows = ojson::array();
  for (const auto& r : s.rows) {
    rows.push_back({{"epsilon", r.epsilon},
                    {"delta", opt(r.delta)},
                    {"L_observed", opt(r.L_observed)},
                    {"L_predicted", opt(r.L_predicted)}});
  }
  return {{"uniformly_stable", s.uniformly_stable},
          {"uniformly_attracting", s.uniformly_attracting},
          {"rows", std::move(rows)}};
}

ojson to_json(const DiscreteFiberCount& f) {
  ojson periods = ojson::array();
  for (const auto& ps : f.periods) {
    ojson row = ojson::array();
    for (const auto& p : ps) row.push_back(opt(p));
    periods.push_back(std::move(row));
  }
  return {{"m", f.m},
          {"constant", f.constant},
          {"shifts", f.shifts},
          {"counts", f.counts},
          {"periods", std::move(periods)},
          {"period", opt(f.period)},
          {"period_consistent", opt(f.period_consistent)}};
}

ojson to_json(const PrecompactnessEvidence& p) {
  return {{"passed", p.passed},
          {"range_bound", p.range_bound},
          {"derivative_bound", p.derivative_bound},
          {"head_max", p.head_max},
          {"tail_max", p.tail_max}};
}

ojson to_json(const RootBoundCheck& c) {
  return {{"holds", c.holds}, {"max_excess", c.max_excess}, {"max_abs_root", c.max_abs_root}};
}

ojson to_json(const SeparationCertificate& s) {
  return {{"holds", s.holds},
          {"separation_min", num(s.separation_min)},
          {"argmin", s.argmin},
          {"inf_abs_D", s.inf_abs_discriminant},
          {"D_argmin", s.discriminant_argmin}};
}

ojson root_branches_json(const RootBranches* rb, const std::optional<Window>& collision) {
  ojson j;
  j["residual_max"] = rb ? ojson(rb->residual_max) : ojson(nullptr);
  j["separation_min"] = rb ? num(rb->separation_min) : ojson(nullptr);
  if (rb) {
    double inf_d = INFINITY;
    for (std::size_t i = 0; i < rb->discriminant.size(); ++i) {
      inf_d = std::min(inf_d, std::abs(rb->discriminant.complex_value(i)));
    }
    j["inf_abs_D"] = num(inf_d);
  } else {
    j["inf_abs_D"] = nullptr;
  }
  j["collisions"] = ojson::array();
  if (collision) j["collisions"].push_back(to_json(*collision));
  return j;
}

ojson to_json(const ZhikovReport& z) {
  ojson j;
  j["inf_abs_p"] = z.inf_abs_p;
  j["argmin"] = z.argmin;
  j["quarter_minima"] = z.quarter_minima;
  j["inf_abs_D"] = z.inf_abs_discriminant;
  j["discriminant_separated"] = z.discriminant_separated;
  j["branches"] = root_branches_json(z.branches ? &*z.branches : nullptr, z.collision);
  if (z.collision) j["collision_message"] = z.collision_message;
  ojson reps = ojson::array();
  for (const auto& r : z.reports) reps.push_back(to_json(r));
  j["reports"] = std::move(reps);
  return j;
}

std::string translation_set_csv(const TranslationSet& ts) {
  std::string out = "tau,accepted,L,tail_sup\n";
  char buf[128];
  for (const auto& e : ts.entries) {
    std::snprintf(buf, sizeof buf, "%.17g,%d,", e.tau, e.accepted ? 1 : 0);
    out += buf;
    if (e.L) {
      std::snprintf(buf, sizeof buf, "%.17g", *e.L);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, ",%.17g\n", e.tail_sup);
    out += buf;
  }
  return out;
}

}  // namespace raplab
