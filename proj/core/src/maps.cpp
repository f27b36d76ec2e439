#include "raplab/maps.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "raplab/error.hpp"
#include "raplab/expr.hpp"

namespace raplab {

MapSpec::MapSpec(std::string id, std::size_t dim, Fn f) : id_(std::move(id)), dim_(dim), fn_(std::move(f)) {
  if (dim_ == 0) throw Error(ErrorCode::InvalidArgument, "map dimension must be positive");
  if (!fn_) throw Error(ErrorCode::InvalidArgument, "map function is empty");
}

MapSpec MapSpec::from_expressions(const std::vector<std::string>& components,
                                  const std::map<std::string, double>& params, Forcing forcing, std::string id) {
  const std::size_t d = components.size();
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "map needs at least one component");
  std::vector<std::string> slots{"t", "f", "u"};
  for (std::size_t k = 0; k < d; ++k) slots.push_back("u" + std::to_string(k));
  std::vector<double> pv;
  for (const auto& [name, v] : params) {
    if (std::find(slots.begin(), slots.end(), name) != slots.end()) {
      throw Error(ErrorCode::InvalidArgument, "parameter name '" + name + "' shadows a variable");
    }
    slots.push_back(name);
    pv.push_back(v);
  }
  std::vector<Expr> exprs;
  for (const auto& c : components) exprs.push_back(Expr::compile(c, slots));
  const std::size_t n_slots = slots.size();
  auto fn = [exprs = std::move(exprs), pv = std::move(pv), forcing = std::move(forcing), d, n_slots](
                double t, const double* u, double* out) {
    std::vector<double> buf(n_slots);
    buf[0] = t;
    buf[1] = forcing.empty() ? 0.0 : forcing(t);
    buf[2] = u[0];
    std::copy(u, u + d, buf.begin() + 3);
    std::copy(pv.begin(), pv.end(), buf.begin() + 3 + static_cast<long>(d));
    for (std::size_t k = 0; k < d; ++k) out[k] = exprs[k].eval(buf.data());
  };
  return MapSpec(std::move(id), d, std::move(fn));
}

MapSpec MapSpec::shifted(long h) const {
  if (h == 0) return *this;
  auto base = fn_;
  const auto hd = static_cast<double>(h);
  return MapSpec(id_ + "@" + std::to_string(h), dim_,
                 [base, hd](double t, const double* u, double* out) { base(t + hd, u, out); });
}

SampledSignal iterate(const MapSpec& m, std::span<const double> u0, std::size_t n_steps, long t0) {
  const std::size_t d = m.dim();
  if (u0.size() != d) throw Error(ErrorCode::DimMismatch, "u0 dimension differs from the map dimension");
  if (n_steps == 0) throw Error(ErrorCode::InvalidArgument, "n_steps must be at least 1");
  std::vector<double> v((n_steps + 1) * d);
  std::copy(u0.begin(), u0.end(), v.begin());
  for (std::size_t n = 0; n < n_steps; ++n) {
    const double t = static_cast<double>(t0) + static_cast<double>(n);
    m(t, v.data() + n * d, v.data() + (n + 1) * d);
    for (std::size_t k = 0; k < d; ++k) {
      const double x = v[(n + 1) * d + k];
      if (!std::isfinite(x) || std::abs(x) > kMapOverflow) {
        throw Error(ErrorCode::NonFiniteValue, "iteration of " + m.id() + " overflowed at step " + std::to_string(n + 1));
      }
    }
  }
  return SampledSignal(static_cast<double>(t0), 1.0, d, false, std::move(v), m.id());
}

std::optional<long> asymptotic_period(const SampledSignal& u, long max_period, double tol) {
  const auto n = static_cast<long>(u.size());
  for (long p = 1; p <= max_period && p < n; ++p) {
    double worst = 0.0;
    for (long i = 0; i + p < n && worst < tol; ++i) {
      worst = std::max(worst, sample_distance(u, static_cast<std::size_t>(i), u, static_cast<std::size_t>(i + p)));
    }
    if (worst < tol) return p;
  }
  return std::nullopt;
}

DiscreteFiberCount discrete_fiber_count(const MapSpec& m, std::span<const long> shifts,
                                        const std::vector<std::vector<double>>& x0s, std::size_t n_steps,
                                        std::size_t burn_in, double cluster_tol, long max_period,
                                        std::optional<long> forcing_period) {
  if (burn_in >= n_steps) throw Error(ErrorCode::InvalidArgument, "burn-in must be shorter than n_steps");
  if (!(cluster_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "cluster_tol must be positive");
  if (x0s.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one initial state");
  DiscreteFiberCount fc;
  bool all_periodic = true;
  long max_p = 0;
  for (long h : shifts) {
    const MapSpec g = m.shifted(h);
    std::vector<SampledSignal> reps;
    for (const auto& x0 : x0s) {
      const SampledSignal u = iterate(g, x0, n_steps);
      SampledSignal tail = restrict_to(u, {static_cast<double>(burn_in), u.t_end()});
      bool placed = false;
      for (const auto& r : reps) {
        if (sup_distance(r, tail, tail.domain()) <= cluster_tol) {
          placed = true;
          break;
        }
      }
      if (!placed) reps.push_back(std::move(tail));
    }
    std::vector<std::optional<long>> periods;
    for (const auto& r : reps) {
      periods.push_back(asymptotic_period(r, max_period, cluster_tol));
      if (periods.back()) {
        max_p = std::max(max_p, *periods.back());
      } else {
        all_periodic = false;
      }
    }
    fc.shifts.push_back(h);
    fc.counts.push_back(reps.size());
    fc.periods.push_back(std::move(periods));
    fc.representatives.push_back(std::move(reps));
  }
  std::map<std::size_t, std::size_t> freq;
  for (auto c : fc.counts) ++freq[c];
  std::size_t best = 0;
  for (const auto& [c, n] : freq) {
    if (n > best) {
      best = n;
      fc.m = c;
    }
  }
  fc.constant = freq.size() == 1;
  if (all_periodic && !fc.shifts.empty()) fc.period = max_p;
  if (forcing_period) {
    const long mt = static_cast<long>(fc.m) * *forcing_period;
    bool ok = all_periodic;
    for (const auto& ps : fc.periods) {
      for (const auto& p : ps) ok = ok && p && mt % *p == 0;
    }
    fc.period_consistent = ok;
  }
  return fc;
}

}  // namespace raplab
