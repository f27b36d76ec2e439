#include "raplab/delay.hpp"

#include <algorithm>
#include <cmath>

#include "raplab/error.hpp"
#include "raplab/expr.hpp"

namespace raplab {

HistorySegment HistorySegment::constant(double r, std::vector<double> c, std::size_t n) {
  const std::size_t d = c.size();
  return from_function(r, d, n, [&](double, double* out) { std::copy(c.begin(), c.end(), out); });
}

HistorySegment HistorySegment::from_function(double r, std::size_t dim, std::size_t n,
                                             const std::function<void(double, double*)>& f) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "delay r must be positive");
  if (n == 0 || dim == 0) throw Error(ErrorCode::InvalidArgument, "history needs points and a dimension");
  const double dt = r / static_cast<double>(n);
  std::vector<double> data((n + 1) * dim);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = i == n ? 0.0 : -r + dt * static_cast<double>(i);
    f(t, data.data() + i * dim);
  }
  return {r, SampledSignal(-r, dt, dim, false, std::move(data), "history")};
}

void HistorySegment::validate() const {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "delay r must be positive");
  if (samples.is_complex()) throw Error(ErrorCode::InvalidArgument, "history must be real");
  const double tol = kGridTolerance * samples.dt() + 1e-12 * r;
  if (std::abs(samples.t0() + r) > tol || std::abs(samples.t_end()) > tol) {
    throw Error(ErrorCode::InvalidArgument, "history must span exactly [-r, 0]");
  }
}

DelayRhs::DelayRhs(std::string id, std::size_t dim, std::vector<double> lags, Fn f)
    : id_(std::move(id)), dim_(dim), lags_(std::move(lags)), fn_(std::move(f)) {
  if (dim_ == 0) throw Error(ErrorCode::InvalidArgument, "delay rhs dimension must be positive");
  if (lags_.empty()) throw Error(ErrorCode::InvalidArgument, "delay rhs needs at least one lag");
  for (double l : lags_) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw Error(ErrorCode::LagOutOfRange, "lags must be nonnegative");
  }
  if (!fn_) throw Error(ErrorCode::InvalidArgument, "delay rhs function is empty");
}

double DelayRhs::max_lag() const { return *std::max_element(lags_.begin(), lags_.end()); }

DelayRhs DelayRhs::from_expressions(const std::vector<std::string>& components, std::vector<double> lags,
                                    const std::map<std::string, double>& params, Forcing forcing, std::string id) {
  const std::size_t d = components.size();
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "delay rhs needs at least one component");
  const std::size_t k = lags.size();
  // Slot layout: t, f, then per lag j: u{j}, u{j}_0..u{j}_{d-1}, then params.
  std::vector<std::string> slots{"t", "f"};
  for (std::size_t j = 0; j < k; ++j) {
    slots.push_back("u" + std::to_string(j));
    for (std::size_t c = 0; c < d; ++c) slots.push_back("u" + std::to_string(j) + "_" + std::to_string(c));
  }
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
  auto fn = [exprs = std::move(exprs), pv = std::move(pv), forcing = std::move(forcing), d, k, n_slots](
                double t, const double* lagged, double* out) {
    std::vector<double> buf(n_slots);
    buf[0] = t;
    buf[1] = forcing.empty() ? 0.0 : forcing(t);
    std::size_t p = 2;
    for (std::size_t j = 0; j < k; ++j) {
      buf[p++] = lagged[j * d];
      for (std::size_t c = 0; c < d; ++c) buf[p++] = lagged[j * d + c];
    }
    std::copy(pv.begin(), pv.end(), buf.begin() + static_cast<long>(p));
    for (std::size_t c = 0; c < d; ++c) out[c] = exprs[c].eval(buf.data());
  };
  return DelayRhs(std::move(id), d, std::move(lags), std::move(fn));
}

namespace {

class Steps {
 public:
  Steps(const DelayRhs& rhs, const HistorySegment& init, std::size_t n_per_r, std::size_t n_steps)
      : rhs_(rhs), d_(rhs.dim()), N_(n_per_r), dt_(init.r / static_cast<double>(n_per_r)) {
    const std::size_t total = N_ + 1 + n_steps;
    u_.assign(total * d_, 0.0);
    du_left_.assign(total * d_, 0.0);
    du_right_.assign(total * d_, 0.0);
    std::vector<double> v(d_);
    for (std::size_t i = 0; i <= N_; ++i) {
      const double t = i == N_ ? 0.0 : -init.r + dt_ * static_cast<double>(i);
      init.samples.interpolate(std::clamp(t, init.samples.t0(), init.samples.t_end()), v);
      std::copy(v.begin(), v.end(), u_.begin() + static_cast<long>(i * d_));
    }
    // History derivative by finite differences.
    for (std::size_t i = 0; i <= N_; ++i) {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = i == N_ ? N_ : i + 1;
      for (std::size_t c = 0; c < d_; ++c) {
        const double g = (u(hi)[c] - u(lo)[c]) / (dt_ * static_cast<double>(hi - lo));
        du_left_[i * d_ + c] = du_right_[i * d_ + c] = g;
      }
    }
    lagged_.resize(rhs.lags().size() * d_);
  }

  double time(std::size_t i) const { return dt_ * (static_cast<double>(i) - static_cast<double>(N_)); }
  const double* u(std::size_t i) const { return u_.data() + i * d_; }
  const double* du_left(std::size_t i) const { return du_left_.data() + i * d_; }

  // Fills lagged_ for a stage at time t = t_n + c dt with stage state y.
  void gather(std::size_t n, double c, const double* y) {
    const double t = time(n) + c * dt_;
    const auto& lags = rhs_.lags();
    for (std::size_t j = 0; j < lags.size(); ++j) {
      double* out = lagged_.data() + j * d_;
      const double s = t - lags[j];
      if (lags[j] == 0.0) {
        std::copy(y, y + d_, out);
      } else if (s > time(n) + 1e-12 * dt_) {
        // Inside the current step: linear between u_n and the stage state.
        const double w = (s - time(n)) / (c * dt_);
        for (std::size_t k = 0; k < d_; ++k) out[k] = (1.0 - w) * u(n)[k] + w * y[k];
      } else {
        hermite(s, out);
      }
    }
  }

  void hermite(double s, double* out) const {
    const double x = s / dt_ + static_cast<double>(N_);
    auto i = static_cast<std::ptrdiff_t>(std::floor(x + 1e-9));
    i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(filled_) - 1);
    const auto a = static_cast<std::size_t>(i);
    const double th = std::clamp(x - static_cast<double>(a), 0.0, 1.0);
    if (th == 0.0) {
      std::copy(u(a), u(a) + d_, out);
      return;
    }
    const double h00 = (1 + 2 * th) * (1 - th) * (1 - th), h10 = th * (1 - th) * (1 - th);
    const double h01 = th * th * (3 - 2 * th), h11 = th * th * (th - 1);
    for (std::size_t k = 0; k < d_; ++k) {
      out[k] = h00 * u(a)[k] + h10 * dt_ * du_right_[a * d_ + k] + h01 * u(a + 1)[k] +
               h11 * dt_ * du_left_[(a + 1) * d_ + k];
    }
  }

  void eval(std::size_t n, double c, const double* y, double* out) {
    gather(n, c, y);
    const double t = time(n) + c * dt_;
    rhs_(t, lagged_.data(), out);
    for (std::size_t k = 0; k < d_; ++k) {
      if (!std::isfinite(out[k])) {
        throw Error(ErrorCode::NonFiniteRhs, "delay rhs is not finite at t = " + std::to_string(t));
      }
    }
  }

  void run(std::size_t n_steps) {
    filled_ = N_ + 1;
    std::vector<double> k1(d_), k2(d_), k3(d_), k4(d_), y(d_);
    // Right derivative at t = 0 from the equation.
    eval(N_, 0.0, u(N_), du_right_.data() + N_ * d_);
    for (std::size_t s = 0; s < n_steps; ++s) {
      const std::size_t n = N_ + s;
      std::copy(du_right_.begin() + static_cast<long>(n * d_), du_right_.begin() + static_cast<long>((n + 1) * d_),
                k1.begin());
      const double* un = u(n);
      for (std::size_t k = 0; k < d_; ++k) y[k] = un[k] + 0.5 * dt_ * k1[k];
      eval(n, 0.5, y.data(), k2.data());
      for (std::size_t k = 0; k < d_; ++k) y[k] = un[k] + 0.5 * dt_ * k2[k];
      eval(n, 0.5, y.data(), k3.data());
      for (std::size_t k = 0; k < d_; ++k) y[k] = un[k] + dt_ * k3[k];
      eval(n, 1.0, y.data(), k4.data());
      double* next = u_.data() + (n + 1) * d_;
      for (std::size_t k = 0; k < d_; ++k) {
        next[k] = un[k] + dt_ / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        if (!std::isfinite(next[k]) || std::abs(next[k]) > 1e12) {
          throw Error(ErrorCode::StepSizeUnderflow,
                      "solution blew up near t = " + std::to_string(time(n + 1)) + "; the fixed grid cannot follow it");
        }
      }
      filled_ = n + 2;
      double* dnext = du_right_.data() + (n + 1) * d_;
      eval(n + 1, 0.0, next, dnext);
      std::copy(dnext, dnext + d_, du_left_.begin() + static_cast<long>((n + 1) * d_));
    }
  }

  SampledSignal solution(std::size_t n_steps, bool derivative, const std::string& label) const {
    const auto& src = derivative ? du_right_ : u_;
    std::vector<double> v(src.begin() + static_cast<long>(N_ * d_),
                          src.begin() + static_cast<long>((N_ + 1 + n_steps) * d_));
    return SampledSignal(0.0, dt_, d_, false, std::move(v), label);
  }

 private:
  const DelayRhs& rhs_;
  std::size_t d_;
  std::size_t N_;
  double dt_;
  std::vector<double> u_;
  std::vector<double> du_left_;
  std::vector<double> du_right_;
  std::vector<double> lagged_;
  std::size_t filled_ = 0;
};

}  // namespace

DdeSolution integrate_dde(const DelayRhs& rhs, const HistorySegment& init, double horizon, double dt_hint) {
  init.validate();
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  if (!(dt_hint > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  if (init.samples.dim() != rhs.dim()) throw Error(ErrorCode::DimMismatch, "history dimension mismatch");
  if (rhs.max_lag() > init.r * (1.0 + 1e-12)) throw Error(ErrorCode::LagOutOfRange, "lag exceeds the delay r");
  const auto N = std::max<std::size_t>(100, static_cast<std::size_t>(std::ceil(init.r / dt_hint - 1e-9)));
  const double dt = init.r / static_cast<double>(N);
  const auto n_steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  Steps st(rhs, init, N, n_steps);
  st.run(n_steps);
  return {st.solution(n_steps, false, rhs.id()), st.solution(n_steps, true, rhs.id() + "'"), init.r};
}

PrecompactnessEvidence precompactness_proxy(const DdeSolution& sol, double range_limit, double derivative_limit,
                                            double growth_factor, double growth_tol) {
  PrecompactnessEvidence ev;
  const auto& u = sol.u;
  const std::size_t half = u.size() / 2;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double acc = 0.0;
    for (double v : u.at(i)) acc += v * v;
    const double nrm = std::sqrt(acc);
    ev.range_bound = std::max(ev.range_bound, nrm);
    double& part = i < half ? ev.head_max : ev.tail_max;
    part = std::max(part, nrm);
  }
  for (std::size_t i = 0; i < sol.du.size(); ++i) {
    double acc = 0.0;
    for (double v : sol.du.at(i)) acc += v * v;
    ev.derivative_bound = std::max(ev.derivative_bound, std::sqrt(acc));
  }
  ev.passed = ev.range_bound <= range_limit && ev.derivative_bound <= derivative_limit &&
              ev.tail_max <= growth_factor * ev.head_max + growth_tol;
  return ev;
}

std::vector<HistorySegment> segment_trajectory(const SampledSignal& u, double r, std::span<const double> times) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "delay r must be positive");
  std::vector<HistorySegment> out;
  const double tol = kGridTolerance * u.dt();
  for (double t : times) {
    if (t < u.t0() + r - tol) throw Error(ErrorCode::SampleBeforeDelay, "sample time earlier than t0 + r");
    if (t > u.t_end() + tol) throw Error(ErrorCode::WindowOutOfDomain, "sample time beyond the trajectory");
    SampledSignal seg = segment(u, t - r, r);
    out.push_back({r, rebase(seg, -r)});
  }
  return out;
}

double segment_distance(const HistorySegment& a, const HistorySegment& b) {
  return sup_distance(a.samples, b.samples, a.samples.domain());
}

RecurrenceReport classify_segment_trajectory(const SampledSignal& u, double r, const Thresholds& th) {
  RecurrenceReport rep = classify(u, th);
  auto shift = [r](TranslationSet& ts) {
    for (auto& e : ts.entries) {
      if (e.L) *e.L += r;
    }
  };
  for (auto& ev : rep.evidence) {
    shift(ev.global);
    shift(ev.tail);
    shift(ev.remote);
  }
  if (rep.tau_periodicity) {
    for (auto& row : rep.tau_periodicity->table) {
      if (row.L) *row.L += r;
    }
  }
  rep.window.a += r;
  rep.tail_window.a = std::max(rep.tail_window.a, rep.window.a);
  rep.label = u.label() + " (segments, r = " + std::to_string(r) + ")";
  return rep;
}

}  // namespace raplab
