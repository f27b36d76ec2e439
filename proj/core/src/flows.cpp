#include "raplab/flows.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "raplab/error.hpp"
#include "raplab/expr.hpp"

namespace raplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_finite(const double* v, std::size_t d, double t) {
  for (std::size_t k = 0; k < d; ++k) {
    if (!std::isfinite(v[k])) {
      throw Error(ErrorCode::NonFiniteRhs, "right-hand side is not finite at t = " + std::to_string(t));
    }
  }
}

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
// Dense output (Hairer's continuous extension).
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

class Dopri {
 public:
  Dopri(const Rhs& rhs, double rtol, double atol, IntegrateStats& st)
      : rhs_(rhs), d_(rhs.dim()), rtol_(rtol), atol_(atol), st_(st) {
    for (auto& k : k_) k.resize(d_);
    for (auto& r : r_) r.resize(d_);
    tmp_.resize(d_);
    y1_.resize(d_);
  }

  void eval(double t, const double* x, double* out) {
    rhs_(t, x, out);
    ++st_.rhs_evals;
    check_finite(out, d_, t);
  }

  double initial_step(double t, const std::vector<double>& y, double h_max) {
    eval(t, y.data(), k_[0].data());
    double dn0 = 0.0, dn1 = 0.0;
    for (std::size_t i = 0; i < d_; ++i) {
      const double sk = atol_ + rtol_ * std::abs(y[i]);
      dn0 += (y[i] / sk) * (y[i] / sk);
      dn1 += (k_[0][i] / sk) * (k_[0][i] / sk);
    }
    dn0 = std::sqrt(dn0 / static_cast<double>(d_));
    dn1 = std::sqrt(dn1 / static_cast<double>(d_));
    double h = (dn0 <= 1e-10 || dn1 <= 1e-10) ? 1e-6 : 0.01 * dn0 / dn1;
    h = std::min(h, h_max);
    for (std::size_t i = 0; i < d_; ++i) tmp_[i] = y[i] + h * k_[0][i];
    eval(t + h, tmp_.data(), k_[1].data());
    double dn2 = 0.0;
    for (std::size_t i = 0; i < d_; ++i) {
      const double sk = atol_ + rtol_ * std::abs(y[i]);
      const double v = (k_[1][i] - k_[0][i]) / sk;
      dn2 += v * v;
    }
    dn2 = std::sqrt(dn2 / static_cast<double>(d_)) / h;
    const double der = std::max(dn1, dn2);
    const double h1 = der <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der, 1.0 / 5.0);
    return std::min({100.0 * h, h1, h_max});
  }

  // One trial step from (t, y) with k_[0] = g(t, y) already set. Returns the
  // scaled error norm; on acceptance the caller swaps in y1_ and k_[6].
  double trial(double t, const std::vector<double>& y, double h) {
    auto stage = [&](double c, std::initializer_list<std::pair<int, double>> terms, int into) {
      for (std::size_t i = 0; i < d_; ++i) {
        double acc = 0.0;
        for (const auto& [j, a] : terms) acc += a * k_[static_cast<std::size_t>(j)][i];
        tmp_[i] = y[i] + h * acc;
      }
      eval(t + c * h, tmp_.data(), k_[static_cast<std::size_t>(into)].data());
    };
    stage(c2, {{0, a21}}, 1);
    stage(c3, {{0, a31}, {1, a32}}, 2);
    stage(c4, {{0, a41}, {1, a42}, {2, a43}}, 3);
    stage(c5, {{0, a51}, {1, a52}, {2, a53}, {3, a54}}, 4);
    stage(1.0, {{0, a61}, {1, a62}, {2, a63}, {3, a64}, {4, a65}}, 5);
    for (std::size_t i = 0; i < d_; ++i) {
      y1_[i] = y[i] + h * (a71 * k_[0][i] + a73 * k_[2][i] + a74 * k_[3][i] + a75 * k_[4][i] + a76 * k_[5][i]);
    }
    eval(t + h, y1_.data(), k_[6].data());
    double err = 0.0;
    for (std::size_t i = 0; i < d_; ++i) {
      const double e = h * (e1 * k_[0][i] + e3 * k_[2][i] + e4 * k_[3][i] + e5 * k_[4][i] + e6 * k_[5][i] +
                            e7 * k_[6][i]);
      const double sk = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(y1_[i]));
      err += (e / sk) * (e / sk);
    }
    return std::sqrt(err / static_cast<double>(d_));
  }

  void prepare_dense(const std::vector<double>& y, double h) {
    for (std::size_t i = 0; i < d_; ++i) {
      const double ydiff = y1_[i] - y[i];
      const double bspl = h * k_[0][i] - ydiff;
      r_[0][i] = y[i];
      r_[1][i] = ydiff;
      r_[2][i] = bspl;
      r_[3][i] = ydiff - h * k_[6][i] - bspl;
      r_[4][i] = h * (d1 * k_[0][i] + d3 * k_[2][i] + d4 * k_[3][i] + d5 * k_[4][i] + d6 * k_[5][i] +
                      d7 * k_[6][i]);
    }
  }

  void dense(double theta, double* out) const {
    const double th1 = 1.0 - theta;
    for (std::size_t i = 0; i < d_; ++i) {
      out[i] = r_[0][i] + theta * (r_[1][i] + th1 * (r_[2][i] + theta * (r_[3][i] + th1 * r_[4][i])));
    }
  }

  std::vector<double>& k1() { return k_[0]; }
  std::vector<double>& k7() { return k_[6]; }
  std::vector<double>& y1() { return y1_; }

 private:
  const Rhs& rhs_;
  std::size_t d_;
  double rtol_;
  double atol_;
  IntegrateStats& st_;
  std::array<std::vector<double>, 7> k_;
  std::array<std::vector<double>, 5> r_;
  std::vector<double> tmp_;
  std::vector<double> y1_;
};

}  // namespace

Forcing::Forcing(SampledSignal table) : id_(table.label().empty() ? "table" : table.label()) {
  if (table.dim() != 1 || table.is_complex()) {
    throw Error(ErrorCode::InvalidArgument, "tabulated forcing must be a real scalar signal");
  }
  table_ = std::move(table);
}

double Forcing::operator()(double t) const {
  if (fn_) return fn_(t);
  if (table_) return table_->interpolate_value(t);
  return 0.0;
}

double Forcing::t_max() const { return table_ ? table_->t_end() : kInf; }
double Forcing::t_min() const { return table_ ? table_->t0() : -kInf; }

Rhs::Rhs(std::string id, std::size_t dim, Fn f, double t_min, double t_max)
    : id_(std::move(id)), dim_(dim), fn_(std::move(f)), t_min_(t_min), t_max_(t_max) {
  if (dim_ == 0) throw Error(ErrorCode::InvalidArgument, "rhs dimension must be positive");
  if (!fn_) throw Error(ErrorCode::InvalidArgument, "rhs function is empty");
}

Rhs Rhs::from_expressions(const std::vector<std::string>& components, const std::map<std::string, double>& params,
                          Forcing forcing, std::string id) {
  const std::size_t d = components.size();
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "rhs needs at least one component");
  // Slot layout: t, f, x, x0..x{d-1}, params...
  std::vector<std::string> slots{"t", "f", "x"};
  for (std::size_t k = 0; k < d; ++k) slots.push_back("x" + std::to_string(k));
  std::vector<double> param_values;
  for (const auto& [name, v] : params) {
    if (std::find(slots.begin(), slots.end(), name) != slots.end()) {
      throw Error(ErrorCode::InvalidArgument, "parameter name '" + name + "' shadows a variable");
    }
    slots.push_back(name);
    param_values.push_back(v);
  }
  std::vector<Expr> exprs;
  for (const auto& c : components) exprs.push_back(Expr::compile(c, slots));
  const std::size_t n_slots = slots.size();
  const bool has_forcing = !forcing.empty();
  const double lo = forcing.t_min(), hi = forcing.t_max();
  auto fn = [exprs = std::move(exprs), param_values = std::move(param_values), forcing = std::move(forcing), d,
             n_slots, has_forcing](double t, const double* x, double* out) {
    std::vector<double> buf(n_slots);
    buf[0] = t;
    buf[1] = has_forcing ? forcing(t) : 0.0;
    buf[2] = x[0];
    std::copy(x, x + d, buf.begin() + 3);
    std::copy(param_values.begin(), param_values.end(), buf.begin() + 3 + static_cast<long>(d));
    for (std::size_t k = 0; k < d; ++k) out[k] = exprs[k].eval(buf.data());
  };
  return Rhs(std::move(id), d, std::move(fn), lo, hi);
}

Rhs Rhs::shifted(double h) const {
  if (h == 0.0) return *this;
  auto base = fn_;
  return Rhs(id_ + "@" + std::to_string(h), dim_,
             [base, h](double t, const double* x, double* out) { base(t + h, x, out); }, t_min_ - h, t_max_ - h);
}

void IVP::validate() const {
  if (x0.size() != rhs.dim()) throw Error(ErrorCode::DimMismatch, "x0 dimension differs from the rhs dimension");
  if (!(t_span.b > t_span.a)) throw Error(ErrorCode::InvalidArgument, "t_span must be nondegenerate");
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2) || !(abs_tol > 0.0 && abs_tol <= 1e-2)) {
    throw Error(ErrorCode::InvalidArgument, "tolerances must lie in (0, 1e-2]");
  }
  if (!(max_step > 0.0)) throw Error(ErrorCode::InvalidArgument, "max_step must be positive");
  for (double v : x0) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "x0 is not finite");
  }
  if (t_span.a < rhs.t_min() || t_span.b > rhs.t_max()) {
    throw Error(ErrorCode::DomainTooShort, "forcing table does not cover the integration span");
  }
}

SampledSignal integrate(const IVP& ivp) {
  IntegrateStats st;
  return integrate(ivp, st);
}

SampledSignal integrate(const IVP& ivp, IntegrateStats& stats) {
  ivp.validate();
  const std::size_t d = ivp.rhs.dim();
  const double a = ivp.t_span.a, b = ivp.t_span.b;
  const double span = b - a;
  const double dt_target = std::min(ivp.max_step, span / 1e4);
  const auto n_out = static_cast<std::size_t>(std::ceil(span / dt_target - 1e-9)) + 1;
  const double dt = span / static_cast<double>(n_out - 1);

  std::vector<double> out(n_out * d);
  std::copy(ivp.x0.begin(), ivp.x0.end(), out.begin());
  std::size_t next = 1;

  Dopri rk(ivp.rhs, ivp.rel_tol, ivp.abs_tol, stats);
  std::vector<double> y = ivp.x0;
  double t = a;
  double h = rk.initial_step(t, y, std::min(ivp.max_step, span));
  rk.eval(t, y.data(), rk.k1().data());
  bool last_rejected = false;
  while (next < n_out) {
    const double remaining = b - t;
    bool final_step = false;
    if (h >= remaining * (1.0 - 1e-12)) {
      h = remaining;
      final_step = true;
    }
    if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      throw Error(ErrorCode::StepSizeUnderflow, "step size underflow at t = " + std::to_string(t));
    }
    const double err = rk.trial(t, y, h);
    if (err <= 1.0) {
      ++stats.accepted;
      rk.prepare_dense(y, h);
      const double t_new = final_step ? b : t + h;
      while (next < n_out) {
        const double tj = next + 1 == n_out ? b : a + dt * static_cast<double>(next);
        if (tj > t_new && !(final_step && next + 1 == n_out)) break;
        rk.dense(std::clamp((tj - t) / h, 0.0, 1.0), out.data() + next * d);
        ++next;
      }
      y.swap(rk.y1());
      rk.k1().swap(rk.k7());
      t = t_new;
      double fac = err == 0.0 ? 10.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 10.0);
      if (last_rejected) fac = std::min(fac, 1.0);
      h = std::min(h * fac, ivp.max_step);
      last_rejected = false;
    } else {
      ++stats.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      last_rejected = true;
    }
  }
  for (std::size_t j = 0; j < d; ++j) out[(n_out - 1) * d + j] = y[j];
  return SampledSignal(a, dt, d, false, std::move(out), ivp.rhs.id());
}

void ConditionHParams::validate(std::size_t dim) const {
  if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be positive");
  if (!(alpha > 2.0)) throw Error(ErrorCode::InvalidArgument, "alpha must exceed 2");
  if (box_lo.size() != dim || box_hi.size() != dim) throw Error(ErrorCode::DimMismatch, "box dimension mismatch");
  for (std::size_t k = 0; k < dim; ++k) {
    if (!(box_hi[k] >= box_lo[k])) throw Error(ErrorCode::InvalidArgument, "box bounds reversed");
  }
}

ConditionHResult condition_h_margin(const Rhs& rhs, const ConditionHParams& p, std::span<const double> t_samples) {
  const std::size_t d = rhs.dim();
  p.validate(d);
  std::vector<double> times(t_samples.begin(), t_samples.end());
  if (times.empty()) times.push_back(0.0);

  // Deterministic lattice: 21 points per axis for d = 1, fewer in higher
  // dimension, capped at about 400 points.
  std::vector<std::vector<double>> lattice;
  std::size_t per_axis = 21;
  while (per_axis > 2 && std::pow(static_cast<double>(per_axis), static_cast<double>(d)) > 400.0) --per_axis;
  std::vector<std::size_t> idx(d, 0);
  for (;;) {
    std::vector<double> pt(d);
    for (std::size_t k = 0; k < d; ++k) {
      const double s = per_axis == 1 ? 0.5 : static_cast<double>(idx[k]) / static_cast<double>(per_axis - 1);
      pt[k] = p.box_lo[k] + s * (p.box_hi[k] - p.box_lo[k]);
    }
    lattice.push_back(std::move(pt));
    std::size_t k = 0;
    while (k < d && ++idx[k] == per_axis) idx[k++] = 0;
    if (k == d) break;
  }

  std::mt19937_64 rng(p.seed);
  std::vector<std::uniform_real_distribution<double>> dist;
  for (std::size_t k = 0; k < d; ++k) dist.emplace_back(p.box_lo[k], p.box_hi[k]);
  std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
  pairs.reserve(p.n_pairs + lattice.size() * lattice.size());
  for (std::size_t i = 0; i < p.n_pairs; ++i) {
    std::vector<double> x1(d), x2(d);
    for (std::size_t k = 0; k < d; ++k) x1[k] = dist[k](rng);
    for (std::size_t k = 0; k < d; ++k) x2[k] = dist[k](rng);
    pairs.emplace_back(std::move(x1), std::move(x2));
  }
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    for (std::size_t j = i + 1; j < lattice.size(); ++j) pairs.emplace_back(lattice[i], lattice[j]);
  }

  ConditionHResult r;
  r.margin = kInf;
  std::vector<double> g1(d), g2(d);
  for (double t : times) {
    for (const auto& [x1, x2] : pairs) {
      rhs(t, x1.data(), g1.data());
      rhs(t, x2.data(), g2.data());
      check_finite(g1.data(), d, t);
      check_finite(g2.data(), d, t);
      double dn = 0.0, inner = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double delta = x1[k] - x2[k];
        dn += delta * delta;
        inner += delta * (g1[k] - g2[k]);
      }
      if (dn == 0.0) continue;
      const double pw = p.kappa * std::pow(std::sqrt(dn), p.alpha);
      double m = -pw - inner;
      if (std::abs(m) <= 1e-12 * (pw + std::abs(inner))) m = 0.0;
      ++r.samples;
      if (m < r.margin) {
        r.margin = m;
        r.worst_x1 = x1;
        r.worst_x2 = x2;
        r.worst_t = t;
      }
    }
  }
  if (r.samples == 0) r.margin = 0.0;
  r.holds = r.margin >= 0.0;
  return r;
}

double contraction_modulus(double t, double r, double kappa, double alpha) {
  if (!(alpha > 2.0)) throw Error(ErrorCode::InvalidArgument, "alpha must exceed 2");
  if (r <= 0.0) return 0.0;
  const double e = 2.0 - alpha;
  return std::pow(std::pow(r, e) + kappa * (alpha - 2.0) * t, 1.0 / e);
}

ContractionCheck contraction_bound_check(const SampledSignal& sol1, const SampledSignal& sol2, double kappa,
                                         double alpha, double tol) {
  if (!same_grid(sol1, sol2) || std::abs(sol1.t0() - sol2.t0()) > kGridTolerance * sol1.dt() ||
      sol1.size() != sol2.size()) {
    throw Error(ErrorCode::GridMismatch, "solutions must share one grid");
  }
  if (sol1.width() != sol2.width()) throw Error(ErrorCode::DimMismatch, "solutions differ in dimension");
  ContractionCheck c;
  c.r0 = sample_distance(sol1, 0, sol2, 0);
  c.max_violation = -kInf;
  for (std::size_t i = 0; i < sol1.size(); ++i) {
    const double dist = sample_distance(sol1, i, sol2, i);
    const double bound = contraction_modulus(sol1.time(i) - sol1.t0(), c.r0, kappa, alpha);
    const double v = dist - bound;
    if (v > c.max_violation) {
      c.max_violation = v;
      c.at_time = sol1.time(i);
    }
  }
  c.holds = c.max_violation <= tol;
  return c;
}

double attraction_time(double delta0, double eps, double kappa, double alpha) {
  if (!(delta0 > 0.0) || !(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "delta0 and eps must be positive");
  if (!(kappa > 0.0) || !(alpha > 2.0)) throw Error(ErrorCode::InvalidArgument, "need kappa > 0 and alpha > 2");
  if (eps >= delta0) throw Error(ErrorCode::BadOrder, "eps must be smaller than delta0");
  return (std::pow(eps, 2.0 - alpha) - std::pow(delta0, 2.0 - alpha)) / (kappa * (alpha - 2.0));
}

SeparationEstimate separation_estimate(const SampledSignal& sol1, const SampledSignal& sol2, Window w) {
  if (!same_grid(sol1, sol2)) throw Error(ErrorCode::GridMismatch, "solutions must share one grid");
  const auto r1 = restrict_to(sol1, w);
  const auto r2 = restrict_to(sol2, w);
  if (r1.size() != r2.size()) throw Error(ErrorCode::GridMismatch, "window covers different grid points");
  SeparationEstimate s;
  s.inf_distance = kInf;
  for (std::size_t i = 0; i < r1.size(); ++i) {
    const double dist = sample_distance(r1, i, r2, i);
    if (dist < s.inf_distance) {
      s.inf_distance = dist;
      s.at_time = r1.time(i);
    }
  }
  return s;
}

std::vector<HullSolution> hull_solutions(const Rhs& rhs, std::span<const double> shifts,
                                         const std::vector<std::vector<double>>& x0s, double horizon, double rel_tol,
                                         double abs_tol, double max_step) {
  if (!(horizon > 0.0)) throw Error(ErrorCode::InvalidArgument, "horizon must be positive");
  std::vector<HullSolution> out;
  for (double h : shifts) {
    if (h < rhs.t_min() || h + horizon > rhs.t_max()) {
      throw Error(ErrorCode::DomainTooShort, "forcing does not cover shift + horizon");
    }
    const Rhs g = rhs.shifted(h);
    for (std::size_t k = 0; k < x0s.size(); ++k) {
      IVP ivp{g, x0s[k], {0.0, horizon}, rel_tol, abs_tol, max_step};
      out.push_back({h, k, integrate(ivp)});
    }
  }
  return out;
}

FiberCount fiber_count(const std::vector<HullSolution>& sols, double burn_in, double cluster_tol) {
  if (!(cluster_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "cluster_tol must be positive");
  FiberCount fc;
  fc.min_separation = kInf;
  std::size_t i = 0;
  while (i < sols.size()) {
    const double h = sols[i].shift;
    std::vector<SampledSignal> reps;
    for (; i < sols.size() && sols[i].shift == h; ++i) {
      const auto& s = sols[i].solution;
      if (burn_in >= s.t_end()) throw Error(ErrorCode::DomainTooShort, "burn-in exceeds the solution horizon");
      SampledSignal tail = restrict_to(s, {burn_in, s.t_end()});
      bool placed = false;
      for (const auto& r : reps) {
        if (sup_distance(r, tail, tail.domain()) <= cluster_tol) {
          placed = true;
          break;
        }
      }
      if (!placed) reps.push_back(std::move(tail));
    }
    for (std::size_t a = 0; a < reps.size(); ++a) {
      for (std::size_t b = a + 1; b < reps.size(); ++b) {
        const auto sep = separation_estimate(reps[a], reps[b], reps[a].domain());
        fc.min_separation = std::min(fc.min_separation, sep.inf_distance);
      }
    }
    fc.shifts.push_back(h);
    fc.counts.push_back(reps.size());
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
  return fc;
}

StabilityProbeResult uniform_stability_probe(const Rhs& rhs, const StabilityProbeConfig& cfg) {
  const std::size_t d = rhs.dim();
  if (cfg.x_ref.size() != d) throw Error(ErrorCode::DimMismatch, "reference state dimension mismatch");
  if (cfg.restart_times.empty() || cfg.epsilons.empty()) {
    throw Error(ErrorCode::InvalidArgument, "need restart times and epsilons");
  }
  if (!std::is_sorted(cfg.deltas.begin(), cfg.deltas.end())) {
    throw Error(ErrorCode::InvalidArgument, "deltas must be ascending");
  }
  auto solve = [&](const std::vector<double>& x0, double t0) {
    IVP ivp{rhs, x0, {t0, t0 + cfg.horizon}, cfg.rel_tol, cfg.abs_tol, cfg.max_step};
    return integrate(ivp);
  };
  // Reference states at each restart time by continuing from (t_ref, x_ref).
  struct Restart {
    double t;
    std::vector<double> x;
    SampledSignal ref;
  };
  std::vector<Restart> restarts;
  for (double s : cfg.restart_times) {
    if (s < cfg.t_ref) throw Error(ErrorCode::InvalidArgument, "restart times must not precede t_ref");
    std::vector<double> xs = cfg.x_ref;
    if (s > cfg.t_ref) {
      IVP ivp{rhs, cfg.x_ref, {cfg.t_ref, s}, cfg.rel_tol, cfg.abs_tol, cfg.max_step};
      const auto path = integrate(ivp);
      const auto last = path.at(path.size() - 1);
      xs.assign(last.begin(), last.end());
    }
    restarts.push_back({s, xs, solve(xs, s)});
  }
  // Distance signals for every restart and +-delta e_k perturbation.
  auto perturbed_distances = [&](double delta) {
    std::vector<std::vector<double>> out;
    for (const auto& r : restarts) {
      for (std::size_t k = 0; k < d; ++k) {
        for (double sign : {1.0, -1.0}) {
          std::vector<double> x = r.x;
          x[k] += sign * delta;
          const auto sol = solve(x, r.t);
          std::vector<double> dist(sol.size());
          for (std::size_t i = 0; i < sol.size(); ++i) dist[i] = sample_distance(sol, i, r.ref, i);
          out.push_back(std::move(dist));
        }
      }
    }
    return out;
  };

  std::vector<std::vector<std::vector<double>>> by_delta;
  for (double delta : cfg.deltas) by_delta.push_back(perturbed_distances(delta));
  const auto at_delta0 = perturbed_distances(cfg.delta0);
  const double dt = restarts.front().ref.dt();

  StabilityProbeResult res;
  res.uniformly_stable = res.uniformly_attracting = true;
  for (double eps : cfg.epsilons) {
    StabilityProbeResult::Row row;
    row.epsilon = eps;
    const double lim = eps * (1.0 + 1e-9) + 1e-12;
    for (std::size_t j = 0; j < cfg.deltas.size(); ++j) {
      bool ok = true;
      for (const auto& dist : by_delta[j]) {
        ok = ok && *std::max_element(dist.begin(), dist.end()) <= lim;
      }
      if (ok) row.delta = cfg.deltas[j];
    }
    double worst = 0.0;
    bool attracted = true;
    for (const auto& dist : at_delta0) {
      std::size_t i = dist.size();
      while (i > 0 && dist[i - 1] <= eps) --i;
      if (i == dist.size()) {
        attracted = false;
        break;
      }
      worst = std::max(worst, static_cast<double>(i) * dt);
    }
    if (attracted) row.L_observed = worst;
    if (cfg.kappa && cfg.alpha && eps < cfg.delta0) {
      row.L_predicted = attraction_time(cfg.delta0, eps, *cfg.kappa, *cfg.alpha);
    }
    res.uniformly_stable = res.uniformly_stable && row.delta.has_value();
    res.uniformly_attracting = res.uniformly_attracting && row.L_observed.has_value();
    res.rows.push_back(row);
  }
  return res;
}

}  // namespace raplab
