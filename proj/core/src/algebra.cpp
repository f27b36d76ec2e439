#include "raplab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace raplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool lex_less(cplx a, cplx b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); }

// p(x) and p'(x) by Horner.
std::pair<cplx, cplx> eval_with_derivative(std::span<const cplx> a, cplx x) {
  cplx p = 1.0, dp = 0.0;
  for (const cplx& c : a) {
    dp = dp * x + p;
    p = p * x + c;
  }
  return {p, dp};
}

double min_separation(std::span<const cplx> r) {
  double s = kInf;
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = i + 1; j < r.size(); ++j) s = std::min(s, std::abs(r[i] - r[j]));
  }
  return s;
}

}  // namespace

std::vector<cplx> PolyPath::at(std::size_t i) const {
  std::vector<cplx> a;
  a.reserve(coeffs.size());
  for (const auto& c : coeffs) a.push_back(c.complex_value(i));
  return a;
}

PolyPath PolyPath::tabulate(double t0, double dt, std::size_t n, const std::vector<std::function<cplx(double)>>& coeffs,
                            std::string label) {
  PolyPath p;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    p.coeffs.push_back(SampledSignal::tabulate_complex(t0, dt, n, coeffs[k], "a" + std::to_string(k + 1)));
  }
  p.label = std::move(label);
  p.validate();
  return p;
}

void PolyPath::validate() const {
  if (coeffs.empty()) throw Error(ErrorCode::InvalidArgument, "polynomial degree must be at least 1");
  for (const auto& c : coeffs) {
    if (c.dim() != 1) throw Error(ErrorCode::DimMismatch, "coefficients must be scalar signals");
    if (!same_grid(c, coeffs.front()) || c.size() != coeffs.front().size() ||
        std::abs(c.t0() - coeffs.front().t0()) > kGridTolerance * c.dt()) {
      throw Error(ErrorCode::GridMismatch, "coefficients must share one grid");
    }
  }
}

cplx poly_eval(std::span<const cplx> a, cplx x) { return eval_with_derivative(a, x).first; }

double coeff_bound(std::span<const cplx> a) {
  double m = 0.0;
  for (const cplx& c : a) m = std::max(m, std::abs(c));
  return m;
}

std::vector<cplx> roots_of(std::span<const cplx> a) {
  const std::size_t n = a.size();
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "polynomial degree must be at least 1");
  const double A = coeff_bound(a);
  if (n == 1) return {-a[0]};
  const double radius = 1.0 + A;
  std::vector<cplx> z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) + 0.4;
    z[k] = std::polar(radius, ang);
  }
  constexpr int kMaxIter = 500;
  std::vector<bool> done(n, false);
  for (int it = 0; it < kMaxIter; ++it) {
    bool all_done = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i]) continue;
      const auto [p, dp] = eval_with_derivative(a, z[i]);
      if (p == cplx(0.0)) {
        done[i] = true;
        continue;
      }
      const cplx ratio = p / dp;
      cplx sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      }
      const cplx w = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) {
        done[i] = true;
        continue;
      }
      z[i] -= w;
      if (std::abs(w) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(z[i]))) {
        done[i] = true;
      } else {
        all_done = false;
      }
    }
    if (all_done) break;
  }
  // Newton polish; keep a step only if it lowers the residual.
  double worst = 0.0;
  for (auto& zi : z) {
    for (int k = 0; k < 3; ++k) {
      const auto [p, dp] = eval_with_derivative(a, zi);
      if (dp == cplx(0.0)) break;
      const cplx cand = zi - p / dp;
      if (std::abs(poly_eval(a, cand)) < std::abs(p)) {
        zi = cand;
      } else {
        break;
      }
    }
    worst = std::max(worst, std::abs(poly_eval(a, zi)));
  }
  const double tol = 1e-10 * std::pow(radius, static_cast<double>(n));
  if (!(worst <= tol)) {
    throw Error(ErrorCode::NonConvergence, "root iteration did not converge; worst residual " + std::to_string(worst));
  }
  std::sort(z.begin(), z.end(), lex_less);
  return z;
}

std::vector<cplx> roots_at(const PolyPath& p, std::size_t i) {
  const auto a = p.at(i);
  return roots_of(a);
}

cplx discriminant_from_roots(std::span<const cplx> roots) {
  cplx d = 1.0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (i != j) d *= roots[i] - roots[j];
    }
  }
  return d;
}

SampledSignal discriminant_signal(const PolyPath& p) {
  p.validate();
  const auto& g = p.coeffs.front();
  std::vector<double> v(2 * p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const cplx d = discriminant_from_roots(roots_at(p, i));
    v[2 * i] = d.real();
    v[2 * i + 1] = d.imag();
  }
  return SampledSignal(g.t0(), g.dt(), 1, true, std::move(v), "D");
}

BranchCollision::BranchCollision(Window interval, const std::string& why)
    : Error(ErrorCode::BranchCollision,
            why + " in [" + std::to_string(interval.a) + ", " + std::to_string(interval.b) + "]"),
      interval_(interval) {}

std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  // Potentials formulation, 1-based with a sentinel column 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = kInf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> row_to_col(n);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

RootBranches track_branches(const PolyPath& p) {
  p.validate();
  const std::size_t n = p.degree();
  const std::size_t m = p.size();
  const auto& g = p.coeffs.front();
  std::vector<std::vector<double>> vals(n, std::vector<double>(2 * m));
  std::vector<double> dvals(2 * m);
  std::vector<std::vector<std::size_t>> log;
  double residual = 0.0;
  double sep_min = kInf, sep_at = g.t0();

  auto collision_floor = [n](std::span<const cplx> a) {
    return 1e-8 * std::pow(1.0 + coeff_bound(a), static_cast<double>(n * (n - 1)));
  };
  auto record = [&](std::size_t i, std::span<const cplx> a, const std::vector<cplx>& ordered) {
    for (std::size_t b = 0; b < n; ++b) {
      vals[b][2 * i] = ordered[b].real();
      vals[b][2 * i + 1] = ordered[b].imag();
      residual = std::max(residual, std::abs(poly_eval(a, ordered[b])));
    }
    const cplx d = discriminant_from_roots(ordered);
    dvals[2 * i] = d.real();
    dvals[2 * i + 1] = d.imag();
    if (n >= 2) {
      const double s = min_separation(ordered);
      if (s < sep_min) {
        sep_min = s;
        sep_at = p.time(i);
      }
    }
    return d;
  };

  auto a0 = p.at(0);
  std::vector<cplx> prev = roots_of(a0);
  const cplx d0 = record(0, a0, prev);
  if (n >= 2 && std::abs(d0) < collision_floor(a0)) {
    throw BranchCollision({p.time(0), p.time(0)}, "discriminant vanishes");
  }
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (std::size_t i = 1; i < m; ++i) {
    const auto a = p.at(i);
    const std::vector<cplx> next = roots_of(a);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) cost[r][c] = std::abs(prev[r] - next[c]);
    }
    const auto assign = hungarian(cost);
    std::vector<cplx> ordered(n);
    double move = 0.0;
    for (std::size_t b = 0; b < n; ++b) {
      ordered[b] = next[assign[b]];
      move = std::max(move, cost[b][assign[b]]);
    }
    const Window step{p.time(i - 1), p.time(i)};
    if (n >= 2 && !(move < 0.5 * min_separation(prev))) {
      throw BranchCollision(step, "root motion exceeds half the root separation");
    }
    const cplx d = record(i, a, ordered);
    if (n >= 2 && std::abs(d) < collision_floor(a)) throw BranchCollision(step, "discriminant vanishes");
    log.push_back(assign);
    prev = std::move(ordered);
  }

  std::vector<SampledSignal> branches;
  for (std::size_t b = 0; b < n; ++b) {
    branches.emplace_back(g.t0(), g.dt(), 1, true, std::move(vals[b]), p.label + " branch " + std::to_string(b));
  }
  return RootBranches{std::move(branches), residual,
                      SampledSignal(g.t0(), g.dt(), 1, true, std::move(dvals), "D"),
                      n >= 2 ? sep_min : kInf,
                      sep_at,
                      std::move(log)};
}

RootBoundCheck root_bound_check(const RootBranches& rb, const PolyPath& p) {
  RootBoundCheck c;
  c.max_excess = -kInf;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double bound = 1.0 + coeff_bound(p.at(i));
    for (const auto& br : rb.branches) {
      const double r = std::abs(br.complex_value(i));
      c.max_abs_root = std::max(c.max_abs_root, r);
      c.max_excess = std::max(c.max_excess, r - bound);
    }
  }
  c.holds = c.max_excess <= 0.0;
  return c;
}

SeparationCertificate separation_certificate(const RootBranches& rb, double alpha_claim) {
  SeparationCertificate s;
  s.separation_min = rb.separation_min;
  s.argmin = rb.separation_argmin;
  s.inf_abs_discriminant = kInf;
  for (std::size_t i = 0; i < rb.discriminant.size(); ++i) {
    const double v = std::abs(rb.discriminant.complex_value(i));
    if (v < s.inf_abs_discriminant) {
      s.inf_abs_discriminant = v;
      s.discriminant_argmin = rb.discriminant.time(i);
    }
  }
  s.holds = s.separation_min >= alpha_claim;
  return s;
}

std::vector<RecurrenceReport> classify_branches(const RootBranches& rb, const Thresholds& th) {
  std::vector<RecurrenceReport> out;
  for (const auto& b : rb.branches) out.push_back(classify(b, th));
  return out;
}

ZhikovReport zhikov_pipeline(const SampledSignal& f, const ZhikovOptions& opt) {
  if (f.dim() != 1) throw Error(ErrorCode::DimMismatch, "zhikov input must be a scalar signal");
  const std::size_t m = f.size();
  std::vector<double> pv(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    cplx v = f.complex_value(i);
    if (opt.with_decay) v += std::exp(-f.time(i));
    pv[2 * i] = v.real();
    pv[2 * i + 1] = v.imag();
  }
  const SampledSignal p(f.t0(), f.dt(), 1, true, pv, "p");

  ZhikovReport rep;
  rep.inf_abs_p = kInf;
  rep.quarter_minima.assign(4, kInf);
  for (std::size_t i = 0; i < m; ++i) {
    const double v = std::abs(p.complex_value(i));
    if (v < rep.inf_abs_p) {
      rep.inf_abs_p = v;
      rep.argmin = p.time(i);
    }
    const std::size_t q = std::min<std::size_t>(3, 4 * i / m);
    rep.quarter_minima[q] = std::min(rep.quarter_minima[q], v);
  }

  std::vector<double> a2(2 * m);
  for (std::size_t k = 0; k < 2 * m; ++k) a2[k] = -pv[k];
  PolyPath path;
  path.coeffs.push_back(SampledSignal(f.t0(), f.dt(), 1, true, std::vector<double>(2 * m, 0.0), "a1"));
  path.coeffs.push_back(SampledSignal(f.t0(), f.dt(), 1, true, std::move(a2), "a2"));
  path.label = "x^2 - p";

  const SampledSignal disc = discriminant_signal(path);
  rep.inf_abs_discriminant = kInf;
  for (std::size_t i = 0; i < m; ++i) rep.inf_abs_discriminant = std::min(rep.inf_abs_discriminant, std::abs(disc.complex_value(i)));
  rep.discriminant_separated = rep.inf_abs_discriminant >= opt.discriminant_floor;

  try {
    rep.branches = track_branches(path);
  } catch (const BranchCollision& e) {
    rep.collision = e.interval();
    rep.collision_message = e.what();
  }
  if (rep.branches && opt.classify) rep.reports = classify_branches(*rep.branches, opt.thresholds);
  return rep;
}

}  // namespace raplab
