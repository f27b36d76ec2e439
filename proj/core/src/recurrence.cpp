#include "raplab/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "raplab/error.hpp"

namespace raplab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// |s(t_i + tau) - s(t_i)|^2 on the grid of s, with linear interpolation for
// off-grid tau.
class ShiftKernel {
 public:
  ShiftKernel(const SampledSignal& s, double tau) : v_(s.data().data()), w_(s.width()), n_(s.size()) {
    const double shift = tau / s.dt();
    m_ = static_cast<std::size_t>(std::max(0.0, std::floor(shift + kGridTolerance)));
    frac_ = shift - static_cast<double>(m_);
    if (frac_ < kGridTolerance) frac_ = 0.0;
  }

  // Number of leading indices i for which s(t_i + tau) is defined.
  std::size_t valid() const {
    const std::size_t need = m_ + (frac_ > 0.0 ? 1 : 0);
    return need >= n_ ? 0 : n_ - need;
  }

  double diff_sq(std::size_t i) const {
    const double* a = v_ + i * w_;
    const double* b = v_ + (i + m_) * w_;
    double acc = 0.0;
    if (frac_ == 0.0) {
      for (std::size_t k = 0; k < w_; ++k) {
        const double d = b[k] - a[k];
        acc += d * d;
      }
    } else {
      const double* c = b + w_;
      for (std::size_t k = 0; k < w_; ++k) {
        const double d = (1.0 - frac_) * b[k] + frac_ * c[k] - a[k];
        acc += d * d;
      }
    }
    return acc;
  }

 private:
  const double* v_;
  std::size_t w_;
  std::size_t n_;
  std::size_t m_ = 0;
  double frac_ = 0.0;
};

std::size_t first_index_at_or_after(const SampledSignal& s, double t) {
  const double x = std::ceil((t - s.t0()) / s.dt() - kGridTolerance);
  return x <= 0.0 ? 0 : static_cast<std::size_t>(x);
}

std::ptrdiff_t last_index_at_or_before(const SampledSignal& s, double t) {
  return static_cast<std::ptrdiff_t>(std::floor((t - s.t0()) / s.dt() + kGridTolerance));
}

TranslationEntry global_entry(const SampledSignal& s, double tau, double eps, Window w) {
  TranslationEntry e;
  e.tau = tau;
  const ShiftKernel k(s, tau);
  const double b = std::min(w.b, s.t_end() - tau);
  const std::size_t lo = first_index_at_or_after(s, w.a);
  const std::ptrdiff_t hi_raw = std::min<std::ptrdiff_t>(last_index_at_or_before(s, b),
                                                         static_cast<std::ptrdiff_t>(k.valid()) - 1);
  if (hi_raw < static_cast<std::ptrdiff_t>(lo)) {
    e.tail_sup = kInf;
    return e;
  }
  const auto hi = static_cast<std::size_t>(hi_raw);
  const double cutoff = 4.0 * eps * eps;  // (2 eps)^2
  double best = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    best = std::max(best, k.diff_sq(i));
    if (best >= cutoff) break;
  }
  e.tail_sup = std::sqrt(best);
  e.accepted = e.tail_sup < eps;
  if (e.accepted) e.L = s.time(lo);
  return e;
}

TranslationEntry remote_entry(const SampledSignal& s, double tau, double eps, double min_tail) {
  TranslationEntry e;
  e.tau = tau;
  const ShiftKernel k(s, tau);
  const std::size_t n = k.valid();
  if (n == 0) {
    e.tail_sup = kInf;
    return e;
  }
  const double eps_sq = eps * eps;
  const auto tail_pts = static_cast<std::size_t>(std::ceil(min_tail / s.dt() - kGridTolerance));
  if (tail_pts >= n) {
    // The residual tail cannot be long enough; report the sup over what exists.
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, k.diff_sq(i));
    e.tail_sup = std::sqrt(best);
    return e;
  }
  // The minimal tail [n-1-tail_pts, n-1] must already be below eps.
  double best = 0.0;
  std::size_t i = n - 1;
  for (;; --i) {
    best = std::max(best, k.diff_sq(i));
    if (i == n - 1 - tail_pts) break;
  }
  if (best >= eps_sq) {
    e.tail_sup = std::sqrt(best);
    return e;
  }
  while (i > 0) {
    const double d = k.diff_sq(i - 1);
    if (d >= eps_sq) break;
    best = std::max(best, d);
    --i;
  }
  e.accepted = true;
  e.L = s.time(i);
  e.tail_sup = std::sqrt(best);
  return e;
}

// Ranking used by the refinement search: accepted first, then smaller sup.
bool better(const TranslationEntry& a, const TranslationEntry& b) {
  if (a.accepted != b.accepted) return a.accepted;
  if (a.accepted && a.L && b.L && *a.L != *b.L) return *a.L < *b.L;
  return a.tail_sup < b.tail_sup;
}

template <class Eval>
std::vector<TranslationEntry> scan(const TauCandidates& cands, double eps, Eval eval) {
  std::vector<TranslationEntry> entries;
  entries.reserve(cands.taus.size());
  for (double tau : cands.taus) entries.push_back(eval(tau));
  if (!cands.refine || entries.empty()) return entries;

  // Runs of consecutive near-misses (sup < 2 eps) without any acceptance get
  // one local bisection search around their best member.
  std::vector<TranslationEntry> extra;
  const double tau_max = cands.max_tau();
  std::size_t i = 0;
  while (i < entries.size()) {
    if (!(entries[i].tail_sup < 2.0 * eps)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    std::size_t best = i;
    bool any_accepted = false;
    while (j < entries.size() && entries[j].tail_sup < 2.0 * eps) {
      any_accepted = any_accepted || entries[j].accepted;
      if (better(entries[j], entries[best])) best = j;
      ++j;
    }
    if (!any_accepted) {
      TranslationEntry cur = entries[best];
      double h = 0.5 * cands.step;
      for (int level = 0; level < cands.refine_depth && !cur.accepted; ++level, h *= 0.5) {
        TranslationEntry next = cur;
        for (double tau : {cur.tau - h, cur.tau + h}) {
          if (tau <= 0.0 || tau > tau_max) continue;
          TranslationEntry e = eval(tau);
          extra.push_back(e);
          if (better(e, next)) next = e;
        }
        cur = next;
      }
    }
    i = j;
  }
  entries.insert(entries.end(), extra.begin(), extra.end());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.tau < b.tau; });
  entries.erase(std::unique(entries.begin(), entries.end(),
                            [](const auto& a, const auto& b) { return std::abs(a.tau - b.tau) < 1e-12; }),
                entries.end());
  return entries;
}

void check_candidates(const TauCandidates& cands) {
  if (cands.taus.empty()) throw Error(ErrorCode::InvalidArgument, "no tau candidates");
  if (!(cands.step > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau candidate step must be positive");
  for (double t : cands.taus) {
    if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidArgument, "tau candidates must be positive");
  }
}

TranslationSet finish(double eps, std::vector<TranslationEntry> entries, double tau_max) {
  TranslationSet ts;
  ts.epsilon = eps;
  ts.entries = std::move(entries);
  ts.scan_range = {0.0, tau_max};
  ts.max_gap = accepted_max_gap(ts.entries, ts.scan_range);
  return ts;
}

double member_distance_capped(const SampledSignal& a, std::size_t a0, const SampledSignal& b, std::size_t b0,
                              std::size_t count, double cap_sq) {
  const std::size_t w = a.width();
  const double* pa = a.data().data() + a0 * w;
  const double* pb = b.data().data() + b0 * w;
  double best = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < w; ++k) {
      const double d = pa[i * w + k] - pb[i * w + k];
      acc += d * d;
    }
    if (acc > best) {
      best = acc;
      if (best >= cap_sq) break;
    }
  }
  return best;
}

double full_distance(const SampledSignal& a, const SampledSignal& b) {
  const std::size_t n = std::min(a.size(), b.size());
  return std::sqrt(member_distance_capped(a, 0, b, 0, n, kInf));
}

void require_same_grid(const SampledSignal& a, const SampledSignal& b) {
  if (a.width() != b.width()) throw Error(ErrorCode::DimMismatch, "hull members differ in dimension");
  if (std::abs(a.dt() - b.dt()) > 1e-9 * a.dt()) throw Error(ErrorCode::GridMismatch, "hull members differ in dt");
}

}  // namespace

TauCandidates TauCandidates::uniform(double lo, double hi, double step, bool refine) {
  if (!(step > 0.0) || !(lo > 0.0) || hi < lo) {
    throw Error(ErrorCode::InvalidArgument, "uniform tau grid needs 0 < lo <= hi and step > 0");
  }
  TauCandidates c;
  c.step = step;
  c.refine = refine;
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  c.taus.reserve(n);
  for (std::size_t i = 0; i < n; ++i) c.taus.push_back(lo + step * static_cast<double>(i));
  return c;
}

TauCandidates TauCandidates::integers(long lo, long hi) {
  if (lo < 1 || hi < lo) throw Error(ErrorCode::InvalidArgument, "integer tau grid needs 1 <= lo <= hi");
  TauCandidates c;
  c.step = 1.0;
  for (long k = lo; k <= hi; ++k) c.taus.push_back(static_cast<double>(k));
  return c;
}

TauCandidates TauCandidates::list(std::vector<double> taus, double step, bool refine) {
  TauCandidates c;
  std::sort(taus.begin(), taus.end());
  c.taus = std::move(taus);
  c.step = step;
  c.refine = refine;
  return c;
}

TauCandidates TauCandidates::with_extra(std::span<const double> extra) const {
  TauCandidates c = *this;
  c.taus.insert(c.taus.end(), extra.begin(), extra.end());
  std::sort(c.taus.begin(), c.taus.end());
  c.taus.erase(std::unique(c.taus.begin(), c.taus.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               c.taus.end());
  return c;
}

std::vector<double> TranslationSet::accepted_taus() const {
  std::vector<double> out;
  for (const auto& e : entries) {
    if (e.accepted) out.push_back(e.tau);
  }
  return out;
}

const TranslationEntry* TranslationSet::find(double tau, double tol) const {
  for (const auto& e : entries) {
    if (std::abs(e.tau - tau) <= tol) return &e;
  }
  return nullptr;
}

bool TranslationSet::relatively_dense(double gap_bound_factor) const {
  return std::isfinite(max_gap) && gap_bound_factor * max_gap <= scan_range.length() * (1.0 + 1e-12);
}

double accepted_max_gap(const std::vector<TranslationEntry>& entries, Window scan_range) {
  double prev = scan_range.a;
  double gap = 0.0;
  bool any = false;
  for (const auto& e : entries) {
    if (!e.accepted) continue;
    gap = std::max(gap, e.tau - prev);
    prev = e.tau;
    any = true;
  }
  if (!any) return kInf;
  return std::max(gap, scan_range.b - prev);
}

TranslationSet translation_set_global(const SampledSignal& s, double eps, Window w, const TauCandidates& cands) {
  check_candidates(cands);
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const double tol = kGridTolerance * s.dt();
  if (w.a < s.t0() - tol || w.b > s.t_end() + tol || w.b < w.a) {
    throw Error(ErrorCode::WindowOutOfDomain, "translation window outside the signal domain");
  }
  if (w.length() < 4.0 * cands.max_tau() - tol) {
    throw Error(ErrorCode::WindowTooShort, "window must span at least 4x the largest candidate tau");
  }
  auto entries = scan(cands, eps, [&](double tau) { return global_entry(s, tau, eps, w); });
  return finish(eps, std::move(entries), cands.max_tau());
}

TranslationSet translation_set_remote(const SampledSignal& s, double eps, const TauCandidates& cands) {
  check_candidates(cands);
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  const Window d = s.domain();
  if (d.length() < 4.0 * cands.max_tau() - kGridTolerance * s.dt()) {
    throw Error(ErrorCode::DomainTooShort, "domain must span at least 4x the largest candidate tau");
  }
  const double min_tail = cands.effective_min_tail();
  auto entries = scan(cands, eps, [&](double tau) { return remote_entry(s, tau, eps, min_tail); });
  return finish(eps, std::move(entries), cands.max_tau());
}

TauPeriodicResult remotely_tau_periodic_test(const SampledSignal& s, double tau, std::span<const double> eps_grid,
                                             double min_tail) {
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  if (s.domain().length() < 4.0 * tau - kGridTolerance * s.dt()) {
    throw Error(ErrorCode::DomainTooShort, "domain must span at least 4x tau");
  }
  TauPeriodicResult r;
  r.tau = tau;
  r.passed = !eps_grid.empty();
  const double tail = std::max(min_tail, s.dt());
  for (double eps : eps_grid) {
    const auto e = remote_entry(s, tau, eps, tail);
    r.table.push_back({eps, e.L, e.tail_sup});
    r.passed = r.passed && e.accepted;
  }
  return r;
}

bool remotely_stationary_test(const SampledSignal& s, const TauCandidates& cands, std::span<const double> eps_grid) {
  for (double eps : eps_grid) {
    TauCandidates plain = cands;
    plain.refine = false;
    const auto ts = translation_set_remote(s, eps, plain);
    for (const auto& e : ts.entries) {
      if (!e.accepted) return false;
    }
  }
  return !eps_grid.empty();
}

HullSample make_hull(std::vector<SampledSignal> members, std::vector<double> shifts) {
  if (members.size() != shifts.size()) throw Error(ErrorCode::InvalidArgument, "one shift per hull member");
  for (const auto& m : members) require_same_grid(members.front(), m);
  HullSample h;
  h.members = std::move(members);
  h.shifts = std::move(shifts);
  const std::size_t n = h.members.size();
  h.dist.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      h.dist[i][j] = h.dist[j][i] = full_distance(h.members[i], h.members[j]);
    }
  }
  return h;
}

HullSample omega_limit_sample(const SampledSignal& s, std::span<const double> shifts, double window_length,
                              double cluster_tol) {
  if (shifts.empty()) throw Error(ErrorCode::InvalidArgument, "omega-limit sample needs at least one shift");
  if (!(window_length > 0.0) || !(cluster_tol > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "window length and cluster tolerance must be positive");
  }
  std::vector<SampledSignal> segs;
  segs.reserve(shifts.size());
  for (double h : shifts) {
    if (h + window_length > s.t_end() + kGridTolerance * s.dt() || h < s.t0() - kGridTolerance * s.dt()) {
      throw Error(ErrorCode::DomainTooShort, "shift + comparison window exceeds the signal domain");
    }
    segs.push_back(segment(s, h, window_length));
  }
  const std::size_t n = segs.front().size();
  const double tol_sq = cluster_tol * cluster_tol;

  // Leader clustering in shift order.
  std::vector<std::vector<std::size_t>> clusters;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    bool placed = false;
    for (auto& c : clusters) {
      if (member_distance_capped(segs[c.front()], 0, segs[i], 0, n, tol_sq) <= tol_sq) {
        c.push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back({i});
  }

  // Medoid against at most 32 evenly spaced cluster members.
  auto medoid = [&](const std::vector<std::size_t>& c) {
    if (c.size() <= 2) return c.front();
    const std::size_t stride = std::max<std::size_t>(1, c.size() / 32);
    std::size_t best = c.front();
    double best_sum = kInf;
    for (std::size_t a : c) {
      double sum = 0.0;
      for (std::size_t k = 0; k < c.size(); k += stride) {
        sum += std::sqrt(member_distance_capped(segs[a], 0, segs[c[k]], 0, n, kInf));
      }
      if (sum < best_sum) {
        best_sum = sum;
        best = a;
      }
    }
    return best;
  };

  std::vector<std::size_t> reps;
  for (const auto& c : clusters) reps.push_back(medoid(c));

  // Medoids can drift closer than the tolerance; merge until they don't.
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t a = 0; a < reps.size() && !merged; ++a) {
      for (std::size_t b = a + 1; b < reps.size() && !merged; ++b) {
        if (member_distance_capped(segs[reps[a]], 0, segs[reps[b]], 0, n, tol_sq) <= tol_sq) {
          clusters[a].insert(clusters[a].end(), clusters[b].begin(), clusters[b].end());
          std::sort(clusters[a].begin(), clusters[a].end());
          clusters.erase(clusters.begin() + static_cast<long>(b));
          reps.erase(reps.begin() + static_cast<long>(b));
          reps[a] = medoid(clusters[a]);
          merged = true;
        }
      }
    }
  }

  std::vector<SampledSignal> members;
  std::vector<double> rep_shifts;
  for (std::size_t r : reps) {
    members.push_back(segs[r]);
    rep_shifts.push_back(shifts[r]);
  }
  return make_hull(std::move(members), std::move(rep_shifts));
}

AapResult aap_test(const SampledSignal& s, const HullSample& hull, double eps, const TauCandidates& ap_cands,
                   double tail_fraction, double gap_bound_factor) {
  if (hull.members.empty()) throw Error(ErrorCode::InvalidArgument, "empty hull");
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "tail_fraction must lie in (0, 1]");
  }
  for (std::size_t m = 0; m < hull.size(); ++m) {
    const auto& mem = hull.members[m];
    require_same_grid(s, mem);
    const auto ts = translation_set_global(mem, eps, mem.domain(), ap_cands);
    if (!ts.relatively_dense(gap_bound_factor)) {
      throw Error(ErrorCode::HullNotAP, "hull member " + std::to_string(m) + " is not almost periodic at eps");
    }
  }

  const Window d = s.domain();
  const std::size_t tail_first = first_index_at_or_after(s, d.b - tail_fraction * d.length());
  const std::size_t tail_n = s.size() - tail_first;

  AapResult r;
  double best_sq = kInf;
  for (std::size_t m = 0; m < hull.size(); ++m) {
    const auto& mem = hull.members[m];
    if (mem.size() >= tail_n) {
      for (std::size_t c = 0; c + tail_n <= mem.size(); ++c) {
        const double d2 = member_distance_capped(s, tail_first, mem, c, tail_n, best_sq);
        if (d2 < best_sq) {
          best_sq = d2;
          r.best_member = m;
          r.best_phase = static_cast<double>(c) * mem.dt();
        }
      }
    } else {
      // Member shorter than the tail: compare the final half-member stretch of
      // s against every phase of the member that leaves room for it.
      const std::size_t cmp_n = mem.size() - mem.size() / 2;
      const std::size_t start = s.size() - cmp_n;
      for (std::size_t c = 0; c + cmp_n <= mem.size(); ++c) {
        const double d2 = member_distance_capped(s, start, mem, c, cmp_n, best_sq);
        if (d2 < best_sq) {
          best_sq = d2;
          r.best_member = m;
          r.best_phase = static_cast<double>(c) * mem.dt();
        }
      }
    }
  }
  r.residual = std::sqrt(best_sq);
  r.aap = r.residual < eps;
  return r;
}

EquiApResult equi_ap_test(const HullSample& hull, double eps, Window w, const TauCandidates& cands,
                          double gap_bound_factor) {
  if (hull.members.empty()) throw Error(ErrorCode::InvalidArgument, "empty hull");
  for (const auto& m : hull.members) require_same_grid(hull.members.front(), m);
  check_candidates(cands);
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  for (const auto& m : hull.members) {
    const double tol = kGridTolerance * m.dt();
    if (w.a < m.t0() - tol || w.b > m.t_end() + tol || w.b < w.a) {
      throw Error(ErrorCode::WindowOutOfDomain, "translation window outside a hull member's domain");
    }
  }
  if (w.length() < 4.0 * cands.max_tau() - kGridTolerance * hull.members.front().dt()) {
    throw Error(ErrorCode::WindowTooShort, "window must span at least 4x the largest candidate tau");
  }
  // Joint entry: the worst member decides. The member that rejected last is
  // tried first, since rejections exit early and acceptances scan everything.
  std::size_t lead = 0;
  auto joint = [&](double tau) {
    TranslationEntry out = global_entry(hull.members[lead], tau, eps, w);
    for (std::size_t m = 0; m < hull.size() && out.accepted; ++m) {
      if (m == lead) continue;
      const auto e = global_entry(hull.members[m], tau, eps, w);
      out.tail_sup = std::max(out.tail_sup, e.tail_sup);
      if (!e.accepted) {
        out.accepted = false;
        out.L.reset();
        lead = m;
      }
    }
    return out;
  };
  TranslationSet first = finish(eps, scan(cands, eps, joint), cands.max_tau());
  EquiApResult r;
  r.equi_ap = first.relatively_dense(gap_bound_factor);
  r.common = std::move(first);
  return r;
}

MinimalityResult minimality_test(const HullSample& hull, double eps, double max_shift, double compare_length) {
  MinimalityResult r;
  if (hull.size() <= 1) return r;
  const auto& m0 = hull.members.front();
  const std::size_t cmp_n = SampledSignal::points_for(0.0, compare_length, m0.dt());
  const std::size_t shift_n = SampledSignal::points_for(0.0, max_shift, m0.dt());
  for (const auto& m : hull.members) {
    require_same_grid(m0, m);
    if (m.size() < cmp_n + shift_n - 1) {
      throw Error(ErrorCode::WindowTooShort, "hull members shorter than max_shift + compare_length");
    }
  }
  const double eps_sq = eps * eps;
  r.worst_distance = 0.0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    for (std::size_t j = 0; j < hull.size(); ++j) {
      if (i == j) continue;
      double best = kInf;
      for (std::size_t c = 0; c < shift_n && best >= eps_sq; ++c) {
        best = std::min(best, member_distance_capped(hull.members[i], c, hull.members[j], 0, cmp_n,
                                                     std::min(best, eps_sq)));
      }
      const double dist = std::sqrt(best);
      if (dist > r.worst_distance) {
        r.worst_distance = dist;
        r.worst_from = i;
        r.worst_to = j;
      }
      if (best >= eps_sq) r.consistent = false;
    }
  }
  return r;
}

LagrangeEvidence lagrange_stability_proxy(const SampledSignal& s, double range_limit, double growth_factor,
                                          double increment_tol) {
  LagrangeEvidence ev;
  const std::size_t n = s.size();
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (double v : s.at(i)) acc += v * v;
    const double norm = std::sqrt(acc);
    ev.range_bound = std::max(ev.range_bound, norm);
    if (i < half) {
      ev.head_max = std::max(ev.head_max, norm);
    } else {
      ev.tail_max = std::max(ev.tail_max, norm);
    }
    if (i > 0) ev.max_increment = std::max(ev.max_increment, sample_distance(s, i, s, i - 1));
  }
  ev.passed = std::isfinite(ev.range_bound) && ev.range_bound <= range_limit &&
              ev.tail_max <= growth_factor * ev.head_max + increment_tol && ev.max_increment <= increment_tol;
  return ev;
}

void Thresholds::validate() const {
  if (epsilon_grid.empty()) throw Error(ErrorCode::InvalidArgument, "epsilon grid is empty");
  for (std::size_t i = 0; i < epsilon_grid.size(); ++i) {
    if (!(epsilon_grid[i] > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon values must be positive");
    if (i > 0 && epsilon_grid[i] < epsilon_grid[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "epsilon grid must be sorted ascending");
    }
  }
  check_candidates(tau);
  if (!(cluster_tol > 0.0) || !(gap_bound_factor > 0.0) || !(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "thresholds must be positive (tail_fraction in (0, 1])");
  }
}

RecurrenceReport classify(const SampledSignal& s, const Thresholds& th) {
  th.validate();
  RecurrenceReport rep;
  rep.label = s.label();
  rep.thresholds = th;
  rep.window = s.domain();
  const double span = rep.window.length();
  rep.tail_window = {rep.window.b - th.tail_fraction * span, rep.window.b};
  const double tau_max = th.tau.max_tau();
  if (rep.tail_window.length() < 4.0 * tau_max - kGridTolerance * s.dt()) {
    throw Error(ErrorCode::DomainTooShort, "tail window must span at least 4x the largest candidate tau");
  }
  if (th.tau.effective_min_tail() > rep.tail_window.length() - tau_max) {
    throw Error(ErrorCode::DomainTooShort, "minimum residual tail longer than the tail window allows");
  }
  const double min_tail = th.tau.effective_min_tail();
  // Drifting profiles only show against translations comparable to the tail
  // start, so the tail scan reaches a quarter of the tail window.
  auto long_range = TauCandidates::uniform(th.tau.step, rep.tail_window.length() / 4.0, th.tau.step, th.tau.refine);
  long_range.refine_depth = th.tau.refine_depth;
  long_range.min_tail = th.tau.min_tail;
  long_range = long_range.with_extra(th.tau.taus);

  // Remote stage 0: base candidates plus everything a stronger test accepted.
  std::vector<TranslationSet> remote0;
  for (double eps : th.epsilon_grid) {
    EpsilonEvidence ev;
    ev.epsilon = eps;
    ev.global = translation_set_global(s, eps, rep.window, th.tau);
    const auto g_acc = ev.global.accepted_taus();
    ev.tail = translation_set_global(s, eps, rep.tail_window, long_range.with_extra(g_acc));
    auto extra = ev.tail.accepted_taus();
    std::erase_if(extra, [&](double tau) { return tau > tau_max; });
    extra.insert(extra.end(), g_acc.begin(), g_acc.end());
    remote0.push_back(translation_set_remote(s, eps, th.tau.with_extra(extra)));
    rep.evidence.push_back(std::move(ev));
  }

  // Remote stationarity: every base candidate accepted at every eps.
  bool stationary = true;
  for (const auto& r : remote0) {
    for (double tau : th.tau.taus) {
      const auto* e = r.find(tau, 1e-12);
      stationary = stationary && e != nullptr && e->accepted;
    }
  }

  // Remote tau-periodicity: the best tau of each accepted run (finest eps),
  // tau <= tau_max / gap_bound_factor, whose multiples up to tau_max all pass
  // the remote test at every eps.
  std::vector<TranslationEntry> multiples_found;
  if (stationary) {
    rep.flags.remotely_stationary = true;
    rep.flags.remotely_tau_periodic = true;
    rep.flags.tau = th.tau.taus.front();
    rep.tau_periodicity = remotely_tau_periodic_test(s, th.tau.taus.front(), th.epsilon_grid, min_tail);
  } else {
    const auto& finest = remote0.front();
    std::vector<double> run_best;
    const TranslationEntry* best = nullptr;
    double prev_tau = -kInf;
    for (const auto& e : finest.entries) {
      if (!e.accepted) continue;
      if (e.tau - prev_tau > 1.5 * th.tau.step && best != nullptr) {
        run_best.push_back(best->tau);
        best = nullptr;
      }
      if (best == nullptr || e.tail_sup < best->tail_sup) best = &e;
      prev_tau = e.tau;
    }
    if (best != nullptr) run_best.push_back(best->tau);
    for (double tau : run_best) {
      if (tau * th.gap_bound_factor > tau_max * (1.0 + 1e-12)) break;
      // Errors in tau add up over its multiples, so sharpen it first.
      TranslationEntry cur = remote_entry(s, tau, th.epsilon_grid.front(), min_tail);
      for (double h = 0.5 * th.tau.step; h > th.tau.step * std::ldexp(1.0, -th.tau.refine_depth - 2); h *= 0.5) {
        for (double cand : {cur.tau - h, cur.tau + h}) {
          if (cand <= 0.0) continue;
          auto e = remote_entry(s, cand, th.epsilon_grid.front(), min_tail);
          if (better(e, cur)) cur = e;
        }
      }
      tau = cur.tau;
      bool ok = true;
      std::vector<TranslationEntry> found;
      for (double eps : th.epsilon_grid) {
        for (int k = 1; ok && k * tau <= tau_max * (1.0 + 1e-12); ++k) {
          auto e = remote_entry(s, k * tau, eps, min_tail);
          ok = e.accepted;
          if (ok && eps == th.epsilon_grid.front()) found.push_back(e);
        }
        if (!ok) break;
      }
      if (ok) {
        rep.flags.remotely_tau_periodic = true;
        rep.flags.tau = tau;
        rep.tau_periodicity = remotely_tau_periodic_test(s, tau, th.epsilon_grid, min_tail);
        std::vector<double> mult;
        for (const auto& e : found) mult.push_back(e.tau);
        // Make the multiples visible to every eps's remote set.
        for (std::size_t k = 0; k < remote0.size(); ++k) {
          for (double m : mult) {
            if (remote0[k].find(m, 1e-12) == nullptr) {
              remote0[k].entries.push_back(remote_entry(s, m, th.epsilon_grid[k], min_tail));
            }
          }
          std::sort(remote0[k].entries.begin(), remote0[k].entries.end(),
                    [](const auto& a, const auto& b) { return a.tau < b.tau; });
          remote0[k].max_gap = accepted_max_gap(remote0[k].entries, remote0[k].scan_range);
        }
        break;
      }
    }
  }

  rep.flags.ap = rep.flags.aap = rep.flags.rap = true;
  for (std::size_t k = 0; k < rep.evidence.size(); ++k) {
    auto& ev = rep.evidence[k];
    ev.remote = std::move(remote0[k]);
    ev.ap = ev.global.relatively_dense(th.gap_bound_factor);
    TranslationSet near = ev.tail;
    std::erase_if(near.entries, [&](const TranslationEntry& e) { return e.tau > tau_max; });
    near.scan_range = {0.0, tau_max};
    near.max_gap = accepted_max_gap(near.entries, near.scan_range);
    ev.aap = ev.ap || (ev.tail.relatively_dense(th.gap_bound_factor) && near.relatively_dense(th.gap_bound_factor));
    ev.rap = ev.remote.relatively_dense(th.gap_bound_factor);
    rep.flags.ap = rep.flags.ap && ev.ap;
    rep.flags.aap = rep.flags.aap && ev.aap;
    rep.flags.rap = rep.flags.rap && ev.rap;
  }
  rep.lagrange = lagrange_stability_proxy(s, th.lagrange_range_limit, th.lagrange_growth_factor,
                                          th.lagrange_increment_tol);
  rep.flags.lagrange_stable_proxy = rep.lagrange.passed;
  return rep;
}

bool thap4_equivalence_check(const SampledSignal& s, double eps, const TauCandidates& cands) {
  check_candidates(cands);
  const double min_tail = cands.effective_min_tail();
  const auto tail_pts = static_cast<std::size_t>(std::ceil(min_tail / s.dt() - kGridTolerance));
  const double tau_max = cands.max_tau();
  std::vector<double> taus = cands.taus;
  // Two-sided extension when the signal reaches far enough into negative time.
  if (s.t0() <= -tau_max) {
    for (double t : cands.taus) taus.push_back(-t);
  }
  const std::size_t n = s.size();
  const double eps_sq = eps * eps;
  for (double tau : taus) {
    const auto shift = static_cast<std::ptrdiff_t>(std::lround(tau / s.dt()));
    // Pairs (i, i + shift) inside the grid.
    const std::ptrdiff_t i_lo = std::max<std::ptrdiff_t>(0, -shift);
    const std::ptrdiff_t i_hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n) - 1,
                                                         static_cast<std::ptrdiff_t>(n) - 1 - shift);
    if (i_hi - i_lo < static_cast<std::ptrdiff_t>(tail_pts)) continue;
    auto d2 = [&](std::ptrdiff_t i) {
      return sample_distance(s, static_cast<std::size_t>(i), s, static_cast<std::size_t>(i + shift)) *
             sample_distance(s, static_cast<std::size_t>(i), s, static_cast<std::size_t>(i + shift));
    };
    // Variant A: all t >= L. Least L index by backward scan.
    std::ptrdiff_t la = i_hi + 1;
    while (la > i_lo && d2(la - 1) < eps_sq) --la;
    const bool acc_a = i_hi - la >= static_cast<std::ptrdiff_t>(tail_pts);
    // Variant B: t >= L and t + tau >= L, i.e. i >= L and i + shift >= L. The
    // tested range starts at max(L, L - shift, i_lo), which only moves down
    // as L decreases, so one descending sweep suffices.
    bool acc_b = false;
    std::ptrdiff_t verified = i_hi + 1;  // every i >= verified passed
    for (std::ptrdiff_t L = i_hi; L >= std::min(i_lo, i_lo + shift); --L) {
      const std::ptrdiff_t start = std::max({L, L - shift, i_lo});
      bool ok = true;
      while (verified > start && ok) {
        ok = d2(verified - 1) < eps_sq;
        if (ok) --verified;
      }
      if (!ok) break;  // smaller L only adds constraints
      if (i_hi - start >= static_cast<std::ptrdiff_t>(tail_pts)) {
        acc_b = true;
        break;
      }
    }
    if (acc_a != acc_b) return false;
  }
  return true;
}

}  // namespace raplab
