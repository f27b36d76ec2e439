#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "raplab/signal.hpp"

namespace raplab {

/// Candidate translations for a translation-set scan.
///
/// The scan range is always [0, max_tau()]; boundary gaps of the accepted set
/// are measured against it. `min_tail` is the shortest residual tail a remote
/// acceptance may rest on (zero means "one candidate step").
struct TauCandidates {
  std::vector<double> taus;
  double step = 1.0;
  bool refine = false;
  int refine_depth = 6;
  double min_tail = 0.0;

  static TauCandidates uniform(double lo, double hi, double step, bool refine = false);
  static TauCandidates integers(long lo, long hi);
  static TauCandidates list(std::vector<double> taus, double step, bool refine = false);

  double max_tau() const { return taus.empty() ? 0.0 : taus.back(); }
  double effective_min_tail() const { return min_tail > step ? min_tail : step; }
  /// Same candidates with extra candidates merged in (sorted, de-duplicated).
  TauCandidates with_extra(std::span<const double> extra) const;
};

struct TranslationEntry {
  double tau = 0.0;
  bool accepted = false;
  std::optional<double> L;
  /// Exact sup on the tested range when below twice the tolerance; for larger
  /// values the scan stops early and this is a lower bound.
  double tail_sup = 0.0;
};

struct TranslationSet {
  double epsilon = 0.0;
  std::vector<TranslationEntry> entries;  // ascending tau
  /// Largest gap between consecutive accepted taus, boundary gaps of the scan
  /// range included; +inf when nothing was accepted.
  double max_gap = 0.0;
  Window scan_range;

  std::vector<double> accepted_taus() const;
  const TranslationEntry* find(double tau, double tol = 1e-9) const;
  /// Finite-horizon relative density: something accepted and the witness
  /// length fits gap_bound_factor times into the scan range.
  bool relatively_dense(double gap_bound_factor) const;
};

/// Recomputes max_gap from the entries and the scan range.
double accepted_max_gap(const std::vector<TranslationEntry>& entries, Window scan_range);

/// Bohr translation set over a window: tau accepted iff
/// sup_{t in w'} |s(t + tau) - s(t)| < eps, with w' = w shrunk to where both
/// s(t) and s(t + tau) are defined.
TranslationSet translation_set_global(const SampledSignal& s, double eps, Window w, const TauCandidates& cands);

/// Remote translation set: for each tau the least grid L with
/// sup_{t >= L} |s(t + tau) - s(t)| < eps, found by a backward scan from the
/// end of the domain. Accepted iff the residual tail is at least
/// cands.effective_min_tail() long.
TranslationSet translation_set_remote(const SampledSignal& s, double eps, const TauCandidates& cands);

struct TauPeriodicResult {
  bool passed = false;
  double tau = 0.0;
  struct Row {
    double epsilon;
    std::optional<double> L;
    double tail_sup;
  };
  std::vector<Row> table;
};

/// Remote tau-periodicity: the tail sup of |s(t + tau) - s(t)| falls below
/// every eps in the grid.
TauPeriodicResult remotely_tau_periodic_test(const SampledSignal& s, double tau, std::span<const double> eps_grid,
                                             double min_tail = 0.0);

/// Remote stationarity at resolution: every candidate tau passes the remote
/// test at every eps.
bool remotely_stationary_test(const SampledSignal& s, const TauCandidates& cands, std::span<const double> eps_grid);

/// A finite family of translates s^h restricted to [0, W], with pairwise sup
/// distances.
struct HullSample {
  std::vector<SampledSignal> members;
  std::vector<double> shifts;
  std::vector<std::vector<double>> dist;

  std::size_t size() const { return members.size(); }
};

/// Builds a hull from given members (all on one grid) and fills the distance matrix.
HullSample make_hull(std::vector<SampledSignal> members, std::vector<double> shifts);

/// Samples omega-limit candidates: t -> s(h + t) on [0, window_length] for
/// each shift, clustered at cluster_tol; cluster representatives are medoids.
HullSample omega_limit_sample(const SampledSignal& s, std::span<const double> shifts, double window_length,
                              double cluster_tol);

struct AapResult {
  bool aap = false;
  double residual = 0.0;
  std::size_t best_member = 0;
  double best_phase = 0.0;
};

/// Decomposition residual: the smallest sup distance between the final
/// tail_fraction of s and a phase-aligned hull member. Members must be
/// almost periodic at eps (checked with ap_cands) or HullNotAP is thrown.
/// A member shorter than the tail is matched against the final half of its
/// own length instead.
AapResult aap_test(const SampledSignal& s, const HullSample& hull, double eps, const TauCandidates& ap_cands,
                   double tail_fraction, double gap_bound_factor = 3.0);

struct EquiApResult {
  bool equi_ap = false;
  TranslationSet common;
};

/// Intersection of the members' eps-translation sets on w. Candidate
/// refinement follows the joint (worst-member) sup.
EquiApResult equi_ap_test(const HullSample& hull, double eps, Window w, const TauCandidates& cands,
                          double gap_bound_factor = 3.0);

struct MinimalityResult {
  bool consistent = true;
  /// Largest (over member pairs) of the best shift distance; < eps when
  /// consistent. Once a pair reaches eps the search stops, so the value is
  /// then only a lower bound.
  double worst_distance = 0.0;
  std::size_t worst_from = 0;
  std::size_t worst_to = 0;
};

/// One-sided minimality check: every member must lie within eps of some shift
/// m_i(c + .) of every other member, c in [0, max_shift], compared on
/// [0, compare_length]. A failure certifies non-minimality at resolution eps.
MinimalityResult minimality_test(const HullSample& hull, double eps, double max_shift, double compare_length);

struct LagrangeEvidence {
  bool passed = false;
  double range_bound = 0.0;
  double head_max = 0.0;
  double tail_max = 0.0;
  double max_increment = 0.0;
};

/// Boundedness plus equicontinuity at grid resolution: finite range below
/// range_limit, no growth from the first to the second half beyond
/// growth_factor, and one-step increments at most increment_tol.
LagrangeEvidence lagrange_stability_proxy(const SampledSignal& s, double range_limit = 1e6,
                                          double growth_factor = 1.5, double increment_tol = 0.1);

struct Thresholds {
  std::vector<double> epsilon_grid{0.05};
  TauCandidates tau = TauCandidates::uniform(0.05, 20.0, 0.05, true);
  double cluster_tol = 0.05;
  double tail_fraction = 0.75;
  double gap_bound_factor = 3.0;
  double lagrange_range_limit = 1e6;
  double lagrange_growth_factor = 1.5;
  double lagrange_increment_tol = 0.1;

  void validate() const;
};

struct EpsilonEvidence {
  double epsilon = 0.0;
  TranslationSet global;  // full window (AP)
  /// Final tail_fraction window with a common L (AAP), scanned up to a
  /// quarter of the tail window; aap needs density both there and on the
  /// base candidate range.
  TranslationSet tail;
  TranslationSet remote;  // per-tau L (RAP)
  bool ap = false;
  bool aap = false;
  bool rap = false;
};

struct RecurrenceFlags {
  bool ap = false;
  bool aap = false;
  bool rap = false;
  bool remotely_tau_periodic = false;
  std::optional<double> tau;
  bool remotely_stationary = false;
  bool lagrange_stable_proxy = false;
};

struct RecurrenceReport {
  std::string label;
  RecurrenceFlags flags;
  std::vector<EpsilonEvidence> evidence;
  std::optional<TauPeriodicResult> tau_periodicity;
  LagrangeEvidence lagrange;
  Thresholds thresholds;
  Window window;
  Window tail_window;
};

/// Runs the whole classifier stack. Evaluation order guarantees the flag
/// implications ap => aap => rap and remotely_tau_periodic => rap: every
/// tau accepted by a stronger test is re-tested by the weaker ones.
RecurrenceReport classify(const SampledSignal& s, const Thresholds& th);

/// Compares the remote acceptance set with the variant that also requires
/// t + tau >= L. Negative taus are scanned when the signal extends to
/// t0 <= -max_tau.
bool thap4_equivalence_check(const SampledSignal& s, double eps, const TauCandidates& cands);

}  // namespace raplab
