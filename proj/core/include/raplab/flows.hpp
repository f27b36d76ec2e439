#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "raplab/recurrence.hpp"
#include "raplab/signal.hpp"

namespace raplab {

/// Scalar time-dependent forcing: an analytic function or a tabulated signal
/// (linear interpolation; evaluation outside the table throws).
class Forcing {
 public:
  Forcing() = default;
  Forcing(std::string id, std::function<double(double)> f) : id_(std::move(id)), fn_(std::move(f)) {}
  explicit Forcing(SampledSignal table);

  double operator()(double t) const;
  bool empty() const { return !fn_ && !table_; }
  const std::string& id() const { return id_; }
  /// Latest time at which the forcing is defined (+inf for analytic forcing).
  double t_max() const;
  double t_min() const;

 private:
  std::string id_;
  std::function<double(double)> fn_;
  std::optional<SampledSignal> table_;
};

/// Right-hand side g(t, x) of x' = g(t, x) on R^d.
class Rhs {
 public:
  using Fn = std::function<void(double t, const double* x, double* out)>;

  Rhs(std::string id, std::size_t dim, Fn f, double t_min = -1e300, double t_max = 1e300);

  /// Component expressions over slots t, x (alias of x0), x0..x{d-1}, f
  /// (forcing value at t) and the named parameters.
  static Rhs from_expressions(const std::vector<std::string>& components, const std::map<std::string, double>& params,
                              Forcing forcing = {}, std::string id = "expr");

  void operator()(double t, const double* x, double* out) const { fn_(t, x, out); }
  std::size_t dim() const { return dim_; }
  const std::string& id() const { return id_; }

  /// g^h(t, x) = g(t + h, x).
  Rhs shifted(double h) const;

  /// Time range on which the rhs may be evaluated (tabulated forcing).
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }

 private:
  std::string id_;
  std::size_t dim_;
  Fn fn_;
  double t_min_;
  double t_max_;
};

struct IVP {
  Rhs rhs;
  std::vector<double> x0;
  Window t_span;
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double max_step = 0.01;

  void validate() const;
};

/// Dormand-Prince 5(4) with dense output, resampled onto the uniform grid
/// dt = min(max_step, span / 1e4) covering t_span exactly.
SampledSignal integrate(const IVP& ivp);

struct IntegrateStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

/// Same as integrate; also reports step statistics.
SampledSignal integrate(const IVP& ivp, IntegrateStats& stats);

struct ConditionHParams {
  double kappa = 0.5;
  double alpha = 3.0;
  std::vector<double> box_lo;
  std::vector<double> box_hi;
  std::size_t n_pairs = 10000;
  std::uint64_t seed = 1;

  void validate(std::size_t dim) const;
};

struct ConditionHResult {
  /// min over samples of -kappa |d|^alpha - <d, g(t, x1) - g(t, x2)>. Values
  /// within rounding of zero are reported as zero.
  double margin = 0.0;
  bool holds = false;
  std::vector<double> worst_x1;
  std::vector<double> worst_x2;
  double worst_t = 0.0;
  std::size_t samples = 0;
};

/// Samples the one-sided dissipativity inequality: n_pairs pseudo-random pairs
/// from the box (fixed seed) plus a deterministic lattice of pairs, at every
/// time in t_samples.
ConditionHResult condition_h_margin(const Rhs& rhs, const ConditionHParams& p, std::span<const double> t_samples);

/// (r^{2-alpha} + kappa (alpha - 2) t)^{1/(2-alpha)}.
double contraction_modulus(double t, double r, double kappa, double alpha);

/// The same bound without kappa, as printed in the source: kappa = 1.
inline double contraction_modulus_unit(double t, double r, double alpha) {
  return contraction_modulus(t, r, 1.0, alpha);
}

struct ContractionCheck {
  bool holds = false;
  /// max over grid of |d(t)| - modulus(t - t0, r0); <= 0 when the bound holds.
  double max_violation = 0.0;
  double at_time = 0.0;
  double r0 = 0.0;
};

ContractionCheck contraction_bound_check(const SampledSignal& sol1, const SampledSignal& sol2, double kappa,
                                         double alpha, double tol = 1e-6);

/// Unique L with modulus(L, delta0) = eps.
double attraction_time(double delta0, double eps, double kappa, double alpha);

struct SeparationEstimate {
  double inf_distance = 0.0;
  double at_time = 0.0;
};

SeparationEstimate separation_estimate(const SampledSignal& sol1, const SampledSignal& sol2, Window w);

struct HullSolution {
  double shift = 0.0;
  std::size_t x0_index = 0;
  SampledSignal solution;
};

/// Solves y' = g^h(t, y) on [0, horizon] for every (shift, x0), in
/// lexicographic (shift, x0) order.
std::vector<HullSolution> hull_solutions(const Rhs& rhs, std::span<const double> shifts,
                                         const std::vector<std::vector<double>>& x0s, double horizon,
                                         double rel_tol = 1e-9, double abs_tol = 1e-12, double max_step = 0.01);

struct FiberCount {
  std::vector<double> shifts;
  std::vector<std::size_t> counts;
  std::size_t m = 0;
  bool constant = false;
  /// Per shift: one representative trailing segment per cluster.
  std::vector<std::vector<SampledSignal>> representatives;
  /// Smallest distance between representatives of one shift (inf if m = 1).
  double min_separation = 0.0;
};

/// Clusters the trailing segments [burn_in, end] of the solutions of each
/// base shift at cluster_tol. m is the most frequent count (ties: smaller).
FiberCount fiber_count(const std::vector<HullSolution>& sols, double burn_in, double cluster_tol);

struct StabilityProbeConfig {
  std::vector<double> x_ref;  // reference state at t_ref
  double t_ref = 0.0;
  std::vector<double> restart_times;
  std::vector<double> deltas;  // ascending
  std::vector<double> epsilons;
  double delta0 = 1.0;
  double horizon = 50.0;
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = 0.01;
  std::optional<double> kappa;
  std::optional<double> alpha;
};

struct StabilityProbeResult {
  struct Row {
    double epsilon = 0.0;
    /// Largest sampled delta whose perturbed restarts stay within epsilon.
    std::optional<double> delta;
    /// Longest observed re-entry time from delta0 over all restarts.
    std::optional<double> L_observed;
    std::optional<double> L_predicted;
  };
  std::vector<Row> rows;
  bool uniformly_stable = false;
  bool uniformly_attracting = false;
};

/// Restarts the reference solution at each restart time with +-delta
/// perturbations along every coordinate and measures the stability and
/// attraction tables.
StabilityProbeResult uniform_stability_probe(const Rhs& rhs, const StabilityProbeConfig& cfg);

}  // namespace raplab
