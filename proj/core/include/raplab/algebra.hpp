#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "raplab/error.hpp"
#include "raplab/recurrence.hpp"
#include "raplab/signal.hpp"

namespace raplab {

using cplx = std::complex<double>;

/// x^n + a_1(t) x^{n-1} + ... + a_n(t), coefficients as complex scalar
/// signals on one grid.
struct PolyPath {
  std::vector<SampledSignal> coeffs;  // a_1 .. a_n
  std::string label;

  std::size_t degree() const { return coeffs.size(); }
  std::size_t size() const { return coeffs.front().size(); }
  double time(std::size_t i) const { return coeffs.front().time(i); }
  /// a_1(t_i) .. a_n(t_i).
  std::vector<cplx> at(std::size_t i) const;

  /// Builds a path from functions of t sampled on [t0, t0 + (n - 1) dt].
  static PolyPath tabulate(double t0, double dt, std::size_t n,
                           const std::vector<std::function<cplx(double)>>& coeffs, std::string label = {});
  void validate() const;
};

/// Value of the monic polynomial with coefficients a at x.
cplx poly_eval(std::span<const cplx> a, cplx x);

/// max |a_k|.
double coeff_bound(std::span<const cplx> a);

/// All n roots of the monic polynomial: Aberth-Ehrlich iteration seeded on
/// the circle of radius 1 + A, then Newton polishing. Sorted by (re, im).
/// Throws NonConvergence when the residual stays above 1e-10 (1 + A)^n.
std::vector<cplx> roots_of(std::span<const cplx> a);

std::vector<cplx> roots_at(const PolyPath& p, std::size_t i);

/// prod_{i != j} (x_i - x_j).
cplx discriminant_from_roots(std::span<const cplx> roots);

/// Discriminant along the path (product form), as a complex scalar signal.
SampledSignal discriminant_signal(const PolyPath& p);

/// Thrown when consecutive root sets cannot be matched safely.
class BranchCollision : public Error {
 public:
  BranchCollision(Window interval, const std::string& why);
  Window interval() const { return interval_; }

 private:
  Window interval_;
};

struct RootBranches {
  std::vector<SampledSignal> branches;  // complex scalar signals
  double residual_max = 0.0;
  SampledSignal discriminant;
  double separation_min = 0.0;
  double separation_argmin = 0.0;
  /// matching_log[k][i] = index (in the sorted roots at step k + 1) assigned
  /// to branch i.
  std::vector<std::vector<std::size_t>> matching_log;
};

/// Minimum-total-displacement assignment between consecutive root sets
/// (Hungarian algorithm). Step guard: every branch moves less than half the
/// current minimum separation and |D| stays above 1e-8 (1 + A)^{n(n-1)}.
RootBranches track_branches(const PolyPath& p);

/// Optimal assignment for a square cost matrix: result[i] = column of row i.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& cost);

struct RootBoundCheck {
  bool holds = false;
  /// max over t, i of |lambda_i(t)| - (1 + A(t)); <= 0 when the bound holds.
  double max_excess = 0.0;
  double max_abs_root = 0.0;
};

RootBoundCheck root_bound_check(const RootBranches& rb, const PolyPath& p);

struct SeparationCertificate {
  bool holds = false;
  double separation_min = 0.0;
  double argmin = 0.0;
  double inf_abs_discriminant = 0.0;
  double discriminant_argmin = 0.0;
};

SeparationCertificate separation_certificate(const RootBranches& rb, double alpha_claim);

std::vector<RecurrenceReport> classify_branches(const RootBranches& rb, const Thresholds& th);

struct ZhikovOptions {
  bool with_decay = true;
  /// |D| must stay above this for the discriminant to count as separated.
  double discriminant_floor = 0.2;
  bool classify = true;
  Thresholds thresholds;
};

struct ZhikovReport {
  double inf_abs_p = 0.0;
  double argmin = 0.0;
  /// Minimum of |p| on each of four consecutive quarters of the window.
  std::vector<double> quarter_minima;
  double inf_abs_discriminant = 0.0;
  bool discriminant_separated = false;
  std::optional<Window> collision;
  std::string collision_message;
  std::optional<RootBranches> branches;
  std::vector<RecurrenceReport> reports;
};

/// p = f (+ e^{-t} with decay), tracks x^2 - p(t) = 0 and classifies the
/// branches when tracking succeeds.
ZhikovReport zhikov_pipeline(const SampledSignal& f, const ZhikovOptions& opt);

}  // namespace raplab
