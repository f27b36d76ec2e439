#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "raplab/flows.hpp"
#include "raplab/recurrence.hpp"
#include "raplab/signal.hpp"

namespace raplab {

/// Initial history u_0 on [-r, 0] (relative time).
struct HistorySegment {
  double r = 0.0;
  SampledSignal samples;

  /// Constant history c on [-r, 0] with n + 1 points.
  static HistorySegment constant(double r, std::vector<double> c, std::size_t n = 100);
  static HistorySegment from_function(double r, std::size_t dim, std::size_t n,
                                      const std::function<void(double, double*)>& f);
  void validate() const;
};

/// u'(t) = f(t, u(t - lag_1), ..., u(t - lag_k)) with point lags in [0, r].
class DelayRhs {
 public:
  /// lagged: k blocks of dim values, block j holding u(t - lags[j]).
  using Fn = std::function<void(double t, const double* lagged, double* out)>;

  DelayRhs(std::string id, std::size_t dim, std::vector<double> lags, Fn f);

  /// Expressions over t, f (forcing) and u{j} / u{j}_{k} (component k of
  /// u(t - lags[j]); u{j} is component 0), plus named parameters.
  static DelayRhs from_expressions(const std::vector<std::string>& components, std::vector<double> lags,
                                   const std::map<std::string, double>& params, Forcing forcing = {},
                                   std::string id = "expr");

  void operator()(double t, const double* lagged, double* out) const { fn_(t, lagged, out); }
  std::size_t dim() const { return dim_; }
  const std::vector<double>& lags() const { return lags_; }
  double max_lag() const;
  const std::string& id() const { return id_; }

 private:
  std::string id_;
  std::size_t dim_;
  std::vector<double> lags_;
  Fn fn_;
};

struct DdeSolution {
  /// u on [0, horizon].
  SampledSignal u;
  /// u'(t) = f(t, u_t) along the grid.
  SampledSignal du;
  double r = 0.0;
};

/// Method of steps with classical RK4 on the grid dt = r / N, N >= 100
/// (N = max(100, ceil(r / dt_hint))). Lagged values come from cubic Hermite
/// interpolation of the stored (u, u') history.
DdeSolution integrate_dde(const DelayRhs& rhs, const HistorySegment& init, double horizon, double dt_hint = 0.01);

struct PrecompactnessEvidence {
  bool passed = false;
  double range_bound = 0.0;
  double derivative_bound = 0.0;
  double head_max = 0.0;
  double tail_max = 0.0;
};

/// Boundedness of u (no growth from the first to the second half beyond
/// growth_factor, range below range_limit) plus a bounded derivative.
PrecompactnessEvidence precompactness_proxy(const DdeSolution& sol, double range_limit = 1e6,
                                            double derivative_limit = 1e6, double growth_factor = 1.5,
                                            double growth_tol = 0.1);

/// Segments u_t on [-r, 0] at each sample time (t >= t0 + r).
std::vector<HistorySegment> segment_trajectory(const SampledSignal& u, double r, std::span<const double> times);

/// Sup-norm distance between two segments on one grid.
double segment_distance(const HistorySegment& a, const HistorySegment& b);

/// Classifies the trajectory t -> u_t in the segment space with the sup norm.
/// Since sup_{t >= L} |u_{t+tau} - u_t| = sup_{t >= L - r} |u(t+tau) - u(t)|,
/// the flags equal those of u itself and every tail threshold L moves by +r.
RecurrenceReport classify_segment_trajectory(const SampledSignal& u, double r, const Thresholds& th);

}  // namespace raplab
