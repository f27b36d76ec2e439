#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "raplab/flows.hpp"
#include "raplab/signal.hpp"

namespace raplab {

/// u(t + 1) = f(t, u(t)) on the integers.
class MapSpec {
 public:
  using Fn = std::function<void(double t, const double* u, double* out)>;

  MapSpec(std::string id, std::size_t dim, Fn f);

  /// Expressions over t, f (forcing at t), u (alias u0), u0..u{d-1} and
  /// named parameters.
  static MapSpec from_expressions(const std::vector<std::string>& components,
                                  const std::map<std::string, double>& params, Forcing forcing = {},
                                  std::string id = "expr");

  void operator()(double t, const double* u, double* out) const { fn_(t, u, out); }
  std::size_t dim() const { return dim_; }
  const std::string& id() const { return id_; }

  /// f^h(t, u) = f(t + h, u), h an integer.
  MapSpec shifted(long h) const;

 private:
  std::string id_;
  std::size_t dim_;
  Fn fn_;
};

/// Magnitude beyond which iteration is treated as blow-up.
inline constexpr double kMapOverflow = 1e12;

/// u(0) = u0, ..., u(n_steps) on the grid t0, t0 + 1, ... (n_steps + 1 points).
SampledSignal iterate(const MapSpec& m, std::span<const double> u0, std::size_t n_steps, long t0 = 0);

/// Least p in [1, max_period] with sup_{t} |u(t + p) - u(t)| < tol over the
/// signal; none if no such p.
std::optional<long> asymptotic_period(const SampledSignal& u, long max_period, double tol);

struct DiscreteFiberCount {
  std::vector<long> shifts;
  std::vector<std::size_t> counts;
  std::size_t m = 0;
  bool constant = false;
  /// Per shift, per representative: the asymptotic period (if any).
  std::vector<std::vector<std::optional<long>>> periods;
  std::vector<std::vector<SampledSignal>> representatives;
  /// Largest representative period seen (if all have one).
  std::optional<long> period;
  /// Every period divides m * forcing_period (only when a forcing period is given).
  std::optional<bool> period_consistent;
};

/// For each integer shift h iterates f^h from every x0 for n_steps, drops the
/// first burn_in samples, clusters at cluster_tol and finds the asymptotic
/// period of each representative.
DiscreteFiberCount discrete_fiber_count(const MapSpec& m, std::span<const long> shifts,
                                        const std::vector<std::vector<double>>& x0s, std::size_t n_steps,
                                        std::size_t burn_in, double cluster_tol, long max_period = 16,
                                        std::optional<long> forcing_period = std::nullopt);

}  // namespace raplab
