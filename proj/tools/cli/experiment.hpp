#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "config.hpp"
#include "raplab/algebra.hpp"
#include "raplab/delay.hpp"
#include "raplab/flows.hpp"
#include "raplab/maps.hpp"
#include "raplab/recurrence.hpp"

namespace raplab::cli {

inline constexpr int kSchemaVersion = 1;

using Params = std::map<std::string, double>;

/// Where a scalar signal comes from: a catalog forcing or an expression in t
/// sampled on [t0, t1] with step dt, or a CSV file.
struct SignalSpec {
  std::string catalog;
  std::string expression;
  std::filesystem::path csv;
  Params params;
  double t0 = 0.0, t1 = 0.0, dt = 0.0;
  std::string label;
};

struct ForcingSpec {
  std::string catalog;
  Params params;
};

struct RhsSpec {
  std::string catalog;
  std::vector<std::string> expressions;
  Params params;
  std::optional<ForcingSpec> forcing;
};

struct DelaySpec {
  std::string catalog;
  std::vector<std::string> expressions;
  std::vector<double> lags;
  Params params;
  std::optional<ForcingSpec> forcing;
};

/// Extra translation-set scan written as its own CSV.
struct ScanSpec {
  std::string name;
  enum class Mode { Global, Remote } mode = Mode::Remote;
  double eps = 0.0;
  TauCandidates cands;
  std::optional<Window> window;  // global mode; whole domain by default
};

/// Decomposition residual against a hull built from one reference signal.
struct DecompositionSpec {
  SignalSpec reference;
  double eps = 0.0;
  double tail_fraction = 0.75;
  TauCandidates ap_cands;
};

/// Cross-checks between the classifier and the hull tests.
struct CoherenceSpec {
  std::vector<double> omega_shifts;
  double window = 0.0;
  TauCandidates cands;
};

struct ClassifySpec {
  Thresholds thresholds;
  double burn_in = 0.0;
  bool with_entries = false;
  std::vector<ScanSpec> scans;
  std::optional<DecompositionSpec> decomposition;
  std::optional<CoherenceSpec> coherence;
};

struct ClassifyRun {
  SignalSpec signal;
  ClassifySpec classify;
  bool write_signal = false;
};

struct OmegaRun {
  SignalSpec signal;
  std::vector<double> shifts;
  double window = 0.0;
  double cluster_tol = 0.05;
  struct Minimality {
    double eps, max_shift, compare_length;
  };
  std::optional<Minimality> minimality;
  struct EquiAp {
    double eps;
    TauCandidates cands;
  };
  std::optional<EquiAp> equi_ap;
  /// Unit-amplitude phase fit sum_k sin(w_k t + c_k) to every representative.
  std::vector<double> fit_frequencies;
};

struct OdeRun {
  RhsSpec rhs;
  std::vector<double> x0;
  Window t_span;
  double rel_tol = 1e-9, abs_tol = 1e-12, max_step = 0.01;
  std::optional<ConditionHParams> condition_h;
  std::vector<double> condition_h_times;
  struct Contraction {
    std::vector<double> x0_other;
    double kappa, alpha, tol;
  };
  std::optional<Contraction> contraction;
  struct Fibers {
    std::vector<double> shifts;
    std::vector<std::vector<double>> x0s;
    double horizon, burn_in, cluster_tol;
  };
  std::optional<Fibers> fiber_count;
  std::optional<StabilityProbeConfig> stability_probe;
  struct AttractionTime {
    double delta0, eps, kappa, alpha;
  };
  std::optional<AttractionTime> attraction_time;
  struct Deviation {
    double value, t_from;
  };
  std::optional<Deviation> deviation;
  std::optional<ClassifySpec> classify;
};

struct DdeRun {
  DelaySpec rhs;
  std::vector<double> history;  // constant history
  double r = 0.0;               // history length; 0: the catalog's r, else the largest lag
  double horizon = 0.0;
  double dt_hint = 0.01;
  bool precompactness = false;
  std::optional<ClassifySpec> classify;
  bool segments = false;  // classify the segment trajectory instead of u
};

struct MapRun {
  RhsSpec map;
  std::vector<double> u0;
  std::size_t n_steps = 0;
  long t0 = 0;
  struct Fibers {
    std::vector<long> shifts;
    std::vector<std::vector<double>> x0s;
    std::size_t n_steps, burn_in;
    double cluster_tol;
    long max_period;
    std::optional<long> forcing_period;
  };
  std::optional<Fibers> fiber_count;
  struct Period {
    std::size_t burn_in;
    long max_period;
    double tol;
  };
  std::optional<Period> period;
  std::optional<ClassifySpec> classify;
};

struct RootsRun {
  /// a_1 .. a_n as (re, im) expressions in t; empty im means real.
  std::vector<std::pair<std::string, std::string>> coeffs;
  /// Alternatively a path manifest on disk.
  std::filesystem::path polypath;
  double t0 = 0.0, t1 = 0.0, dt = 0.0;
  std::optional<double> separation_alpha;
  bool bound_check = true;
  std::optional<Thresholds> classify;
  bool write_branches = true;
};

struct ZhikovRun {
  SignalSpec f;
  ZhikovOptions options;
};

struct Expectation {
  std::string path;
  enum class Op { Equals, Min, Max, Approx } op = Op::Equals;
  json value;
  double tol = 0.0;
};

struct Experiment {
  std::string name;
  std::string kind;
  std::uint64_t seed = 0;
  std::string output_root;  // empty: default
  std::filesystem::path base_dir;
  std::string config_sha256;
  json config;
  std::variant<ClassifyRun, OmegaRun, OdeRun, DdeRun, MapRun, RootsRun, ZhikovRun> run;
  std::vector<Expectation> expect;
};

inline const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> k{"classify", "omega", "ode", "dde", "map", "roots", "zhikov"};
  return k;
}

/// Parses and validates a config; throws Error(ConfigError) naming the key.
Experiment parse_experiment(const json& config, const std::filesystem::path& base_dir);

/// Reads the file (ConfigError on unreadable or malformed JSON) and parses it.
Experiment load_experiment(const std::filesystem::path& path);

}  // namespace raplab::cli
