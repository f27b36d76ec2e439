#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace raplab {

/// Closed time interval [a, b]. Every "for all t" in the library is evaluated
/// over the grid points of a declared window.
struct Window {
  double a = 0.0;
  double b = 0.0;

  double length() const { return b - a; }
};

/// A trajectory on a uniform time grid with values in R^d or C^d.
///
/// Samples are stored row-major as plain doubles; a complex component
/// occupies two consecutive slots (re, im), so the Euclidean norm over the
/// stored doubles is the norm in C^d. Signals are immutable: every operation
/// that changes a signal returns a new one.
class SampledSignal {
 public:
  SampledSignal(double t0, double dt, std::size_t dim, bool is_complex, std::vector<double> data,
                std::string label = {});

  /// Scalar real signal from a list of values.
  static SampledSignal scalar(double t0, double dt, std::vector<double> values, std::string label = {});

  static SampledSignal tabulate(double t0, double dt, std::size_t n, const std::function<double(double)>& f,
                                std::string label = {});

  static SampledSignal tabulate_complex(double t0, double dt, std::size_t n,
                                        const std::function<std::complex<double>(double)>& f,
                                        std::string label = {});

  /// Number of grid points needed to cover [a, b] with step dt (inclusive).
  static std::size_t points_for(double a, double b, double dt);

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  std::size_t size() const { return data_.size() / width_; }
  std::size_t dim() const { return dim_; }
  bool is_complex() const { return is_complex_; }
  /// Doubles per sample: dim, or 2*dim for complex signals.
  std::size_t width() const { return width_; }
  const std::string& label() const { return label_; }

  double time(std::size_t i) const { return t0_ + dt_ * static_cast<double>(i); }
  double t_end() const { return time(size() - 1); }
  Window domain() const { return {t0_, t_end()}; }

  std::span<const double> at(std::size_t i) const { return {data_.data() + i * width_, width_}; }
  /// First stored component of sample i (the value itself for scalar real signals).
  double value(std::size_t i) const { return data_[i * width_]; }
  std::complex<double> complex_value(std::size_t i, std::size_t component = 0) const;
  const std::vector<double>& data() const { return data_; }

  /// Linear interpolation at an arbitrary time inside the domain.
  void interpolate(double t, std::span<double> out) const;
  double interpolate_value(double t) const;

  /// Index of the grid point nearest to t (clamped to the domain).
  std::size_t nearest_index(double t) const;

  SampledSignal with_label(std::string label) const;

 private:
  double t0_;
  double dt_;
  std::size_t dim_;
  bool is_complex_;
  std::size_t width_;
  std::vector<double> data_;
  std::string label_;
};

/// Relative tolerance used when deciding whether a time falls on a grid point.
inline constexpr double kGridTolerance = 1e-7;

/// True when both signals share the step and the grid phase.
bool same_grid(const SampledSignal& s1, const SampledSignal& s2);

Window common_domain(const SampledSignal& s1, const SampledSignal& s2);

/// t -> s(t + h), restricted to the surviving domain and sampled on the same
/// grid phase. Off-grid shifts use linear interpolation.
SampledSignal translate(const SampledSignal& s, double h);

/// Grid points of s inside w.
SampledSignal restrict_to(const SampledSignal& s, Window w);

/// Same samples with the time origin moved to new_t0.
SampledSignal rebase(const SampledSignal& s, double new_t0);

/// Pointwise s1 - s2 on the common domain.
SampledSignal difference(const SampledSignal& s1, const SampledSignal& s2);

/// Max over grid points of w of |s1(t) - s2(t)|.
double sup_distance(const SampledSignal& s1, const SampledSignal& s2, Window w);

/// sup_distance over [L, end of the common domain].
double tail_sup_distance(const SampledSignal& s1, const SampledSignal& s2, double L);

/// Finite-horizon surrogate for limsup_{t->inf} |s1(t) - s2(t)|: the sup
/// distance over the final tail_fraction of the common domain.
double d_infinity_estimate(const SampledSignal& s1, const SampledSignal& s2, double tail_fraction);

/// Extracts t -> s(start + t) for t in [0, length] on the grid of s (linear
/// interpolation when start is off-grid). The result starts at time 0.
SampledSignal segment(const SampledSignal& s, double start, double length);

/// Max over samples of |s(t)|.
double sup_norm(const SampledSignal& s);

/// Euclidean distance between sample i of s1 and sample j of s2.
double sample_distance(const SampledSignal& s1, std::size_t i, const SampledSignal& s2, std::size_t j);

}  // namespace raplab
