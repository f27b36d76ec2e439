#include "raplab/signal.hpp"

#include <algorithm>
#include <cmath>

#include "raplab/error.hpp"

namespace raplab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::WindowOutOfDomain: return "WindowOutOfDomain";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::DomainTooShort: return "DomainTooShort";
    case ErrorCode::HullNotAP: return "HullNotAP";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::NonFiniteRhs: return "NonFiniteRhs";
    case ErrorCode::BadOrder: return "BadOrder";
    case ErrorCode::LagOutOfRange: return "LagOutOfRange";
    case ErrorCode::SampleBeforeDelay: return "SampleBeforeDelay";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::BranchCollision: return "BranchCollision";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

SampledSignal::SampledSignal(double t0, double dt, std::size_t dim, bool is_complex, std::vector<double> data,
                             std::string label)
    : t0_(t0),
      dt_(dt),
      dim_(dim),
      is_complex_(is_complex),
      width_(is_complex ? 2 * dim : dim),
      data_(std::move(data)),
      label_(std::move(label)) {
  if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t0)) {
    throw Error(ErrorCode::InvalidArgument, "signal grid needs finite t0 and dt > 0");
  }
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "signal dimension must be >= 1");
  if (data_.empty() || data_.size() % width_ != 0) {
    throw Error(ErrorCode::InvalidArgument, "signal values must be a non-empty multiple of the sample width");
  }
  for (double v : data_) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "signal '" + label_ + "' contains NaN or inf");
  }
}

SampledSignal SampledSignal::scalar(double t0, double dt, std::vector<double> values, std::string label) {
  return SampledSignal(t0, dt, 1, false, std::move(values), std::move(label));
}

SampledSignal SampledSignal::tabulate(double t0, double dt, std::size_t n, const std::function<double(double)>& f,
                                      std::string label) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(t0 + dt * static_cast<double>(i));
  return scalar(t0, dt, std::move(v), std::move(label));
}

SampledSignal SampledSignal::tabulate_complex(double t0, double dt, std::size_t n,
                                              const std::function<std::complex<double>(double)>& f,
                                              std::string label) {
  std::vector<double> v(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto z = f(t0 + dt * static_cast<double>(i));
    v[2 * i] = z.real();
    v[2 * i + 1] = z.imag();
  }
  return SampledSignal(t0, dt, 1, true, std::move(v), std::move(label));
}

std::size_t SampledSignal::points_for(double a, double b, double dt) {
  if (b < a) return 0;
  return static_cast<std::size_t>(std::floor((b - a) / dt + kGridTolerance)) + 1;
}

std::complex<double> SampledSignal::complex_value(std::size_t i, std::size_t component) const {
  const double* p = data_.data() + i * width_;
  if (is_complex_) return {p[2 * component], p[2 * component + 1]};
  return {p[component], 0.0};
}

void SampledSignal::interpolate(double t, std::span<double> out) const {
  const double x = (t - t0_) / dt_;
  const double last = static_cast<double>(size() - 1);
  if (x < -kGridTolerance || x > last + kGridTolerance) {
    throw Error(ErrorCode::WindowOutOfDomain, "interpolation time outside the domain of '" + label_ + "'");
  }
  const double xc = std::clamp(x, 0.0, last);
  auto i = static_cast<std::size_t>(std::floor(xc));
  if (i + 1 >= size()) i = size() > 1 ? size() - 2 : 0;
  const double frac = size() > 1 ? xc - static_cast<double>(i) : 0.0;
  const double* p0 = data_.data() + i * width_;
  const double* p1 = size() > 1 ? p0 + width_ : p0;
  for (std::size_t k = 0; k < width_; ++k) out[k] = (1.0 - frac) * p0[k] + frac * p1[k];
}

double SampledSignal::interpolate_value(double t) const {
  std::vector<double> out(width_);
  interpolate(t, out);
  return out[0];
}

std::size_t SampledSignal::nearest_index(double t) const {
  const double x = std::round((t - t0_) / dt_);
  if (x <= 0.0) return 0;
  return std::min(static_cast<std::size_t>(x), size() - 1);
}

SampledSignal SampledSignal::with_label(std::string label) const {
  SampledSignal copy = *this;
  copy.label_ = std::move(label);
  return copy;
}

namespace {

// Index offset j - i such that s2 sample j sits at the time of s1 sample i.
long grid_offset(const SampledSignal& s1, const SampledSignal& s2) {
  return std::lround((s1.t0() - s2.t0()) / s1.dt());
}

void require_compatible(const SampledSignal& s1, const SampledSignal& s2) {
  if (s1.width() != s2.width()) {
    throw Error(ErrorCode::DimMismatch, "signals '" + s1.label() + "' and '" + s2.label() + "' differ in dimension");
  }
  if (!same_grid(s1, s2)) {
    throw Error(ErrorCode::GridMismatch, "signals '" + s1.label() + "' and '" + s2.label() + "' use different grids");
  }
}

// Inclusive range of s1 indices whose times fall in w.
std::pair<std::size_t, std::size_t> index_range(const SampledSignal& s, Window w) {
  const double lo = std::ceil((w.a - s.t0()) / s.dt() - kGridTolerance);
  const double hi = std::floor((w.b - s.t0()) / s.dt() + kGridTolerance);
  return {static_cast<std::size_t>(std::max(lo, 0.0)), static_cast<std::size_t>(std::max(hi, 0.0))};
}

}  // namespace

bool same_grid(const SampledSignal& s1, const SampledSignal& s2) {
  if (std::abs(s1.dt() - s2.dt()) > 1e-9 * s1.dt()) return false;
  const double phase = (s1.t0() - s2.t0()) / s1.dt();
  return std::abs(phase - std::round(phase)) < 1e-6;
}

Window common_domain(const SampledSignal& s1, const SampledSignal& s2) {
  const Window w{std::max(s1.t0(), s2.t0()), std::min(s1.t_end(), s2.t_end())};
  if (w.b < w.a - kGridTolerance * s1.dt()) {
    throw Error(ErrorCode::EmptyDomain, "signals '" + s1.label() + "' and '" + s2.label() + "' do not overlap");
  }
  return w;
}

SampledSignal translate(const SampledSignal& s, double h) {
  if (!(h >= 0.0) || !std::isfinite(h)) throw Error(ErrorCode::InvalidArgument, "translation must be finite and >= 0");
  const double span = s.t_end() - s.t0();
  if (h > span + kGridTolerance * s.dt()) {
    throw Error(ErrorCode::EmptyDomain, "translation exceeds the span of '" + s.label() + "'");
  }
  const std::size_t n = SampledSignal::points_for(0.0, span - h, s.dt());
  const double shift = h / s.dt();
  auto m = static_cast<std::size_t>(std::floor(shift + kGridTolerance));
  double frac = shift - static_cast<double>(m);
  if (frac < kGridTolerance) frac = 0.0;
  const std::size_t w = s.width();
  const auto& src = s.data();
  std::vector<double> out(n * w);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + m;
    const std::size_t j1 = std::min(j + 1, s.size() - 1);
    for (std::size_t k = 0; k < w; ++k) {
      out[i * w + k] = frac == 0.0 ? src[j * w + k] : (1.0 - frac) * src[j * w + k] + frac * src[j1 * w + k];
    }
  }
  return SampledSignal(s.t0(), s.dt(), s.dim(), s.is_complex(), std::move(out), s.label());
}

SampledSignal restrict_to(const SampledSignal& s, Window w) {
  const Window d = s.domain();
  const double tol = kGridTolerance * s.dt();
  if (w.a > w.b || w.a < d.a - tol || w.b > d.b + tol) {
    throw Error(ErrorCode::WindowOutOfDomain, "window outside the domain of '" + s.label() + "'");
  }
  const auto [lo, hi] = index_range(s, w);
  if (hi < lo) throw Error(ErrorCode::EmptyDomain, "window contains no grid point");
  const auto& src = s.data();
  std::vector<double> out(src.begin() + static_cast<long>(lo * s.width()),
                          src.begin() + static_cast<long>((hi + 1) * s.width()));
  return SampledSignal(s.time(lo), s.dt(), s.dim(), s.is_complex(), std::move(out), s.label());
}

SampledSignal rebase(const SampledSignal& s, double new_t0) {
  return SampledSignal(new_t0, s.dt(), s.dim(), s.is_complex(), s.data(), s.label());
}

SampledSignal difference(const SampledSignal& s1, const SampledSignal& s2) {
  require_compatible(s1, s2);
  const Window w = common_domain(s1, s2);
  const SampledSignal a = restrict_to(s1, w);
  const SampledSignal b = restrict_to(s2, w);
  std::vector<double> out(a.data().size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = a.data()[k] - b.data()[k];
  return SampledSignal(a.t0(), a.dt(), a.dim(), a.is_complex(), std::move(out), s1.label() + "-" + s2.label());
}

double sample_distance(const SampledSignal& s1, std::size_t i, const SampledSignal& s2, std::size_t j) {
  const auto p = s1.at(i);
  const auto q = s2.at(j);
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double d = p[k] - q[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

double sup_distance(const SampledSignal& s1, const SampledSignal& s2, Window w) {
  require_compatible(s1, s2);
  const double tol = kGridTolerance * s1.dt();
  const Window d = common_domain(s1, s2);
  if (w.a > w.b || w.a < d.a - tol || w.b > d.b + tol) {
    throw Error(ErrorCode::WindowOutOfDomain, "window not inside both signal domains");
  }
  const auto [lo, hi] = index_range(s1, w);
  const long off = grid_offset(s1, s2);
  const std::size_t width = s1.width();
  const double* a = s1.data().data();
  const double* b = s2.data().data();
  double best = 0.0;
  for (std::size_t i = lo; i <= hi && i < s1.size(); ++i) {
    const auto j = static_cast<std::size_t>(static_cast<long>(i) + off);
    double acc = 0.0;
    for (std::size_t k = 0; k < width; ++k) {
      const double diff = a[i * width + k] - b[j * width + k];
      acc += diff * diff;
    }
    best = std::max(best, acc);
  }
  return std::sqrt(best);
}

double tail_sup_distance(const SampledSignal& s1, const SampledSignal& s2, double L) {
  require_compatible(s1, s2);
  const Window d = common_domain(s1, s2);
  return sup_distance(s1, s2, {L, d.b});
}

double d_infinity_estimate(const SampledSignal& s1, const SampledSignal& s2, double tail_fraction) {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "tail_fraction must lie in (0, 1]");
  }
  require_compatible(s1, s2);
  const Window d = common_domain(s1, s2);
  return sup_distance(s1, s2, {d.b - tail_fraction * d.length(), d.b});
}

double sup_norm(const SampledSignal& s) {
  double best = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    double acc = 0.0;
    for (double v : s.at(i)) acc += v * v;
    best = std::max(best, acc);
  }
  return std::sqrt(best);
}

SampledSignal segment(const SampledSignal& s, double start, double length) {
  const double tol = kGridTolerance * s.dt();
  if (!(length >= 0.0) || start < s.t0() - tol || start + length > s.t_end() + tol) {
    throw Error(ErrorCode::DomainTooShort, "segment outside the domain of '" + s.label() + "'");
  }
  const std::size_t n = SampledSignal::points_for(0.0, length, s.dt());
  const double x = (start - s.t0()) / s.dt();
  auto m = static_cast<std::size_t>(std::max(0.0, std::floor(x + kGridTolerance)));
  double frac = x - static_cast<double>(m);
  if (frac < kGridTolerance) frac = 0.0;
  const std::size_t w = s.width();
  const auto& src = s.data();
  std::vector<double> out(n * w);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = std::min(i + m, s.size() - 1);
    const std::size_t j1 = std::min(j + 1, s.size() - 1);
    for (std::size_t k = 0; k < w; ++k) {
      out[i * w + k] = frac == 0.0 ? src[j * w + k] : (1.0 - frac) * src[j * w + k] + frac * src[j1 * w + k];
    }
  }
  return SampledSignal(0.0, s.dt(), s.dim(), s.is_complex(), std::move(out), s.label());
}

}  // namespace raplab
