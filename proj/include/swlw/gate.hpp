#pragma once

// Coupling gates g: smooth scalar functions whose derivative vanishes outside
// a compact interval, so the short-wave forcing switches off before the long
// wave reaches the edge of its admissible range.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "swlw/errors.hpp"

namespace swlw {

namespace detail {

// bump(s) = exp(-1/(1-s^2)) on |s| < 1, zero elsewhere; p(s) = -1/(1-s^2).
inline double bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

inline double bump_d1(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  return -2.0 * s / (q * q) * bump(s);
}

inline double bump_d2(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  const double p1 = -2.0 * s / (q * q);
  const double p2 = -2.0 / (q * q) - 8.0 * s * s / (q * q * q);
  return (p2 + p1 * p1) * bump(s);
}

inline double bump_d3(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  const double q = 1.0 - s * s;
  const double p1 = -2.0 * s / (q * q);
  const double p2 = -2.0 / (q * q) - 8.0 * s * s / (q * q * q);
  const double p3 = -24.0 * s / (q * q * q) - 48.0 * s * s * s / (q * q * q * q);
  return (p3 + 3.0 * p1 * p2 + p1 * p1 * p1) * bump(s);
}

/// Cumulative integral of bump over [-1, s], tabulated once and evaluated by
/// cubic Hermite interpolation (the slope is bump itself).
class BumpIntegral {
 public:
  static const BumpIntegral& instance() {
    static const BumpIntegral table;
    return table;
  }

  double operator()(double s) const {
    if (s <= -1.0) return 0.0;
    if (s >= 1.0) return values_.back();
    const double u = (s + 1.0) / h_;
    const auto i = std::min(static_cast<std::size_t>(u), values_.size() - 2);
    const double t = u - static_cast<double>(i);
    const double y0 = values_[i], y1 = values_[i + 1];
    const double m0 = slopes_[i] * h_, m1 = slopes_[i + 1] * h_;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
  }

  double total() const { return values_.back(); }

 private:
  BumpIntegral() {
    constexpr std::size_t n = 4096;
    h_ = 2.0 / static_cast<double>(n);
    values_.resize(n + 1);
    slopes_.resize(n + 1);
    values_[0] = 0.0;
    for (std::size_t i = 0; i <= n; ++i) slopes_[i] = bump(-1.0 + h_ * static_cast<double>(i));
    for (std::size_t i = 0; i < n; ++i) {
      const double a = -1.0 + h_ * static_cast<double>(i);
      values_[i + 1] = values_[i] + boost::math::quadrature::gauss_kronrod<double, 15>::integrate(bump, a, a + h_, 0, 0);
    }
  }

  double h_ = 0.0;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

}  // namespace detail

class CouplingGate {
 public:
  using Fn = std::function<double(double)>;

  /// `support_radius` is M: g' vanishes for |v - center| >= M. Use +infinity
  /// for gates without compact support.
  CouplingGate(std::string name, double support_radius, double center, double amplitude, Fn g, Fn g1, Fn g2, Fn g3)
      : name_(std::move(name)),
        m_(support_radius),
        center_(center),
        amplitude_(amplitude),
        g_(std::move(g)),
        g1_(std::move(g1)),
        g2_(std::move(g2)),
        g3_(std::move(g3)) {
    if (!(m_ > 0.0)) throw ModelError("CouplingGate: support radius M must be positive");
  }

  /// g(v) = amplitude * int_{-inf}^v bump((xi - center)/M) dxi.
  static CouplingGate bump(double m, double amplitude, double center = 0.0) {
    if (!(m > 0.0) || !std::isfinite(m)) throw ModelError("CouplingGate::bump: M must be positive and finite");
    const auto& table = detail::BumpIntegral::instance();
    return CouplingGate(
        "bump", m, center, amplitude,
        [=, &table](double v) { return amplitude * m * table((v - center) / m); },
        [=](double v) { return amplitude * detail::bump((v - center) / m); },
        [=](double v) { return amplitude * detail::bump_d1((v - center) / m) / m; },
        [=](double v) { return amplitude * detail::bump_d2((v - center) / m) / (m * m); });
  }

  /// g(v) = slope * v: constant g' everywhere (no compact support).
  static CouplingGate linear(double slope) {
    return CouplingGate(
        "linear", std::numeric_limits<double>::infinity(), 0.0, slope, [=](double v) { return slope * v; },
        [=](double) { return slope; }, [](double) { return 0.0; }, [](double) { return 0.0; });
  }

  static CouplingGate zero() { return linear(0.0); }

  const std::string& name() const { return name_; }
  double support_radius() const { return m_; }
  double center() const { return center_; }
  double amplitude() const { return amplitude_; }
  bool compact() const { return std::isfinite(m_); }
  double support_lo() const { return center_ - m_; }
  double support_hi() const { return center_ + m_; }

  double g(double v) const { return g_(v); }
  double g1(double v) const { return g1_(v); }
  double g2(double v) const { return g2_(v); }
  double g3(double v) const { return g3_(v); }

  /// Max |g''| sampled on [lo, hi].
  double max_abs_g2(double lo, double hi, int samples = 2001) const {
    double m = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double v = lo + (hi - lo) * i / (samples - 1);
      m = std::max(m, std::abs(g2(v)));
    }
    return m;
  }

  /// Central-difference check of g' -> g'' -> g''' at sampled points, relative
  /// to the scale of each derivative.
  bool derivatives_consistent(double lo, double hi, int samples = 401, double rel_tol = 1e-6) const {
    const double step = 1e-5 * std::max(1.0, std::isfinite(m_) ? m_ : 1.0);
    double s2 = 0.0, s3 = 0.0;
    for (int i = 0; i < samples; ++i) {
      const double v = lo + (hi - lo) * i / (samples - 1);
      s2 = std::max(s2, std::abs(g2(v)));
      s3 = std::max(s3, std::abs(g3(v)));
    }
    for (int i = 0; i < samples; ++i) {
      const double v = lo + (hi - lo) * i / (samples - 1);
      const double d2 = (g1(v + step) - g1(v - step)) / (2 * step);
      const double d3 = (g2(v + step) - g2(v - step)) / (2 * step);
      if (std::abs(d2 - g2(v)) > rel_tol * std::max(s2, 1e-300) + 1e-14) return false;
      if (std::abs(d3 - g3(v)) > rel_tol * std::max(s3, 1e-300) + 1e-14) return false;
    }
    return true;
  }

 private:
  std::string name_;
  double m_;
  double center_;
  double amplitude_;
  Fn g_, g1_, g2_, g3_;
};

}  // namespace swlw
