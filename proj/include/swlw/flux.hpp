#pragma once

// Flux and source models for the relativistic scalar law
//   v_t + f(t, v)_x + h(t, v) = alpha (g'(v) |u|^2)_x.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "swlw/errors.hpp"

namespace swlw {

struct FluxModel {
  using Fn = std::function<double(double, double)>;  // (t, v)

  std::string name;
  Fn f, f_v, f_vv, h, h_v;
  double c0 = 1.0;
  /// False when h vanishes identically.
  bool has_source = true;
  /// |f_v| <= |v| is a hard requirement unless cleared (the linear-flux
  /// special case violates it near v = 0 and only gets a warning).
  bool enforce_speed_bound = true;

  /// Mollified source h(t, (1 - eps) v) used by the viscous problem.
  double h_eps(double t, double v, double eps) const { return h(t, (1.0 - eps) * v); }
};

/// f = v^2/(2a), h = (a'/a) v (1 - v^2/c0^2) with a(t) = exp(delta t).
inline FluxModel hw_flux(double c0 = 1.0, double delta = 0.1) {
  if (!(c0 > 0.0)) throw ModelError("hw_flux: c0 must be positive");
  if (!(delta > 0.0)) throw ModelError("hw_flux: a(t) = exp(delta t) needs delta > 0");
  FluxModel m;
  m.name = "hw";
  m.c0 = c0;
  m.f = [delta](double t, double v) { return v * v * 0.5 * std::exp(-delta * t); };
  m.f_v = [delta](double t, double v) { return v * std::exp(-delta * t); };
  m.f_vv = [delta](double t, double) { return std::exp(-delta * t); };
  m.h = [delta, c0](double, double v) { return delta * v * (1.0 - v * v / (c0 * c0)); };
  m.h_v = [delta, c0](double, double v) { return delta * (1.0 - 3.0 * v * v / (c0 * c0)); };
  return m;
}

/// f = c1 v, h = 0.
inline FluxModel linear_flux(double c1, double c0 = 1.0) {
  if (!(c0 > 0.0)) throw ModelError("linear_flux: c0 must be positive");
  FluxModel m;
  m.name = "linear";
  m.c0 = c0;
  m.has_source = false;
  m.enforce_speed_bound = false;
  m.f = [c1](double, double v) { return c1 * v; };
  m.f_v = [c1](double, double) { return c1; };
  m.f_vv = [](double, double) { return 0.0; };
  m.h = [](double, double) { return 0.0; };
  m.h_v = [](double, double) { return 0.0; };
  return m;
}

/// f = 0, h = 0.
inline FluxModel zero_flux(double c0 = 1.0) {
  FluxModel m = linear_flux(0.0, c0);
  m.name = "zero";
  return m;
}

struct HypothesisReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

/// Samples the structural hypotheses on [0, t_final] x [-c0, c0]:
/// |f_v| <= |v|, h(t, +-c0) = 0, h_v(t, +-c0) < 0, and the strict inward
/// sign of the mollified source at +-c0.
inline HypothesisReport check_flux_hypotheses(const FluxModel& m, double t_final, double eps, int t_samples = 11,
                                              int v_samples = 201) {
  HypothesisReport r;
  const double c0 = m.c0;
  bool fv_bad = false;
  for (int i = 0; i < t_samples; ++i) {
    const double t = t_final * i / std::max(1, t_samples - 1);
    for (int j = 0; j < v_samples; ++j) {
      const double v = -c0 + 2.0 * c0 * j / (v_samples - 1);
      if (std::abs(m.f_v(t, v)) > std::abs(v) + 1e-12) fv_bad = true;
    }
    for (double s : {-1.0, 1.0}) {
      const double h = m.h(t, s * c0);
      if (std::abs(h) > 1e-12) r.violations.push_back(m.name + ": h(t, +-c0) != 0 at t=" + std::to_string(t));
      if (m.has_source) {
        if (!(m.h_v(t, s * c0) < 0.0))
          r.violations.push_back(m.name + ": h_v(t, +-c0) < 0 fails at t=" + std::to_string(t));
        if (!(s * m.h_eps(t, s * c0, eps) > 0.0))
          r.violations.push_back(m.name + ": +-h(t, +-(1-eps)c0) > 0 fails at t=" + std::to_string(t));
      }
    }
  }
  if (fv_bad) {
    const std::string msg = m.name + ": |f_v(t,v)| <= |v| does not hold on [-c0, c0]";
    if (!m.enforce_speed_bound)
      r.warnings.push_back(msg);
    else
      r.violations.push_back(msg);
  }
  return r;
}

/// Sampled max |h_v| on [-c0, c0] over [0, t_final].
inline double source_lipschitz(const FluxModel& m, double t_final, int samples = 201) {
  double l = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double t = t_final * i / 4.0;
    for (int j = 0; j < samples; ++j) {
      const double v = -m.c0 + 2.0 * m.c0 * j / (samples - 1);
      l = std::max(l, std::abs(m.h_v(t, v)));
    }
  }
  return l;
}

/// Sampled max |f_v| on [-c0, c0] over [0, t_final].
inline double max_char_speed(const FluxModel& m, double t_final, int samples = 201) {
  double s = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double t = t_final * i / 4.0;
    for (int j = 0; j < samples; ++j) {
      const double v = -m.c0 + 2.0 * m.c0 * j / (samples - 1);
      s = std::max(s, std::abs(m.f_v(t, v)));
    }
  }
  return s;
}

}  // namespace swlw
