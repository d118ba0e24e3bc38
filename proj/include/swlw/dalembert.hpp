#pragma once

// Closed-form quadratic observables of the massless Thirring-Dirac equation.
//
// |u|^2 and u^dagger alpha u both solve the 1-D wave equation with unit speed,
// and the two first-order identities fix the split into movers:
//
//   |u|^2(t,x)          = 1/2 [w+0 + w-0](x+t) + 1/2 [w+0 - w-0](x-t)
//   (u^dagger a u)(t,x) = 1/2 [w+0 + w-0](x+t) - 1/2 [w+0 - w-0](x-t)
//
// whatever the coupling lambda and the real potential V are.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "swlw/errors.hpp"
#include "swlw/grid.hpp"
#include "swlw/interpolation.hpp"
#include "swlw/spinor.hpp"

namespace swlw {

class InitialObservables {
 public:
  using Profile = std::function<double(double)>;

  InitialObservables(Profile w_plus_0, Profile w_minus_0)
      : w_plus_0_(std::move(w_plus_0)), w_minus_0_(std::move(w_minus_0)) {}

  /// Off-grid values come from cubic interpolation; compact-support grids
  /// extend the samples by zero.
  static InitialObservables from_samples(const Grid1D& grid, std::vector<double> w_plus,
                                         std::vector<double> w_minus) {
    return InitialObservables(CubicSampler(grid, std::move(w_plus)), CubicSampler(grid, std::move(w_minus)));
  }

  static InitialObservables from_field(const SpinorField1D& field, const DiracAlpha& alpha) {
    auto obs = observables(field, alpha);
    return from_samples(field.grid, std::move(obs.w_plus), std::move(obs.w_minus));
  }

  double w_plus_0(double x) const { return w_plus_0_(x); }
  double w_minus_0(double x) const { return w_minus_0_(x); }

  /// [w+0 + w-0](x): twice the density carried by the +1 eigencomponent.
  double plus_bracket(double x) const { return w_plus_0_(x) + w_minus_0_(x); }
  /// [w+0 - w-0](x): twice the density carried by the -1 eigencomponent.
  double minus_bracket(double x) const { return w_plus_0_(x) - w_minus_0_(x); }

 private:
  Profile w_plus_0_;
  Profile w_minus_0_;
};

inline double eval_w_plus(const InitialObservables& init, double t, double x) {
  if (t < 0) throw ModelError("eval_w_plus: t must be non-negative");
  return 0.5 * init.plus_bracket(x + t) + 0.5 * init.minus_bracket(x - t);
}

inline double eval_w_minus(const InitialObservables& init, double t, double x) {
  if (t < 0) throw ModelError("eval_w_minus: t must be non-negative");
  return 0.5 * init.plus_bracket(x + t) - 0.5 * init.minus_bracket(x - t);
}

inline std::vector<double> eval_w_plus(const InitialObservables& init, double t, const std::vector<double>& xs) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = eval_w_plus(init, t, xs[i]);
  return out;
}

/// True iff w+0 + w-0 > 0 at every grid node, which keeps |u|^2 strictly
/// positive for all t > 0.
inline bool check_ic_positivity(const InitialObservables& init, const Grid1D& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (!(init.plus_bracket(grid.x(i)) > 0.0)) return false;
  return true;
}

/// Max over interior nodes of |D_tt w - D_xx w| for w sampled on equally
/// spaced time levels (levels[k][j] = w(t_k, x_j)).
inline double wave_residual(const std::vector<std::vector<double>>& levels, double dt, double dx) {
  if (levels.size() < 3) throw ModelError("wave_residual: at least 3 time levels are required");
  const std::size_t n = levels.front().size();
  if (n < 3) throw ModelError("wave_residual: at least 3 nodes are required");
  for (const auto& l : levels)
    if (l.size() != n) throw ModelError("wave_residual: ragged time levels");
  const double idt2 = 1.0 / (dt * dt);
  const double idx2 = 1.0 / (dx * dx);
  double r = 0.0;
  for (std::size_t k = 1; k + 1 < levels.size(); ++k) {
    const auto& wm = levels[k - 1];
    const auto& w0 = levels[k];
    const auto& wp = levels[k + 1];
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const double wtt = (wp[j] - 2.0 * w0[j] + wm[j]) * idt2;
      const double wxx = (w0[j + 1] - 2.0 * w0[j] + w0[j - 1]) * idx2;
      r = std::max(r, std::abs(wtt - wxx));
    }
  }
  return r;
}

}  // namespace swlw
