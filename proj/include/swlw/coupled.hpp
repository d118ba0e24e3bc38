#pragma once

// Full short wave-long wave system
//
//   u_t = alpha u_x - i (lambda U + a g(v)) u
//   v_t + f(t,v)_x + h(t,v) = a (g'(v) |u|^2)_x + eps v_xx
//
// solved in decoupled order: |u|^2 is known in closed form from the initial
// data, so the long wave is solved first and its history then enters the
// Dirac equation as a real potential.

#include <algorithm>
#include <cmath>
#include <iostream>
#include <memory>
#include <vector>

#include "swlw/claw_solver.hpp"
#include "swlw/dirac_solver.hpp"
#include "swlw/gate.hpp"

namespace swlw {

/// Stored long-wave levels; values between levels are linear in time.
struct LongWaveHistory {
  Grid1D grid;
  std::vector<double> times;
  std::vector<std::vector<double>> v;

  double at(double t, std::size_t node) const {
    if (times.empty()) throw ModelError("LongWaveHistory: empty");
    if (t <= times.front()) return v.front()[node];
    if (t >= times.back()) return v.back()[node];
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times.begin());
    const double th = (t - times[k - 1]) / (times[k] - times[k - 1]);
    return (1.0 - th) * v[k - 1][node] + th * v[k][node];
  }

  /// Nearest node in x (the Dirac solvers only query nodes of the same grid).
  double at(double t, double x) const {
    const double xr = grid.wrap(x);
    const double s = (xr - grid.x_min()) / grid.dx();
    if (s < -0.5 || s > static_cast<double>(grid.size()) - 0.5) return 0.0;
    auto j = static_cast<std::size_t>(std::llround(s));
    if (j >= grid.size()) j = grid.periodic() ? 0 : grid.size() - 1;
    return at(t, j);
  }
};

inline LongWaveHistory record_long_wave(const ClawProblem& p, std::ostream* warn = &std::cerr) {
  ClawRunOptions opt;
  opt.snapshot_stride = 1;
  opt.warn = warn;
  auto res = run_claw(p, opt);
  LongWaveHistory h{p.grid, {}, {}};
  for (auto& s : res.snapshots) {
    h.times.push_back(s.t);
    h.v.push_back(std::move(s.v));
  }
  return h;
}

/// V(t, x) = a g(v(t, x)).
inline std::function<double(double, double)> coupling_potential(std::shared_ptr<const LongWaveHistory> hist,
                                                                 CouplingGate gate, double a) {
  return [hist = std::move(hist), gate = std::move(gate), a](double t, double x) {
    return a * gate.g(hist->at(t, x));
  };
}

/// Duhamel solve driven by a sampled long wave through the coupling gate.
inline DiracTrajectory solve_duhamel(const SpinorField1D& field0, const DiracAlpha& alpha, DiracRunConfig cfg,
                                     std::shared_ptr<const LongWaveHistory> v_field, const CouplingGate& gate,
                                     double coupling, std::size_t output_stride = 0, DuhamelStats* stats = nullptr) {
  if (!(v_field->grid == field0.grid)) throw ModelError("solve_duhamel: long wave lives on a different grid");
  cfg.potential = coupling_potential(std::move(v_field), gate, coupling);
  return solve_duhamel(field0, alpha, cfg, output_stride, stats);
}

struct CoupledProblem {
  SpinorField1D u0;
  DiracAlpha alpha = DiracAlpha(DiracAlpha::diag_pm1());
  double lambda = 0.0;
  ClawProblem claw;  // claw.short_wave is filled from u0
};

struct CoupledResult {
  LongWaveHistory long_wave;
  DiracTrajectory short_wave;
  InitialObservables observables;
};

/// Observables first, then the long wave, then the Dirac equation along
/// characteristics (dt = dx) with V = a g(v).
inline CoupledResult run_coupled(CoupledProblem p, std::size_t stride = 1, std::ostream* warn = &std::cerr) {
  if (!(p.u0.grid == p.claw.grid)) throw ModelError("coupled: short and long wave grids differ");
  auto obs = std::make_shared<const InitialObservables>(InitialObservables::from_field(p.u0, p.alpha));
  p.claw.short_wave = obs;
  auto hist = std::make_shared<const LongWaveHistory>(record_long_wave(p.claw, warn));

  DiracRunConfig cfg;
  cfg.lambda = p.lambda;
  cfg.t_final = p.claw.t_final;
  cfg.potential = coupling_potential(hist, p.claw.gate, p.claw.alpha_coupling);
  const double dx = p.u0.grid.dx();
  const auto n_steps = static_cast<std::size_t>(std::llround(cfg.t_final / dx));
  if (std::abs(static_cast<double>(n_steps) * dx - cfg.t_final) > 1e-9 * cfg.t_final)
    throw ModelError("coupled: t_final must be a multiple of dx for the characteristics solver");
  cfg.dt = dx;
  CharacteristicsSolver solver(p.u0, p.alpha, cfg);
  DiracTrajectory tr = solver.trajectory(n_steps, std::max<std::size_t>(1, stride));
  return CoupledResult{*hist, std::move(tr), *obs};
}

}  // namespace swlw
