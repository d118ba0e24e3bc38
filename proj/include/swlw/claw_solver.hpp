#pragma once

// Vanishing-viscosity solver for the long-wave equation
//
//   v_t + (f(t,v) - alpha g'(v) w)_x + h(t,(1-eps) v) = eps v_xx,   w = |u|^2,
//
// with conservative local Lax-Friedrichs fluxes at cell faces, a central
// second difference for the viscosity and forward Euler in time. Face k sits
// between node k-1 and node k; w is sampled at faces from the closed-form
// observables.

#include <boost/math/quadrature/gauss.hpp>
#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "swlw/convergence.hpp"
#include "swlw/dalembert.hpp"
#include "swlw/errors.hpp"
#include "swlw/flux.hpp"
#include "swlw/gate.hpp"
#include "swlw/grid.hpp"

namespace swlw {

struct ClawState {
  Grid1D grid;
  std::vector<double> v;
  double t = 0.0;
  double eps = 0.0;
  double alpha_coupling = 0.0;
};

/// Convolution with the normalized bump of radius eps. On compact-support
/// grids the kernel is renormalized over the nodes inside the grid, so the
/// result stays within [min v0, max v0].
inline std::vector<double> mollify(const Grid1D& grid, const std::vector<double>& v0, double eps,
                                   std::ostream* warn = &std::cerr) {
  if (!(eps > 0.0)) throw ModelError("mollify: eps must be positive");
  if (v0.size() != grid.size()) throw ModelError("mollify: size mismatch");
  const double dx = grid.dx();
  const long r = static_cast<long>(std::ceil(eps / dx)) - 1;
  if (eps < dx || r < 1) {
    if (warn) *warn << "warning: mollify: eps=" << eps << " below grid spacing " << dx << ", returning a copy\n";
    return v0;
  }
  std::vector<double> k(static_cast<std::size_t>(2 * r + 1));
  double mass = 0.0;
  for (long m = -r; m <= r; ++m) {
    k[static_cast<std::size_t>(m + r)] = detail::bump(static_cast<double>(m) * dx / eps);
    mass += k[static_cast<std::size_t>(m + r)];
  }
  for (auto& x : k) x /= mass * dx;
  const long n = static_cast<long>(v0.size());
  std::vector<double> out(v0.size());
  for (long j = 0; j < n; ++j) {
    double s = 0.0, wsum = 0.0;
    for (long m = -r; m <= r; ++m) {
      long i = j - m;
      const double km = k[static_cast<std::size_t>(m + r)];
      if (grid.periodic()) {
        i %= n;
        if (i < 0) i += n;
      } else if (i < 0 || i >= n) {
        continue;
      }
      s += km * v0[static_cast<std::size_t>(i)];
      wsum += km;
    }
    out[static_cast<std::size_t>(j)] = s / wsum;
  }
  return out;
}

/// Closed-form w = |u|^2 at the faces at time t (positions wrapped on
/// periodic grids).
inline std::vector<double> w_plus_at_faces(const InitialObservables& init, const Grid1D& grid, double t) {
  std::vector<double> w(grid.face_count());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = eval_w_plus(init, t, grid.wrap(grid.face_x(k)));
  return w;
}

namespace detail {

inline void face_neighbours(const Grid1D& g, const std::vector<double>& v, std::size_t k, double& vl, double& vr) {
  const std::size_t n = v.size();
  if (g.periodic()) {
    vl = v[(k + n - 1) % n];
    vr = v[k % n];
  } else {
    vl = k == 0 ? 0.0 : v[k - 1];
    vr = k == n ? 0.0 : v[k];
  }
}

}  // namespace detail

/// One forward-Euler step of the viscous scheme for a generic combined flux
/// F(v, w) with local wave speed S(v, w) = |dF/dv| and pointwise source H(v).
/// Writes the new values into `out` and returns the max face speed used.
template <class Flux, class Speed, class Source>
double viscous_update(const Grid1D& g, const std::vector<double>& v, const std::vector<double>& w_faces, double dt,
                      double eps, Flux flux, Speed speed, Source source, std::vector<double>& out) {
  const std::size_t n = v.size();
  const std::size_t nf = g.face_count();
  if (w_faces.size() != nf) throw ModelError("viscous_update: w must be sampled at every face");
  std::vector<double> ff(nf);
  double smax = 0.0;
  for (std::size_t k = 0; k < nf; ++k) {
    double vl, vr;
    detail::face_neighbours(g, v, k, vl, vr);
    const double w = w_faces[k];
    const double s = std::max(speed(vl, w), speed(vr, w));
    smax = std::max(smax, s);
    ff[k] = 0.5 * (flux(vl, w) + flux(vr, w)) - 0.5 * s * (vr - vl);
  }
  const double dx = g.dx();
  const double lam = dt / dx;
  const double mu = eps * dt / (dx * dx);
  out.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double fr = ff[g.periodic() && j + 1 == n ? 0 : j + 1];
    double vm, vp;
    if (g.periodic()) {
      vm = v[(j + n - 1) % n];
      vp = v[(j + 1) % n];
    } else {
      vm = j == 0 ? 0.0 : v[j - 1];
      vp = j + 1 == n ? 0.0 : v[j + 1];
    }
    out[j] = v[j] - lam * (fr - ff[j]) + mu * (vp - 2.0 * v[j] + vm) - dt * source(v[j]);
  }
  return smax;
}

/// Largest dt meeting both the advective bound dt <= cfl dx / s and the
/// diffusive bound dt <= dx^2 / (2 eps), with room for a source of
/// Lipschitz constant `source_lip`.
inline double max_stable_dt(double dx, double eps, double speed, double source_lip, double cfl = 0.45) {
  const double denom = 2.0 * speed / dx + 2.0 * eps / (dx * dx) + source_lip;
  if (!(denom > 0.0)) throw ModelError("max_stable_dt: degenerate problem (no speed, viscosity or source)");
  return 2.0 * cfl / denom;
}

/// Max over faces of |f_v - alpha g'' w| at the neighbouring nodes.
inline double face_speed_max(const ClawState& s, const std::vector<double>& w_faces, const FluxModel& flux,
                             const CouplingGate& gate) {
  double smax = 0.0;
  for (std::size_t k = 0; k < s.grid.face_count(); ++k) {
    double vl, vr;
    detail::face_neighbours(s.grid, s.v, k, vl, vr);
    for (double u : {vl, vr})
      smax = std::max(smax, std::abs(flux.f_v(s.t, u) - s.alpha_coupling * gate.g2(u) * w_faces[k]));
  }
  return smax;
}

inline ClawState step_viscous(const ClawState& s, const std::vector<double>& w_faces, const FluxModel& flux,
                              const CouplingGate& gate, double dt, double cfl = 0.45, long step_index = -1) {
  if (!(dt > 0.0)) throw ModelError("step_viscous: dt must be positive");
  const double dx = s.grid.dx();
  if (s.eps > 0.0 && dt > dx * dx / (2.0 * s.eps) * (1.0 + 1e-12))
    throw ModelError("step_viscous: dt exceeds the diffusive limit dx^2/(2 eps)");
  const double smax = face_speed_max(s, w_faces, flux, gate);
  if (smax > 0.0 && dt > cfl * dx / smax * (1.0 + 1e-12))
    throw ModelError("step_viscous: dt exceeds the CFL limit cfl dx / max|f_v - alpha g'' w|");
  const double t = s.t;
  const double a = s.alpha_coupling;
  const double e = s.eps;
  ClawState out{s.grid, {}, t + dt, s.eps, s.alpha_coupling};
  viscous_update(
      s.grid, s.v, w_faces, dt, s.eps, [&](double v, double w) { return flux.f(t, v) - a * gate.g1(v) * w; },
      [&](double v, double w) { return std::abs(flux.f_v(t, v) - a * gate.g2(v) * w); },
      [&](double v) { return flux.h_eps(t, v, e); }, out.v);
  const double bound = flux.c0 + 1e-10;
  for (double v : out.v)
    if (!(std::abs(v) <= bound))
      throw SolverAbort("step_viscous: maximum principle violated, |v| > c0", step_index);
  return out;
}

/// Convex entropy eta with its first two derivatives. `constant_d2` marks
/// eta'' constant, which lets the entropy-flux integrals use g directly.
struct Entropy {
  std::string name;
  std::function<double(double)> eta, d1, d2;
  bool constant_d2 = false;

  static Entropy quadratic() {
    return {"quadratic", [](double v) { return 0.5 * v * v; }, [](double v) { return v; },
            [](double) { return 1.0; }, true};
  }
  static Entropy identity() {
    return {"identity", [](double v) { return v; }, [](double) { return 1.0; }, [](double) { return 0.0; }, true};
  }
};

inline void require_convex(const Entropy& e, double c0) {
  for (int i = 0; i <= 400; ++i) {
    const double v = -c0 + 2.0 * c0 * i / 400.0;
    if (e.d2(v) < -1e-12) throw ModelError("entropy_residual: eta is not convex on [-c0, c0]");
  }
}

namespace detail {

// q(v; w) = I_f(v) - alpha w I_g(v) with I_f = int_0^v f_v eta', I_g = int_0^v eta' g''.
// Both are integrated by parts so that only eta'' carries a quadrature.
struct EntropyFluxParts {
  double i_f;
  double i_g;
};

inline EntropyFluxParts entropy_flux_parts(const Entropy& e, const FluxModel& flux, const CouplingGate& gate,
                                           double t, double v) {
  using boost::math::quadrature::gauss;
  const double f0 = flux.f(t, 0.0);
  double rem_f = 0.0, rem_g = 0.0;
  if (v != 0.0) {
    if (e.constant_d2) {
      const double c = e.d2(0.0);
      if (c != 0.0) {
        rem_f = c * gauss<double, 30>::integrate([&](double x) { return flux.f(t, x); }, 0.0, v);
        rem_g = c * (gate.g(v) - gate.g(0.0));
      }
    } else {
      rem_f = gauss<double, 30>::integrate([&](double x) { return flux.f(t, x) * e.d2(x); }, 0.0, v);
      rem_g = gauss<double, 30>::integrate([&](double x) { return gate.g1(x) * e.d2(x); }, 0.0, v);
    }
  }
  const double i_f = flux.f(t, v) * e.d1(v) - f0 * e.d1(0.0) - rem_f;
  const double i_g = e.d1(v) * gate.g1(v) - e.d1(0.0) * gate.g1(0.0) - rem_g;
  return {i_f, i_g};
}

}  // namespace detail

/// Discrete entropy residual of one step from `before` to `after`:
///
///   R_j = (eta(v_j^+) - eta(v_j))/dt + (Q_{j+1} - Q_j)/dx + h^eps eta'(v_j)
///         - alpha (eta' g' - int_0^v eta' g'')(v_j) (w_{j+1} - w_j)/dx - eps D^2 eta(v)_j
///
/// with the entropy flux Q built from the same local Lax-Friedrichs face
/// speeds as the scheme. For eta(v) = v the residual is the scheme itself.
inline std::vector<double> entropy_residual(const ClawState& before, const ClawState& after,
                                            const std::vector<double>& w_faces, const FluxModel& flux,
                                            const CouplingGate& gate, const Entropy& e) {
  require_convex(e, flux.c0);
  const Grid1D& g = before.grid;
  const std::size_t n = g.size();
  const std::size_t nf = g.face_count();
  const double dt = after.t - before.t;
  if (!(dt > 0.0)) throw ModelError("entropy_residual: levels must be increasing in time");
  const double t = before.t;
  const double a = before.alpha_coupling;
  const double eps = before.eps;
  const double dx = g.dx();

  std::vector<detail::EntropyFluxParts> parts(n);
  std::vector<double> eta(n);
  for (std::size_t j = 0; j < n; ++j) {
    parts[j] = detail::entropy_flux_parts(e, flux, gate, t, before.v[j]);
    eta[j] = e.eta(before.v[j]);
  }
  const detail::EntropyFluxParts ghost_parts = detail::entropy_flux_parts(e, flux, gate, t, 0.0);
  const double ghost_eta = e.eta(0.0);

  std::vector<double> qf(nf);
  for (std::size_t k = 0; k < nf; ++k) {
    const double w = w_faces[k];
    double vl, vr;
    detail::face_neighbours(g, before.v, k, vl, vr);
    const double s = std::max(std::abs(flux.f_v(t, vl) - a * gate.g2(vl) * w),
                              std::abs(flux.f_v(t, vr) - a * gate.g2(vr) * w));
    std::size_t il = 0, ir = 0;
    bool lghost = false, rghost = false;
    if (g.periodic()) {
      il = (k + n - 1) % n;
      ir = k % n;
    } else {
      lghost = k == 0;
      rghost = k == n;
      il = lghost ? 0 : k - 1;
      ir = rghost ? 0 : k;
    }
    const auto& pl = lghost ? ghost_parts : parts[il];
    const auto& pr = rghost ? ghost_parts : parts[ir];
    const double el = lghost ? ghost_eta : eta[il];
    const double er = rghost ? ghost_eta : eta[ir];
    const double ql = pl.i_f - a * w * pl.i_g;
    const double qr = pr.i_f - a * w * pr.i_g;
    qf[k] = 0.5 * (ql + qr) - 0.5 * s * (er - el);
  }

  std::vector<double> r(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t jr = g.periodic() && j + 1 == n ? 0 : j + 1;
    const double v = before.v[j];
    double em, ep;
    if (g.periodic()) {
      em = eta[(j + n - 1) % n];
      ep = eta[(j + 1) % n];
    } else {
      em = j == 0 ? ghost_eta : eta[j - 1];
      ep = j + 1 == n ? ghost_eta : eta[j + 1];
    }
    const double coupling = e.d1(v) * gate.g1(v) - parts[j].i_g;
    r[j] = (e.eta(after.v[j]) - eta[j]) / dt + (qf[jr] - qf[j]) / dx + flux.h_eps(t, v, eps) * e.d1(v) -
           a * coupling * (w_faces[jr] - w_faces[j]) / dx - eps * (ep - 2.0 * eta[j] + em) / (dx * dx);
  }
  return r;
}

struct EnergySeries {
  std::vector<double> times;
  std::vector<double> l2_squared;        // int v^2 dx
  std::vector<double> dissipation;       // eps int_0^t int |v_x|^2 dx ds
};

/// Running energy bookkeeping; call `record` once per level (in order).
class EnergyTracker {
 public:
  void record(const ClawState& s) {
    const double dx = s.grid.dx();
    double l2 = 0.0;
    for (double v : s.v) l2 += v * v;
    l2 *= dx;
    const double grad = gradient_sq(s);
    if (!series_.times.empty()) {
      const double dt = s.t - series_.times.back();
      cumulative_ += 0.5 * dt * s.eps * (grad + last_grad_);
    }
    last_grad_ = grad;
    series_.times.push_back(s.t);
    series_.l2_squared.push_back(l2);
    series_.dissipation.push_back(cumulative_);
  }

  const EnergySeries& series() const { return series_; }

  static double gradient_sq(const ClawState& s) {
    const double dx = s.grid.dx();
    double acc = 0.0;
    for (std::size_t k = 0; k < s.grid.face_count(); ++k) {
      double vl, vr;
      detail::face_neighbours(s.grid, s.v, k, vl, vr);
      const double d = (vr - vl) / dx;
      acc += d * d;
    }
    return acc * dx;
  }

 private:
  EnergySeries series_;
  double cumulative_ = 0.0;
  double last_grad_ = 0.0;
};

inline EnergySeries energy_estimate(const std::vector<ClawState>& history) {
  EnergyTracker tr;
  for (const auto& s : history) tr.record(s);
  return tr.series();
}

struct ClawProblem {
  Grid1D grid;
  std::vector<double> v0;
  FluxModel flux;
  CouplingGate gate = CouplingGate::zero();
  double alpha_coupling = 0.0;
  double eps = 1e-3;
  double t_final = 1.0;
  double cfl = 0.45;
  /// 0 selects the largest stable step that divides t_final.
  double dt = 0.0;
  /// Short-wave observables; null means w = |u|^2 = 0.
  std::shared_ptr<const InitialObservables> short_wave;
};

/// Fail-fast validation of the structural hypotheses of the long-wave problem.
inline void validate(const ClawProblem& p, std::ostream* warn = &std::cerr) {
  if (p.v0.size() != p.grid.size()) throw ModelError("claw: v0 does not match the grid");
  if (!(p.eps > 0.0)) throw ModelError("claw: viscosity eps must be positive");
  if (!(p.t_final > 0.0)) throw ModelError("claw: t_final must be positive");
  if (!(p.cfl > 0.0 && p.cfl <= 1.0)) throw ModelError("claw: cfl must lie in (0, 1]");
  for (double v : p.v0) {
    if (!std::isfinite(v)) throw ModelError("claw: v0 is not finite");
    if (!(std::abs(v) < p.flux.c0)) throw ModelError("claw: |v0| < c0 must hold strictly");
  }
  if (p.alpha_coupling != 0.0 && p.gate.compact() &&
      !(std::abs(p.gate.center()) + p.gate.support_radius() < p.flux.c0))
    throw ModelError("claw: gate support (-M, M) must lie inside (-c0, c0)");
  const auto rep = check_flux_hypotheses(p.flux, p.t_final, p.eps);
  if (!rep.ok()) throw ModelError("claw: flux hypothesis violated: " + rep.violations.front());
  if (warn)
    for (const auto& w : rep.warnings) *warn << "warning: " << w << "\n";
}

/// Upper bound of |f_v - alpha g'' w| over the run.
inline double speed_bound(const ClawProblem& p) {
  double w_max = 0.0;
  if (p.short_wave) {
    double pmax = 0.0, mmax = 0.0;
    for (std::size_t k = 0; k < p.grid.face_count(); ++k) {
      const double x = p.grid.wrap(p.grid.face_x(k));
      pmax = std::max(pmax, std::abs(p.short_wave->plus_bracket(x)));
      mmax = std::max(mmax, std::abs(p.short_wave->minus_bracket(x)));
    }
    for (std::size_t j = 0; j < p.grid.size(); ++j) {
      pmax = std::max(pmax, std::abs(p.short_wave->plus_bracket(p.grid.x(j))));
      mmax = std::max(mmax, std::abs(p.short_wave->minus_bracket(p.grid.x(j))));
    }
    w_max = 0.5 * (pmax + mmax);
  }
  const double c0 = p.flux.c0;
  return max_char_speed(p.flux, p.t_final) + std::abs(p.alpha_coupling) * p.gate.max_abs_g2(-c0, c0) * w_max;
}

struct ClawStepView {
  const ClawState& before;
  const ClawState& after;
  const std::vector<double>& w_faces;
  long step;
};

struct ClawRunOptions {
  /// Keep every `snapshot_stride`-th level (0: initial and final only).
  std::size_t snapshot_stride = 0;
  bool track_energy = false;
  /// Accumulate the max positive part of this entropy's residual.
  std::optional<Entropy> entropy;
  std::function<void(const ClawStepView&)> observer;
  std::ostream* warn = &std::cerr;
};

struct ClawRunResult {
  ClawState final_state;
  std::vector<ClawState> snapshots;
  std::size_t steps = 0;
  double dt = 0.0;
  double max_abs_v = 0.0;
  EnergySeries energy;
  double entropy_max_positive = 0.0;
};

struct StepPlan {
  double dt;
  std::size_t steps;
};

/// The step count and the step (adjusted downward to divide t_final) that
/// run_claw will use.
inline StepPlan plan_steps(const ClawProblem& p) {
  double dt = p.dt;
  if (dt <= 0.0) {
    const double lip = p.flux.has_source ? source_lipschitz(p.flux, p.t_final) : 0.0;
    dt = max_stable_dt(p.grid.dx(), p.eps, speed_bound(p), lip, p.cfl);
  }
  const auto n_steps = static_cast<std::size_t>(std::ceil(p.t_final / dt - 1e-9));
  return {p.t_final / static_cast<double>(n_steps), n_steps};
}

inline ClawRunResult run_claw(const ClawProblem& p, const ClawRunOptions& opt = {}) {
  validate(p, opt.warn);
  const auto [dt, n_steps] = plan_steps(p);

  ClawState s{p.grid, p.v0, 0.0, p.eps, p.alpha_coupling};
  ClawRunResult res{s, {}, 0, 0.0, 0.0, {}, 0.0};
  res.dt = dt;
  res.max_abs_v = max_abs(s.v);
  res.snapshots.push_back(s);
  EnergyTracker energy;
  if (opt.track_energy) energy.record(s);
  std::vector<double> w(p.grid.face_count(), 0.0);
  for (std::size_t k = 1; k <= n_steps; ++k) {
    if (p.short_wave) w = w_plus_at_faces(*p.short_wave, p.grid, s.t);
    ClawState next = step_viscous(s, w, p.flux, p.gate, dt, p.cfl, static_cast<long>(k));
    next.t = static_cast<double>(k) * dt;
    if (opt.entropy) {
      const auto r = entropy_residual(s, next, w, p.flux, p.gate, *opt.entropy);
      for (double x : r) res.entropy_max_positive = std::max(res.entropy_max_positive, x);
    }
    if (opt.observer) opt.observer(ClawStepView{s, next, w, static_cast<long>(k)});
    s = std::move(next);
    res.max_abs_v = std::max(res.max_abs_v, max_abs(s.v));
    if (opt.track_energy) energy.record(s);
    if ((opt.snapshot_stride && k % opt.snapshot_stride == 0) || k == n_steps) res.snapshots.push_back(s);
  }
  res.steps = n_steps;
  res.final_state = s;
  res.energy = energy.series();
  return res;
}

struct EpsilonSweepReport {
  std::vector<double> eps;
  std::vector<double> gaps;       // L1 distance between consecutive-eps solutions at t_final
  std::vector<double> errors;     // L1 distance to the exact solution, when supplied
  double order = std::nan("");    // fitted order of `errors` in eps
  bool cauchy = false;            // gaps strictly decreasing (or all zero)
  std::vector<std::vector<double>> solutions;
};

/// Runs the same problem for each viscosity (in parallel) and reports the
/// consecutive L1 gaps at t_final.
inline EpsilonSweepReport epsilon_sweep(const ClawProblem& base, const std::vector<double>& eps_list,
                                        const std::function<double(double, double)>& exact = {}) {
  if (eps_list.size() < 3) throw ModelError("epsilon_sweep: need at least 3 viscosities");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (eps_list[i] < base.grid.dx()) throw ModelError("epsilon_sweep: eps below dx leaves the viscous layer unresolved");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1])) throw ModelError("epsilon_sweep: eps list must be decreasing");
  }
  std::vector<std::future<std::vector<double>>> jobs;
  for (double e : eps_list) {
    ClawProblem p = base;
    p.eps = e;
    jobs.push_back(std::async(std::launch::async, [p]() {
      ClawRunOptions o;
      o.warn = nullptr;
      return run_claw(p, o).final_state.v;
    }));
  }
  EpsilonSweepReport rep;
  rep.eps = eps_list;
  for (auto& j : jobs) rep.solutions.push_back(j.get());
  bool all_zero = true;
  for (std::size_t i = 0; i + 1 < rep.solutions.size(); ++i) {
    rep.gaps.push_back(l1_distance(base.grid, rep.solutions[i], rep.solutions[i + 1]));
    if (rep.gaps.back() != 0.0) all_zero = false;
  }
  rep.cauchy = all_zero || strictly_decreasing(rep.gaps);
  if (exact) {
    std::vector<double> ref(base.grid.size());
    for (std::size_t j = 0; j < ref.size(); ++j) ref[j] = exact(base.t_final, base.grid.x(j));
    for (const auto& sol : rep.solutions) rep.errors.push_back(l1_distance(base.grid, sol, ref));
    rep.order = fit_order(rep.eps, rep.errors);
  }
  return rep;
}

struct NondegeneracySample {
  double k;
  double t;
  int sign_changes;
  double zero_fraction;
};

struct NondegeneracyReport {
  std::vector<NondegeneracySample> samples;
  bool pass = true;
};

/// Sampling diagnostic for the genuine-nonlinearity condition
/// |{v : f_vv(t,v) - k g'''(v) = 0}| = 0 on [-c0, c0].
inline NondegeneracyReport nondegeneracy_probe(const FluxModel& flux, const CouplingGate& gate,
                                               const std::vector<double>& ks, const std::vector<double>& ts,
                                               int v_samples = 100000) {
  NondegeneracyReport rep;
  const double c0 = flux.c0;
  for (double k : ks) {
    for (double t : ts) {
      int zeros = 0, changes = 0;
      double prev = 0.0;
      bool have_prev = false;
      for (int i = 0; i < v_samples; ++i) {
        const double v = -c0 + 2.0 * c0 * i / (v_samples - 1);
        const double d = flux.f_vv(t, v) - k * gate.g3(v);
        if (std::abs(d) < 1e-10) {
          ++zeros;
          continue;
        }
        if (have_prev && (d > 0) != (prev > 0)) ++changes;
        prev = d;
        have_prev = true;
      }
      const double frac = static_cast<double>(zeros) / v_samples;
      rep.samples.push_back({k, t, changes, frac});
      if (!(frac < 0.01)) rep.pass = false;
    }
  }
  return rep;
}

}  // namespace swlw
