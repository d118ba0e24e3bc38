#pragma once

// Canonical scenarios and invariant checks shared by the CLI `verify` verb
// and the acceptance binary. Each check returns a SuiteReport whose
// diagnostics carry the measured value and the bound it is held to.

#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "swlw/abi.hpp"
#include "swlw/claw_solver.hpp"
#include "swlw/convergence.hpp"
#include "swlw/dalembert.hpp"
#include "swlw/dirac3d.hpp"
#include "swlw/dirac_solver.hpp"
#include "swlw/flux.hpp"
#include "swlw/gate.hpp"
#include "swlw/spinor.hpp"

namespace swlw {

struct Diagnostic {
  enum class Bound { at_most, at_least };

  std::string name;
  double measured = std::nan("");
  double tolerance = std::nan("");
  Bound bound = Bound::at_most;
  bool pass = false;
  std::string detail;
};

inline Diagnostic at_most(std::string name, double measured, double tol, std::string detail = {}) {
  return {std::move(name), measured, tol, Diagnostic::Bound::at_most, measured <= tol, std::move(detail)};
}

inline Diagnostic at_least(std::string name, double measured, double tol, std::string detail = {}) {
  return {std::move(name), measured, tol, Diagnostic::Bound::at_least, measured >= tol, std::move(detail)};
}

inline Diagnostic holds(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok ? 1.0 : 0.0, 1.0, Diagnostic::Bound::at_least, ok, std::move(detail)};
}

struct SuiteReport {
  std::string name;
  std::vector<Diagnostic> diagnostics;
  double seconds = 0.0;

  bool pass() const {
    for (const auto& d : diagnostics)
      if (!d.pass) return false;
    return !diagnostics.empty();
  }

  void add(Diagnostic d) { diagnostics.push_back(std::move(d)); }
  void append(const SuiteReport& o) {
    diagnostics.insert(diagnostics.end(), o.diagnostics.begin(), o.diagnostics.end());
    seconds += o.seconds;
  }
};

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_;
};

inline std::string join_values(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(4);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  return os.str();
}

inline double gauss(double x, double sigma) { return std::exp(-x * x / (2.0 * sigma * sigma)); }

/// f evaluated at the periodic image of x in [lo, lo + L).
inline std::function<double(double)> periodic_profile(std::function<double(double)> f, double lo, double L) {
  return [f = std::move(f), lo, L](double x) {
    double r = std::fmod(x - lo, L);
    if (r < 0) r += L;
    return f(lo + r);
  };
}

namespace scenarios {

// ---------- 1-D Dirac ----------

/// Smooth periodic data on [-pi, pi) with |u1| >= 1/2.
inline SpinorField1D smooth_spinor(const Grid1D& g) {
  SpinorField1D u(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    u.values[j] = Spinor((1.0 + 0.5 * std::cos(x)) * std::polar(1.0, std::sin(x)),
                         0.6 * std::exp(std::cos(x - 1.0) - 1.0) * std::polar(1.0, 2.0 * x));
  }
  return u;
}

inline Grid1D dirac_grid(std::size_t n) { return Grid1D(-std::numbers::pi, std::numbers::pi, n, Boundary::periodic); }

/// Gaussian data for the cross-solver comparison.
inline SpinorField1D gaussian_spinor(const Grid1D& g) {
  SpinorField1D u(g);
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    const double e = std::exp(-x * x / 0.5);
    u.values[j] = Spinor(cplx(e, 0.0), 0.5 * e * std::polar(1.0, 2.0 * x));
  }
  return u;
}

// ---------- long wave ----------

/// Short wave with |u|^2 = G(x + t) + 1/4 G(x - t), G a narrow Gaussian,
/// periodic on [lo, lo + L).
inline std::shared_ptr<const InitialObservables> two_pulse_short_wave(double lo, double L, double width = 0.15) {
  auto G = [width](double x) { return gauss(x, width); };
  return std::make_shared<const InitialObservables>(periodic_profile([G](double x) { return 1.25 * G(x); }, lo, L),
                                                    periodic_profile([G](double x) { return 0.75 * G(x); }, lo, L));
}

/// a(t) = exp(0.1 t), c0 = 1, v0 = 0.8 exp(-x^2/(2 sigma^2)) on [-1, 1),
/// gate bump M = 0.9, coupling 0.5.
inline ClawProblem hw(std::size_t n, double eps, double t_final = 1.0, double sigma = 0.25) {
  Grid1D g(-1.0, 1.0, n, Boundary::periodic);
  std::vector<double> v0(n);
  for (std::size_t j = 0; j < n; ++j) v0[j] = 0.8 * gauss(g.x(j), sigma);
  ClawProblem p{g, v0, hw_flux(1.0, 0.1), CouplingGate::bump(0.9, 1.0), 0.5, eps, t_final, 0.45, 0.0, nullptr};
  p.short_wave = two_pulse_short_wave(-1.0, 2.0);
  return p;
}

/// f = c1 v, no coupling: the inviscid solution is v0(x - c1 t).
inline ClawProblem linear_transport(std::size_t n, double eps, double c1 = 0.5, double t_final = 1.0) {
  Grid1D g(-1.0, 1.0, n, Boundary::periodic);
  std::vector<double> v0(n);
  for (std::size_t j = 0; j < n; ++j) v0[j] = 0.8 * gauss(g.x(j), 0.3);
  return ClawProblem{g, v0, linear_flux(c1, 1.0), CouplingGate::zero(), 0.0, eps, t_final, 0.45, 0.0, nullptr};
}

inline std::function<double(double, double)> linear_transport_exact(double c1 = 0.5) {
  auto v0 = periodic_profile([](double x) { return 0.8 * gauss(x, 0.3); }, -1.0, 2.0);
  return [v0, c1](double t, double x) { return v0(x - c1 * t); };
}

/// HW problem with step data 0.6 on |x| < 0.4, -0.3 elsewhere.
inline ClawProblem hw_step(std::size_t n, double eps, double t_final = 1.0) {
  ClawProblem p = hw(n, eps, t_final);
  for (std::size_t j = 0; j < n; ++j) p.v0[j] = std::abs(p.grid.x(j)) < 0.4 ? 0.6 : -0.3;
  return p;
}

// ---------- ABI ----------

/// Gates g1 = bump on [0.5, 1.3], g2 = bump on [-1.0, -0.4]; B1 = 0.6, D1 = 0.8.
inline ABIGateConfig abi_gates(double coupling) {
  ABIGateConfig g;
  g.g1 = CouplingGate::bump(0.4, 1.0, 0.9);
  g.g2 = CouplingGate::bump(0.3, 1.0, -0.7);
  g.alpha1 = coupling;
  g.alpha2 = coupling;
  return g;
}

struct ABISetup {
  ABILagrangeState state;
  InitialObservables short_wave;
};

/// Periodic y in [-4, 4), theta0 - zeta0 close to 2Z away from the bumps.
inline ABISetup abi_setup(std::size_t n, const ABIConstants& c = {}) {
  const double Z = c.Z();
  Grid1D yg(-4.0, 4.0, n, Boundary::periodic);
  ABILagrangeState s{yg, {}, c, 0.0, -2.0};
  s.f.theta.resize(n);
  s.f.zeta.resize(n);
  for (auto& f : s.f.tilde) f.assign(n, 0.0);
  std::vector<double> wp(n), wm(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double y = yg.x(j);
    s.f.theta[j] = 0.5 * Z + 0.3 * gauss(y, 0.4);
    s.f.zeta[j] = -0.5 * Z + 0.1 * gauss(y - 0.5, 0.4);
    const double a = gauss(y + 0.5, 0.3), b = 0.7 * gauss(y - 0.3, 0.3);
    wp[j] = a * a + b * b;
    wm[j] = a * a - b * b;
  }
  return ABISetup{std::move(s), InitialObservables::from_samples(yg, wp, wm)};
}

/// Smooth passive fields for the spectral/upwind comparison.
inline void abi_passive_data(ABILagrangeState& s) {
  for (std::size_t j = 0; j < s.grid.size(); ++j) {
    const double y = s.grid.x(j);
    for (int k = 0; k < 6; ++k) s.f.tilde[k][j] = std::cos(0.25 * std::numbers::pi * y + k) * 0.5;
  }
}

// ---------- 3-D ----------

/// Smooth periodic data on [0, 2 pi)^3 that varies in all three directions.
inline Spinor4Field3D smooth_spinor3d(const Grid3D& g) {
  const std::complex<double> I(0.0, 1.0);
  return Spinor4Field3D::sample(g, [&](double x, double y, double z) {
    Vec4c v;
    v << 0.6 + 0.2 * std::cos(x) * std::exp(I * std::sin(y)), 0.3 * std::exp(I * (std::cos(z) + 0.5 * std::sin(x))),
        0.2 * std::sin(y + z) + 0.1 * I, 0.25 * std::exp(I * std::cos(x - y));
    return v;
  });
}

inline Thirring3DPotential thirring3d(double lambda) {
  return Thirring3DPotential{lambda, [](double t, double x, double y, double) {
                               return 0.3 * std::cos(x + y) * std::cos(t);
                             }};
}

}  // namespace scenarios

// ====================================================================
// Checks
// ====================================================================

/// Discrete d'Alembertian of |u|^2 from the characteristics solver for the
/// free, constant-potential and Thirring cases, n in {128, 256, 512}.
inline SuiteReport check_wave_property_1d(const std::vector<std::size_t>& ns = {128, 256, 512}) {
  SuiteReport r{"wave_property_1d", {}, 0.0};
  Stopwatch sw;
  const auto alpha = make_alpha(AlphaChoice::diag_pm1);
  struct Case {
    const char* name;
    double lambda;
    std::function<double(double, double)> V;
  };
  const std::vector<Case> cases = {
      {"free", 0.0, {}},
      {"constant_V", 0.0, [](double, double) { return 0.7; }},
      {"thirring", 1.0, [](double t, double x) { return 0.4 * std::cos(x) * std::cos(t); }},
  };
  for (const auto& c : cases) {
    std::vector<double> hs, res;
    for (std::size_t n : ns) {
      const Grid1D g = scenarios::dirac_grid(n);
      DiracRunConfig cfg;
      cfg.lambda = c.lambda;
      cfg.potential = c.V;
      cfg.t_final = 1.0;
      CharacteristicsSolver s(scenarios::smooth_spinor(g), alpha, cfg);
      // Levels two steps apart: with dt = dx the leapfrog stencil would be
      // exact for node-shifted data.
      const auto steps = 2 * static_cast<std::size_t>(std::llround(0.5 / g.dx()));
      const auto tr = s.trajectory(steps, 2);
      std::vector<std::vector<double>> levels;
      for (const auto& f : tr.fields) levels.push_back(observables(f, alpha).w_plus);
      hs.push_back(g.dx());
      res.push_back(wave_residual(levels, 2.0 * g.dx(), g.dx()));
    }
    r.add(at_least(std::string("order[") + c.name + "]", fit_order(hs, res), 1.9, "residuals " + join_values(res)));
  }
  r.seconds = sw.seconds();
  r.add(at_most("runtime_s", r.seconds, 10.0));
  return r;
}

/// |u|^2 from the characteristics solver against the closed form, and the
/// Duhamel solver against a 4x finer characteristics reference.
inline SuiteReport check_closed_form(bool include_duhamel = true) {
  SuiteReport r{"closed_form", {}, 0.0};
  Stopwatch sw;
  const auto alpha = make_alpha(AlphaChoice::diag_pm1);
  {
    const Grid1D g = scenarios::dirac_grid(512);
    const auto u0 = scenarios::smooth_spinor(g);
    const auto init = InitialObservables::from_field(u0, alpha);
    DiracRunConfig cfg;
    cfg.lambda = 1.0;
    cfg.potential = [](double t, double x) { return 0.4 * std::cos(x) * std::cos(t); };
    CharacteristicsSolver s(u0, alpha, cfg);
    double err = 0.0;
    for (std::size_t k = 1; k <= 700; ++k) {
      s.step();
      const auto w = observables(s.field(), alpha).w_plus;
      for (std::size_t j = 0; j < g.size(); ++j) {
        // node positions x_j +- t coincide with nodes; evaluate there exactly
        const double wp = 0.5 * init.plus_bracket(g.x((j + k) % g.size())) +
                          0.5 * init.minus_bracket(g.x((j + g.size() * 2 - k % g.size()) % g.size()));
        err = std::max(err, std::abs(w[j] - wp));
        if (k == 700) err = std::max(err, std::abs(w[j] - eval_w_plus(init, s.time(), g.x(j))));
      }
    }
    r.add(at_most("characteristics_vs_closed_form", err, 1e-12));
  }
  if (include_duhamel) {
    const double L = 4.0, T = 0.5, dx = 1e-3;
    const auto n = static_cast<std::size_t>(std::llround(L / dx));
    const Grid1D g(-2.0, 2.0, n, Boundary::periodic);
    const Grid1D gf(-2.0, 2.0, 4 * n, Boundary::periodic);
    DiracRunConfig cfg;
    cfg.lambda = 1.0;
    cfg.t_final = T;
    cfg.potential = [](double t, double x) { return 0.4 * std::exp(-x * x) * std::cos(t); };
    CharacteristicsSolver ref_solver(scenarios::gaussian_spinor(gf), alpha, cfg);
    ref_solver.advance(static_cast<std::size_t>(std::llround(T / gf.dx())));
    std::vector<Spinor> ref(n);
    for (std::size_t j = 0; j < n; ++j) ref[j] = ref_solver.field().values[4 * j];
    const auto u0 = scenarios::gaussian_spinor(g);
    std::vector<double> hs, errs;
    for (double dt : {4e-3, 2e-3, 1e-3}) {
      DiracRunConfig c = cfg;
      c.dt = dt;
      const auto tr = solve_duhamel(u0, alpha, c);
      hs.push_back(dt);
      errs.push_back(detail::l2_distance(tr.fields.back().values, ref, g.dx()));
    }
    r.add(at_least("duhamel_order", fit_order(hs, errs), 1.0, "L2 errors " + join_values(errs)));
  }
  r.seconds = sw.seconds();
  return r;
}

/// min |u|^2 > 0 for data with |u1| > 0, and exact transport of (0, psi).
inline SuiteReport check_positivity() {
  SuiteReport r{"positivity", {}, 0.0};
  Stopwatch sw;
  const auto alpha = make_alpha(AlphaChoice::diag_pm1);
  const Grid1D g = scenarios::dirac_grid(512);
  DiracRunConfig cfg;
  cfg.lambda = 1.0;
  cfg.potential = [](double t, double x) { return 0.4 * std::cos(x) * std::cos(t); };
  {
    const auto u0 = scenarios::smooth_spinor(g);
    const auto init = InitialObservables::from_field(u0, alpha);
    r.add(holds("initial_condition_positive", check_ic_positivity(init, g)));
    CharacteristicsSolver s(u0, alpha, cfg);
    double wmin = max_abs(observables(u0, alpha).w_plus);
    for (int k = 0; k < 1024; ++k) {
      s.step();
      for (double w : observables(s.field(), alpha).w_plus) wmin = std::min(wmin, w);
    }
    r.add(at_least("min_density", wmin, std::numeric_limits<double>::min(), "strictly positive required"));
  }
  {
    auto psi = [](double x) { return 0.8 * std::exp(std::cos(x) - 1.0) * std::polar(1.0, std::sin(2.0 * x)); };
    SpinorField1D u0(g);
    for (std::size_t j = 0; j < g.size(); ++j) u0.values[j] = Spinor(0.0, psi(g.x(j)));
    CharacteristicsSolver s(u0, alpha, cfg);
    double err = 0.0;
    for (int k = 1; k <= 700; ++k) {
      s.step();
      const auto w = observables(s.field(), alpha).w_plus;
      for (std::size_t j = 0; j < g.size(); ++j) err = std::max(err, std::abs(w[j] - std::norm(psi(g.x(j) - s.time()))));
    }
    r.add(at_most("right_mover_transport", err, 1e-12));
  }
  r.seconds = sw.seconds();
  return r;
}

/// ||v||_inf <= c0 at every step on the HW scenario.
inline SuiteReport check_max_principle() {
  SuiteReport r{"max_principle", {}, 0.0};
  Stopwatch sw;
  const ClawProblem p = scenarios::hw(512, 2e-3, 1.0);
  double vmax = 0.0;
  bool aborted = false;
  std::string why;
  try {
    ClawRunOptions o;
    o.warn = nullptr;
    o.observer = [&](const ClawStepView& v) { vmax = std::max(vmax, max_abs(v.after.v)); };
    run_claw(p, o);
  } catch (const SolverAbort& e) {
    aborted = true;
    why = e.what();
  }
  r.add(holds("completed", !aborted, why));
  r.add(at_most("max_abs_v", vmax, p.flux.c0 + 1e-10));
  r.seconds = sw.seconds();
  r.add(at_most("runtime_s", r.seconds, 5.0));
  return r;
}

/// Max positive part of the discrete entropy residual for eta = v^2/2 under
/// simultaneous (dx, eps) refinement.
inline SuiteReport check_entropy(const std::vector<std::size_t>& ns = {256, 512, 1024}) {
  SuiteReport r{"entropy", {}, 0.0};
  Stopwatch sw;
  std::vector<std::future<double>> jobs;
  for (std::size_t n : ns)
    jobs.push_back(std::async(std::launch::async, [n] {
      ClawProblem p = scenarios::hw(n, 0.0, 1.0);
      p.eps = p.grid.dx();
      ClawRunOptions o;
      o.warn = nullptr;
      o.entropy = Entropy::quadratic();
      return run_claw(p, o).entropy_max_positive;
    }));
  std::vector<double> hs, res;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    hs.push_back(2.0 / static_cast<double>(ns[i]));
    res.push_back(jobs[i].get());
  }
  r.add(at_least("entropy_residual_order", fit_order(hs, res), 0.8, "max positive parts " + join_values(res)));
  r.seconds = sw.seconds();
  return r;
}

/// eps-sweep Cauchy property on HW, and order against exact transport for
/// the linear flux.
inline SuiteReport check_vanishing_viscosity(std::size_t n = 2048) {
  SuiteReport r{"vanishing_viscosity", {}, 0.0};
  Stopwatch sw;
  const std::vector<double> eps = {8e-3, 4e-3, 2e-3, 1e-3};
  const auto hw = epsilon_sweep(scenarios::hw(n, eps.front()), eps);
  r.add(holds("hw_gaps_strictly_decreasing", hw.cauchy, "gaps " + join_values(hw.gaps)));
  const auto lin = epsilon_sweep(scenarios::linear_transport(n, eps.front()), eps, scenarios::linear_transport_exact());
  r.add(at_least("linear_flux_order", lin.order, 0.8, "L1 errors " + join_values(lin.errors)));
  r.seconds = sw.seconds();
  return r;
}

/// L1 distances between solutions from mollified step data.
struct MollificationSweep {
  std::vector<double> widths;
  std::vector<double> gaps;
  std::vector<std::vector<double>> solutions;
};

inline MollificationSweep mollification_sweep(const ClawProblem& base, const std::vector<double>& widths) {
  if (widths.size() < 3) throw ModelError("mollification_sweep: need at least 3 widths");
  std::vector<std::future<std::vector<double>>> jobs;
  for (double w : widths) {
    ClawProblem p = base;
    p.v0 = mollify(base.grid, base.v0, w, nullptr);
    jobs.push_back(std::async(std::launch::async, [p] {
      ClawRunOptions o;
      o.warn = nullptr;
      return run_claw(p, o).final_state.v;
    }));
  }
  MollificationSweep m{widths, {}, {}};
  for (auto& j : jobs) m.solutions.push_back(j.get());
  for (std::size_t i = 0; i + 1 < m.solutions.size(); ++i)
    m.gaps.push_back(l1_distance(base.grid, m.solutions[i], m.solutions[i + 1]));
  return m;
}

inline SuiteReport check_data_stability() {
  SuiteReport r{"data_stability", {}, 0.0};
  Stopwatch sw;
  const auto m = mollification_sweep(scenarios::hw_step(1024, 2e-3, 1.0), {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64});
  r.add(holds("gaps_strictly_decreasing", strictly_decreasing(m.gaps), "gaps " + join_values(m.gaps)));
  r.seconds = sw.seconds();
  return r;
}

/// Coupled Riemann-invariant run: theta - zeta <= 2Z and the box bounds.
inline SuiteReport check_abi_region(std::size_t n = 512, double T = 1.0, double coupling = 0.5) {
  SuiteReport r{"abi_physical_region", {}, 0.0};
  Stopwatch sw;
  const ABIConstants c;
  const auto g = scenarios::abi_gates(coupling);
  auto setup = scenarios::abi_setup(n, c);
  bool ok = true;
  std::string why;
  double gap_max = 0.0, box_excess = -1.0;
  try {
    validate_gates(g, c);
    validate_initial(setup.state.f, g);
    ABILagrangeState s = setup.state;
    const double dy = s.grid.dx();
    double dt = abi_stable_dt(dy, dy, g, c, 2.0);
    const auto steps = static_cast<long>(std::ceil(T / dt));
    dt = T / static_cast<double>(steps);
    for (long k = 1; k <= steps; ++k) {
      s = step_coupled(s, w_plus_at_faces(setup.short_wave, s.grid, s.t), g, dy, dt, 0.45, k);
      for (std::size_t j = 0; j < n; ++j) {
        gap_max = std::max(gap_max, s.f.theta[j] - s.f.zeta[j]);
        box_excess = std::max({box_excess, g.a() - s.f.theta[j], s.f.theta[j] - g.b(), g.c() - s.f.zeta[j],
                               s.f.zeta[j] - g.d()});
      }
    }
  } catch (const std::exception& e) {
    ok = false;
    why = e.what();
  }
  r.add(holds("completed", ok, why));
  r.add(at_most("max_theta_minus_zeta_over_2Z", gap_max / (2.0 * c.Z()), 1.0 + 1e-10));
  r.add(at_most("box_excess", box_excess, 1e-10));
  r.seconds = sw.seconds();
  return r;
}

/// Lagrange/Euler round trip, passive spectral vs upwind, and the forced
/// Eulerian h-equation residual.
inline SuiteReport check_abi_transforms(bool include_residual = true) {
  SuiteReport r{"abi_transforms", {}, 0.0};
  Stopwatch sw;
  const ABIConstants c;
  {
    const std::size_t n = 300;
    ABIEulerState e;
    e.x.resize(n);
    e.h.resize(n);
    e.P1.resize(n);
    for (auto& f : e.fields) f.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = -1.5 + 3.0 * static_cast<double>(i) / static_cast<double>(n - 1);
      e.x[i] = x;
      e.h[i] = 1.2 + 0.5 * gauss(x - 0.2, 0.3);
      e.P1[i] = 0.3 * std::sin(2.0 * x);
      for (int k = 0; k < 6; ++k) e.fields[k][i] = 0.1 * (k + 1) * std::cos(x + k);
    }
    const auto img = to_lagrange(e, c);
    const auto back = to_euler(img.fields, img.map, c);
    double err = 0.0;
    auto rel = [&err](const std::vector<double>& a, const std::vector<double>& b) {
      double na = 0.0, d = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        na = std::max(na, std::abs(a[i]));
        d = std::max(d, std::abs(a[i] - b[i]));
      }
      err = std::max(err, na > 0.0 ? d / na : d);
    };
    rel(e.x, back.x);
    rel(e.h, back.h);
    rel(e.P1, back.P1);
    for (int k = 0; k < 6; ++k) rel(e.fields[k], back.fields[k]);
    r.add(at_most("round_trip_relative", err, 1e-10));
  }
  {
    std::vector<double> hs, diffs;
    const double T = 0.5;
    for (std::size_t n : {128, 256, 512}) {
      ABILagrangeState s = scenarios::abi_setup(n, c).state;
      scenarios::abi_passive_data(s);
      const double dy = s.grid.dx();
      const auto steps = static_cast<long>(std::ceil(T / (0.5 * dy / c.Z())));
      const double dt = T / static_cast<double>(steps);
      ABILagrangeState up = s;
      for (long k = 0; k < steps; ++k) up = step_passive(up, dt, PassivePath::upwind);
      const ABILagrangeState sp = step_passive(s, T, PassivePath::spectral);
      double d = 0.0;
      for (int k = 0; k < 6; ++k) d = std::max(d, l1_distance(s.grid, sp.f.tilde[k], up.f.tilde[k]));
      hs.push_back(dy);
      diffs.push_back(d);
    }
    r.add(at_least("passive_agreement_order", fit_order(hs, diffs), 0.8, "L1 gaps " + join_values(diffs)));
  }
  if (include_residual) {
    const auto g = scenarios::abi_gates(0.2);
    const double T = 0.5;
    std::vector<double> eul;
    for (int j = 0; j < 400; ++j) eul.push_back(-2.0 + 4.0 * j / 399.0);
    std::vector<std::future<double>> jobs;
    const std::vector<std::size_t> ns = {1024, 2048, 4096};
    for (std::size_t n : ns)
      jobs.push_back(std::async(std::launch::async, [n, &g, &c, &eul, T] {
        auto setup = scenarios::abi_setup(n, c);
        ABILagrangeState s = setup.state;
        const Grid1D& yg = s.grid;
        const double eps = yg.dx();
        double dt = abi_stable_dt(yg.dx(), eps, g, c, 2.0);
        const auto steps = static_cast<long>(std::ceil(T / dt));
        dt = T / static_cast<double>(steps);
        std::vector<ABIEulerFrame> frames;
        double res = 0.0;
        for (long k = 0; k <= steps; ++k) {
          std::vector<double> wn(n);
          for (std::size_t j = 0; j < n; ++j) wn[j] = eval_w_plus(setup.short_wave, s.t, yg.x(j));
          frames.push_back(to_euler_forced(s, wn, g));
          if (frames.size() > 3) frames.erase(frames.begin());
          if (frames.size() == 3 && k % 8 == 0)
            res = std::max(res, forced_h_residual(frames[0], frames[1], frames[2], dt, eul, -1.5, 1.5,
                                                  eulerian_period(s)));
          if (k < steps) s = step_coupled(s, w_plus_at_faces(setup.short_wave, yg, s.t), g, eps, dt, 0.45, k + 1);
        }
        return res;
      }));
    std::vector<double> hs, res;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      hs.push_back(8.0 / static_cast<double>(ns[i]));
      res.push_back(jobs[i].get());
    }
    r.add(at_least("forced_h_residual_order", fit_order(hs, res), 0.8, "residuals " + join_values(res)));
  }
  r.seconds = sw.seconds();
  return r;
}

/// 3-D wave residual of |u|^2 and u^dag b u for Glassey (p = 3) and 3-D
/// Thirring potentials on n in {8, 16, 32}.
inline SuiteReport check_dirac3d(const std::vector<std::size_t>& ns = {8, 16, 32}, double T = 1.0) {
  SuiteReport r{"dirac3d", {}, 0.0};
  const auto m = build_matrices3d();
  const auto bad = check_matrices3d(m);
  r.add(holds("matrix_identities", bad.empty(), bad.empty() ? "" : bad.front()));
  struct Case {
    const char* name;
    PotentialChoice3D b;
  };
  const std::vector<Case> cases = {{"glassey", GlasseyPotential{3.0, 1.0}}, {"thirring3d", scenarios::thirring3d(1.0)}};
  double drift = 0.0, t_finest = 0.0;
  for (const auto& c : cases) {
    std::vector<double> hs, rd, rc;
    for (std::size_t n : ns) {
      Stopwatch sw;
      const Grid3D g{n};
      const auto tr = evolve_spectral(scenarios::smooth_spinor3d(g), m, c.b, T, 0.5 * g.dx());
      const double dt = tr.times[1] - tr.times[0];
      hs.push_back(g.dx());
      rd.push_back(wave_residual3d(tr.density, n, dt, g.dx()));
      rc.push_back(wave_residual3d(tr.chirality, n, dt, g.dx()));
      drift = std::max(drift, tr.max_step_drift);
      if (n == ns.back()) t_finest = std::max(t_finest, sw.seconds());
      r.seconds += sw.seconds();
    }
    r.add(at_least(std::string("order_density[") + c.name + "]", fit_order(hs, rd), 1.5, "residuals " + join_values(rd)));
    r.add(at_least(std::string("order_chirality[") + c.name + "]", fit_order(hs, rc), 1.5,
                   "residuals " + join_values(rc)));
  }
  r.add(at_most("per_step_charge_drift", drift, 1e-12));
  r.add(at_most("runtime_finest_s", t_finest, 60.0));
  return r;
}

/// Charge conservation over >= 1000 periodic steps in 1-D and 3-D.
inline SuiteReport check_charge() {
  SuiteReport r{"charge", {}, 0.0};
  Stopwatch sw;
  {
    const auto alpha = make_alpha(AlphaChoice::diag_pm1);
    const Grid1D g = scenarios::dirac_grid(256);
    DiracRunConfig cfg;
    cfg.lambda = 1.0;
    cfg.potential = [](double t, double x) { return 0.4 * std::cos(x) * std::cos(t); };
    const auto u0 = scenarios::smooth_spinor(g);
    CharacteristicsSolver s(u0, alpha, cfg);
    const double q0 = charge(u0);
    double drift = 0.0;
    for (int k = 0; k < 2000; ++k) {
      s.step();
      drift = std::max(drift, std::abs(charge(s.field()) - q0) / q0);
    }
    r.add(at_most("charge_drift_1d", drift, 1e-10, "2000 steps"));
  }
  {
    const auto m = build_matrices3d();
    const Grid3D g{16};
    const auto u0 = scenarios::smooth_spinor3d(g);
    Dirac3DSolver s(u0, m, scenarios::thirring3d(1.0), 0.5 * g.dx());
    const double q0 = charge3d(u0);
    double drift = 0.0;
    for (int k = 0; k < 1000; ++k) {
      s.step();
      drift = std::max(drift, std::abs(charge3d(s.field()) - q0) / q0);
    }
    r.add(at_most("charge_drift_3d", drift, 1e-10, "1000 steps"));
  }
  r.seconds = sw.seconds();
  return r;
}

/// Matrix and gate identities.
inline SuiteReport check_algebra() {
  SuiteReport r{"algebra", {}, 0.0};
  Stopwatch sw;
  for (auto choice : {AlphaChoice::diag_pm1, AlphaChoice::pauli_x}) {
    const auto a = make_alpha(choice);
    r.add(at_most(std::string("alpha_involution[") + (choice == AlphaChoice::diag_pm1 ? "diag" : "pauli_x") + "]",
                  max_abs(Mat2c(a.matrix() * a.matrix() - Mat2c::Identity())), kAlgebraTol));
  }
  const auto bad = check_matrices3d(build_matrices3d());
  r.add(holds("dirac3d_identities", bad.empty(), bad.empty() ? "" : bad.front()));
  const auto spec = passive_spectrum(ABIConstants{});
  double im = 0.0;
  for (int k = 0; k < 6; ++k) im = std::max(im, std::abs(spec.eigenvalues(k).imag()));
  r.add(at_most("passive_spectrum_real", im, 1e-10));
  for (const auto& g : {CouplingGate::bump(0.9, 1.0), scenarios::abi_gates(1.0).g1, scenarios::abi_gates(1.0).g2})
    r.add(holds("gate_derivatives[" + g.name() + "]", g.derivatives_consistent(-1.5, 1.5)));
  r.seconds = sw.seconds();
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"algebra",  "wave_property",   "max_principle", "entropy",
                                                 "physical_region", "charge", "cross_solver"};
  return names;
}

/// The named invariant suite on its canonical scenarios.
inline SuiteReport run_suite(const std::string& name) {
  SuiteReport r{name, {}, 0.0};
  if (name == "algebra") {
    r.append(check_algebra());
  } else if (name == "wave_property") {
    r.append(check_wave_property_1d());
    r.append(check_dirac3d());
  } else if (name == "max_principle") {
    r.append(check_max_principle());
  } else if (name == "entropy") {
    r.append(check_entropy());
    r.append(check_vanishing_viscosity());
    r.append(check_data_stability());
  } else if (name == "physical_region") {
    r.append(check_abi_region());
    r.append(check_abi_transforms());
  } else if (name == "charge") {
    r.append(check_charge());
    r.append(check_positivity());
  } else if (name == "cross_solver") {
    r.append(check_closed_form());
  } else {
    throw ConfigError("unknown verify suite '" + name + "'");
  }
  return r;
}

}  // namespace swlw
