#pragma once

// Plane waves of the augmented Born-Infeld system in Lagrangian (mass)
// coordinates: Riemann invariants theta = v + Z tau, zeta = v - Z tau driven
// by the short-wave density, the passive six-field linear system, and the
// transforms back to Eulerian variables.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "swlw/claw_solver.hpp"
#include "swlw/errors.hpp"
#include "swlw/fft.hpp"
#include "swlw/gate.hpp"
#include "swlw/grid.hpp"
#include "swlw/interpolation.hpp"

namespace swlw {

struct ABIConstants {
  double B1 = 0.6;
  double D1 = 0.8;

  double Z() const { return std::sqrt(1.0 + B1 * B1 + D1 * D1); }
};

/// Index of each passive field in the Lagrangian vector q.
enum PassiveField { kD2 = 0, kD3 = 1, kB2 = 2, kB3 = 3, kP2 = 4, kP3 = 5 };

struct ABIEulerState {
  double t = 0.0;
  std::vector<double> x;  // node positions
  std::vector<double> h, P1;
  std::array<std::vector<double>, 6> fields;  // D2, D3, B2, B3, P2, P3
};

struct ABILagrangeFields {
  std::vector<double> theta, zeta;
  std::array<std::vector<double>, 6> tilde;  // D2/h, D3/h, B2/h, B3/h, P2/h, P3/h
};

/// Mass coordinate y of each node and the Eulerian position of node 0.
struct LagrangeMap {
  std::vector<double> y;
  double x_anchor = 0.0;
};

struct LagrangeImage {
  ABILagrangeFields fields;
  LagrangeMap map;
};

/// Evolving Lagrangian state on a uniform y grid.
struct ABILagrangeState {
  Grid1D grid;
  ABILagrangeFields f;
  ABIConstants consts;
  double t = 0.0;
  double x_anchor = 0.0;
};

inline double tau_of(double theta, double zeta, double z) { return (theta - zeta) / (2.0 * z); }

/// tau = 1/h, v = P1/h, tildes divided by h; y by cumulative trapezoid of
/// h dx with y(x_0) = 0.
inline LagrangeImage to_lagrange(const ABIEulerState& e, const ABIConstants& c) {
  const std::size_t n = e.h.size();
  if (e.x.size() != n || e.P1.size() != n) throw ModelError("to_lagrange: field sizes differ");
  for (double h : e.h)
    if (!(h > 0.0)) throw ModelError("to_lagrange: h must be positive everywhere");
  const double z = c.Z();
  LagrangeImage out;
  out.fields.theta.resize(n);
  out.fields.zeta.resize(n);
  for (auto& f : out.fields.tilde) f.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = 1.0 / e.h[i];
    const double v = e.P1[i] / e.h[i];
    out.fields.theta[i] = v + z * tau;
    out.fields.zeta[i] = v - z * tau;
    for (int k = 0; k < 6; ++k) out.fields.tilde[k][i] = e.fields[k][i] / e.h[i];
  }
  out.map.x_anchor = n ? e.x[0] : 0.0;
  out.map.y.assign(n, 0.0);
  for (std::size_t i = 1; i < n; ++i)
    out.map.y[i] = out.map.y[i - 1] + 0.5 * (e.h[i - 1] + e.h[i]) * (e.x[i] - e.x[i - 1]);
  return out;
}

/// Exact discrete inverse of `to_lagrange`: h = 2Z/(theta - zeta),
/// P1 = h (theta + zeta)/2, dx = dy / mean(h).
inline ABIEulerState to_euler(const ABILagrangeFields& f, const LagrangeMap& map, const ABIConstants& c,
                              double t = 0.0) {
  const std::size_t n = f.theta.size();
  if (f.zeta.size() != n || map.y.size() != n) throw ModelError("to_euler: field sizes differ");
  const double z = c.Z();
  ABIEulerState e;
  e.t = t;
  e.x.resize(n);
  e.h.resize(n);
  e.P1.resize(n);
  for (auto& v : e.fields) v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = f.theta[i] - f.zeta[i];
    if (!(d > 0.0)) throw SolverAbort("to_euler: theta - zeta <= 0 (unphysical, h infinite)");
    e.h[i] = 2.0 * z / d;
    e.P1[i] = e.h[i] * 0.5 * (f.theta[i] + f.zeta[i]);
    for (int k = 0; k < 6; ++k) e.fields[k][i] = e.h[i] * f.tilde[k][i];
  }
  if (n) e.x[0] = map.x_anchor;
  for (std::size_t i = 1; i < n; ++i) e.x[i] = e.x[i - 1] + (map.y[i] - map.y[i - 1]) / (0.5 * (e.h[i - 1] + e.h[i]));
  return e;
}

/// Eulerian length of one period of a periodic Lagrangian state (the sum of
/// dy / mean(h) over every cell, the wrap-around cell included).
inline double eulerian_period(const ABILagrangeState& s) {
  const double z = s.consts.Z();
  const std::size_t n = s.f.theta.size();
  double len = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const double h_mean =
        0.5 * (1.0 / tau_of(s.f.theta[i], s.f.zeta[i], z) + 1.0 / tau_of(s.f.theta[j], s.f.zeta[j], z));
    len += s.grid.dx() / h_mean;
  }
  return len;
}

/// Gates for the two Riemann invariants: g1 acts on theta with
/// supp g1' in [a, b], g2 on zeta with supp g2' in [c, d].
struct ABIGateConfig {
  CouplingGate g1 = CouplingGate::zero();
  CouplingGate g2 = CouplingGate::zero();
  double alpha1 = 0.0;
  double alpha2 = 0.0;

  double a() const { return g1.support_lo(); }
  double b() const { return g1.support_hi(); }
  double c() const { return g2.support_lo(); }
  double d() const { return g2.support_hi(); }
};

/// a <= b <= c + 2Z <= d + 2Z, and compactly supported gates.
inline void validate_gates(const ABIGateConfig& g, const ABIConstants& c) {
  if (!g.g1.compact() || !g.g2.compact()) throw ModelError("abi: gates need compactly supported derivatives");
  const double z2 = 2.0 * c.Z();
  if (!(g.a() <= g.b() && g.b() <= g.c() + z2 && g.c() + z2 <= g.d() + z2))
    throw ModelError("abi: gate supports violate a <= b <= c + 2Z <= d + 2Z");
}

/// Initial data must satisfy a < theta0 < b and c < zeta0 < d.
inline void validate_initial(const ABILagrangeFields& f, const ABIGateConfig& g) {
  for (double th : f.theta)
    if (!(g.a() < th && th < g.b())) throw ModelError("abi: initial theta must lie strictly inside (a, b)");
  for (double ze : f.zeta)
    if (!(g.c() < ze && ze < g.d())) throw ModelError("abi: initial zeta must lie strictly inside (c, d)");
}

/// gamma1 = a1/(2Z) g1'((P1+Z)/h) - a2/(2Z) g2'((P1-Z)/h),
/// gamma2 = a1/2 g1'((P1+Z)/h) + a2/2 g2'((P1-Z)/h).
inline std::pair<double, double> gamma_coeffs(double h, double P1, const ABIGateConfig& g, const ABIConstants& c) {
  if (!(h > 0.0)) throw ModelError("gamma_coeffs: h must be positive");
  const double z = c.Z();
  const double g1 = g.g1.g1(P1 / h + z / h);
  const double g2 = g.g2.g1(P1 / h - z / h);
  return {g.alpha1 / (2.0 * z) * g1 - g.alpha2 / (2.0 * z) * g2, 0.5 * g.alpha1 * g1 + 0.5 * g.alpha2 * g2};
}

/// Stable step for the coupled Riemann-invariant update on grid spacing dy.
inline double abi_stable_dt(double dy, double eps, const ABIGateConfig& g, const ABIConstants& c, double w_max,
                            double cfl = 0.45) {
  const double z = c.Z();
  const double s1 = z + std::abs(g.alpha1) * g.g1.max_abs_g2(g.a(), g.b()) * w_max;
  const double s2 = z + std::abs(g.alpha2) * g.g2.max_abs_g2(g.c(), g.d()) * w_max;
  return max_stable_dt(dy, eps, std::max(s1, s2), 0.0, cfl);
}

/// One explicit step of
///   theta_t - Z theta_y = alpha1 (g1'(theta) w)_y + eps theta_yy,
///   zeta_t  + Z zeta_y  = alpha2 (g2'(zeta) w)_y  + eps zeta_yy,
/// using the long-wave kernel with linear flux -Z theta (+Z zeta) and no
/// source. `w_faces` is |u|^2 at the y-grid faces. The Eulerian anchor moves
/// with the mass velocity v + gamma1 w + eps tau_y at node 0.
inline ABILagrangeState step_coupled(const ABILagrangeState& s, const std::vector<double>& w_faces,
                                     const ABIGateConfig& g, double eps, double dt, double cfl = 0.45,
                                     long step_index = -1) {
  if (!(dt > 0.0)) throw ModelError("step_coupled: dt must be positive");
  const Grid1D& grid = s.grid;
  const double dy = grid.dx();
  const double z = s.consts.Z();
  if (eps > 0.0 && dt > dy * dy / (2.0 * eps) * (1.0 + 1e-12))
    throw ModelError("step_coupled: dt exceeds the diffusive limit dy^2/(2 eps)");

  const auto& g1 = g.g1;
  const auto& g2 = g.g2;
  const double a1 = g.alpha1, a2 = g.alpha2;
  ABILagrangeState out = s;
  const double s_theta = viscous_update(
      grid, s.f.theta, w_faces, dt, eps, [&](double v, double w) { return -z * v - a1 * g1.g1(v) * w; },
      [&](double v, double w) { return std::abs(-z - a1 * g1.g2(v) * w); }, [](double) { return 0.0; },
      out.f.theta);
  const double s_zeta = viscous_update(
      grid, s.f.zeta, w_faces, dt, eps, [&](double v, double w) { return z * v - a2 * g2.g1(v) * w; },
      [&](double v, double w) { return std::abs(z - a2 * g2.g2(v) * w); }, [](double) { return 0.0; },
      out.f.zeta);
  const double smax = std::max(s_theta, s_zeta);
  if (dt > cfl * dy / smax * (1.0 + 1e-12))
    throw ModelError("step_coupled: dt exceeds the CFL limit with speed Z");

  const double tol = 1e-10;
  for (std::size_t i = 0; i < out.f.theta.size(); ++i) {
    const double th = out.f.theta[i], ze = out.f.zeta[i];
    if (th < g.a() - tol || th > g.b() + tol) throw SolverAbort("step_coupled: theta left [a, b]", step_index);
    if (ze < g.c() - tol || ze > g.d() + tol) throw SolverAbort("step_coupled: zeta left [c, d]", step_index);
    if (th - ze > 2.0 * z + tol) throw SolverAbort("step_coupled: theta - zeta > 2Z (h < 1)", step_index);
    if (!(th - ze > 0.0)) throw SolverAbort("step_coupled: theta - zeta <= 0", step_index);
  }

  // Mass velocity at node 0 from the state at the start of the step.
  const std::size_t n = s.f.theta.size();
  const double th0 = s.f.theta[0], ze0 = s.f.zeta[0];
  const double w0 = 0.5 * (w_faces[0] + w_faces[1]);
  const double gam1 = (a1 * g1.g1(th0) - a2 * g2.g1(ze0)) / (2.0 * z);
  const std::size_t im = grid.periodic() ? n - 1 : 0;
  const double tau_y = (tau_of(s.f.theta[1], s.f.zeta[1], z) - tau_of(s.f.theta[im], s.f.zeta[im], z)) /
                       ((grid.periodic() ? 2.0 : 1.0) * dy);
  out.x_anchor = s.x_anchor + dt * (0.5 * (th0 + ze0) + gam1 * w0 + eps * tau_y);
  out.t = s.t + dt;
  return out;
}

/// The constant matrix M of q_t + M q_y = 0 for
/// q = (D2~, D3~, B2~, B3~, P2~, P3~), read off the Lagrangian equations:
///   D2~: ( B3~ - D1 P2~)_y     D3~: (-B2~ - D1 P3~)_y
///   B2~: (-D3~ - B1 P2~)_y     B3~: ( D2~ - B1 P3~)_y
///   P2~: (-D1 D2~ - B1 B2~)_y  P3~: (-D1 D3~ - B1 B3~)_y
inline Eigen::Matrix<double, 6, 6> passive_matrix(const ABIConstants& c) {
  Eigen::Matrix<double, 6, 6> m = Eigen::Matrix<double, 6, 6>::Zero();
  m(kD2, kB3) = 1.0;
  m(kD2, kP2) = -c.D1;
  m(kD3, kB2) = -1.0;
  m(kD3, kP3) = -c.D1;
  m(kB2, kD3) = -1.0;
  m(kB2, kP2) = -c.B1;
  m(kB3, kD2) = 1.0;
  m(kB3, kP3) = -c.B1;
  m(kP2, kD2) = -c.D1;
  m(kP2, kB2) = -c.B1;
  m(kP3, kD3) = -c.D1;
  m(kP3, kB3) = -c.B1;
  return m;
}

/// Eigendecomposition M = R diag(lambda) R^-1 with a tripwire on complex
/// eigenvalues (which would mean an entry of M was mistyped).
struct PassiveSpectrum {
  Eigen::Matrix<double, 6, 6> m;
  Eigen::Matrix<std::complex<double>, 6, 1> eigenvalues;
  Eigen::Matrix<std::complex<double>, 6, 6> r, r_inv;
};

inline PassiveSpectrum passive_spectrum(const ABIConstants& c) {
  PassiveSpectrum s;
  s.m = passive_matrix(c);
  Eigen::EigenSolver<Eigen::Matrix<double, 6, 6>> es(s.m);
  if (es.info() != Eigen::Success) throw ModelError("passive_spectrum: eigendecomposition failed");
  s.eigenvalues = es.eigenvalues();
  for (int i = 0; i < 6; ++i)
    if (std::abs(s.eigenvalues(i).imag()) > 1e-10)
      throw ModelError("passive_spectrum: complex eigenvalue of M; the system would not be hyperbolic");
  s.r = es.eigenvectors();
  s.r_inv = s.r.inverse();
  return s;
}

inline std::string passive_matrix_report(const ABIConstants& c) {
  const auto s = passive_spectrum(c);
  std::ostringstream os;
  os.precision(17);
  os << "# q = (D2~, D3~, B2~, B3~, P2~, P3~), B1=" << c.B1 << " D1=" << c.D1 << " Z=" << c.Z() << "\n";
  os << "M\n" << s.m << "\neigenvalues\n";
  for (int i = 0; i < 6; ++i) os << s.eigenvalues(i).real() << (i < 5 ? " " : "\n");
  return os.str();
}

enum class PassivePath { spectral, upwind };

/// Advances q_t + M q_y = 0 by dt. The spectral path (periodic grids) applies
/// R exp(-i k Lambda dt) R^-1 per Fourier mode; the upwind path applies
/// first-order upwinding to each characteristic variable.
inline ABILagrangeState step_passive(const ABILagrangeState& s, double dt, PassivePath path = PassivePath::spectral) {
  const auto spec = passive_spectrum(s.consts);
  const Grid1D& g = s.grid;
  const std::size_t n = g.size();
  ABILagrangeState out = s;
  out.t = s.t + dt;
  using C = std::complex<double>;
  if (path == PassivePath::spectral) {
    if (!g.periodic()) throw ModelError("step_passive: the spectral path needs a periodic grid");
    FftPlan plan(n);
    std::array<std::vector<C>, 6> hat;
    for (int k = 0; k < 6; ++k) {
      auto buf = plan.buffer();
      for (std::size_t j = 0; j < n; ++j) buf[j] = s.f.tilde[k][j];
      plan.forward();
      hat[k].assign(buf.begin(), buf.end());
    }
    for (std::size_t mIdx = 0; mIdx < n; ++mIdx) {
      const double kappa = 2.0 * M_PI * static_cast<double>(signed_mode(mIdx, n)) / g.length();
      Eigen::Matrix<C, 6, 1> q;
      for (int k = 0; k < 6; ++k) q(k) = hat[k][mIdx];
      Eigen::Matrix<C, 6, 1> r = spec.r_inv * q;
      for (int k = 0; k < 6; ++k) r(k) *= std::exp(C(0.0, -kappa * spec.eigenvalues(k).real() * dt));
      q = spec.r * r;
      for (int k = 0; k < 6; ++k) hat[k][mIdx] = q(k);
    }
    for (int k = 0; k < 6; ++k) {
      auto buf = plan.buffer();
      std::copy(hat[k].begin(), hat[k].end(), buf.begin());
      plan.backward();
      for (std::size_t j = 0; j < n; ++j) out.f.tilde[k][j] = buf[j].real() / static_cast<double>(n);
    }
    return out;
  }
  double smax = 0.0;
  for (int k = 0; k < 6; ++k) smax = std::max(smax, std::abs(spec.eigenvalues(k).real()));
  if (dt * smax > g.dx() * (1.0 + 1e-12)) throw ModelError("step_passive: upwind path needs dt <= dy / max|lambda|");
  const double lam = dt / g.dx();
  std::array<std::vector<C>, 6> r;
  for (int k = 0; k < 6; ++k) r[k].assign(n, C(0.0, 0.0));
  for (std::size_t j = 0; j < n; ++j) {
    Eigen::Matrix<C, 6, 1> q;
    for (int k = 0; k < 6; ++k) q(k) = s.f.tilde[k][j];
    const Eigen::Matrix<C, 6, 1> rj = spec.r_inv * q;
    for (int k = 0; k < 6; ++k) r[k][j] = rj(k);
  }
  auto at = [&](const std::vector<C>& f, long i) {
    const long nn = static_cast<long>(n);
    if (g.periodic()) return f[static_cast<std::size_t>(((i % nn) + nn) % nn)];
    return f[static_cast<std::size_t>(std::clamp(i, 0L, nn - 1))];
  };
  std::array<std::vector<C>, 6> rn = r;
  for (int k = 0; k < 6; ++k) {
    const double c = spec.eigenvalues(k).real();
    if (std::abs(c) < 1e-14) continue;
    for (long j = 0; j < static_cast<long>(n); ++j) {
      const C ucur = r[k][static_cast<std::size_t>(j)];
      rn[k][static_cast<std::size_t>(j)] =
          c > 0 ? ucur - lam * c * (ucur - at(r[k], j - 1)) : ucur - lam * c * (at(r[k], j + 1) - ucur);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    Eigen::Matrix<C, 6, 1> rj;
    for (int k = 0; k < 6; ++k) rj(k) = rn[k][j];
    const Eigen::Matrix<C, 6, 1> q = spec.r * rj;
    for (int k = 0; k < 6; ++k) out.f.tilde[k][j] = q(k).real();
  }
  return out;
}

/// Eulerian forcing fluxes, i.e. the terms under d/dx on the right-hand sides
/// of the forced plane-wave system.
struct ABIForcing {
  std::vector<double> h;   // gamma1 h w
  std::vector<double> P1;  // gamma1 P1 w + gamma2 w
  std::array<std::vector<double>, 6> fields;  // gamma1 (D2, D3, B2, B3, P2, P3) w
};

struct ABIEulerFrame {
  ABIEulerState state;
  ABIForcing forcing;
  std::vector<double> w;  // |u|^2 carried to the Eulerian nodes
};

/// Eulerian reconstruction of one Lagrangian state. `w_nodes` is |u|^2 at
/// the y nodes.
inline ABIEulerFrame to_euler_forced(const ABILagrangeState& s, const std::vector<double>& w_nodes,
                                     const ABIGateConfig& g) {
  LagrangeMap map;
  map.y = s.grid.nodes();
  map.x_anchor = s.x_anchor;
  ABIEulerFrame fr;
  fr.state = to_euler(s.f, map, s.consts, s.t);
  fr.w = w_nodes;
  const std::size_t n = fr.state.h.size();
  fr.forcing.h.resize(n);
  fr.forcing.P1.resize(n);
  for (auto& f : fr.forcing.fields) f.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [g1, g2] = gamma_coeffs(fr.state.h[i], fr.state.P1[i], g, s.consts);
    const double w = w_nodes[i];
    fr.forcing.h[i] = g1 * fr.state.h[i] * w;
    fr.forcing.P1[i] = g1 * fr.state.P1[i] * w + g2 * w;
    for (int k = 0; k < 6; ++k) fr.forcing.fields[k][i] = g1 * fr.state.fields[k][i] * w;
  }
  return fr;
}

/// Orientation of the forcing term in the Eulerian h-equation. `as_printed`
/// is dt h + dx P1 = dx(gamma1 h w); `mass_consistent` is
/// dt h + dx P1 = -dx(gamma1 h w), the form implied by the Riemann-invariant
/// equations.
enum class ForcingSign { mass_consistent, as_printed };

namespace detail {

// Resamples nodal data given at increasing positions xs onto `query`,
// extending periodically by `period` when it is positive.
inline std::vector<double> resample(const std::vector<double>& xs, const std::vector<double>& f, double period,
                                    const std::vector<double>& query) {
  if (period <= 0.0) return pchip_resample(xs, f, query);
  std::vector<double> xe, fe;
  xe.reserve(3 * xs.size());
  fe.reserve(3 * xs.size());
  for (int shift = -1; shift <= 1; ++shift)
    for (std::size_t i = 0; i < xs.size(); ++i) {
      xe.push_back(xs[i] + shift * period);
      fe.push_back(f[i]);
    }
  return pchip_resample(xe, fe, query);
}

}  // namespace detail

/// Discrete residual of the forced Eulerian h-equation on the fixed grid
/// `eul` (interior window [x_lo, x_hi]) from three consecutive frames
/// separated by dt: centred time difference at the middle frame plus centred
/// space differences of P1 -+ gamma1 h w. Returns the L1 norm over the window.
inline double forced_h_residual(const ABIEulerFrame& prev, const ABIEulerFrame& mid, const ABIEulerFrame& next,
                                double dt, const std::vector<double>& eul, double x_lo, double x_hi, double period,
                                ForcingSign sign = ForcingSign::mass_consistent) {
  const auto hp = detail::resample(prev.state.x, prev.state.h, period, eul);
  const auto hn = detail::resample(next.state.x, next.state.h, period, eul);
  std::vector<double> flux(mid.state.x.size());
  const double sg = sign == ForcingSign::mass_consistent ? 1.0 : -1.0;
  for (std::size_t i = 0; i < flux.size(); ++i) flux[i] = mid.state.P1[i] + sg * mid.forcing.h[i];
  const auto fm = detail::resample(mid.state.x, flux, period, eul);
  const double dx = eul[1] - eul[0];
  double acc = 0.0;
  for (std::size_t j = 1; j + 1 < eul.size(); ++j) {
    if (eul[j] < x_lo || eul[j] > x_hi) continue;
    const double r = (hn[j] - hp[j]) / (2.0 * dt) + (fm[j + 1] - fm[j - 1]) / (2.0 * dx);
    acc += std::abs(r) * dx;
  }
  return acc;
}

}  // namespace swlw
