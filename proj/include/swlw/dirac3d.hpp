#pragma once

// Massless Dirac equation in 1+3 dimensions on a periodic cube,
//
//   u_t - alpha_1 u_x - alpha_2 u_y - alpha_3 u_z = -i B u,
//
// advanced by Strang splitting: pointwise rotation exp(-i B dt/2), exact
// free propagation per Fourier mode, pointwise rotation.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "swlw/errors.hpp"
#include "swlw/fft.hpp"

namespace swlw {

using Mat4c = Eigen::Matrix<std::complex<double>, 4, 4>;
using Vec4c = Eigen::Matrix<std::complex<double>, 4, 1>;

struct DiracMatrices3D {
  std::array<Mat4c, 3> alpha;
  Mat4c b;
};

/// Standard Dirac representation alpha_i = [[0, s_i], [s_i, 0]] with Pauli
/// blocks s_i, and b = i alpha_1 alpha_2 alpha_3.
inline DiracMatrices3D build_matrices3d() {
  using C = std::complex<double>;
  const C I(0.0, 1.0);
  std::array<Eigen::Matrix2cd, 3> s;
  s[0] << 0, 1, 1, 0;
  s[1] << 0, -I, I, 0;
  s[2] << 1, 0, 0, -1;
  DiracMatrices3D m;
  for (int i = 0; i < 3; ++i) {
    m.alpha[i].setZero();
    m.alpha[i].block<2, 2>(0, 2) = s[i];
    m.alpha[i].block<2, 2>(2, 0) = s[i];
  }
  m.b = I * m.alpha[0] * m.alpha[1] * m.alpha[2];
  return m;
}

/// Names of every failed identity; empty when all hold to tol.
inline std::vector<std::string> check_matrices3d(const DiracMatrices3D& m, double tol = 1e-12) {
  std::vector<std::string> bad;
  const Mat4c id = Mat4c::Identity();
  auto norm = [](const Mat4c& a) { return a.cwiseAbs().maxCoeff(); };
  for (int i = 0; i < 3; ++i) {
    const std::string a = "alpha" + std::to_string(i + 1);
    if (norm(m.alpha[i] - m.alpha[i].adjoint()) > tol) bad.push_back(a + " not Hermitian");
    if (norm(m.alpha[i] * m.alpha[i] - id) > tol) bad.push_back(a + "^2 != I");
    for (int j = i + 1; j < 3; ++j)
      if (norm(m.alpha[i] * m.alpha[j] + m.alpha[j] * m.alpha[i]) > tol)
        bad.push_back(a + " and alpha" + std::to_string(j + 1) + " do not anticommute");
    if (norm(m.b * m.alpha[i] - m.alpha[i] * m.b) > tol) bad.push_back("b does not commute with " + a);
  }
  const std::complex<double> I(0.0, 1.0);
  if (norm(m.b - I * m.alpha[0] * m.alpha[1] * m.alpha[2]) > tol) bad.push_back("b != i alpha1 alpha2 alpha3");
  if (norm(m.b - m.b.adjoint()) > tol) bad.push_back("b not Hermitian");
  return bad;
}

/// Periodic cube [origin, origin + length)^3 with n nodes per axis.
struct Grid3D {
  std::size_t n = 8;
  double length = 2.0 * std::numbers::pi;
  double origin = 0.0;

  double dx() const { return length / static_cast<double>(n); }
  std::size_t size() const { return n * n * n; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * n + j) * n + k; }
  double coord(std::size_t i) const { return origin + static_cast<double>(i) * dx(); }
};

struct Spinor4Field3D {
  Grid3D grid;
  std::vector<Vec4c> values;

  explicit Spinor4Field3D(const Grid3D& g) : grid(g), values(g.size(), Vec4c::Zero()) {}

  template <class F>
  static Spinor4Field3D sample(const Grid3D& g, F&& f) {
    Spinor4Field3D u(g);
    for (std::size_t i = 0; i < g.n; ++i)
      for (std::size_t j = 0; j < g.n; ++j)
        for (std::size_t k = 0; k < g.n; ++k) u.values[g.index(i, j, k)] = f(g.coord(i), g.coord(j), g.coord(k));
    return u;
  }

  bool finite() const {
    for (const auto& v : values)
      if (!v.allFinite()) return false;
    return true;
  }
};

/// sum |u|^2 dx^3
inline double charge3d(const Spinor4Field3D& u) {
  double s = 0.0;
  for (const auto& v : u.values) s += v.squaredNorm();
  const double dx = u.grid.dx();
  return s * dx * dx * dx;
}

/// B = lambda |u|^{p-1} I
struct GlasseyPotential {
  double p = 3.0;
  double lambda = 1.0;
};

/// B = lambda (|u|^2 I - (u^dag b u) b) + V(t, x, y, z) I
struct Thirring3DPotential {
  double lambda = 1.0;
  std::function<double(double, double, double, double)> V;
};

using PotentialChoice3D = std::variant<GlasseyPotential, Thirring3DPotential>;

/// Node-wise quadratic observables |u|^2 and u^dag b u.
struct Observables3D {
  std::vector<double> density;
  std::vector<double> chirality;
};

inline Observables3D observables3d(const Spinor4Field3D& u, const DiracMatrices3D& m) {
  Observables3D o;
  o.density.resize(u.values.size());
  o.chirality.resize(u.values.size());
  for (std::size_t q = 0; q < u.values.size(); ++q) {
    const Vec4c& v = u.values[q];
    o.density[q] = v.squaredNorm();
    o.chirality[q] = v.dot(m.b * v).real();
  }
  return o;
}

/// u^dag alpha_i u at every node.
inline std::vector<double> current3d(const Spinor4Field3D& u, const DiracMatrices3D& m, int axis) {
  std::vector<double> c(u.values.size());
  for (std::size_t q = 0; q < c.size(); ++q) c[q] = u.values[q].dot(m.alpha[axis] * u.values[q]).real();
  return c;
}

class Dirac3DSolver {
 public:
  Dirac3DSolver(Spinor4Field3D u0, DiracMatrices3D m, PotentialChoice3D b, double dt)
      : u_(std::move(u0)), m_(std::move(m)), b_(std::move(b)), dt_(dt), plan_(FftPlan::cube(u_.grid.n)) {
    const double dx = u_.grid.dx();
    if (u_.grid.n > 32) throw ModelError("Dirac3DSolver: n <= 32 is required");
    if (!(dt > 0.0)) throw ModelError("Dirac3DSolver: dt must be positive");
    if (dt > dx / std::sqrt(3.0) * (1.0 + 1e-12))
      throw ModelError("Dirac3DSolver: CFL violation, dt > dx/sqrt(3)");
    if (!u_.finite()) throw ModelError("Dirac3DSolver: non-finite initial data");
    if (const auto bad = check_matrices3d(m_); !bad.empty()) throw ModelError("Dirac3DSolver: " + bad.front());
    if (const auto* g = std::get_if<GlasseyPotential>(&b_); g && !(g->p > 1.0))
      throw ModelError("Dirac3DSolver: Glassey exponent p must exceed 1");
    build_propagators();
  }

  void step() {
    rotate(t_, 0.5 * dt_);
    free_step();
    rotate(t_ + dt_, 0.5 * dt_);
    t_ += dt_;
    ++steps_;
  }

  const Spinor4Field3D& field() const { return u_; }
  const DiracMatrices3D& matrices() const { return m_; }
  double time() const { return t_; }
  double dt() const { return dt_; }
  long steps_taken() const { return steps_; }

 private:
  void build_propagators() {
    const std::size_t n = u_.grid.n;
    const double kscale = 2.0 * std::numbers::pi / u_.grid.length;
    const std::complex<double> I(0.0, 1.0);
    prop_.resize(u_.grid.size());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          const double kx = kscale * static_cast<double>(signed_mode(i, n));
          const double ky = kscale * static_cast<double>(signed_mode(j, n));
          const double kz = kscale * static_cast<double>(signed_mode(k, n));
          const double kn = std::sqrt(kx * kx + ky * ky + kz * kz);
          const Mat4c K = kx * m_.alpha[0] + ky * m_.alpha[1] + kz * m_.alpha[2];
          // K^2 = |k|^2 I, so exp(i dt K) = cos(|k| dt) I + i sin(|k| dt) K/|k|.
          Mat4c P = std::cos(kn * dt_) * Mat4c::Identity();
          if (kn > 0.0) P += I * (std::sin(kn * dt_) / kn) * K;
          prop_[u_.grid.index(i, j, k)] = P;
        }
  }

  void free_step() {
    const std::size_t N = u_.grid.size();
    auto buf = plan_.buffer();
    std::vector<Vec4c> hat(N);
    for (int c = 0; c < 4; ++c) {
      for (std::size_t q = 0; q < N; ++q) buf[q] = u_.values[q](c);
      plan_.forward();
      for (std::size_t q = 0; q < N; ++q) hat[q](c) = buf[q];
    }
    for (std::size_t q = 0; q < N; ++q) hat[q] = prop_[q] * hat[q];
    const double inv = 1.0 / static_cast<double>(N);
    for (int c = 0; c < 4; ++c) {
      for (std::size_t q = 0; q < N; ++q) buf[q] = hat[q](c);
      plan_.backward();
      for (std::size_t q = 0; q < N; ++q) u_.values[q](c) = buf[q] * inv;
    }
  }

  // exp(-i B tau) in closed form. Both potentials have the shape
  // B = a I - c b with b^2 = I, and a, c are invariant under the rotation.
  void rotate(double t, double tau) {
    const std::complex<double> I(0.0, 1.0);
    const Grid3D& g = u_.grid;
    const auto* th = std::get_if<Thirring3DPotential>(&b_);
    const auto* gl = std::get_if<GlasseyPotential>(&b_);
    for (std::size_t i = 0; i < g.n; ++i)
      for (std::size_t j = 0; j < g.n; ++j)
        for (std::size_t k = 0; k < g.n; ++k) {
          Vec4c& v = u_.values[g.index(i, j, k)];
          const double rho = v.squaredNorm();
          if (gl) {
            const double a = gl->lambda * std::pow(std::sqrt(rho), gl->p - 1.0);
            v *= std::exp(-I * a * tau);
            continue;
          }
          const double V = th->V ? th->V(t, g.coord(i), g.coord(j), g.coord(k)) : 0.0;
          if (!std::isfinite(V)) throw SolverAbort("Dirac3DSolver: non-finite potential sampled", steps_);
          const double beta = v.dot(m_.b * v).real();
          const double a = th->lambda * rho + V;
          const double c = th->lambda * beta;
          const Vec4c bv = m_.b * v;
          v = std::exp(-I * a * tau) * (std::cos(c * tau) * v + I * std::sin(c * tau) * bv);
        }
  }

  Spinor4Field3D u_;
  DiracMatrices3D m_;
  PotentialChoice3D b_;
  double dt_;
  double t_ = 0.0;
  long steps_ = 0;
  FftPlan plan_;
  std::vector<Mat4c> prop_;
};

struct Dirac3DTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> density;
  std::vector<std::vector<double>> chirality;
  std::vector<double> charge;
  /// max over steps of |Q_{k+1} - Q_k| / Q_0
  double max_step_drift = 0.0;
  Spinor4Field3D final_field;
};

/// Runs to T with dt adjusted downward to divide T. Observables are stored
/// at every step so the trajectory can be differenced in time.
inline Dirac3DTrajectory evolve_spectral(const Spinor4Field3D& u0, const DiracMatrices3D& m,
                                         const PotentialChoice3D& b, double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw ModelError("evolve_spectral: T and dt must be positive");
  const long steps = static_cast<long>(std::ceil(T / dt - 1e-12));
  Dirac3DSolver s(u0, m, b, T / static_cast<double>(steps));
  Dirac3DTrajectory tr{{}, {}, {}, {}, 0.0, u0};
  auto record = [&] {
    const auto o = observables3d(s.field(), m);
    tr.times.push_back(s.time());
    tr.density.push_back(o.density);
    tr.chirality.push_back(o.chirality);
    tr.charge.push_back(charge3d(s.field()));
  };
  record();
  const double q0 = tr.charge.front();
  for (long k = 0; k < steps; ++k) {
    s.step();
    record();
    const double d = std::abs(tr.charge.back() - tr.charge[tr.charge.size() - 2]);
    tr.max_step_drift = std::max(tr.max_step_drift, q0 > 0.0 ? d / q0 : d);
  }
  tr.final_field = s.field();
  return tr;
}

/// Max-norm of the discrete 3-D d'Alembertian over interior nodes and
/// interior time levels. Levels are n^3 arrays in Grid3D::index order.
inline double wave_residual3d(const std::vector<std::vector<double>>& levels, std::size_t n, double dt, double dx) {
  if (levels.size() < 3) throw ModelError("wave_residual3d: at least 3 time levels are required");
  if (n < 3) throw ModelError("wave_residual3d: at least 3 nodes per axis are required");
  for (const auto& l : levels)
    if (l.size() != n * n * n) throw ModelError("wave_residual3d: level size must be n^3");
  const double idt2 = 1.0 / (dt * dt);
  const double idx2 = 1.0 / (dx * dx);
  auto at = [n](std::size_t i, std::size_t j, std::size_t k) { return (i * n + j) * n + k; };
  double r = 0.0;
  for (std::size_t l = 1; l + 1 < levels.size(); ++l) {
    const auto& wm = levels[l - 1];
    const auto& w0 = levels[l];
    const auto& wp = levels[l + 1];
    for (std::size_t i = 1; i + 1 < n; ++i)
      for (std::size_t j = 1; j + 1 < n; ++j)
        for (std::size_t k = 1; k + 1 < n; ++k) {
          const std::size_t q = at(i, j, k);
          const double c = w0[q];
          const double wtt = (wp[q] - 2.0 * c + wm[q]) * idt2;
          const double lap = (w0[at(i + 1, j, k)] + w0[at(i - 1, j, k)] + w0[at(i, j + 1, k)] +
                              w0[at(i, j - 1, k)] + w0[at(i, j, k + 1)] + w0[at(i, j, k - 1)] - 6.0 * c) *
                             idx2;
          r = std::max(r, std::abs(wtt - lap));
        }
  }
  return r;
}

/// Max residuals of the charge balance rho_t = sum_i (u^dag alpha_i u)_{x_i}
/// and of the current laws (u^dag alpha_i u)_t = rho_{x_i} between two
/// consecutive states, central differences in space, midpoint in time.
struct ContinuityResidual3D {
  double charge = 0.0;
  std::array<double, 3> current{};
};

inline ContinuityResidual3D continuity_residual3d(const Spinor4Field3D& a, const Spinor4Field3D& b,
                                                  const DiracMatrices3D& m, double dt) {
  const Grid3D& g = a.grid;
  const std::size_t n = g.n;
  const double dx = g.dx();
  const auto oa = observables3d(a, m);
  const auto ob = observables3d(b, m);
  std::array<std::vector<double>, 3> ja, jb;
  for (int ax = 0; ax < 3; ++ax) {
    ja[ax] = current3d(a, m, ax);
    jb[ax] = current3d(b, m, ax);
  }
  auto shifted = [&](std::size_t i, std::size_t j, std::size_t k, int ax, int s) {
    std::array<std::size_t, 3> p{i, j, k};
    p[ax] = (p[ax] + n + s) % n;
    return g.index(p[0], p[1], p[2]);
  };
  auto dmid = [&](const std::vector<double>& fa, const std::vector<double>& fb, std::size_t i, std::size_t j,
                  std::size_t k, int ax) {
    const double up = 0.5 * (fa[shifted(i, j, k, ax, 1)] + fb[shifted(i, j, k, ax, 1)]);
    const double dn = 0.5 * (fa[shifted(i, j, k, ax, -1)] + fb[shifted(i, j, k, ax, -1)]);
    return (up - dn) / (2.0 * dx);
  };
  ContinuityResidual3D r;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const std::size_t q = g.index(i, j, k);
        double div = 0.0;
        for (int ax = 0; ax < 3; ++ax) div += dmid(ja[ax], jb[ax], i, j, k, ax);
        r.charge = std::max(r.charge, std::abs((ob.density[q] - oa.density[q]) / dt - div));
        for (int ax = 0; ax < 3; ++ax) {
          const double lhs = (jb[ax][q] - ja[ax][q]) / dt;
          r.current[ax] = std::max(r.current[ax], std::abs(lhs - dmid(oa.density, ob.density, i, j, k, ax)));
        }
      }
  return r;
}

}  // namespace swlw
