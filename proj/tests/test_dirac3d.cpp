#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

#include "swlw/convergence.hpp"
#include "swlw/dirac3d.hpp"

using namespace swlw;

namespace {

const std::complex<double> I(0.0, 1.0);

PotentialChoice3D free_potential() { return Thirring3DPotential{0.0, {}}; }

Vec4c unit(Vec4c v) { return v / v.norm(); }

// +1 eigenvectors of alpha_1 and alpha_2 in the Pauli-block representation
Vec4c phi1() { return unit(Vec4c(1.0, 0.0, 0.0, 1.0)); }
Vec4c phi2() { return unit(Vec4c(1.0, 0.0, 0.0, I)); }

double max_diff(const Spinor4Field3D& a, const Spinor4Field3D& b) {
  double m = 0.0;
  for (std::size_t q = 0; q < a.values.size(); ++q) m = std::max(m, (a.values[q] - b.values[q]).cwiseAbs().maxCoeff());
  return m;
}

}  // namespace

TEST(Matrices3D, Identities) {
  const auto m = build_matrices3d();
  EXPECT_TRUE(check_matrices3d(m).empty());
  EXPECT_LT((m.b * m.b - Mat4c::Identity()).cwiseAbs().maxCoeff(), 1e-15);
  auto broken = m;
  broken.alpha[1](0, 0) = 0.5;
  EXPECT_FALSE(check_matrices3d(broken).empty());
}

TEST(Matrices3D, EigenvectorsUsedBelow) {
  const auto m = build_matrices3d();
  EXPECT_LT((m.alpha[0] * phi1() - phi1()).norm(), 1e-15);
  EXPECT_LT((m.alpha[1] * phi2() - phi2()).norm(), 1e-15);
}

// One free step on a single Fourier mode is exp(i dt k.alpha) applied to the amplitude.
TEST(Dirac3DSolver, FreePropagatorMatchesMatrixExponential) {
  const auto m = build_matrices3d();
  const Grid3D g{8};
  const Vec4c a = unit(Vec4c(0.3, 1.0 * I, -0.5, 0.2 + 0.1 * I));
  for (const auto& k : std::vector<std::array<int, 3>>{{1, 0, 0}, {1, -2, 3}, {0, 0, -1}, {2, 2, 2}}) {
    const auto u0 = Spinor4Field3D::sample(
        g, [&](double x, double y, double z) { return Vec4c(a * std::exp(I * (k[0] * x + k[1] * y + k[2] * z))); });
    const double dt = 0.3 * g.dx();
    Dirac3DSolver s(u0, m, free_potential(), dt);
    s.step();
    const Mat4c K = double(k[0]) * m.alpha[0] + double(k[1]) * m.alpha[1] + double(k[2]) * m.alpha[2];
    const Mat4c E = (I * dt * K).exp();
    const auto expect = Spinor4Field3D::sample(
        g, [&](double x, double y, double z) { return Vec4c(E * a * std::exp(I * (k[0] * x + k[1] * y + k[2] * z))); });
    EXPECT_LT(max_diff(s.field(), expect), 1e-12);
  }
}

TEST(Dirac3DSolver, ThirringRotationMatchesMatrixExponential) {
  const auto m = build_matrices3d();
  const Grid3D g{4};
  const Vec4c a(0.5, 0.2 * I, -0.4, 0.3 + 0.6 * I);
  const auto u0 = Spinor4Field3D::sample(g, [&](double, double, double) { return a; });
  const double lambda = 0.7, V = 0.25, dt = 0.2;
  Dirac3DSolver s(u0, m, Thirring3DPotential{lambda, [V](double, double, double, double) { return V; }}, dt);
  s.step();
  const double rho = a.squaredNorm();
  const double beta = a.dot(m.b * a).real();
  const Mat4c B = (lambda * rho + V) * Mat4c::Identity() - lambda * beta * m.b;
  const Vec4c expect = (-I * dt * B).exp() * a;
  for (const auto& v : s.field().values) EXPECT_LT((v - expect).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Dirac3DSolver, GlasseyRotationIsPhase) {
  const auto m = build_matrices3d();
  const Grid3D g{4};
  const Vec4c a(0.5, 0.2 * I, -0.4, 0.3);
  const auto u0 = Spinor4Field3D::sample(g, [&](double, double, double) { return a; });
  Dirac3DSolver s(u0, m, GlasseyPotential{3.0, 2.0}, 0.1);
  s.step();
  const Vec4c expect = std::exp(-I * 2.0 * a.squaredNorm() * 0.1) * a;
  EXPECT_LT((s.field().values[5] - expect).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Dirac3DSolver, RejectsBadSetups) {
  const auto m = build_matrices3d();
  const Grid3D g{8};
  const Spinor4Field3D u(g);
  EXPECT_THROW(Dirac3DSolver(u, m, free_potential(), g.dx()), ModelError);  // CFL dx/sqrt(3)
  EXPECT_THROW(Dirac3DSolver(u, m, free_potential(), 0.0), ModelError);
  EXPECT_THROW(Dirac3DSolver(u, m, GlasseyPotential{1.0, 1.0}, 0.1), ModelError);
  EXPECT_THROW(Dirac3DSolver(Spinor4Field3D(Grid3D{64}), m, free_potential(), 0.01), ModelError);
  auto nan = u;
  nan.values[3](2) = std::nan("");
  EXPECT_THROW(Dirac3DSolver(nan, m, free_potential(), 0.1), ModelError);
}

TEST(Dirac3DSolver, NonFinitePotentialAborts) {
  const auto m = build_matrices3d();
  const Grid3D g{4};
  const auto u = Spinor4Field3D::sample(g, [](double, double, double) { return Vec4c(1.0, 0.0, 0.0, 0.0); });
  Dirac3DSolver s(u, m, Thirring3DPotential{1.0, [](double, double, double, double) { return std::nan(""); }}, 0.1);
  EXPECT_THROW(s.step(), SolverAbort);
}

TEST(Dirac3DSolver, UnitaryOverManySteps) {
  const auto m = build_matrices3d();
  const Grid3D g{8};
  const auto u0 = Spinor4Field3D::sample(g, [](double x, double y, double z) {
    return Vec4c(0.6 + 0.2 * std::cos(x), 0.3 * std::exp(I * std::sin(y)), 0.2 * std::sin(y + z), 0.25);
  });
  const auto tr = evolve_spectral(u0, m, GlasseyPotential{3.0, 1.0}, 2.0, 0.5 * g.dx());
  EXPECT_LT(tr.max_step_drift, 1e-13);
  EXPECT_NEAR(tr.charge.back(), charge3d(u0), 1e-12 * charge3d(u0));
}

TEST(WaveResidual3D, PolynomialExamples) {
  const std::size_t n = 6;
  const double dx = 0.1, dt = 0.05;
  std::vector<std::vector<double>> lin(4, std::vector<double>(n * n * n)), sq = lin;
  for (std::size_t l = 0; l < 4; ++l)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) {
          const double t = l * dt;
          lin[l][(i * n + j) * n + k] = i * dx + j * dx + k * dx + t;
          sq[l][(i * n + j) * n + k] = t * t;
        }
  EXPECT_NEAR(wave_residual3d(lin, n, dt, dx), 0.0, 1e-10);
  EXPECT_NEAR(wave_residual3d(sq, n, dt, dx), 2.0, 1e-10);
  EXPECT_THROW(wave_residual3d({lin[0], lin[1]}, n, dt, dx), ModelError);
}

// u = phi1 e^{i(x+t)} + phi2 e^{i(y+t)} solves the free equation exactly, and
// box |u|^2 = 4 Re(phi1^dag phi2 e^{i(y-x)}) does not vanish.
TEST(WaveProperty3D, TwoPlaneWaveSolutionIsNotAWave) {
  const auto m = build_matrices3d();
  const std::complex<double> overlap = phi1().dot(phi2());
  ASSERT_GT(std::abs(overlap), 0.5);
  auto exact = [&](const Grid3D& g, double t) {
    return Spinor4Field3D::sample(g, [&](double x, double y, double) {
      return Vec4c(phi1() * std::exp(I * (x + t)) + phi2() * std::exp(I * (y + t)));
    });
  };
  for (std::size_t n : {16, 32}) {
    const Grid3D g{n};
    const auto tr = evolve_spectral(exact(g, 0.0), m, free_potential(), 0.5, 0.5 * g.dx());
    const double T = tr.times.back();
    EXPECT_LT(max_diff(tr.final_field, exact(g, T)), 1e-12);
    // the residual tends to max |4 Re(overlap e^{i(y-x)})| = 4 |overlap|
    const double r = wave_residual3d(tr.density, n, tr.times[1] - tr.times[0], g.dx());
    EXPECT_NEAR(r, 4.0 * std::abs(overlap), 0.05 * 4.0 * std::abs(overlap));
  }
}

// With data varying in x only the cross terms vanish and the residual
// converges under refinement.
TEST(WaveProperty3D, OneDimensionalDataConverges) {
  const auto m = build_matrices3d();
  for (int kind = 0; kind < 2; ++kind) {
    std::vector<double> hs, rd, rc;
    for (std::size_t n : {8, 16, 32}) {
      const Grid3D g{n};
      const auto u0 = Spinor4Field3D::sample(g, [](double x, double, double) {
        return Vec4c(0.6 + 0.2 * std::cos(x), 0.3 * std::exp(I * 0.5 * std::sin(x)), 0.2 * std::sin(x) + 0.1 * I, 0.25);
      });
      const PotentialChoice3D b =
          kind == 0 ? PotentialChoice3D(GlasseyPotential{3.0, 1.0})
                    : PotentialChoice3D(Thirring3DPotential{
                          1.0, [](double t, double x, double, double) { return 0.3 * std::cos(x) * std::cos(t); }});
      const auto tr = evolve_spectral(u0, m, b, 1.0, 0.5 * g.dx());
      const double dt = tr.times[1] - tr.times[0];
      hs.push_back(g.dx());
      rd.push_back(wave_residual3d(tr.density, n, dt, g.dx()));
      rc.push_back(wave_residual3d(tr.chirality, n, dt, g.dx()));
    }
    EXPECT_GE(fit_order(hs, rd), 1.5) << "kind " << kind;
    EXPECT_GE(fit_order(hs, rc), 1.5) << "kind " << kind;
  }
}

// The charge balance rho_t = div(u^dag alpha u) is exact; its discrete
// residual is pure truncation error.
TEST(Continuity3D, ChargeBalanceConvergesForGenericData) {
  const auto m = build_matrices3d();
  std::vector<double> hs, rs;
  for (std::size_t n : {8, 16, 32}) {
    const Grid3D g{n};
    const auto u0 = Spinor4Field3D::sample(g, [](double x, double y, double z) {
      return Vec4c(0.6 + 0.2 * std::cos(x) * std::exp(I * std::sin(y)), 0.3 * std::exp(I * std::cos(z)),
                   0.2 * std::sin(y + z), 0.25 * std::exp(I * std::cos(x - y)));
    });
    Dirac3DSolver s(u0, m, GlasseyPotential{3.0, 1.0}, 0.25 * g.dx());
    const auto a = s.field();
    s.step();
    hs.push_back(g.dx());
    rs.push_back(continuity_residual3d(a, s.field(), m, s.dt()).charge);
  }
  EXPECT_GE(fit_order(hs, rs), 1.8);
}
