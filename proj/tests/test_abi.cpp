#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "swlw/verification.hpp"

using namespace swlw;

namespace {

ABILagrangeState passive_state(std::size_t n, const ABIConstants& c) {
  const Grid1D g(-4.0, 4.0, n, Boundary::periodic);
  ABILagrangeState s{g, {}, c, 0.0, 0.0};
  s.f.theta.assign(n, 1.0);
  s.f.zeta.assign(n, -1.0);
  for (int k = 0; k < 6; ++k) {
    s.f.tilde[k].resize(n);
    for (std::size_t j = 0; j < n; ++j) s.f.tilde[k][j] = std::cos(0.25 * std::numbers::pi * g.x(j) + k);
  }
  return s;
}

}  // namespace

TEST(PassiveMatrix, MinimalPolynomial) {
  // M (M^2 - Z^2 I) = 0, so the spectrum is {0, +-Z}
  const ABIConstants c{0.6, 0.8};
  const auto M = passive_matrix(c);
  const auto I = Eigen::Matrix<double, 6, 6>::Identity();
  EXPECT_LT((M * (M * M - c.Z() * c.Z() * I)).cwiseAbs().maxCoeff(), 1e-13);
  const auto s = passive_spectrum(c);
  for (int i = 0; i < 6; ++i) {
    const double l = s.eigenvalues(i).real();
    EXPECT_TRUE(std::abs(l) < 1e-12 || std::abs(std::abs(l) - c.Z()) < 1e-12) << l;
  }
  EXPECT_NE(passive_matrix_report(c).find("eigenvalues"), std::string::npos);
}

TEST(PassiveMatrix, DecoupledPairsWithoutBackground) {
  // B1 = D1 = 0: D2 + B3 moves right and D2 - B3 moves left at unit speed,
  // P2 and P3 stay put
  const ABIConstants c{0.0, 0.0};
  const auto s0 = passive_state(64, c);
  const double dt = 0.75;
  const auto s1 = step_passive(s0, dt, PassivePath::spectral);
  const auto& g = s0.grid;
  auto f = [](int k, double y) { return std::cos(0.25 * std::numbers::pi * y + k); };
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double y = g.x(j);
    const double right = f(kD2, y - dt) + f(kB3, y - dt);
    const double left = f(kD2, y + dt) - f(kB3, y + dt);
    EXPECT_NEAR(s1.f.tilde[kD2][j], 0.5 * (right + left), 1e-12);
    EXPECT_NEAR(s1.f.tilde[kB3][j], 0.5 * (right - left), 1e-12);
    EXPECT_NEAR(s1.f.tilde[kP2][j], f(kP2, y), 1e-12);
    EXPECT_NEAR(s1.f.tilde[kP3][j], f(kP3, y), 1e-12);
  }
}

TEST(PassiveMatrix, UpwindApproachesSpectral) {
  const ABIConstants c{0.6, 0.8};
  std::vector<double> hs, errs;
  for (std::size_t n : {128, 256, 512}) {
    auto up = passive_state(n, c), sp = up;
    const double dt = 0.5 * up.grid.dx() / c.Z();
    const int steps = static_cast<int>(std::lround(0.5 / dt));
    for (int k = 0; k < steps; ++k) up = step_passive(up, dt, PassivePath::upwind);
    sp = step_passive(sp, steps * dt, PassivePath::spectral);
    double e = 0.0;
    for (int k = 0; k < 6; ++k) e = std::max(e, l1_distance(up.grid, up.f.tilde[k], sp.f.tilde[k]));
    hs.push_back(up.grid.dx());
    errs.push_back(e);
  }
  EXPECT_GT(fit_order(hs, errs), 0.9);
}

TEST(Transforms, EulerFromRiemannInvariantsByHand) {
  const ABIConstants c{0.6, 0.8};
  const double Z = c.Z();
  ABILagrangeFields f;
  f.theta = {0.9, 1.0, 1.1};
  f.zeta = {-0.5, -0.6, -0.4};
  for (auto& t : f.tilde) t = {1.0, 2.0, 3.0};
  const LagrangeMap map{{0.0, 0.1, 0.2}, 3.0};
  const auto e = to_euler(f, map, c);
  for (std::size_t i = 0; i < 3; ++i) {
    const double h = 2.0 * Z / (f.theta[i] - f.zeta[i]);
    EXPECT_NEAR(e.h[i], h, 1e-15);
    EXPECT_NEAR(e.P1[i] / e.h[i], 0.5 * (f.theta[i] + f.zeta[i]), 1e-15);
    EXPECT_NEAR(e.fields[kB2][i], h * f.tilde[kB2][i], 1e-15);
  }
  EXPECT_EQ(e.x[0], 3.0);
  EXPECT_NEAR(e.x[1] - e.x[0], 0.1 / (0.5 * (e.h[0] + e.h[1])), 1e-15);
}

TEST(Transforms, RoundTrip) {
  const auto setup = scenarios::abi_setup(300);
  auto s = setup.state;
  scenarios::abi_passive_data(s);
  const auto e = to_euler(s.f, LagrangeMap{s.grid.nodes(), s.x_anchor}, s.consts);
  const auto back = to_lagrange(e, s.consts);
  for (std::size_t j = 0; j < s.grid.size(); ++j) {
    EXPECT_NEAR(back.fields.theta[j], s.f.theta[j], 1e-13);
    EXPECT_NEAR(back.fields.zeta[j], s.f.zeta[j], 1e-13);
    EXPECT_NEAR(back.fields.tilde[kP3][j], s.f.tilde[kP3][j], 1e-13);
    EXPECT_NEAR(back.map.y[j], s.grid.x(j) - s.grid.x(0), 1e-12);
  }
  EXPECT_DOUBLE_EQ(back.map.x_anchor, s.x_anchor);
}

TEST(Transforms, RejectUnphysicalStates) {
  const ABIConstants c;
  ABIEulerState e;
  e.x = {0.0, 1.0};
  e.h = {1.0, 0.0};
  e.P1 = {0.0, 0.0};
  for (auto& f : e.fields) f = {0.0, 0.0};
  EXPECT_THROW(to_lagrange(e, c), ModelError);
  ABILagrangeFields f;
  f.theta = {0.0};
  f.zeta = {0.1};
  for (auto& t : f.tilde) t = {0.0};
  EXPECT_THROW(to_euler(f, LagrangeMap{{0.0}, 0.0}, c), SolverAbort);
}

TEST(Gates, OrderingIsValidated) {
  const ABIConstants c;
  EXPECT_NO_THROW(validate_gates(scenarios::abi_gates(0.5), c));
  ABIGateConfig bad = scenarios::abi_gates(0.5);
  bad.g1 = CouplingGate::bump(0.4, 1.0, 3.0);  // b = 3.4 > c + 2Z
  EXPECT_THROW(validate_gates(bad, c), ModelError);
  ABIGateConfig open = scenarios::abi_gates(0.5);
  open.g2 = CouplingGate::linear(1.0);
  EXPECT_THROW(validate_gates(open, c), ModelError);
}

TEST(Gates, InitialDataMustSitInsideTheBoxes) {
  const auto g = scenarios::abi_gates(0.5);
  ABILagrangeFields f;
  f.theta = {0.8, 0.9};
  f.zeta = {-0.7, -0.6};
  EXPECT_NO_THROW(validate_initial(f, g));
  f.theta[1] = 1.3;
  EXPECT_THROW(validate_initial(f, g), ModelError);
}

TEST(Gamma, RejectsNonPositiveH) {
  EXPECT_THROW(gamma_coeffs(0.0, 0.0, scenarios::abi_gates(0.5), ABIConstants{}), ModelError);
}

TEST(CoupledStep, UncoupledConservesInvariantMass) {
  auto setup = scenarios::abi_setup(256);
  ABIGateConfig g = scenarios::abi_gates(0.0);
  auto s = setup.state;
  const double eps = s.grid.dx();
  const double dt = abi_stable_dt(s.grid.dx(), eps, g, s.consts, 1.0);
  const std::vector<double> w(s.grid.face_count(), 0.0);
  const double m_theta = integrate_nodes(s.grid, s.f.theta);
  const double m_zeta = integrate_nodes(s.grid, s.f.zeta);
  for (int k = 0; k < 100; ++k) s = step_coupled(s, w, g, eps, dt);
  EXPECT_NEAR(integrate_nodes(s.grid, s.f.theta), m_theta, 1e-12);
  EXPECT_NEAR(integrate_nodes(s.grid, s.f.zeta), m_zeta, 1e-12);
  EXPECT_NEAR(s.t, 100 * dt, 1e-13);
}

TEST(CoupledStep, RejectsUnstableSteps) {
  auto setup = scenarios::abi_setup(128);
  const auto g = scenarios::abi_gates(0.5);
  const std::vector<double> w(setup.state.grid.face_count(), 0.0);
  EXPECT_THROW(step_coupled(setup.state, w, g, 0.01, 1.0), ModelError);
  EXPECT_THROW(step_coupled(setup.state, w, g, 0.01, -1.0), ModelError);
}
