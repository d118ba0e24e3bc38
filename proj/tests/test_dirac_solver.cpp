#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "swlw/convergence.hpp"
#include "swlw/dirac_solver.hpp"

using namespace swlw;

namespace {

Grid1D circle(std::size_t n) { return Grid1D(-std::numbers::pi, std::numbers::pi, n, Boundary::periodic); }

cplx a0(double x) { return (1.0 + 0.5 * std::cos(x)) * std::polar(1.0, std::sin(x)); }
cplx b0(double x) { return 0.6 * std::exp(std::cos(x - 1.0) - 1.0) * std::polar(1.0, 2.0 * x); }

SpinorField1D data(const Grid1D& g) {
  SpinorField1D u(g);
  for (std::size_t j = 0; j < g.size(); ++j) u.values[j] = Spinor(a0(g.x(j)), b0(g.x(j)));
  return u;
}

double max_diff(const SpinorField1D& a, const SpinorField1D& b) {
  double m = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, (a.values[j] - b.values[j]).cwiseAbs().maxCoeff());
  return m;
}

}  // namespace

// u1 = a0(x + t) e^{-iVt}, u2 = b0(x - t) e^{-iVt}
TEST(Characteristics, ConstantPotentialIsNodeExact) {
  const Grid1D g = circle(128);
  const double V = 0.7;
  DiracRunConfig cfg;
  cfg.potential = [V](double, double) { return V; };
  const std::size_t k = 40;
  const auto u = advance_characteristics(data(g), make_alpha(AlphaChoice::diag_pm1), cfg, k);
  const double t = k * g.dx();
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    EXPECT_LT(std::abs(u.values[j](0) - a0(x + t) * std::polar(1.0, -V * t)), 1e-13);
    EXPECT_LT(std::abs(u.values[j](1) - b0(x - t) * std::polar(1.0, -V * t)), 1e-13);
  }
}

// V = sin t: the phase is -(1 - cos t); trapezoid quadrature converges at order 2.
TEST(Characteristics, TimeDependentPhaseSecondOrder) {
  std::vector<double> hs, errs;
  for (std::size_t n : {64, 128, 256}) {
    const Grid1D g = circle(n);
    DiracRunConfig cfg;
    cfg.potential = [](double t, double) { return std::sin(t); };
    const std::size_t k = n / 2;
    const auto u = advance_characteristics(data(g), make_alpha(AlphaChoice::diag_pm1), cfg, k);
    const double t = k * g.dx();
    double e = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j)
      e = std::max(e, std::abs(u.values[j](0) - a0(g.x(j) + t) * std::polar(1.0, std::cos(t) - 1.0)));
    hs.push_back(g.dx());
    errs.push_back(e);
  }
  EXPECT_GT(fit_order(hs, errs), 1.9);
}

TEST(Characteristics, ThirringTransportsComponentModuli) {
  const Grid1D g = circle(128);
  DiracRunConfig cfg;
  cfg.lambda = 1.0;
  const std::size_t k = 77;
  const auto u = advance_characteristics(data(g), make_alpha(AlphaChoice::diag_pm1), cfg, k);
  const double t = k * g.dx();
  for (std::size_t j = 0; j < g.size(); ++j) {
    EXPECT_NEAR(std::abs(u.values[j](0)), std::abs(a0(g.x(j) + t)), 1e-13);
    EXPECT_NEAR(std::abs(u.values[j](1)), std::abs(b0(g.x(j) - t)), 1e-13);
  }
}

TEST(Characteristics, PauliAlphaMatchesClosedFormAndCharge) {
  const Grid1D g = circle(128);
  const auto alpha = make_alpha(AlphaChoice::pauli_x);
  const auto u0 = data(g);
  DiracRunConfig cfg;
  cfg.lambda = -0.8;
  cfg.potential = [](double t, double x) { return 0.3 * std::cos(x - t); };
  CharacteristicsSolver s(u0, alpha, cfg);
  const double q0 = charge(u0);
  for (int k = 0; k < 200; ++k) s.step();
  const auto u = s.field();
  EXPECT_NEAR(charge(u), q0, 1e-12 * q0);
  const auto obs = observables(u, alpha);
  for (std::size_t j = 0; j < g.size(); ++j)
    EXPECT_NEAR(obs.w_plus[j], eval_w_plus(s.initial_observables(), s.time(), g.x(j)), 1e-12);
}

TEST(Characteristics, RequiresDtEqualDx) {
  const Grid1D g = circle(64);
  DiracRunConfig cfg;
  cfg.dt = 0.5 * g.dx();
  EXPECT_THROW(CharacteristicsSolver(data(g), make_alpha(AlphaChoice::diag_pm1), cfg), ModelError);
}

TEST(Characteristics, CompactSupportHasNoInflow) {
  const Grid1D g(-1.0, 1.0, 65, Boundary::compact_support);
  SpinorField1D u(g);
  for (std::size_t j = 0; j < g.size(); ++j) u.values[j] = Spinor(1.0, 1.0);
  const auto out = advance_characteristics(u, make_alpha(AlphaChoice::diag_pm1), {}, 10);
  // u1 moves left, so the last 10 nodes have received nothing
  for (std::size_t j = g.size() - 10; j < g.size(); ++j) EXPECT_EQ(std::abs(out.values[j](0)), 0.0);
  for (std::size_t j = 0; j < 10; ++j) EXPECT_EQ(std::abs(out.values[j](1)), 0.0);
  EXPECT_EQ(std::abs(out.values[32](0) - 1.0), 0.0);
}

TEST(Trajectory, StrideKeepsFirstAndLast) {
  const Grid1D g = circle(64);
  CharacteristicsSolver s(data(g), make_alpha(AlphaChoice::diag_pm1), {});
  const auto tr = s.trajectory(7, 3);
  ASSERT_EQ(tr.times.size(), 4u);
  EXPECT_DOUBLE_EQ(tr.times.back(), 7 * g.dx());
}

TEST(Duhamel, FreeEvolutionMatchesCharacteristics) {
  const Grid1D g = circle(64);
  const auto alpha = make_alpha(AlphaChoice::diag_pm1);
  DiracRunConfig cfg;
  cfg.t_final = 16 * g.dx();
  const auto d = solve_duhamel(data(g), alpha, cfg);
  const auto c = advance_characteristics(data(g), alpha, {}, 16);
  EXPECT_LT(max_diff(d.fields.back(), c), 1e-10);
}

TEST(Duhamel, ConstantPotentialConverges) {
  const Grid1D g = circle(64);
  const auto alpha = make_alpha(AlphaChoice::diag_pm1);
  const double V = 1.5, T = 0.5;
  std::vector<double> hs, errs;
  for (double dt : {0.02, 0.01, 0.005}) {
    DiracRunConfig cfg;
    cfg.potential = [V](double, double) { return V; };
    cfg.t_final = T;
    cfg.dt = dt;
    DuhamelStats st;
    const auto tr = solve_duhamel(data(g), alpha, cfg, 0, &st);
    EXPECT_GE(st.windows, 1u);
    double e = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Spinor exact = Spinor(a0(g.x(j) + T), b0(g.x(j) - T)) * std::polar(1.0, -V * T);
      e = std::max(e, (tr.fields.back().values[j] - exact).cwiseAbs().maxCoeff());
    }
    hs.push_back(dt);
    errs.push_back(e);
  }
  EXPECT_GT(fit_order(hs, errs), 1.8);
}

TEST(Duhamel, RejectsBadConfig) {
  const Grid1D g = circle(64);
  DiracRunConfig cfg;
  cfg.t_final = 0.0;
  EXPECT_THROW(solve_duhamel(data(g), make_alpha(AlphaChoice::diag_pm1), cfg), ModelError);
}
