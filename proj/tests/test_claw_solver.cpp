#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "swlw/verification.hpp"

using namespace swlw;

namespace {

ClawRunOptions silent() {
  ClawRunOptions o;
  o.warn = nullptr;
  return o;
}

double mass(const Grid1D& g, const std::vector<double>& v) { return integrate_nodes(g, v); }

}  // namespace

TEST(BumpGate, DerivativesAndSupport) {
  const auto g = CouplingGate::bump(0.4, 2.0, 0.3);
  EXPECT_TRUE(g.compact());
  EXPECT_DOUBLE_EQ(g.support_lo(), -0.1);
  EXPECT_DOUBLE_EQ(g.support_hi(), 0.7);
  EXPECT_EQ(g.g1(-0.1), 0.0);
  EXPECT_EQ(g.g1(0.75), 0.0);
  EXPECT_GT(g.g1(0.3), 0.0);
  EXPECT_TRUE(g.derivatives_consistent(-1.0, 1.0));
}

TEST(BumpGate, PrimitiveMatchesQuadratureOfDerivative) {
  const auto g = CouplingGate::bump(0.5, 1.5, -0.2);
  const int n = 20000;
  const double lo = -1.0, hi = 1.0, h = (hi - lo) / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += 0.5 * h * (g.g1(lo + i * h) + g.g1(lo + (i + 1) * h));
  EXPECT_NEAR(g.g(hi) - g.g(lo), s, 1e-7);
  // g is constant outside the support
  EXPECT_NEAR(g.g(0.4), g.g(0.9), 1e-14);
}

TEST(LinearGate, NotCompact) {
  const auto g = CouplingGate::linear(2.5);
  EXPECT_FALSE(g.compact());
  EXPECT_DOUBLE_EQ(g.g(2.0), 5.0);
  EXPECT_DOUBLE_EQ(g.g1(-7.0), 2.5);
  EXPECT_THROW(CouplingGate::bump(0.0, 1.0), ModelError);
}

TEST(FluxHypotheses, HwPassesLinearWarns) {
  EXPECT_TRUE(check_flux_hypotheses(hw_flux(1.0, 0.1), 1.0, 1e-3).ok());
  const auto lin = check_flux_hypotheses(linear_flux(0.5), 1.0, 1e-3);
  EXPECT_TRUE(lin.ok());
  EXPECT_FALSE(lin.warnings.empty());
}

TEST(FluxHypotheses, SourceNotVanishingAtC0IsViolation) {
  FluxModel m = hw_flux(1.0, 0.1);
  m.h = [](double, double v) { return 0.1 * v; };
  m.h_v = [](double, double) { return 0.1; };
  EXPECT_FALSE(check_flux_hypotheses(m, 1.0, 1e-3).ok());
}

TEST(FluxHypotheses, FastFluxIsViolation) {
  FluxModel m = hw_flux(1.0, 0.1);
  m.f_v = [](double, double v) { return 2.0 * v; };
  EXPECT_FALSE(check_flux_hypotheses(m, 1.0, 1e-3).ok());
}

TEST(Mollify, PreservesConstantsAndBounds) {
  const Grid1D g(-1.0, 1.0, 256, Boundary::periodic);
  std::vector<double> c(g.size(), 0.3), step(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) step[j] = std::abs(g.x(j)) < 0.4 ? 0.6 : -0.3;
  for (double v : mollify(g, c, 0.1, nullptr)) EXPECT_NEAR(v, 0.3, 1e-15);
  const auto m = mollify(g, step, 0.1, nullptr);
  for (double v : m) {
    EXPECT_LE(v, 0.6 + 1e-15);
    EXPECT_GE(v, -0.3 - 1e-15);
  }
  EXPECT_NEAR(mass(g, m), mass(g, step), 1e-13);
  EXPECT_EQ(mollify(g, step, 0.5 * g.dx(), nullptr), step);
  EXPECT_THROW(mollify(g, step, 0.0, nullptr), ModelError);
}

TEST(ClawValidate, FailsFastOnHypotheses) {
  ClawProblem p = scenarios::hw(128, 0.02);
  p.v0[5] = 1.0;
  EXPECT_THROW(run_claw(p, silent()), ModelError);
  p = scenarios::hw(128, 0.02);
  p.eps = 0.0;
  EXPECT_THROW(run_claw(p, silent()), ModelError);
  p = scenarios::hw(128, 0.02);
  p.gate = CouplingGate::bump(0.9, 1.0, 0.2);  // support reaches 1.1 > c0
  EXPECT_THROW(run_claw(p, silent()), ModelError);
}

TEST(ClawPlan, StepDividesFinalTime) {
  const ClawProblem p = scenarios::hw(256, 0.01, 0.7);
  const auto plan = plan_steps(p);
  EXPECT_NEAR(plan.dt * static_cast<double>(plan.steps), 0.7, 1e-14);
  const double lip = source_lipschitz(p.flux, p.t_final);
  EXPECT_LE(plan.dt, max_stable_dt(p.grid.dx(), p.eps, speed_bound(p), lip, p.cfl) * (1.0 + 1e-12));
  const auto r = run_claw(p, silent());
  EXPECT_EQ(r.steps, plan.steps);
  EXPECT_NEAR(r.final_state.t, 0.7, 1e-13);
}

TEST(ClawSolver, VacuumStaysVacuum) {
  ClawProblem p = scenarios::hw(128, 0.02);
  std::fill(p.v0.begin(), p.v0.end(), 0.0);
  p.short_wave = nullptr;
  const auto r = run_claw(p, silent());
  for (double v : r.final_state.v) EXPECT_EQ(v, 0.0);
}

TEST(ClawSolver, LinearFluxConservesMass) {
  const ClawProblem p = scenarios::linear_transport(256, 0.01);
  const auto r = run_claw(p, silent());
  EXPECT_NEAR(mass(p.grid, r.final_state.v), mass(p.grid, p.v0), 1e-13);
}

TEST(ClawSolver, LinearFluxApproachesTransport) {
  const ClawProblem p = scenarios::linear_transport(512, 4e-3);
  const auto r = run_claw(p, silent());
  const auto exact = scenarios::linear_transport_exact();
  std::vector<double> ref(p.grid.size());
  for (std::size_t j = 0; j < ref.size(); ++j) ref[j] = exact(1.0, p.grid.x(j));
  EXPECT_LT(l1_distance(p.grid, r.final_state.v, ref), 0.05);
}

TEST(ClawSolver, MaximumPrincipleNearTheBarrier) {
  ClawProblem p = scenarios::hw(256, 4e-3);
  for (std::size_t j = 0; j < p.v0.size(); ++j) p.v0[j] = 0.97 * std::exp(-p.grid.x(j) * p.grid.x(j) / 0.05);
  double worst = 0.0;
  ClawRunOptions o = silent();
  o.observer = [&](const ClawStepView& v) {
    for (double x : v.after.v) worst = std::max(worst, std::abs(x));
  };
  const auto r = run_claw(p, o);
  EXPECT_LE(worst, 1.0);
  EXPECT_LE(r.max_abs_v, 1.0);
}

TEST(ClawSolver, QuadraticEntropyResidualIsSmall) {
  ClawRunOptions o = silent();
  o.entropy = Entropy::quadratic();
  const auto coarse = run_claw(scenarios::hw(256, 2.0 / 256), o);
  const auto fine = run_claw(scenarios::hw(512, 2.0 / 512), o);
  EXPECT_LT(fine.entropy_max_positive, coarse.entropy_max_positive);
}

TEST(EpsilonSweep, ZeroDataGivesZeroGaps) {
  ClawProblem p = scenarios::hw(128, 0.05);
  std::fill(p.v0.begin(), p.v0.end(), 0.0);
  p.short_wave = nullptr;
  const auto rep = epsilon_sweep(p, {0.08, 0.04, 0.02});
  for (double gap : rep.gaps) EXPECT_EQ(gap, 0.0);
  EXPECT_TRUE(rep.cauchy);
}

TEST(EpsilonSweep, RejectsBadLists) {
  const ClawProblem p = scenarios::hw(128, 0.05);
  EXPECT_THROW(epsilon_sweep(p, {0.08, 0.04}), ModelError);
  EXPECT_THROW(epsilon_sweep(p, {0.04, 0.08, 0.02}), ModelError);
  EXPECT_THROW(epsilon_sweep(p, {0.08, 0.04, 0.001}), ModelError);
}

TEST(Nondegeneracy, HwFluxIsGenuinelyNonlinear) {
  const auto rep = nondegeneracy_probe(hw_flux(), CouplingGate::bump(0.9, 1.0), {0.0, 0.5, -0.5}, {0.0, 1.0}, 20001);
  EXPECT_TRUE(rep.pass);
  const auto flat = nondegeneracy_probe(linear_flux(0.5), CouplingGate::zero(), {0.0}, {0.0}, 2001);
  EXPECT_FALSE(flat.pass);
}
