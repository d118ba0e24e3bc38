#pragma once

// Scenario runs, parameter sweeps and report output.

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "swlw/abi.hpp"
#include "swlw/claw_solver.hpp"
#include "swlw/coupled.hpp"
#include "swlw/dirac3d.hpp"
#include "swlw/dirac_solver.hpp"
#include "swlw/io.hpp"
#include "swlw/scenario.hpp"
#include "swlw/verification.hpp"

namespace swlw {

struct RunReport {
  std::string scenario;
  std::vector<Diagnostic> diagnostics;
  std::vector<std::string> files;

  bool pass() const {
    for (const auto& d : diagnostics)
      if (!d.pass) return false;
    return true;
  }
};

inline RunReport to_run_report(const SuiteReport& s) { return RunReport{s.name, s.diagnostics, {}}; }

inline nlohmann::json to_json(const Diagnostic& d) {
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"name", d.name},
          {"measured", num(d.measured)},
          {"tolerance", num(d.tolerance)},
          {"bound", d.bound == Diagnostic::Bound::at_most ? "at_most" : "at_least"},
          {"pass", d.pass},
          {"detail", d.detail}};
}

inline nlohmann::json to_json(const RunReport& r) {
  nlohmann::json j;
  j["scenario"] = r.scenario;
  j["pass"] = r.pass();
  j["diagnostics"] = nlohmann::json::array();
  for (const auto& d : r.diagnostics) j["diagnostics"].push_back(to_json(d));
  j["files"] = r.files;
  return j;
}

/// $SWLW_OUTPUT_DIR, or ./output.
inline std::filesystem::path output_dir() {
  const char* env = std::getenv("SWLW_OUTPUT_DIR");
  std::filesystem::path p = env && *env ? env : "output";
  std::filesystem::create_directories(p);
  return p;
}

namespace detail {

/// Steps 0 = k_0 < ... < k_{m-1} = steps at which snapshots are written.
inline std::vector<std::size_t> snapshot_steps(std::size_t steps, std::size_t count) {
  std::vector<std::size_t> ks;
  for (std::size_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(std::llround(static_cast<double>(i) * steps / static_cast<double>(count - 1)));
    if (ks.empty() || k != ks.back()) ks.push_back(k);
  }
  return ks;
}

inline std::vector<std::string> pick_fields(const Scenario& s, std::vector<std::string> defaults,
                                            const std::vector<std::string>& available) {
  if (s.output_fields.empty()) return defaults;
  for (const auto& f : s.output_fields)
    if (std::find(available.begin(), available.end(), f) == available.end())
      throw ConfigError(s.name + ": output field '" + f + "' is not available for model " + to_string(s.model));
  return s.output_fields;
}

inline SpinorField1D spinor_from(const Scenario& s, const Grid1D& g) {
  SpinorField1D u(g);
  const auto& p1 = s.fields.at("u1");
  const auto& p2 = s.fields.at("u2");
  for (std::size_t j = 0; j < g.size(); ++j) u.values[j] = Spinor(p1.complex_at(g.x(j), s.period()), p2.complex_at(g.x(j), s.period()));
  return u;
}

inline std::vector<double> real_from(const Scenario& s, const std::string& f, const Grid1D& g) {
  std::vector<double> v(g.size());
  const auto& p = s.fields.at(f);
  for (std::size_t j = 0; j < g.size(); ++j) v[j] = p.real_at(g.x(j), s.period());
  return v;
}

inline double spinor_component(const Spinor& u, const std::string& f, const DiracAlpha& a) {
  if (f == "w_plus") return u.squaredNorm();
  if (f == "w_minus") return (u.adjoint() * a.matrix() * u)(0, 0).real();
  if (f == "re_u1") return u(0).real();
  if (f == "im_u1") return u(0).imag();
  if (f == "re_u2") return u(1).real();
  return u(1).imag();
}

/// Appends one snapshot (t, x, field...) per node.
inline void append_rows(Table& t, double time, const Grid1D& g, const std::vector<std::vector<double>>& cols) {
  for (std::size_t j = 0; j < g.size(); ++j) {
    std::vector<double> r{time, g.x(j)};
    for (const auto& c : cols) r.push_back(c[j]);
    t.add_row(std::move(r));
  }
}

inline Table long_table(const std::vector<std::string>& fields) {
  Table t;
  t.columns = {"t", "x"};
  t.columns.insert(t.columns.end(), fields.begin(), fields.end());
  return t;
}

inline void add_diag(RunReport& r, const Scenario& s, const std::string& name, double measured, bool upper = true,
                     std::string detail = {}) {
  const double tol = s.tolerance(name, known_diagnostics(s.model).at(name));
  r.diagnostics.push_back(upper ? at_most(name, measured, tol, std::move(detail))
                                : at_least(name, measured, tol, std::move(detail)));
}

inline bool wants(const Scenario& s, const std::string& d) {
  return std::find(s.diagnostics.begin(), s.diagnostics.end(), d) != s.diagnostics.end();
}

struct ModelOutput {
  Table table;
  std::vector<std::string> extra_files;
};

inline ModelOutput run_dirac1d(const Scenario& s, RunReport& rep) {
  const Grid1D g = s.grid();
  const auto alpha = make_alpha(AlphaChoice::diag_pm1);
  const auto u0 = spinor_from(s, g);
  DiracRunConfig cfg;
  cfg.lambda = s.lambda;
  if (s.potential != 0.0) cfg.potential = [v = s.potential](double, double) { return v; };
  cfg.t_final = s.T;
  const double dt = s.dt > 0.0 ? s.dt : g.dx();
  cfg.dt = dt;
  const auto steps = static_cast<std::size_t>(std::ceil(s.T / dt - 1e-9));

  DiracTrajectory tr;
  if (s.solver == "duhamel") {
    tr = solve_duhamel(u0, alpha, cfg, 1);
  } else {
    cfg.dt = g.dx();
    CharacteristicsSolver cs(u0, alpha, cfg);
    tr = cs.trajectory(steps, 1);
  }
  const auto fields = pick_fields(s, {"w_plus", "w_minus"}, {"w_plus", "w_minus", "re_u1", "im_u1", "re_u2", "im_u2"});
  ModelOutput out{long_table(fields), {}};
  for (std::size_t k : snapshot_steps(tr.fields.size() - 1, s.snapshots)) {
    std::vector<std::vector<double>> cols;
    for (const auto& f : fields) {
      std::vector<double> c(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) c[j] = spinor_component(tr.fields[k].values[j], f, alpha);
      cols.push_back(std::move(c));
    }
    append_rows(out.table, tr.times[k], g, cols);
  }

  const auto init = InitialObservables::from_field(u0, alpha);
  const double q0 = charge(u0);
  double drift = 0.0, closed = 0.0, wmin = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> levels;
  for (std::size_t k = 0; k < tr.fields.size(); ++k) {
    const auto obs = observables(tr.fields[k], alpha);
    drift = std::max(drift, std::abs(charge(tr.fields[k]) - q0) / (q0 > 0.0 ? q0 : 1.0));
    for (std::size_t j = 0; j < g.size(); ++j) {
      closed = std::max(closed, std::abs(obs.w_plus[j] - eval_w_plus(init, tr.times[k], g.x(j))));
      wmin = std::min(wmin, obs.w_plus[j]);
    }
    if (k % 2 == 0) levels.push_back(obs.w_plus);
  }
  if (wants(s, "charge")) add_diag(rep, s, "charge", drift);
  if (wants(s, "closed_form")) add_diag(rep, s, "closed_form", closed);
  if (wants(s, "positivity")) {
    const double tol = s.tolerance("positivity", 0.0);
    rep.diagnostics.push_back({"positivity", wmin, tol, Diagnostic::Bound::at_least, wmin > tol, "min |u|^2 > tol"});
  }
  if (wants(s, "wave_residual")) {
    if (levels.size() < 3) throw ConfigError(s.name + ": wave_residual needs at least 4 steps");
    add_diag(rep, s, "wave_residual", wave_residual(levels, 2.0 * (tr.times[1] - tr.times[0]), g.dx()));
  }
  return out;
}

inline ClawProblem claw_problem(const Scenario& s) {
  const Grid1D g = s.grid();
  ClawProblem p{g, real_from(s, "v", g), s.flux_model(), s.gate.build(), s.alpha, s.eps, s.T, s.cfl, s.dt, nullptr};
  if (s.has_field("u1") && s.has_field("u2")) {
    const auto alpha = make_alpha(AlphaChoice::diag_pm1);
    p.short_wave = std::make_shared<const InitialObservables>(InitialObservables::from_field(spinor_from(s, g), alpha));
  }
  return p;
}

/// Exact solution of the uncoupled linear-flux problem, if this is one.
inline std::function<double(double, double)> exact_transport(const Scenario& s) {
  if (s.flux != "linear" || s.alpha != 0.0) return {};
  const Profile v = s.fields.at("v");
  const double c1 = s.c1, period = s.period();
  return [v, c1, period](double t, double x) { return v.real_at(x - c1 * t, period); };
}

inline ModelOutput run_claw_model(const Scenario& s, RunReport& rep) {
  const ClawProblem p = claw_problem(s);
  const auto plan = plan_steps(p);
  const auto ks = snapshot_steps(plan.steps, s.snapshots);
  const auto fields = pick_fields(s, {"v"}, {"v", "w_plus"});
  ModelOutput out{long_table(fields), {}};
  auto emit = [&](const ClawState& st, const std::vector<double>& w_nodes) {
    std::vector<std::vector<double>> cols;
    for (const auto& f : fields) cols.push_back(f == "v" ? st.v : w_nodes);
    append_rows(out.table, st.t, p.grid, cols);
  };
  auto w_nodes = [&](double t) {
    std::vector<double> w(p.grid.size(), 0.0);
    if (p.short_wave)
      for (std::size_t j = 0; j < w.size(); ++j) w[j] = eval_w_plus(*p.short_wave, t, p.grid.x(j));
    return w;
  };
  ClawRunOptions opt;
  if (wants(s, "entropy")) opt.entropy = Entropy::quadratic();
  std::size_t next = 1;
  opt.observer = [&](const ClawStepView& v) {
    if (next < ks.size() && static_cast<std::size_t>(v.step) == ks[next]) {
      emit(v.after, w_nodes(v.after.t));
      ++next;
    }
  };
  emit(ClawState{p.grid, p.v0, 0.0, p.eps, p.alpha_coupling}, w_nodes(0.0));
  ClawRunResult res{ClawState{p.grid, p.v0, 0.0, p.eps, p.alpha_coupling}, {}, 0, 0.0, 0.0, {}, 0.0};
  try {
    res = run_claw(p, opt);
  } catch (const SolverAbort& e) {
    rep.diagnostics.push_back(holds("solver", false, e.what()));
    return out;
  }
  if (wants(s, "max_principle"))
    add_diag(rep, s, "max_principle", res.max_abs_v - p.flux.c0, true, "max |v| - c0 over all steps");
  if (wants(s, "entropy")) add_diag(rep, s, "entropy", res.entropy_max_positive, true, "max positive entropy residual");
  if (wants(s, "exact_transport")) {
    const auto ex = exact_transport(s);
    if (!ex) throw ConfigError(s.name + ": exact_transport needs flux = linear and alpha = 0");
    std::vector<double> ref(p.grid.size());
    for (std::size_t j = 0; j < ref.size(); ++j) ref[j] = ex(s.T, p.grid.x(j));
    add_diag(rep, s, "exact_transport", l1_distance(p.grid, res.final_state.v, ref), true, "L1 error at T");
  }
  return out;
}

inline ModelOutput run_coupled_model(const Scenario& s, RunReport& rep) {
  const Grid1D g = s.grid();
  CoupledProblem cp{spinor_from(s, g), make_alpha(AlphaChoice::diag_pm1), s.lambda, claw_problem(s)};
  // claw steps divide dx, so every Dirac level is also a long-wave level
  {
    ClawProblem probe = cp.claw;
    probe.dt = 0.0;
    probe.short_wave = std::make_shared<const InitialObservables>(InitialObservables::from_field(cp.u0, cp.alpha));
    const auto plan = plan_steps(probe);
    cp.claw.dt = g.dx() / std::ceil(g.dx() / plan.dt - 1e-9);
  }
  std::optional<CoupledResult> maybe;
  try {
    maybe = run_coupled(cp, 1, nullptr);
  } catch (const SolverAbort& e) {
    rep.diagnostics.push_back(holds("solver", false, e.what()));
    return {long_table({}), {}};
  }
  const CoupledResult& res = *maybe;
  const auto& tr = res.short_wave;
  const auto fields = pick_fields(s, {"v", "w_plus"}, {"v", "w_plus", "w_minus", "re_u1", "im_u1", "re_u2", "im_u2"});
  ModelOutput out{long_table(fields), {}};
  const std::size_t steps = tr.fields.size() - 1;
  for (std::size_t k : snapshot_steps(steps, s.snapshots)) {
    std::vector<std::vector<double>> cols;
    for (const auto& f : fields) {
      std::vector<double> c(g.size());
      for (std::size_t j = 0; j < g.size(); ++j)
        c[j] = f == "v" ? res.long_wave.at(tr.times[k], j) : spinor_component(tr.fields[k].values[j], f, cp.alpha);
      cols.push_back(std::move(c));
    }
    append_rows(out.table, tr.times[k], g, cols);
  }
  double vmax = 0.0, umax = 0.0, drift = 0.0, closed = 0.0;
  for (const auto& lvl : res.long_wave.v) vmax = std::max(vmax, max_abs(lvl));
  const double q0 = charge(cp.u0);
  for (std::size_t k = 0; k < tr.fields.size(); ++k) {
    drift = std::max(drift, std::abs(charge(tr.fields[k]) - q0) / (q0 > 0.0 ? q0 : 1.0));
    const auto obs = observables(tr.fields[k], cp.alpha);
    for (std::size_t j = 0; j < g.size(); ++j) {
      umax = std::max(umax, obs.w_plus[j]);
      closed = std::max(closed, std::abs(obs.w_plus[j] - eval_w_plus(res.observables, tr.times[k], g.x(j))));
    }
  }
  if (wants(s, "max_principle")) add_diag(rep, s, "max_principle", vmax - cp.claw.flux.c0, true, "max |v| - c0");
  if (wants(s, "charge")) add_diag(rep, s, "charge", drift);
  if (wants(s, "closed_form")) add_diag(rep, s, "closed_form", closed);
  if (wants(s, "vacuum")) add_diag(rep, s, "vacuum", vmax + umax, true, "max |v| + max |u|^2");
  return out;
}

inline ModelOutput run_abi_model(const Scenario& s, RunReport& rep, const std::filesystem::path& dir) {
  const ABIConstants c{s.B1, s.D1};
  const Grid1D yg = s.grid();
  const std::size_t n = yg.size();
  ABIGateConfig gates{s.gate1.build(), s.gate2.build(), s.alpha1, s.alpha2};
  ABILagrangeState st{yg, {}, c, 0.0, s.x_anchor};
  st.f.theta = real_from(s, "theta", yg);
  st.f.zeta = real_from(s, "zeta", yg);
  for (auto& f : st.f.tilde) f.assign(n, 0.0);
  try {
    validate_initial(st.f, gates);
  } catch (const ModelError& e) {
    throw ConfigError(s.name + ": " + e.what());
  }
  const auto u = spinor_from(s, yg);
  const auto alpha = make_alpha(AlphaChoice::diag_pm1);
  const auto init = InitialObservables::from_field(u, alpha);
  double w_max = 0.0;
  {
    double m1 = 0.0, m2 = 0.0;
    for (const auto& v : u.values) {
      m1 = std::max(m1, std::norm(v(0)));
      m2 = std::max(m2, std::norm(v(1)));
    }
    w_max = m1 + m2;
  }
  const std::string mfile = s.name + "_passive_matrix.txt";
  write_text((dir / mfile).string(), passive_matrix_report(c));

  const double eps = s.eps > 0.0 ? s.eps : yg.dx();
  double dt = s.dt > 0.0 ? s.dt : abi_stable_dt(yg.dx(), eps, gates, c, std::max(w_max, 1e-12), s.cfl);
  const auto steps = static_cast<std::size_t>(std::ceil(s.T / dt - 1e-9));
  dt = s.T / static_cast<double>(steps);
  const auto ks = snapshot_steps(steps, s.snapshots);
  const auto fields = pick_fields(s, {"theta", "zeta", "h"}, {"theta", "zeta", "h", "x_euler", "w_plus"});
  ModelOutput out{long_table(fields), {mfile}};
  const double Z = c.Z();
  auto emit = [&](const ABILagrangeState& a) {
    const auto e = to_euler(a.f, LagrangeMap{yg.nodes(), a.x_anchor}, c, a.t);
    std::vector<std::vector<double>> cols;
    for (const auto& f : fields) {
      if (f == "theta") cols.push_back(a.f.theta);
      else if (f == "zeta") cols.push_back(a.f.zeta);
      else if (f == "h") cols.push_back(e.h);
      else if (f == "x_euler") cols.push_back(e.x);
      else {
        std::vector<double> w(n);
        for (std::size_t j = 0; j < n; ++j) w[j] = eval_w_plus(init, a.t, yg.x(j));
        cols.push_back(std::move(w));
      }
    }
    append_rows(out.table, a.t, yg, cols);
  };
  emit(st);
  double gap = 0.0, box = -1.0;
  bool ok = true;
  std::string why;
  std::size_t next = 1;
  try {
    for (std::size_t k = 1; k <= steps; ++k) {
      st = step_coupled(st, w_plus_at_faces(init, yg, st.t), gates, eps, dt, s.cfl, static_cast<long>(k));
      for (std::size_t j = 0; j < n; ++j) {
        gap = std::max(gap, (st.f.theta[j] - st.f.zeta[j]) / (2.0 * Z) - 1.0);
        box = std::max({box, gates.a() - st.f.theta[j], st.f.theta[j] - gates.b(), gates.c() - st.f.zeta[j],
                        st.f.zeta[j] - gates.d()});
      }
      if (next < ks.size() && k == ks[next]) {
        emit(st);
        ++next;
      }
    }
  } catch (const SolverAbort& e) {
    ok = false;
    why = e.what();
  }
  if (wants(s, "physical_region")) {
    add_diag(rep, s, "physical_region", std::max(gap, box), true, "max of (theta-zeta)/2Z - 1 and box excess");
    if (!ok) {
      rep.diagnostics.back().pass = false;
      rep.diagnostics.back().detail = why;
    }
  }
  if (wants(s, "round_trip")) {
    const auto e = to_euler(st.f, LagrangeMap{yg.nodes(), st.x_anchor}, c, st.t);
    const auto back = to_lagrange(e, c);
    double err = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      err = std::max({err, std::abs(back.fields.theta[j] - st.f.theta[j]), std::abs(back.fields.zeta[j] - st.f.zeta[j]),
                      std::abs(back.map.y[j] - (yg.x(j) - yg.x(0)))});
      scale = std::max({scale, std::abs(st.f.theta[j]), std::abs(st.f.zeta[j]), std::abs(yg.x(j) - yg.x(0))});
    }
    add_diag(rep, s, "round_trip", err / scale, true, "relative, Lagrange -> Euler -> Lagrange");
  }
  return out;
}

inline ModelOutput run_dirac3d_model(const Scenario& s, RunReport& rep) {
  const Grid3D g{s.n, s.x_max - s.x_min, s.x_min};
  const auto m = build_matrices3d();
  PotentialChoice3D b = GlasseyPotential{s.p, s.lambda};
  if (s.B_choice == "thirring3d")
    b = Thirring3DPotential{s.lambda, [v = s.potential](double, double, double, double) { return v; }};
  const double dt = s.dt > 0.0 ? s.dt : 0.5 * g.dx();
  const auto tr = evolve_spectral(scenarios::smooth_spinor3d(g), m, b, s.T, dt);
  const auto fields = pick_fields(s, {"density", "chirality"}, {"density", "chirality"});
  ModelOutput out{long_table(fields), {}};
  for (std::size_t k : snapshot_steps(tr.times.size() - 1, s.snapshots)) {
    for (std::size_t i = 0; i < g.n; ++i) {
      std::vector<double> r{tr.times[k], g.coord(i)};
      for (const auto& f : fields) r.push_back((f == "density" ? tr.density : tr.chirality)[k][g.index(i, 0, 0)]);
      out.table.add_row(std::move(r));
    }
  }
  double drift = 0.0;
  for (double q : tr.charge) drift = std::max(drift, std::abs(q - tr.charge.front()) / tr.charge.front());
  if (wants(s, "charge")) add_diag(rep, s, "charge", drift);
  if (wants(s, "unitarity")) add_diag(rep, s, "unitarity", tr.max_step_drift, true, "max per-step relative change");
  if (wants(s, "wave_residual")) {
    const double h = tr.times[1] - tr.times[0];
    add_diag(rep, s, "wave_residual",
             std::max(wave_residual3d(tr.density, g.n, h, g.dx()), wave_residual3d(tr.chirality, g.n, h, g.dx())), true,
             "max over |u|^2 and u^dag b u");
  }
  return out;
}

}  // namespace detail

/// Runs a validated scenario, writes <name>.csv, <name>.svg and
/// <name>_report.json to `dir`.
inline RunReport run(const Scenario& s, const std::filesystem::path& dir = output_dir()) {
  RunReport rep{s.name, {}, {}};
  detail::ModelOutput out;
  switch (s.model) {
    case ModelKind::dirac1d: out = detail::run_dirac1d(s, rep); break;
    case ModelKind::claw: out = detail::run_claw_model(s, rep); break;
    case ModelKind::coupled_swlw: out = detail::run_coupled_model(s, rep); break;
    case ModelKind::abi: out = detail::run_abi_model(s, rep, dir); break;
    case ModelKind::dirac3d: out = detail::run_dirac3d_model(s, rep); break;
  }
  for (const auto& d : s.diagnostics) {
    const auto hit = std::find_if(rep.diagnostics.begin(), rep.diagnostics.end(),
                                  [&](const Diagnostic& x) { return x.name == d; });
    if (hit == rep.diagnostics.end()) rep.diagnostics.push_back(holds(d, false, "not evaluated: solver aborted"));
  }
  rep.files = out.extra_files;
  if (!out.table.rows.empty()) {
    write_csv((dir / (s.name + ".csv")).string(), out.table);
    write_text((dir / (s.name + ".svg")).string(), plot_table(out.table, s.name));
    rep.files.push_back(s.name + ".csv");
    rep.files.push_back(s.name + ".svg");
  }
  rep.files.push_back(s.name + "_report.json");
  write_text((dir / (s.name + "_report.json")).string(), to_json(rep).dump(2) + "\n");
  return rep;
}

inline RunReport run(const std::string& path, const std::filesystem::path& dir = output_dir()) {
  return run(load_scenario(path), dir);
}

enum class SweepAxis { eps, dx, data_mollification };

inline SweepAxis parse_axis(const std::string& a) {
  if (a == "eps") return SweepAxis::eps;
  if (a == "dx") return SweepAxis::dx;
  if (a == "data_mollification") return SweepAxis::data_mollification;
  throw ConfigError("unknown sweep axis '" + a + "'");
}

struct SweepResult {
  Table table;
  RunReport report;
};

namespace detail {

inline void check_sweep_values(std::vector<double>& v) {
  if (v.size() < 3) throw ConfigError("sweep: at least 3 values are required");
  const bool inc = std::is_sorted(v.begin(), v.end(), std::less<>());
  const bool dec = std::is_sorted(v.begin(), v.end(), std::greater<>());
  if (!inc && !dec) throw ConfigError("sweep: values must be monotone");
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) throw ConfigError("sweep: values must be distinct");
  std::sort(v.begin(), v.end(), std::greater<>());  // coarse to fine
}

inline std::vector<double> gaps_column(const std::vector<double>& gaps, std::size_t n) {
  std::vector<double> out(n, std::nan(""));
  for (std::size_t i = 0; i < gaps.size(); ++i) out[i] = gaps[i];
  return out;
}

}  // namespace detail

/// Runs the scenario at each value of `axis` (coarse to fine, in parallel)
/// and tabulates consecutive L1 gaps and, where an exact solution is known,
/// errors with a fitted order.
inline SweepResult sweep(const Scenario& s, SweepAxis axis, std::vector<double> values) {
  detail::check_sweep_values(values);
  SweepResult out;
  out.report.scenario = s.name;
  const double order_tol = s.tolerance("sweep_order", 0.8);
  const bool claw_like = s.model == ModelKind::claw || s.model == ModelKind::coupled_swlw;

  if (axis == SweepAxis::eps) {
    if (!claw_like) throw ConfigError(s.name + ": eps sweeps need a claw or coupled_swlw scenario");
    const auto ex = detail::exact_transport(s);
    const auto rep = epsilon_sweep(detail::claw_problem(s), values, ex);
    out.table.columns = {"eps", "gap_to_next"};
    if (ex) out.table.columns.push_back("l1_error");
    const auto gaps = detail::gaps_column(rep.gaps, values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::vector<double> r{values[i], gaps[i]};
      if (ex) r.push_back(rep.errors[i]);
      out.table.add_row(std::move(r));
    }
    out.report.diagnostics.push_back(holds("cauchy_gaps_decreasing", rep.cauchy, "gaps " + join_values(rep.gaps)));
    if (ex) out.report.diagnostics.push_back(at_least("order_vs_exact", rep.order, order_tol));
    return out;
  }

  if (axis == SweepAxis::data_mollification) {
    if (!claw_like) throw ConfigError(s.name + ": data_mollification sweeps need a claw scenario");
    const auto m = mollification_sweep(detail::claw_problem(s), values);
    out.table.columns = {"width", "gap_to_next"};
    const auto gaps = detail::gaps_column(m.gaps, values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out.table.add_row({values[i], gaps[i]});
    out.report.diagnostics.push_back(holds("gaps_decreasing", strictly_decreasing(m.gaps), "gaps " + join_values(m.gaps)));
    return out;
  }

  // dx: nested periodic grids, compared against the finest at coarse nodes
  if (s.model != ModelKind::dirac1d && s.model != ModelKind::claw)
    throw ConfigError(s.name + ": dx sweeps need a dirac1d or claw scenario");
  if (s.boundary != Boundary::periodic) throw ConfigError(s.name + ": dx sweeps need a periodic grid");
  const double L = s.x_max - s.x_min;
  std::vector<std::size_t> ns;
  for (double dx : values) {
    const auto n = static_cast<std::size_t>(std::llround(L / dx));
    if (std::abs(static_cast<double>(n) * dx - L) > 1e-9 * L) throw ConfigError("sweep: dx must divide the domain");
    ns.push_back(n);
  }
  for (std::size_t n : ns)
    if (ns.back() % n != 0) throw ConfigError("sweep: grids must be nested (each n divides the finest)");

  struct Level {
    std::vector<double> modulus;  // |u|^2 or v
    std::vector<Spinor> spinor;
  };
  std::vector<std::future<Level>> jobs;
  for (std::size_t n : ns) {
    Scenario si = s;
    si.n = n;
    si.dt = 0.0;
    jobs.push_back(std::async(std::launch::async, [si] {
      const Grid1D g = si.grid();
      Level lv;
      if (si.model == ModelKind::claw) {
        ClawRunOptions o;
        o.warn = nullptr;
        lv.modulus = run_claw(detail::claw_problem(si), o).final_state.v;
        return lv;
      }
      const auto alpha = make_alpha(AlphaChoice::diag_pm1);
      DiracRunConfig cfg;
      cfg.lambda = si.lambda;
      if (si.potential != 0.0) cfg.potential = [v = si.potential](double, double) { return v; };
      cfg.t_final = si.T;
      cfg.dt = g.dx();
      const auto steps = static_cast<std::size_t>(std::llround(si.T / g.dx()));
      if (std::abs(static_cast<double>(steps) * g.dx() - si.T) > 1e-9 * si.T)
        throw ConfigError("sweep: T must be a multiple of every dx");
      const auto f = advance_characteristics(detail::spinor_from(si, g), alpha, cfg, steps);
      lv.spinor = f.values;
      lv.modulus = observables(f, alpha).w_plus;
      return lv;
    }));
  }
  std::vector<Level> lv;
  for (auto& j : jobs) lv.push_back(j.get());
  const Level& fine = lv.back();
  std::vector<double> hs, mod_err, phase_err;
  for (std::size_t i = 0; i + 1 < lv.size(); ++i) {
    const std::size_t stride = ns.back() / ns[i];
    const double dx = values[i];
    double me = 0.0, pe = 0.0;
    for (std::size_t j = 0; j < ns[i]; ++j) {
      me += std::abs(lv[i].modulus[j] - fine.modulus[j * stride]) * dx;
      if (!fine.spinor.empty()) pe += (lv[i].spinor[j] - fine.spinor[j * stride]).squaredNorm() * dx;
    }
    hs.push_back(dx);
    mod_err.push_back(me);
    phase_err.push_back(std::sqrt(pe));
  }
  const bool dirac = s.model == ModelKind::dirac1d;
  out.table.columns = {"dx", dirac ? "modulus_l1_vs_finest" : "l1_vs_finest"};
  if (dirac) out.table.columns.push_back("spinor_l2_vs_finest");
  for (std::size_t i = 0; i < hs.size(); ++i) {
    std::vector<double> r{hs[i], mod_err[i]};
    if (dirac) r.push_back(phase_err[i]);
    out.table.add_row(std::move(r));
  }
  if (dirac) {
    out.report.diagnostics.push_back(at_most("modulus_error", max_abs(mod_err), 1e-10, "moduli are transported exactly"));
    if (max_abs(phase_err) <= 1e-12)
      out.report.diagnostics.push_back(
          holds("phase_order", true, "scheme exact for this problem; spinor L2 errors " + join_values(phase_err)));
    else
      out.report.diagnostics.push_back(at_least("phase_order", fit_order(hs, phase_err), order_tol,
                                                "spinor L2 errors " + join_values(phase_err)));
  } else {
    out.report.diagnostics.push_back(
        holds("errors_decreasing", strictly_decreasing(mod_err), "L1 errors " + join_values(mod_err)));
  }
  return out;
}

inline SweepResult sweep_and_write(const Scenario& s, SweepAxis axis, std::vector<double> values,
                                   const std::string& axis_name, const std::filesystem::path& dir = output_dir()) {
  SweepResult r = sweep(s, axis, std::move(values));
  const std::string stem = s.name + "_sweep_" + axis_name;
  write_csv((dir / (stem + ".csv")).string(), r.table);
  write_text((dir / (stem + ".svg")).string(), plot_table(r.table, stem));
  r.report.files = {stem + ".csv", stem + ".svg", stem + "_report.json"};
  write_text((dir / (stem + "_report.json")).string(), to_json(r.report).dump(2) + "\n");
  return r;
}

}  // namespace swlw
