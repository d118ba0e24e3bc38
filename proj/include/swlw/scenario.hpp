#pragma once

// Scenario files: flat INI text, one section per concern and one
// `field.<name>` section per initial field.
//
//   [scenario]  name, model = dirac1d | claw | coupled_swlw | abi | dirac3d
//   [grid]      x_min, x_max, n, boundary = periodic | compact_support
//   [time]      T, dt (optional), cfl (optional)
//   [physics]   lambda, alpha, c0, eps, flux, delta, c1, potential, B1, D1, ...
//   [gate]      kind = bump | linear | zero, M, amplitude, center, slope
//   [field.X]   profile = gaussian | step | constant | plane_wave, ...
//   [output]    snapshots, fields, diagnostics
//   [tolerance] <diagnostic> = value

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "swlw/abi.hpp"
#include "swlw/claw_solver.hpp"
#include "swlw/dirac3d.hpp"
#include "swlw/errors.hpp"
#include "swlw/flux.hpp"
#include "swlw/gate.hpp"
#include "swlw/grid.hpp"

namespace swlw {

enum class ModelKind { dirac1d, claw, coupled_swlw, abi, dirac3d };

inline std::string to_string(ModelKind m) {
  switch (m) {
    case ModelKind::dirac1d: return "dirac1d";
    case ModelKind::claw: return "claw";
    case ModelKind::coupled_swlw: return "coupled_swlw";
    case ModelKind::abi: return "abi";
    case ModelKind::dirac3d: return "dirac3d";
  }
  return "?";
}

/// One initial profile. Complex fields multiply the real profile by
/// exp(i (carrier x + phase)).
struct Profile {
  enum class Kind { gaussian, step, constant, plane_wave } kind = Kind::constant;
  double center = 0.0, width = 1.0, height = 0.0;
  double offset = 0.0;   // added to the real profile
  double carrier = 0.0;  // wavenumber of the complex carrier
  double phase = 0.0;
  double k = 0.0;  // plane_wave wavenumber

  /// Real part of the profile. `period` > 0 measures gaussian distances on
  /// the circle.
  double real_at(double x, double period = 0.0) const {
    switch (kind) {
      case Kind::gaussian: {
        double d = x - center;
        if (period > 0.0) d -= period * std::round(d / period);
        return offset + height * std::exp(-d * d / (2.0 * width * width));
      }
      case Kind::step: {
        double d = x - center;
        if (period > 0.0) d -= period * std::round(d / period);
        return offset + (std::abs(d) < width ? height : 0.0);
      }
      case Kind::constant: return offset + height;
      case Kind::plane_wave: return offset + height * std::cos(k * x + phase);
    }
    return 0.0;
  }

  std::complex<double> complex_at(double x, double period = 0.0) const {
    if (kind == Kind::plane_wave) return offset + height * std::polar(1.0, k * x + phase);
    return real_at(x, period) * std::polar(1.0, carrier * x + phase);
  }
};

struct GateSpec {
  std::string kind = "zero";
  double M = 0.9, amplitude = 1.0, center = 0.0, slope = 1.0;

  CouplingGate build() const {
    if (kind == "bump") return CouplingGate::bump(M, amplitude, center);
    if (kind == "linear") return CouplingGate::linear(slope);
    if (kind == "zero") return CouplingGate::zero();
    throw ConfigError("gate.kind: unknown gate '" + kind + "'");
  }
};

struct Scenario {
  std::string name;
  ModelKind model = ModelKind::dirac1d;
  std::string source_path;

  // grid
  double x_min = -1.0, x_max = 1.0;
  std::size_t n = 256;
  Boundary boundary = Boundary::periodic;
  // time
  double T = 1.0;
  double dt = 0.0;
  double cfl = 0.45;
  // physics
  double lambda = 0.0;
  double alpha = 0.0;  // long-wave coupling
  double c0 = 1.0;
  double eps = 1e-3;
  std::string flux = "hw";
  double delta = 0.1;
  double c1 = 0.5;
  double potential = 0.0;  // constant external V for dirac1d / thirring3d
  double B1 = 0.6, D1 = 0.8;
  double alpha1 = 0.0, alpha2 = 0.0;
  double x_anchor = 0.0;
  std::string B_choice = "glassey";
  double p = 3.0;
  std::string solver = "characteristics";  // dirac1d: characteristics | duhamel
  GateSpec gate, gate1, gate2;

  std::map<std::string, Profile> fields;

  // output
  std::size_t snapshots = 2;
  std::vector<std::string> output_fields;
  std::vector<std::string> diagnostics;
  std::map<std::string, double> tolerances;

  Grid1D grid() const { return Grid1D(x_min, x_max, n, boundary); }
  double period() const { return boundary == Boundary::periodic ? x_max - x_min : 0.0; }
  bool has_field(const std::string& f) const { return fields.count(f) > 0; }

  double tolerance(const std::string& diag, double fallback) const {
    const auto it = tolerances.find(diag);
    return it == tolerances.end() ? fallback : it->second;
  }

  FluxModel flux_model() const {
    if (flux == "hw") return hw_flux(c0, delta);
    if (flux == "linear") return linear_flux(c1, c0);
    if (flux == "zero") return zero_flux(c0);
    throw ConfigError("physics.flux: unknown flux '" + flux + "'");
  }
};

/// Diagnostics each model knows, with default tolerances.
inline const std::map<std::string, double>& known_diagnostics(ModelKind m) {
  static const std::map<ModelKind, std::map<std::string, double>> table = {
      {ModelKind::dirac1d, {{"charge", 1e-10}, {"closed_form", 1e-12}, {"positivity", 0.0}, {"wave_residual", 1e-2}}},
      {ModelKind::claw, {{"max_principle", 1e-10}, {"entropy", 1e-2}, {"exact_transport", 5e-2}}},
      {ModelKind::coupled_swlw,
       {{"max_principle", 1e-10}, {"charge", 1e-10}, {"closed_form", 1e-12}, {"vacuum", 1e-14}}},
      {ModelKind::abi, {{"physical_region", 1e-10}, {"round_trip", 1e-10}}},
      {ModelKind::dirac3d, {{"charge", 1e-10}, {"unitarity", 1e-12}, {"wave_residual", 1.0}}},
  };
  return table.at(m);
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T require(const boost::property_tree::ptree& pt, const std::string& key) {
  const auto v = pt.get_optional<T>(key);
  if (!v) throw ConfigError("missing required field '" + key + "'");
  return *v;
}

template <class T>
T optional_value(const boost::property_tree::ptree& pt, const std::string& key, T fallback) {
  try {
    return pt.get<T>(key, fallback);
  } catch (const boost::property_tree::ptree_bad_data&) {
    throw ConfigError("field '" + key + "' has an invalid value");
  }
}

inline Profile parse_profile(const boost::property_tree::ptree& sec, const std::string& where) {
  Profile p;
  const auto kind = sec.get<std::string>("profile", "constant");
  if (kind == "gaussian")
    p.kind = Profile::Kind::gaussian;
  else if (kind == "step")
    p.kind = Profile::Kind::step;
  else if (kind == "constant")
    p.kind = Profile::Kind::constant;
  else if (kind == "plane_wave")
    p.kind = Profile::Kind::plane_wave;
  else
    throw ConfigError(where + ".profile: unknown profile '" + kind + "'");
  p.center = optional_value(sec, "center", 0.0);
  p.width = optional_value(sec, "width", 1.0);
  p.height = optional_value(sec, p.kind == Profile::Kind::constant ? "value" : "height", 0.0);
  p.offset = optional_value(sec, "offset", 0.0);
  p.carrier = optional_value(sec, "carrier", 0.0);
  p.phase = optional_value(sec, "phase", 0.0);
  p.k = optional_value(sec, "k", 0.0);
  if ((p.kind == Profile::Kind::gaussian || p.kind == Profile::Kind::step) && !(p.width > 0.0))
    throw ConfigError(where + ".width must be positive");
  return p;
}

inline GateSpec parse_gate(const boost::property_tree::ptree& pt, const std::string& sec) {
  GateSpec g;
  g.kind = optional_value<std::string>(pt, sec + ".kind", "zero");
  g.M = optional_value(pt, sec + ".M", 0.9);
  g.amplitude = optional_value(pt, sec + ".amplitude", 1.0);
  g.center = optional_value(pt, sec + ".center", 0.0);
  g.slope = optional_value(pt, sec + ".slope", 1.0);
  return g;
}

}  // namespace detail

inline ModelKind parse_model(const std::string& s) {
  if (s == "dirac1d") return ModelKind::dirac1d;
  if (s == "claw") return ModelKind::claw;
  if (s == "coupled_swlw") return ModelKind::coupled_swlw;
  if (s == "abi") return ModelKind::abi;
  if (s == "dirac3d") return ModelKind::dirac3d;
  throw ConfigError("scenario.model: unknown model '" + s + "'");
}

/// Fields each model needs in its initial-data spec.
inline std::vector<std::string> required_fields(ModelKind m) {
  switch (m) {
    case ModelKind::dirac1d: return {"u1", "u2"};
    case ModelKind::claw: return {"v"};
    case ModelKind::coupled_swlw: return {"u1", "u2", "v"};
    case ModelKind::abi: return {"theta", "zeta", "u1", "u2"};
    case ModelKind::dirac3d: return {};
  }
  return {};
}

/// Checks the hypotheses of the target model; throws ConfigError naming the
/// violated one.
inline void validate_scenario(const Scenario& s) {
  auto fail = [&s](const std::string& what) { throw ConfigError(s.name + ": " + what); };
  if (!(s.T > 0.0)) fail("time.T must be positive");
  if (s.dt < 0.0) fail("time.dt must be non-negative");
  if (s.snapshots < 2) fail("output.snapshots must be at least 2");
  for (const auto& f : required_fields(s.model))
    if (!s.has_field(f)) fail("missing initial field section [field." + f + "]");
  const auto& known = known_diagnostics(s.model);
  std::set<std::string> seen;
  for (const auto& d : s.diagnostics) {
    if (!known.count(d)) fail("diagnostic '" + d + "' is not available for model " + to_string(s.model));
    if (!seen.insert(d).second) fail("diagnostic '" + d + "' declared twice");
  }
  try {
    if (s.model == ModelKind::dirac3d) {
      if (s.n < 4 || s.n > 32) fail("grid.n must lie in [4, 32] for dirac3d");
      const double dx = (s.x_max - s.x_min) / static_cast<double>(s.n);
      if (s.dt > dx / std::sqrt(3.0)) fail("time.dt exceeds the CFL bound dx/sqrt(3)");
      if (s.B_choice != "glassey" && s.B_choice != "thirring3d") fail("physics.B must be glassey or thirring3d");
      if (s.B_choice == "glassey" && !(s.p > 1.0)) fail("physics.p must exceed 1");
      return;
    }
    const Grid1D g = s.grid();
    if (s.model == ModelKind::dirac1d || s.model == ModelKind::coupled_swlw) {
      if (s.solver != "characteristics" && s.solver != "duhamel")
        fail("physics.solver must be characteristics or duhamel");
      const double dt = s.dt > 0.0 ? s.dt : g.dx();
      if ((s.solver == "characteristics" || s.model == ModelKind::coupled_swlw) && std::abs(dt - g.dx()) > 1e-12 * g.dx())
        fail("the characteristics solver needs dt = dx");
      if (s.solver == "characteristics" || s.model == ModelKind::coupled_swlw) {
        const double steps = s.T / g.dx();
        if (std::abs(steps - std::round(steps)) > 1e-6) fail("time.T must be a multiple of dx for dt = dx");
      }
    }
    if (s.model == ModelKind::claw || s.model == ModelKind::coupled_swlw) {
      const FluxModel f = s.flux_model();
      const CouplingGate gate = s.gate.build();
      const Profile& v = s.fields.at("v");
      for (std::size_t j = 0; j < g.size(); ++j)
        if (!(std::abs(v.real_at(g.x(j), s.period())) < f.c0)) fail("hypothesis |v0| < c0 violated");
      if (s.alpha != 0.0 && gate.compact() && !(std::abs(gate.center()) + gate.support_radius() < f.c0))
        fail("hypothesis supp g' inside (-c0, c0) violated");
      if (!(s.eps > 0.0)) fail("physics.eps must be positive");
      const auto rep = check_flux_hypotheses(f, s.T, s.eps);
      if (!rep.ok()) fail("flux hypothesis violated: " + rep.violations.front());
      const bool wants_exact =
          std::find(s.diagnostics.begin(), s.diagnostics.end(), "exact_transport") != s.diagnostics.end();
      if (wants_exact && (s.flux != "linear" || s.alpha != 0.0 || s.model != ModelKind::claw))
        fail("exact_transport needs a claw scenario with flux = linear and alpha = 0");
    }
    if (s.model == ModelKind::abi) {
      const ABIConstants c{s.B1, s.D1};
      ABIGateConfig gc{s.gate1.build(), s.gate2.build(), s.alpha1, s.alpha2};
      validate_gates(gc, c);
      if (!g.periodic()) fail("abi scenarios need a periodic y grid");
      ABILagrangeFields f;
      for (std::size_t j = 0; j < g.size(); ++j) {
        f.theta.push_back(s.fields.at("theta").real_at(g.x(j), s.period()));
        f.zeta.push_back(s.fields.at("zeta").real_at(g.x(j), s.period()));
      }
      validate_initial(f, gc);
    }
  } catch (const ModelError& e) {
    fail(e.what());
  }
}

inline Scenario parse_scenario(std::istream& in, const std::string& path = "<stream>") {
  boost::property_tree::ptree pt;
  try {
    boost::property_tree::read_ini(in, pt);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  using detail::optional_value;
  using detail::require;
  Scenario s;
  s.source_path = path;
  s.name = require<std::string>(pt, "scenario.name");
  s.model = parse_model(require<std::string>(pt, "scenario.model"));

  const bool d3 = s.model == ModelKind::dirac3d;
  s.x_min = optional_value(pt, "grid.x_min", d3 ? 0.0 : -1.0);
  s.x_max = optional_value(pt, "grid.x_max", d3 ? 2.0 * std::numbers::pi : 1.0);
  s.n = require<std::size_t>(pt, "grid.n");
  const auto b = optional_value<std::string>(pt, "grid.boundary", "periodic");
  if (b == "periodic")
    s.boundary = Boundary::periodic;
  else if (b == "compact_support")
    s.boundary = Boundary::compact_support;
  else
    throw ConfigError("grid.boundary: unknown boundary '" + b + "'");

  s.T = require<double>(pt, "time.T");
  s.dt = optional_value(pt, "time.dt", 0.0);
  s.cfl = optional_value(pt, "time.cfl", 0.45);

  s.lambda = optional_value(pt, "physics.lambda", 0.0);
  s.alpha = optional_value(pt, "physics.alpha", 0.0);
  if (s.model == ModelKind::claw || s.model == ModelKind::coupled_swlw) {
    s.c0 = require<double>(pt, "physics.c0");
    s.eps = require<double>(pt, "physics.eps");
  }
  s.flux = optional_value<std::string>(pt, "physics.flux", "hw");
  s.delta = optional_value(pt, "physics.delta", 0.1);
  s.c1 = optional_value(pt, "physics.c1", 0.5);
  s.potential = optional_value(pt, "physics.potential", 0.0);
  s.B1 = optional_value(pt, "physics.B1", 0.6);
  s.D1 = optional_value(pt, "physics.D1", 0.8);
  s.alpha1 = optional_value(pt, "physics.alpha1", 0.0);
  s.alpha2 = optional_value(pt, "physics.alpha2", 0.0);
  s.x_anchor = optional_value(pt, "physics.x_anchor", 0.0);
  s.B_choice = optional_value<std::string>(pt, "physics.B", "glassey");
  s.p = optional_value(pt, "physics.p", 3.0);
  s.solver = optional_value<std::string>(pt, "physics.solver", "characteristics");
  s.gate = detail::parse_gate(pt, "gate");
  s.gate1 = detail::parse_gate(pt, "gate1");
  s.gate2 = detail::parse_gate(pt, "gate2");

  for (const auto& [key, sec] : pt) {
    if (key.rfind("field.", 0) == 0) s.fields[key.substr(6)] = detail::parse_profile(sec, key);
  }
  s.snapshots = optional_value<std::size_t>(pt, "output.snapshots", 2);
  s.output_fields = detail::split_list(optional_value<std::string>(pt, "output.fields", ""));
  s.diagnostics = detail::split_list(optional_value<std::string>(pt, "output.diagnostics", ""));
  if (const auto tol = pt.get_child_optional("tolerance"))
    for (const auto& [key, v] : *tol) {
      try {
        s.tolerances[key] = v.get_value<double>();
      } catch (const boost::property_tree::ptree_bad_data&) {
        throw ConfigError("tolerance." + key + " has an invalid value");
      }
    }
  validate_scenario(s);
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  return parse_scenario(in, path);
}

}  // namespace swlw
