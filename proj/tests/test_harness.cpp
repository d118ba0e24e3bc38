#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "swlw/harness.hpp"

using namespace swlw;
namespace fs = std::filesystem;

namespace {

const std::string kScenarios = SWLW_SCENARIO_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("swlw_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kClaw = R"(
[scenario]
name = t
model = claw
[grid]
n = 64
[time]
T = 0.1
[physics]
c0 = 1
eps = 0.05
[field.v]
profile = gaussian
height = 0.5
width = 0.2
)";

std::string error_of(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_scenario(in);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::string with(std::string base, const std::string& from, const std::string& to) {
  const auto i = base.find(from);
  if (i == std::string::npos) throw std::logic_error("pattern not found: " + from);
  return base.replace(i, from.size(), to);
}

}  // namespace

TEST(ScenarioParse, ValidClaw) {
  std::istringstream in(kClaw);
  const auto s = parse_scenario(in);
  EXPECT_EQ(s.model, ModelKind::claw);
  EXPECT_EQ(s.n, 64u);
  EXPECT_DOUBLE_EQ(s.fields.at("v").height, 0.5);
}

TEST(ScenarioParse, MissingC0NamesTheField) {
  EXPECT_NE(error_of(with(kClaw, "c0 = 1\n", "")).find("physics.c0"), std::string::npos);
  try {
    load_scenario(kScenarios + "/malformed_missing_c0.ini");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("physics.c0"), std::string::npos);
  }
}

TEST(ScenarioParse, HypothesesFailFast) {
  EXPECT_NE(error_of(with(kClaw, "height = 0.5", "height = 1.0")).find("|v0| < c0"), std::string::npos);
  EXPECT_NE(error_of(with(kClaw, "eps = 0.05", "eps = 0")).find("eps"), std::string::npos);
  EXPECT_NE(error_of(with(kClaw, "model = claw", "model = kdv")).find("unknown model"), std::string::npos);
  EXPECT_NE(error_of(kClaw + std::string("[output]\ndiagnostics = charge\n")).find("not available"),
            std::string::npos);
  EXPECT_NE(error_of(kClaw + std::string("[output]\ndiagnostics = entropy, entropy\n")).find("twice"),
            std::string::npos);
  EXPECT_NE(error_of(kClaw + std::string("[output]\ndiagnostics = exact_transport\n")).find("linear"),
            std::string::npos);
  EXPECT_NE(error_of(with(kClaw, "eps = 0.05", "eps = 0.05\nalpha = 1\n[gate]\nkind = bump\nM = 1.2")).find("supp"),
            std::string::npos);
  EXPECT_NE(error_of(with(kClaw, "n = 64", "n = abc")).find("grid.n"), std::string::npos);
}

TEST(ScenarioParse, DiracNeedsDtEqualDx) {
  const std::string d = R"(
[scenario]
name = d
model = dirac1d
[grid]
n = 64
[time]
T = 0.1
[field.u1]
profile = constant
value = 1
[field.u2]
profile = constant
value = 0
)";
  EXPECT_NE(error_of(d).find("multiple of dx"), std::string::npos);
  EXPECT_EQ(error_of(with(d, "T = 0.1", "T = 0.5")), "");
  EXPECT_NE(error_of(with(d, "T = 0.1", "T = 0.5\ndt = 0.001")).find("dt = dx"), std::string::npos);
  EXPECT_NE(error_of(with(d, "[field.u2]\nprofile = constant\nvalue = 0\n", "")).find("field.u2"), std::string::npos);
}

TEST(ScenarioParse, Dirac3DBounds) {
  const std::string d = "[scenario]\nname = d\nmodel = dirac3d\n[grid]\nn = 64\n[time]\nT = 0.1\n";
  EXPECT_NE(error_of(d).find("[4, 32]"), std::string::npos);
  EXPECT_NE(error_of(with(d, "n = 64", "n = 8\n[physics]\nB = dirac")).find("glassey"), std::string::npos);
  const std::string coarse = with(d, "n = 64", "n = 8");
  EXPECT_NE(error_of(with(coarse, "T = 0.1", "T = 0.1\ndt = 0.5")).find("CFL"), std::string::npos);
}

TEST(ScenarioParse, AbiGateOrdering) {
  std::ifstream in(kScenarios + "/abi.ini");
  std::stringstream ss;
  ss << in.rdbuf();
  EXPECT_EQ(error_of(ss.str()), "");
  EXPECT_NE(error_of(with(ss.str(), "center = 0.9", "center = 3.5")).find("a <= b <= c + 2Z"), std::string::npos);
  EXPECT_NE(error_of(with(ss.str(), "offset = 0.7071067811865476", "offset = 1.5")).find("theta"), std::string::npos);
}

TEST(Run, VacuumAllZeroAndAllPass) {
  const auto dir = scratch("vacuum");
  const auto rep = run(load_scenario(kScenarios + "/coupled_vacuum.ini"), dir);
  EXPECT_TRUE(rep.pass());
  const Table t = read_csv((dir / "coupled_vacuum.csv").string());
  ASSERT_GT(t.rows.size(), 0u);
  for (const auto& r : t.rows)
    for (std::size_t c = 2; c < r.size(); ++c) EXPECT_EQ(r[c], 0.0);
}

TEST(Run, EveryDeclaredDiagnosticOnce) {
  const auto dir = scratch("declared");
  const auto s = load_scenario(kScenarios + "/dirac_thirring.ini");
  const auto rep = run(s, dir);
  for (const auto& d : s.diagnostics)
    EXPECT_EQ(std::count_if(rep.diagnostics.begin(), rep.diagnostics.end(),
                            [&](const Diagnostic& x) { return x.name == d; }),
              1);
  const auto j = nlohmann::json::parse(slurp(dir / "dirac_thirring_report.json"));
  EXPECT_EQ(j["diagnostics"].size(), s.diagnostics.size());
  EXPECT_EQ(j["pass"], rep.pass());
}

TEST(Run, LinearFluxAgainstExactTransport) {
  const auto dir = scratch("linear");
  const auto rep = run(load_scenario(kScenarios + "/claw_linear.ini"), dir);
  const auto it = std::find_if(rep.diagnostics.begin(), rep.diagnostics.end(),
                               [](const Diagnostic& d) { return d.name == "exact_transport"; });
  ASSERT_NE(it, rep.diagnostics.end());
  EXPECT_TRUE(it->pass);
  EXPECT_LT(it->measured, 0.05);
}

TEST(Run, OutputIsDeterministic) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  const auto s = load_scenario(kScenarios + "/coupled_swlw.ini");
  run(s, a);
  run(s, b);
  const std::string ca = slurp(a / "coupled_swlw.csv");
  EXPECT_FALSE(ca.empty());
  EXPECT_EQ(ca, slurp(b / "coupled_swlw.csv"));
  EXPECT_EQ(slurp(a / "coupled_swlw_report.json"), slurp(b / "coupled_swlw_report.json"));
}

TEST(Run, SnapshotsAreMultiplesOfDt) {
  const auto dir = scratch("snap");
  const auto s = load_scenario(kScenarios + "/dirac_thirring.ini");
  run(s, dir);
  const Table t = read_csv((dir / "dirac_thirring.csv").string());
  std::set<double> times;
  for (double v : t.column(t.index_of("t"))) times.insert(v);
  EXPECT_EQ(times.size(), s.snapshots);
  const double dx = s.grid().dx();
  for (double v : times) EXPECT_NEAR(v / dx, std::round(v / dx), 1e-9);
  EXPECT_EQ(t.columns, (std::vector<std::string>{"t", "x", "w_plus", "w_minus"}));
}

TEST(Run, AbiWritesPassiveMatrix) {
  const auto dir = scratch("abi");
  const auto rep = run(load_scenario(kScenarios + "/abi.ini"), dir);
  EXPECT_TRUE(rep.pass());
  EXPECT_NE(slurp(dir / "abi_passive_matrix.txt").find("eigenvalues"), std::string::npos);
}

TEST(Sweep, ValuePreconditions) {
  const auto s = load_scenario(kScenarios + "/claw_linear.ini");
  EXPECT_THROW(sweep(s, SweepAxis::eps, {0.008, 0.004}), ConfigError);
  EXPECT_THROW(sweep(s, SweepAxis::eps, {0.008, 0.002, 0.004}), ConfigError);
  EXPECT_THROW(parse_axis("dt"), ConfigError);
  EXPECT_EQ(parse_axis("data_mollification"), SweepAxis::data_mollification);
}

TEST(Sweep, FreeDiracDxExactModuli) {
  const auto s = load_scenario(kScenarios + "/dirac_free.ini");
  const double L = 2.0 * std::numbers::pi;
  const auto r = sweep(s, SweepAxis::dx, {L / 64, L / 128, L / 256});
  EXPECT_TRUE(r.report.pass());
  for (const auto& row : r.table.rows) EXPECT_LT(row[1], 1e-12);
}

TEST(Sweep, ThirringDxSecondOrderPhase) {
  const auto s = load_scenario(kScenarios + "/dirac_thirring.ini");
  const double L = 2.0 * std::numbers::pi;
  const auto r = sweep(s, SweepAxis::dx, {L / 256, L / 512, L / 1024, L / 2048});
  const std::vector<double> h = r.table.column(0), e = r.table.column(2);
  EXPECT_GT(fit_order(h, e), 1.9);
}

TEST(Sweep, EpsVacuumZeroDistances) {
  const auto s = load_scenario(kScenarios + "/coupled_vacuum.ini");
  const auto r = sweep(s, SweepAxis::eps, {0.08, 0.04, 0.02});
  EXPECT_TRUE(r.report.pass());
  for (const auto& row : r.table.rows) EXPECT_TRUE(!std::isfinite(row[1]) || row[1] == 0.0);
}

TEST(Csv, RoundTripKeepsEveryBit) {
  Table t;
  t.columns = {"a", "b"};
  t.add_row({0.1, 1.0 / 3.0});
  t.add_row({-1e-300, 6.02214076e23});
  std::stringstream ss;
  write_csv(ss, t);
  EXPECT_EQ(ss.str().substr(0, 4), "a,b\n");
  const Table back = read_csv(ss);
  EXPECT_EQ(back.columns, t.columns);
  EXPECT_EQ(back.rows, t.rows);
}

TEST(Csv, RejectsRaggedRows) {
  std::istringstream in("a,b\n1,2\n3\n");
  EXPECT_THROW(read_csv(in), ConfigError);
}

TEST(Plot, SvgHasPolylineAndAxes) {
  Table t;
  t.columns = {"x", "y"};
  for (int i = 0; i < 10; ++i) t.add_row({double(i), double(i * i)});
  const std::string svg = plot_table(t, "demo");
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
  EXPECT_NE(svg.find("demo"), std::string::npos);
}

TEST(Verify, UnknownSuiteIsConfigError) { EXPECT_THROW(run_suite("everything"), ConfigError); }

TEST(Verify, AlgebraSuitePasses) { EXPECT_TRUE(run_suite("algebra").pass()); }
