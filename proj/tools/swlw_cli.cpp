#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

#include "swlw/harness.hpp"

namespace {

void print(const swlw::RunReport& r) {
  for (const auto& d : r.diagnostics) {
    std::cout << (d.pass ? "PASS " : "FAIL ") << std::left << std::setw(36) << d.name << " measured "
              << swlw::format_number(d.measured) << (d.bound == swlw::Diagnostic::Bound::at_most ? " <= " : " >= ")
              << swlw::format_number(d.tolerance);
    if (!d.detail.empty()) std::cout << "  (" << d.detail << ")";
    std::cout << "\n";
  }
  for (const auto& f : r.files) std::cout << "wrote " << f << "\n";
  std::cout << r.scenario << ": " << (r.pass() ? "pass" : "FAIL") << "\n";
}

std::vector<double> parse_values(const std::string& list) {
  std::vector<double> out;
  for (const auto& tok : swlw::detail::split_list(list)) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size()) throw swlw::ConfigError("--values: '" + tok + "' is not a number");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Short wave-long wave solvers and verification harness"};
  app.require_subcommand(1);

  std::string file, axis, values, suite, csv, svg;
  auto* run = app.add_subcommand("run", "Run a scenario file");
  run->add_option("file", file, "Scenario (.ini)")->required();

  auto* sweep = app.add_subcommand("sweep", "Convergence sweep over one parameter");
  sweep->add_option("file", file, "Scenario (.ini)")->required();
  sweep->add_option("--axis", axis, "eps | dx | data_mollification")->required();
  sweep->add_option("--values", values, "Comma-separated values (at least 3, monotone)")->required();

  auto* verify = app.add_subcommand("verify", "Run an invariant suite");
  verify->add_option("suite", suite, "Suite name")->required()->check(CLI::IsMember(swlw::suite_names()));

  auto* plot = app.add_subcommand("plot", "Render a CSV table as SVG");
  plot->add_option("csv", csv, "Input CSV")->required();
  plot->add_option("-o,--output", svg, "Output SVG")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  swlw::RunReport report;
  try {
    if (*run) {
      const auto s = swlw::load_scenario(file);
      report = swlw::run(s);
    } else if (*sweep) {
      const auto s = swlw::load_scenario(file);
      report = swlw::sweep_and_write(s, swlw::parse_axis(axis), parse_values(values), axis).report;
    } else if (*verify) {
      report = swlw::to_run_report(swlw::run_suite(suite));
    } else {
      const auto t = swlw::read_csv(csv);
      swlw::write_text(svg, swlw::plot_table(t, csv));
      std::cout << "wrote " << svg << "\n";
      return 0;
    }
  } catch (const swlw::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const swlw::ModelError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const swlw::SolverAbort& e) {
    std::cerr << "solver aborted: " << e.what() << "\n";
    return 1;
  }
  print(report);
  return report.pass() ? 0 : 1;
}
