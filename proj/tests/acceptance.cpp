// Runs every acceptance criterion at its stated tolerance and prints one
// line per criterion.

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "swlw/io.hpp"
#include "swlw/verification.hpp"

namespace {

struct Criterion {
  int id;
  std::string title;
  std::function<swlw::SuiteReport()> check;
  // Set when the criterion is known to fail for a reason recorded in the README.
  std::string known_failure;
};

}  // namespace

int main() {
  using namespace swlw;
  const std::vector<Criterion> criteria = {
      {1, "wave property of |u|^2, order >= 1.9", [] { return check_wave_property_1d(); }, {}},
      {2, "closed form and Duhamel agreement", [] { return check_closed_form(); }, {}},
      {3, "positivity of |u|^2", [] { return check_positivity(); }, {}},
      {4, "maximum principle ||v|| <= c0", [] { return check_max_principle(); }, {}},
      {5, "entropy residual under refinement", [] { return check_entropy(); }, {}},
      {6, "vanishing-viscosity Cauchy property", [] { return check_vanishing_viscosity(); }, {}},
      {7, "stability under mollified data", [] { return check_data_stability(); }, {}},
      {8, "ABI physical region", [] { return check_abi_region(); }, {}},
      {9, "ABI transforms", [] { return check_abi_transforms(); }, {}},
      {10, "3-D wave property, order >= 1.5", [] { return check_dirac3d(); },
       "the 3-D current law drops the cross terms 2 Re(u^dag a_i a_j u_xj); see README"},
      {11, "charge conservation 1-D and 3-D", [] { return check_charge(); }, {}},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    const SuiteReport r = c.check();
    std::string failed;
    for (const auto& d : r.diagnostics)
      if (!d.pass) failed += (failed.empty() ? "" : ", ") + d.name + "=" + format_number(d.measured);
    const bool pass = r.pass();
    std::printf("criterion %2d %s  %s (%.1f s)", c.id, pass ? "PASS" : "FAIL", c.title.c_str(), r.seconds);
    if (!pass) std::printf("  [%s]", failed.c_str());
    if (!pass && !c.known_failure.empty()) std::printf("  known failure: %s", c.known_failure.c_str());
    std::printf("\n");
    for (const auto& d : r.diagnostics)
      std::printf("    %s %-40s %.6g %s %.3g  %s\n", d.pass ? "ok  " : "FAIL", d.name.c_str(), d.measured,
                  d.bound == Diagnostic::Bound::at_most ? "<=" : ">=", d.tolerance, d.detail.c_str());
    std::fflush(stdout);
    if (!pass && c.known_failure.empty()) ++unexpected;
  }
  std::printf("%d unexpected failure(s)\n", unexpected);
  return unexpected == 0 ? 0 : 1;
}
