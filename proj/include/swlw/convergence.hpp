#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "swlw/errors.hpp"
#include "swlw/grid.hpp"

namespace swlw {

/// Least-squares slope of log(err) against log(h). Returns NaN if any error
/// is non-positive (an exact result has no order).
inline double fit_order(const std::vector<double>& h, const std::vector<double>& err) {
  if (h.size() != err.size() || h.size() < 2) throw ModelError("fit_order: need >= 2 matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0) || !(err[i] > 0.0)) return std::nan("");
    const double x = std::log(h[i]);
    const double y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double l1_distance(const Grid1D& grid, const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ModelError("l1_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s * grid.dx();
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

/// True if every entry is strictly smaller than its predecessor.
inline bool strictly_decreasing(const std::vector<double>& a) {
  for (std::size_t i = 1; i < a.size(); ++i)
    if (!(a[i] < a[i - 1])) return false;
  return true;
}

}  // namespace swlw
