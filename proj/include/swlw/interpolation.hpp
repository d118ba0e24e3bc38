#pragma once

#include <cmath>

// Boost 1.74's pchip calls isnan unqualified.
namespace boost::math::interpolators {
using std::isnan;
}

#include <boost/math/interpolators/pchip.hpp>
#include <cstddef>
#include <memory>
#include <vector>

#include "swlw/grid.hpp"

namespace swlw {

/// Four-point cubic Lagrange interpolation of nodal samples. Outside the grid,
/// periodic grids wrap and compact-support grids extend by zero. Exact at
/// nodes and for cubics away from the boundary.
class CubicSampler {
 public:
  CubicSampler(const Grid1D& grid, std::vector<double> values)
      : grid_(grid), values_(std::make_shared<const std::vector<double>>(std::move(values))) {
    if (values_->size() != grid.size()) throw ModelError("CubicSampler: size mismatch");
  }

  double operator()(double x) const {
    const double xw = grid_.wrap(x);
    const double s = (xw - grid_.x_min()) / grid_.dx();
    const double fl = std::floor(s);
    const double frac = s - fl;
    const long i = static_cast<long>(fl);
    if (frac < 1e-13) return at(i);
    if (frac > 1.0 - 1e-13) return at(i + 1);
    const double fm1 = at(i - 1), f0 = at(i), f1 = at(i + 1), f2 = at(i + 2);
    const double p = frac;
    return fm1 * (-p * (p - 1.0) * (p - 2.0) / 6.0) + f0 * ((p + 1.0) * (p - 1.0) * (p - 2.0) / 2.0) +
           f1 * (-(p + 1.0) * p * (p - 2.0) / 2.0) + f2 * ((p + 1.0) * p * (p - 1.0) / 6.0);
  }

 private:
  double at(long i) const {
    const long n = static_cast<long>(grid_.size());
    if (grid_.periodic()) {
      i %= n;
      if (i < 0) i += n;
      return (*values_)[static_cast<std::size_t>(i)];
    }
    if (i < 0 || i >= n) return 0.0;
    return (*values_)[static_cast<std::size_t>(i)];
  }

  Grid1D grid_;
  std::shared_ptr<const std::vector<double>> values_;
};

/// Monotone cubic (Fritsch-Carlson) interpolation of y(x) for strictly
/// increasing abscissae, evaluated at each query. Queries outside the data
/// range are clamped to the end values.
inline std::vector<double> pchip_resample(const std::vector<double>& x, const std::vector<double>& y,
                                          const std::vector<double>& query) {
  if (x.size() != y.size() || x.size() < 4) throw ModelError("pchip_resample: need >= 4 matching samples");
  auto xs = x;
  auto ys = y;
  boost::math::interpolators::pchip<std::vector<double>> spline(std::move(xs), std::move(ys));
  std::vector<double> out(query.size());
  for (std::size_t i = 0; i < query.size(); ++i) {
    const double q = query[i];
    if (q <= x.front())
      out[i] = y.front();
    else if (q >= x.back())
      out[i] = y.back();
    else
      out[i] = spline(q);
  }
  return out;
}

}  // namespace swlw
