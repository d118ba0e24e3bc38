#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "swlw/errors.hpp"

namespace swlw {

enum class Boundary { periodic, compact_support };

inline std::string to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "compact_support";
}

/// Uniform 1-D grid. Periodic grids exclude the right endpoint, so
/// dx = (x_max - x_min) / n; compact-support grids include both endpoints.
class Grid1D {
 public:
  Grid1D(double x_min, double x_max, std::size_t n_nodes, Boundary boundary)
      : x_min_(x_min), x_max_(x_max), n_(n_nodes), boundary_(boundary) {
    if (!(x_max > x_min)) throw ModelError("Grid1D: x_max must exceed x_min");
    if (n_nodes < 8) throw ModelError("Grid1D: at least 8 nodes are required");
    dx_ = boundary == Boundary::periodic ? (x_max - x_min) / static_cast<double>(n_nodes)
                                         : (x_max - x_min) / static_cast<double>(n_nodes - 1);
  }

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double length() const { return x_max_ - x_min_; }
  double dx() const { return dx_; }
  std::size_t size() const { return n_; }
  Boundary boundary() const { return boundary_; }
  bool periodic() const { return boundary_ == Boundary::periodic; }

  double x(std::size_t i) const { return x_min_ + static_cast<double>(i) * dx_; }

  std::vector<double> nodes() const {
    std::vector<double> xs(n_);
    for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
    return xs;
  }

  /// Number of cell faces: face k sits between node k-1 and node k.
  /// Periodic grids have n faces (face 0 wraps), compact grids n+1.
  std::size_t face_count() const { return periodic() ? n_ : n_ + 1; }
  double face_x(std::size_t k) const { return x_min_ + (static_cast<double>(k) - 0.5) * dx_; }

  std::vector<double> faces() const {
    std::vector<double> xs(face_count());
    for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = face_x(k);
    return xs;
  }

  /// Maps x into [x_min, x_max) for periodic grids; identity otherwise.
  double wrap(double x) const {
    if (!periodic()) return x;
    const double L = length();
    double r = std::fmod(x - x_min_, L);
    if (r < 0) r += L;
    if (r >= L) r -= L;
    return x_min_ + r;
  }

  bool operator==(const Grid1D& o) const {
    return x_min_ == o.x_min_ && x_max_ == o.x_max_ && n_ == o.n_ && boundary_ == o.boundary_;
  }

 private:
  double x_min_;
  double x_max_;
  std::size_t n_;
  Boundary boundary_;
  double dx_;
};

}  // namespace swlw
