#pragma once

// Dirac-matrix algebra and 1-D spinor fields for the massless Thirring model.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "swlw/errors.hpp"
#include "swlw/grid.hpp"

namespace swlw {

using cplx = std::complex<double>;
using Spinor = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;

inline constexpr double kAlgebraTol = 1e-12;

inline double max_abs(const Mat2c& m) { return m.cwiseAbs().maxCoeff(); }

/// Hermitian involution alpha (alpha* = alpha, alpha^2 = I) that carries the
/// transport direction of the Dirac operator alpha d/dx.
class DiracAlpha {
 public:
  /// Validates the matrix; throws ModelError if either invariant fails.
  explicit DiracAlpha(const Mat2c& m) : m_(m) {
    if (max_abs(m - m.adjoint()) > kAlgebraTol)
      throw ModelError("DiracAlpha: matrix is not Hermitian");
    if (max_abs(m * m - Mat2c::Identity()) > kAlgebraTol)
      throw ModelError("DiracAlpha: matrix is not an involution (alpha^2 != I)");
    if (max_abs(m - diag_pm1()) <= kAlgebraTol) {
      basis_ = Mat2c::Identity();
    } else {
      Eigen::SelfAdjointEigenSolver<Mat2c> es(m);
      // eigenvalues ascend: column 0 is -1, column 1 is +1.
      basis_.col(0) = es.eigenvectors().col(1);
      basis_.col(1) = es.eigenvectors().col(0);
    }
  }

  const Mat2c& matrix() const { return m_; }

  /// Unitary Q with Q^dagger alpha Q = diag(1, -1). Identity when alpha is
  /// already diagonal so that node shifts stay bit-exact.
  const Mat2c& eigenbasis() const { return basis_; }

  bool is_diagonal() const { return basis_ == Mat2c::Identity(); }

  static Mat2c diag_pm1() {
    Mat2c d = Mat2c::Zero();
    d(0, 0) = 1.0;
    d(1, 1) = -1.0;
    return d;
  }

 private:
  Mat2c m_;
  Mat2c basis_;
};

enum class AlphaChoice { diag_pm1, pauli_x, custom };

inline DiracAlpha make_alpha(AlphaChoice choice, const std::optional<Mat2c>& custom = std::nullopt) {
  if (choice != AlphaChoice::custom && custom)
    throw ModelError("make_alpha: a custom matrix is only accepted with AlphaChoice::custom");
  switch (choice) {
    case AlphaChoice::diag_pm1:
      return DiracAlpha(DiracAlpha::diag_pm1());
    case AlphaChoice::pauli_x: {
      Mat2c p;
      p << 0.0, 1.0, 1.0, 0.0;
      return DiracAlpha(p);
    }
    case AlphaChoice::custom:
      if (!custom) throw ModelError("make_alpha: AlphaChoice::custom requires a matrix");
      return DiracAlpha(*custom);
  }
  throw ModelError("make_alpha: unknown choice");
}

/// Thirring quadratic functional U = (u^dagger u) I - (u^dagger alpha u) alpha.
inline Mat2c thirring_u(const Spinor& u, const DiracAlpha& alpha) {
  const double norm2 = u.squaredNorm();
  const double current = (u.adjoint() * alpha.matrix() * u)(0, 0).real();
  return norm2 * Mat2c::Identity() - current * alpha.matrix();
}

/// U depends on u only through the two quadratic observables.
inline Mat2c thirring_u_from_observables(double w_plus, double w_minus, const DiracAlpha& alpha) {
  return w_plus * Mat2c::Identity() - w_minus * alpha.matrix();
}

struct SpinorField1D {
  Grid1D grid;
  std::vector<Spinor> values;

  explicit SpinorField1D(const Grid1D& g) : grid(g), values(g.size(), Spinor::Zero()) {}
  SpinorField1D(const Grid1D& g, std::vector<Spinor> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
      throw ModelError("SpinorField1D: value count does not match grid size");
  }

  std::size_t size() const { return values.size(); }

  bool finite() const {
    for (const auto& s : values)
      if (!std::isfinite(s(0).real()) || !std::isfinite(s(0).imag()) || !std::isfinite(s(1).real()) ||
          !std::isfinite(s(1).imag()))
        return false;
    return true;
  }
};

struct ObservablePair {
  std::vector<double> w_plus;   // |u|^2
  std::vector<double> w_minus;  // u^dagger alpha u
};

inline ObservablePair observables(const SpinorField1D& field, const DiracAlpha& alpha) {
  ObservablePair out;
  out.w_plus.resize(field.size());
  out.w_minus.resize(field.size());
  const bool diagonal = alpha.is_diagonal();
  for (std::size_t i = 0; i < field.size(); ++i) {
    const Spinor& u = field.values[i];
    if (diagonal) {
      const double a = std::norm(u(0));
      const double b = std::norm(u(1));
      out.w_plus[i] = a + b;
      out.w_minus[i] = a - b;
    } else {
      out.w_plus[i] = u.squaredNorm();
      out.w_minus[i] = (u.adjoint() * alpha.matrix() * u)(0, 0).real();
    }
  }
  return out;
}

/// Trapezoid-rule integral of a nodal quantity.
inline double integrate_nodes(const Grid1D& grid, const std::vector<double>& f) {
  double s = 0.0;
  for (double v : f) s += v;
  if (!grid.periodic() && !f.empty()) s -= 0.5 * (f.front() + f.back());
  return s * grid.dx();
}

}  // namespace swlw
