#pragma once

/*
 * Relative-motion harmonic-oscillator eigenstates: products of normalized 1D
 * Hermite-Gaussians. The Gaussian widths use the reduced mass mu = M/2,
 * l_i = sqrt(hbar/(mu omega_i)) = sqrt(2/omega_i) in units hbar = M = 1 —
 * a factor sqrt(2) wider than the single-particle oscillator lengths.
 *
 * Derivatives at the origin are exact: each axis carries a polynomial
 * p(x) exp(-x^2/(2 l^2)) whose derivative is again of that form with
 * p -> p' - (x/l^2) p.
 */

#include <array>
#include <cmath>
#include <vector>

#include "anisopp/errors.hpp"
#include "anisopp/operator_algebra.hpp"
#include "anisopp/trap.hpp"

namespace anisopp {

namespace detail {

// Coefficients of H_n(x/l) in powers of x.
inline std::vector<double> hermite_coeffs(int n, double l) {
  std::vector<double> hm1{1.0};
  if (n == 0) return hm1;
  std::vector<double> h{0.0, 2.0 / l};
  for (int k = 1; k < n; ++k) {
    std::vector<double> next(static_cast<std::size_t>(k + 2), 0.0);
    for (std::size_t i = 0; i < h.size(); ++i) next[i + 1] += 2.0 / l * h[i];
    for (std::size_t i = 0; i < hm1.size(); ++i) next[i] -= 2.0 * k * hm1[i];
    hm1 = std::move(h);
    h = std::move(next);
  }
  return h;
}

} // namespace detail

constexpr int deriv_order_cap = 12;

/// Normalized 3D Hermite-Gaussian with per-axis quantum numbers and widths.
class HermiteGaussian3D {
public:
  HermiteGaussian3D(std::array<int, 3> n, std::array<double, 3> widths)
      : n_(n), width_(widths) {
    for (int i = 0; i < 3; ++i) {
      if (n_[static_cast<std::size_t>(i)] < 0) throw error("HermiteGaussian3D: negative quantum number");
      if (!(width_[static_cast<std::size_t>(i)] > 0.0))
        throw error("HermiteGaussian3D: widths must be positive");
    }
  }

  /// Relative-motion eigenstate of a trap: widths sqrt(2/omega_i) (mu = M/2).
  static HermiteGaussian3D relative_motion(const TrapConfig& trap) {
    trap.check();
    return HermiteGaussian3D(trap.n, {std::sqrt(2.0 / trap.omega[0]),
                                      std::sqrt(2.0 / trap.omega[1]),
                                      std::sqrt(2.0 / trap.omega[2])});
  }

  const std::array<int, 3>& n() const { return n_; }
  const std::array<double, 3>& widths() const { return width_; }

  /// Parity under r -> -r: (-1)^(nx+ny+nz).
  int parity() const { return (n_[0] + n_[1] + n_[2]) % 2 == 0 ? 1 : -1; }

  double evaluate(const std::array<double, 3>& r) const {
    double v = 1.0;
    for (int i = 0; i < 3; ++i) v *= axis_value(i, r[static_cast<std::size_t>(i)]);
    return v;
  }

  /// Exact partial derivative d^a_x d^b_y d^c_z psi at the origin.
  double deriv_at_origin(const MultiIndex& idx) const {
    if (idx[0] < 0 || idx[1] < 0 || idx[2] < 0) throw error("deriv_at_origin: negative order");
    if (idx[0] + idx[1] + idx[2] > deriv_order_cap)
      throw cap_exceeded("deriv_at_origin: total order " +
                         std::to_string(idx[0] + idx[1] + idx[2]) + " exceeds cap " +
                         std::to_string(deriv_order_cap));
    double v = 1.0;
    for (int i = 0; i < 3; ++i) v *= axis_deriv_at_origin(i, idx[static_cast<std::size_t>(i)]);
    return v;
  }

private:
  double norm(int axis) const {
    const int n = n_[static_cast<std::size_t>(axis)];
    const double l = width_[static_cast<std::size_t>(axis)];
    return 1.0 / std::sqrt(std::sqrt(std::acos(-1.0)) * l * std::pow(2.0, n) *
                           detail::dfactorial(n));
  }

  double axis_value(int axis, double x) const {
    const int n = n_[static_cast<std::size_t>(axis)];
    const double l = width_[static_cast<std::size_t>(axis)];
    const double u = x / l;
    double hm1 = 1.0, h = 2.0 * u;
    if (n == 0) h = 1.0;
    for (int k = 1; k < n; ++k) {
      const double hp1 = 2.0 * u * h - 2.0 * k * hm1;
      hm1 = h;
      h = hp1;
    }
    return norm(axis) * h * std::exp(-0.5 * u * u);
  }

  double axis_deriv_at_origin(int axis, int order) const {
    const double l = width_[static_cast<std::size_t>(axis)];
    std::vector<double> p = detail::hermite_coeffs(n_[static_cast<std::size_t>(axis)], l);
    for (int d = 0; d < order; ++d) {
      std::vector<double> q(p.size() + 1, 0.0);
      for (std::size_t i = 1; i < p.size(); ++i) q[i - 1] += static_cast<double>(i) * p[i];
      for (std::size_t i = 0; i < p.size(); ++i) q[i + 1] -= p[i] / (l * l);
      p = std::move(q);
    }
    return norm(axis) * p[0];
  }

  std::array<int, 3> n_;
  std::array<double, 3> width_;
};

} // namespace anisopp
