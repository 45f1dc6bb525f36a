#pragma once

/*
 * Matrix elements of the contact operator between harmonic-oscillator
 * states: the zero-range limit contracts each block's derivative monomials
 * with exact derivatives of bra and ket at the origin,
 *
 *   <psi| V |phi> = sum_blocks T sum_terms coeff
 *                   (d^bra psi)(0) (d^ket phi)(0).
 *
 * A finite-difference contraction of the same blocks serves as an
 * independent numerical check.
 */

#include <complex>
#include <vector>

#include "anisopp/pseudopotential.hpp"
#include "anisopp/states.hpp"

namespace anisopp {

struct BlockContribution {
  int J = 0, l = 0, lp = 0;
  std::complex<double> value;
};

struct MatrixElementResult {
  std::complex<double> value;
  std::vector<BlockContribution> blocks; // summed in order, reproduces value exactly
};

/// Analytic expectation <bra| V |ket>; real Hermite-Gaussian states, so the
/// bra needs no conjugation. Blocks are evaluated in stored order.
inline MatrixElementResult expectation(const PseudoPotentialOperator& V,
                                       const HermiteGaussian3D& bra,
                                       const HermiteGaussian3D& ket) {
  MatrixElementResult result;
  result.value = 0.0;
  for (const auto& block : V.blocks) {
    std::complex<double> acc = 0.0;
    for (const auto& [key, coeff] : block.op.terms)
      acc += coeff * bra.deriv_at_origin(key.first) * ket.deriv_at_origin(key.second);
    acc *= block.T;
    result.blocks.push_back({block.J, block.l, block.lp, acc});
    result.value += acc;
  }
  return result;
}

namespace detail {

// Central difference for the mixed derivative d^a_x d^b_y d^c_z at the origin
// as the a,b,c-fold powers of the two-point first-derivative stencil per
// axis: nodes (order - 2i) h, weights binom(order, i) (-1)^i / (2h)^order.
// Second-order accurate in h.
inline double fd_deriv_at_origin(const HermiteGaussian3D& psi, const MultiIndex& idx, double h) {
  double sum = 0.0;
  for (int i = 0; i <= idx[0]; ++i) {
    const double wx = dfactorial(idx[0]) / (dfactorial(i) * dfactorial(idx[0] - i)) *
                      (i % 2 == 0 ? 1.0 : -1.0);
    for (int j = 0; j <= idx[1]; ++j) {
      const double wy = dfactorial(idx[1]) / (dfactorial(j) * dfactorial(idx[1] - j)) *
                        (j % 2 == 0 ? 1.0 : -1.0);
      for (int k = 0; k <= idx[2]; ++k) {
        const double wz = dfactorial(idx[2]) / (dfactorial(k) * dfactorial(idx[2] - k)) *
                          (k % 2 == 0 ? 1.0 : -1.0);
        const std::array<double, 3> r{(idx[0] - 2.0 * i) * h, (idx[1] - 2.0 * j) * h,
                                      (idx[2] - 2.0 * k) * h};
        sum += wx * wy * wz * psi.evaluate(r);
      }
    }
  }
  return sum / std::pow(2.0 * h, idx[0] + idx[1] + idx[2]);
}

} // namespace detail

/// Contraction with every derivative replaced by an O(h^2) central
/// difference; no extrapolation.
inline std::complex<double> fd_expectation_raw(const PseudoPotentialOperator& V,
                                               const HermiteGaussian3D& bra,
                                               const HermiteGaussian3D& ket, double h) {
  if (!(h > 0.0)) throw error("fd_expectation_raw: step must be positive");
  std::complex<double> total = 0.0;
  for (const auto& block : V.blocks) {
    std::complex<double> acc = 0.0;
    for (const auto& [key, coeff] : block.op.terms)
      acc += coeff * detail::fd_deriv_at_origin(bra, key.first, h) *
             detail::fd_deriv_at_origin(ket, key.second, h);
    total += block.T * acc;
  }
  return total;
}

/// Finite-difference oracle with one Richardson step:
/// (4 F(h/2) - F(h)) / 3, accurate to O(h^4).
inline std::complex<double> fd_oracle(const PseudoPotentialOperator& V,
                                      const HermiteGaussian3D& bra, const HermiteGaussian3D& ket,
                                      double h) {
  const std::complex<double> coarse = fd_expectation_raw(V, bra, ket, h);
  const std::complex<double> fine = fd_expectation_raw(V, bra, ket, 0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

/// Default step: smallest Gaussian width over 1000.
inline double default_fd_step(const HermiteGaussian3D& bra, const HermiteGaussian3D& ket) {
  double w = bra.widths()[0];
  for (double x : bra.widths()) w = std::min(w, x);
  for (double x : ket.widths()) w = std::min(w, x);
  return w / 1000.0;
}

} // namespace anisopp
