#pragma once

/*
 * Assembly of the contact interaction from an on-shell K-matrix:
 *
 *   V_ps(r) = sum_{J even} sum_{l l'} T_J(l l'; kc) delta(r)
 *             { C^l(bra nabla / kc) x C^l'(ket nabla / kc) }_{J, 0}
 *
 * with coupling coefficients
 *
 *   T_J(l l'; kc) = -4 pi sqrt((2l+1)(2l'+1))
 *                   sum_m (-1)^m C^{J0}_{l m, l' -m} K^{l'm}_{lm}(kc) / kc
 *
 * in units hbar = M = 1. Specialized builders cover the isotropic (Omont)
 * form, the first-order (Born) form where only J = L survives, and the two
 * equivalent representations of the s-d truncated dipolar interaction.
 */

#include <array>
#include <cmath>
#include <complex>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include "anisopp/angular.hpp"
#include "anisopp/errors.hpp"
#include "anisopp/kmatrix.hpp"
#include "anisopp/operator_algebra.hpp"
#include "anisopp/render.hpp"

namespace anisopp {

enum class Gauge { zero, tensor };

enum class Provenance { general, isotropic, born, truncated_dipolar };

inline const char* provenance_name(Provenance p) {
  switch (p) {
  case Provenance::general: return "general";
  case Provenance::isotropic: return "isotropic";
  case Provenance::born: return "born";
  case Provenance::truncated_dipolar: return "truncated-dipolar";
  }
  return "unknown";
}

struct PseudoBlock {
  int J = 0;
  int l = 0;
  int lp = 0;
  double T = 0.0; // energy x volume, units hbar = M = 1
  TwoSidedOperator op;
};

struct PseudoPotentialOperator {
  double kc = 1.0;
  Provenance provenance = Provenance::general;
  Gauge gauge = Gauge::tensor; // meaningful for the truncated-dipolar form
  std::vector<PseudoBlock> blocks;
};

/// T times the block's operator, collected — the gauge-independent content
/// of a block, used for block-by-block comparisons.
inline TwoSidedOperator scaled_terms(const PseudoBlock& block) {
  TwoSidedOperator out = block.op;
  out.scale(block.T);
  return out;
}

namespace detail {

inline constexpr double coupling_cutoff = 1e-14;

inline void check_block_indices(int J, int l, int lp) {
  if (l < 0 || lp < 0) throw error("coupling: negative partial wave");
  if (J % 2 != 0) throw odd_j("coupling: odd J = " + std::to_string(J));
  if (J < std::abs(l - lp) || J > l + lp)
    throw triangle_violation("coupling: J = " + std::to_string(J) + " outside triangle for (l=" +
                             std::to_string(l) + ", l'=" + std::to_string(lp) + ")");
}

inline double coupling_T_impl(int J, int l, int lp, const KMatrix& K, double kc) {
  double sum = 0.0;
  for (int m = -std::min(l, lp); m <= std::min(l, lp); ++m) {
    const double cg = clebsch_gordan(l, m, lp, -m, J, 0);
    if (cg == 0.0) continue;
    sum += parity_sign(m) * cg * K.entry(l, m, lp, m);
  }
  return -4.0 * std::numbers::pi * std::sqrt((2.0 * l + 1.0) * (2.0 * lp + 1.0)) * sum / kc;
}

inline void warn_off_shell(const KMatrix& K, double kc) {
  if (std::abs(K.k() - kc) > 1e-6 * kc)
    std::cerr << "anisopp: warning: K-matrix wavenumber k = " << K.k()
              << " differs from collision momentum kc = " << kc
              << "; the contact operator is meant to be evaluated on shell\n";
}

} // namespace detail

/// Coupling coefficient T_J(l, l'; kc) of the K-matrix expansion; J must be
/// even and inside the triangle |l-l'| <= J <= l+l'.
inline double coupling_T(int J, int l, int lp, const KMatrix& K, double kc) {
  if (!(kc > 0.0)) throw error("coupling_T: kc must be positive");
  detail::check_block_indices(J, l, lp);
  detail::warn_off_shell(K, kc);
  return detail::coupling_T_impl(J, l, lp, K, kc);
}

/// Full expansion over partial-wave pairs l, l' <= l_max; blocks with
/// |T_J| below 1e-14 are dropped. No J-truncation is applied beyond the
/// triangle rule: a general K-matrix populates every even J it reaches.
inline PseudoPotentialOperator assemble_general(const KMatrix& K, int l_max, double kc) {
  if (!(kc > 0.0)) throw error("assemble_general: kc must be positive");
  if (l_max < 0) throw error("assemble_general: negative l_max");
  validate(K);
  detail::warn_off_shell(K, kc);
  PseudoPotentialOperator V;
  V.kc = kc;
  V.provenance = Provenance::general;
  for (int J = 0; J <= 2 * l_max; J += 2)
    for (int l = 0; l <= l_max; ++l)
      for (int lp = 0; lp <= l_max; ++lp) {
        if ((l + lp) % 2 != 0) continue;
        if (J < std::abs(l - lp) || J > l + lp) continue;
        const double T = detail::coupling_T_impl(J, l, lp, K, kc);
        if (std::abs(T) <= detail::coupling_cutoff) continue;
        V.blocks.push_back({J, l, lp, T, tensor_product(l, lp, J, kc)});
      }
  return V;
}

/// Omont form for isotropic scattering:
///   (2 pi / mu) sum_l (2l+1) (-tan delta_l / kc) delta(r) P_l(bra nabla . ket nabla / kc^2)
/// with mu = M/2, i.e. prefactor 4 pi in these units. Blocks carry the
/// homogenized Legendre operators at (J=0, l, l).
inline PseudoPotentialOperator assemble_isotropic(const PhaseShifts& shifts, int l_max,
                                                  double kc) {
  if (!(kc > 0.0)) throw error("assemble_isotropic: kc must be positive");
  if (l_max < 0) throw error("assemble_isotropic: negative l_max");
  PseudoPotentialOperator V;
  V.kc = kc;
  V.provenance = Provenance::isotropic;
  const int top = std::min(l_max, shifts.l_max());
  for (int l = 0; l <= top; ++l) {
    const double d = shifts.delta[static_cast<std::size_t>(l)];
    if (std::abs(std::cos(d)) < 1e-12)
      throw divergent_tangent("assemble_isotropic: delta_" + std::to_string(l) +
                              " is pi/2 (mod pi)");
    const double T = -4.0 * std::numbers::pi * (2.0 * l + 1.0) * std::tan(d) / kc;
    if (std::abs(T) <= detail::coupling_cutoff) continue;
    V.blocks.push_back({0, l, l, T, homogenized_legendre_dot(l, kc)});
  }
  return V;
}

/// First-order (Born) form: only the J = L compound tensor participates,
///   T_L(l l') = -4 pi sqrt((2l+1)(2l'+1)/(2L+1)) (-1)^l' <l||K^(L)||l'> / kc
/// with <l||K^(L)||l'> = -k I^(L)_{l'l} <l||C^(L)||l'> evaluated on shell.
inline PseudoPotentialOperator assemble_born(const RadialPotential& pot, int l_max, double kc) {
  if (!(kc > 0.0)) throw error("assemble_born: kc must be positive");
  if (l_max < 0) throw error("assemble_born: negative l_max");
  const int L = pot.anisotropy();
  PseudoPotentialOperator V;
  V.kc = kc;
  V.provenance = Provenance::born;
  for (int l = 0; l <= l_max; ++l)
    for (int lp = 0; lp <= l_max; ++lp) {
      if ((l + lp + L) % 2 != 0) continue;
      if (L < std::abs(l - lp) || L > l + lp) continue;
      const double red_c = reduced_c(l, L, lp);
      if (red_c == 0.0) continue;
      const double I = born_radial_integral(pot, l, lp, kc);
      const double red_k = -kc * I * red_c;
      const double T = -4.0 * std::numbers::pi *
                       std::sqrt((2.0 * l + 1.0) * (2.0 * lp + 1.0) / (2.0 * L + 1.0)) *
                       detail::parity_sign(lp) * red_k / kc;
      if (std::abs(T) <= detail::coupling_cutoff) continue;
      V.blocks.push_back({L, l, lp, T, tensor_product(l, lp, L, kc)});
    }
  return V;
}

/// Truncated dipolar interaction restricted to the s-s and s-d couplings,
///   4 pi delta(r) { a_ss + sqrt(5) a_sd [bracket] },
/// in the two equivalent representations: Gauge::zero keeps the constant,
///   1 + (3/2)(bra dz^2 + ket dz^2)/kc^2,
/// Gauge::tensor the irreducible rank-2 form,
///   [ -(bra Lap + ket Lap)/2 + (3/2)(bra dz^2 + ket dz^2) ] / kc^2.
/// They agree on harmonic-oscillator states when kc matches the state.
inline PseudoPotentialOperator truncated_dipolar(double a_ss, double a_sd, double kc,
                                                 Gauge gauge) {
  if (!(kc > 0.0)) throw error("truncated_dipolar: kc must be positive");
  PseudoPotentialOperator V;
  V.kc = kc;
  V.provenance = Provenance::truncated_dipolar;
  V.gauge = gauge;
  const double fermi = 4.0 * std::numbers::pi * a_ss;
  if (std::abs(fermi) > detail::coupling_cutoff)
    V.blocks.push_back({0, 0, 0, fermi, tensor_product(0, 0, 0, kc)});
  const double T = 4.0 * std::numbers::pi * std::sqrt(5.0) * a_sd;
  if (std::abs(T) <= detail::coupling_cutoff) return V;
  if (gauge == Gauge::tensor) {
    V.blocks.push_back({2, 0, 2, T, tensor_product(0, 2, 2, kc)});
    V.blocks.push_back({2, 2, 0, T, tensor_product(2, 0, 2, kc)});
  } else {
    const double inv2 = 1.0 / (kc * kc);
    TwoSidedOperator ket_side, bra_side;
    ket_side.kc = bra_side.kc = kc;
    ket_side.add({0, 0, 0}, {0, 0, 0}, {0.5, 0.0});
    ket_side.add({0, 0, 0}, {0, 0, 2}, {1.5 * inv2, 0.0});
    bra_side.add({0, 0, 0}, {0, 0, 0}, {0.5, 0.0});
    bra_side.add({0, 0, 2}, {0, 0, 0}, {1.5 * inv2, 0.0});
    V.blocks.push_back({2, 0, 2, T, ket_side});
    V.blocks.push_back({2, 2, 0, T, bra_side});
  }
  return V;
}

/// On-shell momentum kernel of the contact interaction between plane waves,
///   v(k, k') = -(2/pi) sum_{l l' m} i^{l'-l} K^{l'm}_{lm} / kc
///              Y*_{l'm}(k'hat) Y_{lm}(khat),
/// at |k| = |k'| = kc. Directions must be unit vectors (1e-12).
inline std::complex<double> kernel(const KMatrix& K, const std::array<double, 3>& khat,
                                   const std::array<double, 3>& kphat, double kc) {
  if (!(kc > 0.0)) throw error("kernel: kc must be positive");
  auto check_unit = [](const std::array<double, 3>& v) {
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (std::abs(n - 1.0) > 1e-12) throw error("kernel: direction is not a unit vector");
  };
  check_unit(khat);
  check_unit(kphat);
  detail::warn_off_shell(K, kc);
  static constexpr std::complex<double> ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  std::complex<double> sum = 0.0;
  for (int l = 0; l <= K.l_max(); ++l)
    for (int lp = 0; lp <= K.l_max(); ++lp)
      for (int m = -std::min(l, lp); m <= std::min(l, lp); ++m) {
        const double kk = K.entry(l, m, lp, m);
        if (kk == 0.0) continue;
        const std::complex<double> phase = ipow[((lp - l) % 4 + 4) % 4];
        sum += phase * kk / kc * std::conj(spherical_harmonic(lp, m, kphat)) *
               spherical_harmonic(l, m, khat);
      }
  return -2.0 / std::numbers::pi * sum;
}

struct CouplingTable {
  struct Row {
    int J, l, lp;
    double T;
  };
  double kc = 1.0;
  std::vector<Row> rows;
};

/// All coupling coefficients reachable from K up to l_max, in deterministic
/// (J, l, l') order; zero rows are omitted.
inline CouplingTable coupling_table(const KMatrix& K, int l_max, double kc) {
  detail::warn_off_shell(K, kc);
  CouplingTable table;
  table.kc = kc;
  for (int J = 0; J <= 2 * l_max; J += 2)
    for (int l = 0; l <= l_max; ++l)
      for (int lp = 0; lp <= l_max; ++lp) {
        if ((l + lp) % 2 != 0) continue;
        if (J < std::abs(l - lp) || J > l + lp) continue;
        const double T = detail::coupling_T_impl(J, l, lp, K, kc);
        if (std::abs(T) <= detail::coupling_cutoff) continue;
        table.rows.push_back({J, l, lp, T});
      }
  return table;
}

inline std::string to_csv(const CouplingTable& table) {
  std::string out = "J,l,lp,T\n";
  for (const auto& row : table.rows)
    out += std::to_string(row.J) + "," + std::to_string(row.l) + "," + std::to_string(row.lp) +
           "," + detail::fmt_g17(row.T) + "\n";
  return out;
}

} // namespace anisopp
