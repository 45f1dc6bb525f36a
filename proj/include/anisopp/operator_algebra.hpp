#pragma once

/*
 * Multivariate derivative polynomials and their angular-momentum couplings.
 *
 * A DerivativePolynomial is a complex-coefficient polynomial in the Cartesian
 * partial derivatives (dx, dy, dz) acting on one side (the ket); a
 * TwoSidedOperator carries independent bra-side and ket-side monomials.
 * The C-tensor gradient operators C^l_m(nabla/kc) expand into such
 * polynomials, and their Clebsch-Gordan tensor products form the blocks of
 * the contact interaction.
 */

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "anisopp/angular.hpp"
#include "anisopp/errors.hpp"

namespace anisopp {

/// Orders (a, b, c) of d/dx, d/dy, d/dz in one monomial.
using MultiIndex = std::array<int, 3>;

using Complex = std::complex<double>;

namespace detail {

inline int total_order(const MultiIndex& idx) { return idx[0] + idx[1] + idx[2]; }

// Drop coefficients that are pure cancellation residue relative to the
// largest term; exact zeros are never stored.
template <typename Map>
void prune(Map& terms, double rel_eps = 1e-13) {
  double max_abs = 0.0;
  for (const auto& [idx, c] : terms) max_abs = std::max(max_abs, std::abs(c));
  const double cut = max_abs * rel_eps;
  for (auto it = terms.begin(); it != terms.end();) {
    if (std::abs(it->second) <= cut)
      it = terms.erase(it);
    else
      ++it;
  }
}

} // namespace detail

/// One-sided (ket) derivative polynomial with a reference wavenumber kc.
struct DerivativePolynomial {
  using TermMap = std::map<MultiIndex, Complex>;
  TermMap terms;
  double kc = 1.0;

  void add(const MultiIndex& idx, Complex coeff) {
    auto [it, inserted] = terms.try_emplace(idx, coeff);
    if (!inserted) it->second += coeff;
  }

  DerivativePolynomial& scale(Complex factor) {
    for (auto& [idx, c] : terms) c *= factor;
    return *this;
  }

  /// Total derivative order if every term has the same one.
  std::optional<int> homogeneous_order() const {
    std::optional<int> order;
    for (const auto& [idx, c] : terms) {
      const int d = detail::total_order(idx);
      if (!order)
        order = d;
      else if (*order != d)
        return std::nullopt;
    }
    return order;
  }
};

/// Bra x ket derivative polynomial (coefficients on pairs of monomials).
struct TwoSidedOperator {
  using Key = std::pair<MultiIndex, MultiIndex>;
  using TermMap = std::map<Key, Complex>;
  TermMap terms;
  double kc = 1.0;

  void add(const MultiIndex& bra, const MultiIndex& ket, Complex coeff) {
    auto [it, inserted] = terms.try_emplace(Key{bra, ket}, coeff);
    if (!inserted) it->second += coeff;
  }

  TwoSidedOperator& scale(Complex factor) {
    for (auto& [idx, c] : terms) c *= factor;
    return *this;
  }

  std::optional<std::pair<int, int>> homogeneous_orders() const {
    std::optional<std::pair<int, int>> orders;
    for (const auto& [key, c] : terms) {
      const std::pair<int, int> d{detail::total_order(key.first), detail::total_order(key.second)};
      if (!orders)
        orders = d;
      else if (*orders != d)
        return std::nullopt;
    }
    return orders;
  }
};

inline DerivativePolynomial operator*(const DerivativePolynomial& a, const DerivativePolynomial& b) {
  DerivativePolynomial out;
  out.kc = a.kc;
  for (const auto& [ia, ca] : a.terms)
    for (const auto& [ib, cb] : b.terms)
      out.add({ia[0] + ib[0], ia[1] + ib[1], ia[2] + ib[2]}, ca * cb);
  return out;
}

inline TwoSidedOperator operator*(const TwoSidedOperator& a, const TwoSidedOperator& b) {
  TwoSidedOperator out;
  out.kc = a.kc;
  for (const auto& [ka, ca] : a.terms)
    for (const auto& [kb, cb] : b.terms) {
      const MultiIndex bra{ka.first[0] + kb.first[0], ka.first[1] + kb.first[1],
                           ka.first[2] + kb.first[2]};
      const MultiIndex ket{ka.second[0] + kb.second[0], ka.second[1] + kb.second[1],
                           ka.second[2] + kb.second[2]};
      out.add(bra, ket, ca * cb);
    }
  return out;
}

/// Outer product: bra-side polynomial times ket-side polynomial.
inline TwoSidedOperator outer(const DerivativePolynomial& bra, const DerivativePolynomial& ket) {
  TwoSidedOperator out;
  out.kc = ket.kc;
  for (const auto& [ib, cb] : bra.terms)
    for (const auto& [ik, ck] : ket.terms) out.add(ib, ik, cb * ck);
  return out;
}

/// Largest coefficient difference between two polynomials (for comparisons).
inline double max_coefficient_difference(const DerivativePolynomial& a,
                                         const DerivativePolynomial& b) {
  double d = 0.0;
  for (const auto& [idx, c] : a.terms) {
    const auto it = b.terms.find(idx);
    d = std::max(d, std::abs(c - (it == b.terms.end() ? Complex{} : it->second)));
  }
  for (const auto& [idx, c] : b.terms)
    if (!a.terms.count(idx)) d = std::max(d, std::abs(c));
  return d;
}

inline double max_coefficient_difference(const TwoSidedOperator& a, const TwoSidedOperator& b) {
  double d = 0.0;
  for (const auto& [key, c] : a.terms) {
    const auto it = b.terms.find(key);
    d = std::max(d, std::abs(c - (it == b.terms.end() ? Complex{} : it->second)));
  }
  for (const auto& [key, c] : b.terms)
    if (!a.terms.count(key)) d = std::max(d, std::abs(c));
  return d;
}

namespace detail {

// Spherical components of the gradient:
//   nabla_{+1} = -(dx + i dy)/sqrt(2),  nabla_{-1} = (dx - i dy)/sqrt(2),
//   nabla_0 = dz.
inline DerivativePolynomial spherical_nabla(int mu) {
  DerivativePolynomial p;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  switch (mu) {
  case +1:
    p.add({1, 0, 0}, {-inv_sqrt2, 0.0});
    p.add({0, 1, 0}, {0.0, -inv_sqrt2});
    break;
  case -1:
    p.add({1, 0, 0}, {inv_sqrt2, 0.0});
    p.add({0, 1, 0}, {0.0, -inv_sqrt2});
    break;
  case 0:
    p.add({0, 0, 1}, {1.0, 0.0});
    break;
  default:
    throw error("spherical_nabla: component out of range");
  }
  return p;
}

inline DerivativePolynomial poly_pow(const DerivativePolynomial& base, int n) {
  DerivativePolynomial out;
  out.kc = base.kc;
  out.add({0, 0, 0}, {1.0, 0.0});
  for (int i = 0; i < n; ++i) out = out * base;
  return out;
}

inline TwoSidedOperator op_pow(const TwoSidedOperator& base, int n) {
  TwoSidedOperator out;
  out.kc = base.kc;
  out.add({0, 0, 0}, {0, 0, 0}, {1.0, 0.0});
  for (int i = 0; i < n; ++i) out = out * base;
  return out;
}

} // namespace detail

/// C^l_m(nabla/kc): the harmonic derivative polynomial
///   kc^-l [(l-m)!(l+m)!]^{1/2} sum_{p+q+r=l, p-q=m}
///       (1/sqrt2)^{p+q} / (p! q! r!) nabla_{+1}^p nabla_{-1}^q nabla_0^r,
/// fully expanded into Cartesian monomials.
inline DerivativePolynomial c_tensor_nabla(int l, int m, double kc) {
  if (l < 0 || std::abs(m) > l) throw error("c_tensor_nabla: |m| > l");
  if (!(kc > 0.0)) throw error("c_tensor_nabla: kc must be positive");
  DerivativePolynomial out;
  out.kc = kc;
  const double root = std::sqrt(detail::dfactorial(l - m) * detail::dfactorial(l + m));
  for (int p = 0; p <= l; ++p) {
    const int q = p - m;
    if (q < 0 || p + q > l) continue;
    const int r = l - p - q;
    const double coeff = root * std::pow(1.0 / std::sqrt(2.0), p + q) /
                         (detail::dfactorial(p) * detail::dfactorial(q) * detail::dfactorial(r));
    DerivativePolynomial mono = detail::poly_pow(detail::spherical_nabla(+1), p) *
                                detail::poly_pow(detail::spherical_nabla(-1), q) *
                                detail::poly_pow(detail::spherical_nabla(0), r);
    for (const auto& [idx, c] : mono.terms) out.add(idx, coeff * c);
  }
  out.scale(std::pow(kc, -l));
  detail::prune(out.terms);
  return out;
}

/// Coupled block { C^l(bra nabla / kc) x C^l'(ket nabla / kc) }_{J, M=0}.
/// Only even J is physical for axially symmetric interactions; odd J and
/// triangle violations are rejected.
inline TwoSidedOperator tensor_product(int l, int lp, int J, double kc) {
  if (l < 0 || lp < 0) throw error("tensor_product: negative rank");
  if (J < std::abs(l - lp) || J > l + lp)
    throw triangle_violation("tensor_product: J=" + std::to_string(J) + " outside [" +
                             std::to_string(std::abs(l - lp)) + ", " + std::to_string(l + lp) +
                             "]");
  if (J % 2 != 0)
    throw odd_j("tensor_product: odd J=" + std::to_string(J) +
                " excluded by axial symmetry (M=0 block)");
  TwoSidedOperator out;
  out.kc = kc;
  const int mmax = std::min(l, lp);
  for (int m = -mmax; m <= mmax; ++m) {
    const double cg = clebsch_gordan(l, m, lp, -m, J, 0);
    if (cg == 0.0) continue;
    const DerivativePolynomial bra = c_tensor_nabla(l, m, kc);
    const DerivativePolynomial ket = c_tensor_nabla(lp, -m, kc);
    for (const auto& [ib, cb] : bra.terms)
      for (const auto& [ik, ck] : ket.terms) out.add(ib, ik, cg * cb * ck);
  }
  detail::prune(out.terms);
  return out;
}

/// Iterated-coupling form of the C-tensor,
///   kc^-l sqrt((2l-1)!!/l!) {...{{nabla x nabla}_2 x nabla}_3 ... x nabla}_{l m},
/// coupling each gradient to the maximal rank. Equals c_tensor_nabla term
/// for term.
inline DerivativePolynomial nested_representation(int l, int m, double kc) {
  if (l < 0 || std::abs(m) > l) throw error("nested_representation: |m| > l");
  if (!(kc > 0.0)) throw error("nested_representation: kc must be positive");
  DerivativePolynomial out;
  out.kc = kc;
  if (l == 0) {
    out.add({0, 0, 0}, {1.0, 0.0});
    return out;
  }
  // rank-1 seed: components mu = -1, 0, +1
  std::vector<DerivativePolynomial> cur(3);
  for (int mu = -1; mu <= 1; ++mu) cur[static_cast<std::size_t>(mu + 1)] = detail::spherical_nabla(mu);
  for (int rank = 2; rank <= l; ++rank) {
    std::vector<DerivativePolynomial> next(static_cast<std::size_t>(2 * rank + 1));
    for (auto& p : next) p.kc = kc;
    for (int mu = -rank; mu <= rank; ++mu) {
      for (int m1 = -(rank - 1); m1 <= rank - 1; ++m1) {
        const int m2 = mu - m1;
        if (std::abs(m2) > 1) continue;
        const double cg = clebsch_gordan(rank - 1, m1, 1, m2, rank, mu);
        if (cg == 0.0) continue;
        DerivativePolynomial prod =
            cur[static_cast<std::size_t>(m1 + rank - 1)] * detail::spherical_nabla(m2);
        for (const auto& [idx, c] : prod.terms)
          next[static_cast<std::size_t>(mu + rank)].add(idx, cg * c);
      }
    }
    cur = std::move(next);
  }
  double dfact = 1.0; // (2l-1)!!
  for (int i = 1; i <= l; ++i) dfact *= 2.0 * i - 1.0;
  const double norm = std::sqrt(dfact / detail::dfactorial(l)) * std::pow(kc, -l);
  for (const auto& [idx, c] : cur[static_cast<std::size_t>(m + l)].terms) out.add(idx, norm * c);
  detail::prune(out.terms);
  return out;
}

/// Homogenized P_l(bra nabla . ket nabla / kc^2): every power of the dot
/// product below l is padded with (bra Laplacian)(ket Laplacian) factors so
/// the result is homogeneous of degree (l, l). Built directly from the
/// Legendre coefficients; equals (-1)^l sqrt(2l+1) tensor_product(l, l, 0).
inline TwoSidedOperator homogenized_legendre_dot(int l, double kc) {
  if (l < 0) throw error("homogenized_legendre_dot: negative degree");
  if (!(kc > 0.0)) throw error("homogenized_legendre_dot: kc must be positive");
  // coefficients of P_l in the monomial basis, via the recurrence
  std::vector<std::vector<double>> P{{1.0}, {0.0, 1.0}};
  for (int n = 1; n < l; ++n) {
    std::vector<double> next(static_cast<std::size_t>(n + 2), 0.0);
    for (std::size_t k = 0; k < P[static_cast<std::size_t>(n)].size(); ++k)
      next[k + 1] += (2.0 * n + 1.0) / (n + 1.0) * P[static_cast<std::size_t>(n)][k];
    for (std::size_t k = 0; k < P[static_cast<std::size_t>(n - 1)].size(); ++k)
      next[k] -= static_cast<double>(n) / (n + 1.0) * P[static_cast<std::size_t>(n - 1)][k];
    P.push_back(std::move(next));
  }

  TwoSidedOperator dot, bra_lap, ket_lap;
  dot.kc = bra_lap.kc = ket_lap.kc = kc;
  for (int axis = 0; axis < 3; ++axis) {
    MultiIndex e{0, 0, 0};
    e[static_cast<std::size_t>(axis)] = 1;
    MultiIndex e2{0, 0, 0};
    e2[static_cast<std::size_t>(axis)] = 2;
    dot.add(e, e, {1.0, 0.0});
    bra_lap.add(e2, {0, 0, 0}, {1.0, 0.0});
    ket_lap.add({0, 0, 0}, e2, {1.0, 0.0});
  }
  const TwoSidedOperator pad = bra_lap * ket_lap;

  TwoSidedOperator out;
  out.kc = kc;
  const auto& coeffs = P[static_cast<std::size_t>(l)];
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] == 0.0) continue;
    // parity of P_l guarantees l - j is even
    const TwoSidedOperator term = detail::op_pow(dot, static_cast<int>(j)) *
                                  detail::op_pow(pad, (l - static_cast<int>(j)) / 2);
    for (const auto& [key, c] : term.terms) out.add(key.first, key.second, coeffs[j] * c);
  }
  out.scale(std::pow(kc, -2 * l));
  detail::prune(out.terms);
  return out;
}

} // namespace anisopp
