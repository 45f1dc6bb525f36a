#pragma once

/*
 * Angular-momentum algebra and the special functions the rest of the library
 * consumes: Wigner 3j symbols, Clebsch-Gordan coefficients, reduced matrix
 * elements of the C-tensor, spherical Bessel/Neumann functions, Legendre
 * polynomials and spherical harmonics.
 *
 * The 3j symbol is evaluated from Racah's single-sum formula with exact
 * rational arithmetic (boost::multiprecision), so small-j values are correct
 * to the last double-precision digit and large-j values do not suffer from
 * cancellation in the alternating sum. Integer angular momenta only.
 */

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "anisopp/errors.hpp"

namespace anisopp {

/// Partial-wave label (l, m) with |m| <= l.
struct AngularIndex {
  int l = 0;
  int m = 0;
  bool valid() const { return l >= 0 && std::abs(m) <= l; }
  friend auto operator<=>(const AngularIndex&, const AngularIndex&) = default;
};

namespace detail {

using big_int = boost::multiprecision::cpp_int;
using big_rational = boost::multiprecision::cpp_rational;
using big_float = boost::multiprecision::cpp_bin_float_50;

// Largest factorial argument reachable from wigner3j with j <= 40 is
// (j1+j2+j3+1)! = 121!; the table leaves headroom.
inline constexpr int max_factorial_arg = 170;

inline const std::vector<big_int>& factorial_table() {
  static const std::vector<big_int> table = [] {
    std::vector<big_int> t(max_factorial_arg + 1);
    t[0] = 1;
    for (int n = 1; n <= max_factorial_arg; ++n) t[n] = t[n - 1] * n;
    return t;
  }();
  return table;
}

inline const big_int& big_factorial(int n) {
  if (n < 0 || n > max_factorial_arg)
    throw error("factorial argument out of supported range: " + std::to_string(n));
  return factorial_table()[static_cast<std::size_t>(n)];
}

inline int parity_sign(long long p) { return (((p % 2) + 2) % 2 == 0) ? 1 : -1; }

inline bool triangle_ok(int j1, int j2, int j3) {
  return j3 >= std::abs(j1 - j2) && j3 <= j1 + j2;
}

// Small factorials in double, enough for normalization factors up to 170!.
inline double dfactorial(int n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(171);
    t[0] = 1.0;
    for (int i = 1; i <= 170; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  if (n < 0 || n > 170) throw error("factorial argument out of range");
  return table[static_cast<std::size_t>(n)];
}

} // namespace detail

/// Wigner 3j symbol (j1 j2 j3; m1 m2 m3) for integer arguments.
/// Selection-rule failures (triangle, projection sum, |m| > j) return 0.
inline double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3) {
  using namespace detail;
  if (j1 < 0 || j2 < 0 || j3 < 0) return 0.0;
  if (std::abs(m1) > j1 || std::abs(m2) > j2 || std::abs(m3) > j3) return 0.0;
  if (m1 + m2 + m3 != 0) return 0.0;
  if (!triangle_ok(j1, j2, j3)) return 0.0;

  const int tmin = std::max({0, j2 - j3 - m1, j1 - j3 + m2});
  const int tmax = std::min({j1 + j2 - j3, j1 - m1, j2 + m2});
  if (tmin > tmax) return 0.0;

  big_rational sum = 0;
  for (int t = tmin; t <= tmax; ++t) {
    big_int denom = big_factorial(t) * big_factorial(j1 + j2 - j3 - t) *
                    big_factorial(j1 - m1 - t) * big_factorial(j2 + m2 - t) *
                    big_factorial(j3 - j2 + m1 + t) * big_factorial(j3 - j1 - m2 + t);
    big_rational term(1, denom);
    if (t % 2 != 0) term = -term;
    sum += term;
  }
  if (sum == 0) return 0.0;

  // Triangle coefficient times the projection factorials; the square root is
  // taken in extended precision because the product overflows double.
  big_rational prefac(big_factorial(j1 + j2 - j3) * big_factorial(j1 - j2 + j3) *
                          big_factorial(-j1 + j2 + j3) * big_factorial(j1 + m1) *
                          big_factorial(j1 - m1) * big_factorial(j2 + m2) *
                          big_factorial(j2 - m2) * big_factorial(j3 + m3) *
                          big_factorial(j3 - m3),
                      big_factorial(j1 + j2 + j3 + 1));

  const big_float value = sqrt(big_float(prefac)) * big_float(sum);
  return parity_sign(j1 - j2 - m3) * static_cast<double>(value);
}

/// Clebsch-Gordan coefficient C^{JM}_{j1 m1, j2 m2}; 0 on selection failure.
inline double clebsch_gordan(int j1, int m1, int j2, int m2, int J, int M) {
  if (m1 + m2 != M) return 0.0;
  const double w = wigner3j(j1, j2, J, m1, m2, -M);
  if (w == 0.0) return 0.0;
  return detail::parity_sign(j1 - j2 + M) * std::sqrt(2.0 * J + 1.0) * w;
}

/// Reduced matrix element <l || C^(L) || l'> of the normalized spherical
/// harmonic; vanishes unless l + L + l' is even and the triangle rule holds.
inline double reduced_c(int l, int L, int lp) {
  if (L < 0) throw error("reduced_c: negative rank");
  const double w = wigner3j(l, L, lp, 0, 0, 0);
  if (w == 0.0) return 0.0;
  return detail::parity_sign(l) * std::sqrt((2.0 * l + 1.0) * (2.0 * lp + 1.0)) * w;
}

namespace detail {

// Power series j_l(x) = x^l/(2l+1)!! * sum_k (-x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1)),
// used for small x where the closed forms cancel.
inline double sph_bessel_j_series(int l, double x) {
  double dfact = 1.0; // (2l+1)!!
  for (int i = 1; i <= l; ++i) dfact *= 2.0 * i + 1.0;
  double term = std::pow(x, l) / dfact;
  double sum = term;
  const double x2 = x * x;
  for (int k = 1; k <= 40; ++k) {
    term *= -x2 / (2.0 * k * (2.0 * l + 2.0 * k + 1.0));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Downward (Miller) recursion for j_l when x < l; normalized against the
// closed-form j_0 or j_1, whichever is better conditioned.
inline double sph_bessel_j_downward(int l, double x) {
  const int start = l + 30;
  double fp1 = 0.0;
  double f = 1e-30;
  double target = 0.0;
  for (int n = start; n >= 1; --n) {
    const double fm1 = (2.0 * n + 1.0) / x * f - fp1;
    fp1 = f;
    f = fm1;
    if (n - 1 == l) target = f;
    if (std::abs(f) > 1e250) {
      f *= 1e-250;
      fp1 *= 1e-250;
      target *= 1e-250;
    }
  }
  // f = scaled j_0, fp1 = scaled j_1
  const double j0 = std::sin(x) / x;
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  const double scale = (std::abs(j0) >= std::abs(j1)) ? f / j0 : fp1 / j1;
  return target / scale;
}

} // namespace detail

/// Spherical Bessel function of the first kind, j_l(x), x >= 0.
/// Downward recursion with normalization below the turning point (x < l),
/// upward recursion otherwise; series for small arguments.
inline double sph_bessel_j(int l, double x) {
  if (l < 0) throw std::domain_error("sph_bessel_j: negative order");
  if (x < 0.0) throw std::domain_error("sph_bessel_j: negative argument");
  if (x == 0.0) return l == 0 ? 1.0 : 0.0;
  if (x < 0.5) return detail::sph_bessel_j_series(l, x);
  if (l == 0) return std::sin(x) / x;
  if (l == 1) return std::sin(x) / (x * x) - std::cos(x) / x;
  if (x < static_cast<double>(l)) return detail::sph_bessel_j_downward(l, x);
  double jm1 = std::sin(x) / x;
  double j = std::sin(x) / (x * x) - std::cos(x) / x;
  for (int n = 1; n < l; ++n) {
    const double jp1 = (2.0 * n + 1.0) / x * j - jm1;
    jm1 = j;
    j = jp1;
  }
  return j;
}

/// Spherical Neumann function n_l(x), x > 0; upward recursion is stable for
/// the irregular solution at every order.
inline double sph_bessel_n(int l, double x) {
  if (l < 0) throw std::domain_error("sph_bessel_n: negative order");
  if (x <= 0.0) throw std::domain_error("sph_bessel_n: requires x > 0");
  double nm1 = -std::cos(x) / x;
  if (l == 0) return nm1;
  double n = -std::cos(x) / (x * x) - std::sin(x) / x;
  for (int k = 1; k < l; ++k) {
    const double np1 = (2.0 * k + 1.0) / x * n - nm1;
    nm1 = n;
    n = np1;
  }
  return n;
}

/// Legendre polynomial P_L(u) by the three-term recurrence.
inline double legendre(int L, double u) {
  if (L < 0) throw std::domain_error("legendre: negative degree");
  if (L == 0) return 1.0;
  double pm1 = 1.0;
  double p = u;
  for (int n = 1; n < L; ++n) {
    const double pp1 = ((2.0 * n + 1.0) * u * p - n * pm1) / (n + 1.0);
    pm1 = p;
    p = pp1;
  }
  return p;
}

/// Spherical harmonic Y_lm(theta, phi), Condon-Shortley phase convention.
inline std::complex<double> spherical_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw std::domain_error("spherical_harmonic: |m| > l");
  const int ma = std::abs(m);
  const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * std::acos(-1.0)) *
                                detail::dfactorial(l - ma) / detail::dfactorial(l + ma));
  // std::assoc_legendre omits the Condon-Shortley phase; restore it here.
  const double plm = detail::parity_sign(ma) * std::assoc_legendre(static_cast<unsigned>(l),
                                                                   static_cast<unsigned>(ma),
                                                                   std::cos(theta));
  const std::complex<double> e = std::polar(1.0, ma * phi);
  std::complex<double> y = norm * plm * e;
  if (m < 0) y = static_cast<double>(detail::parity_sign(ma)) * std::conj(y);
  return y;
}

/// Y_lm evaluated at a direction given as a unit vector.
inline std::complex<double> spherical_harmonic(int l, int m, const std::array<double, 3>& nhat) {
  const double theta = std::acos(std::clamp(nhat[2], -1.0, 1.0));
  const double phi = std::atan2(nhat[1], nhat[0]);
  return spherical_harmonic(l, m, theta, phi);
}

/// Normalized spherical harmonic C^l_m = sqrt(4 pi / (2l+1)) Y_lm.
inline std::complex<double> c_tensor_angular(int l, int m, const std::array<double, 3>& nhat) {
  return std::sqrt(4.0 * std::acos(-1.0) / (2.0 * l + 1.0)) * spherical_harmonic(l, m, nhat);
}

} // namespace anisopp
