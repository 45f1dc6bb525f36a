#pragma once

/*
 * On-shell reactance (K-) matrix: storage with enforced symmetries, and the
 * three providers — diagonal from phase shifts, first-order (Born) from a
 * power-law or tabulated radial potential, and file input.
 *
 * Symmetries of K^{l'm'}_{lm} for an axially symmetric even-rank interaction:
 *   m = m'              (projection conservation along the polarizing axis)
 *   l + l' even         (parity)
 *   K(l,-m; l',-m) = K(l,+m; l',+m)
 *   K(l,m; l',m) = K(l',m; l,m)   (time reversal)
 * Entries are stored as given; validate() checks every rule and names the
 * first one broken. Reads complete missing mirrors by symmetry, so providers
 * only store the canonical set (m >= 0, l <= l').
 */

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "anisopp/angular.hpp"
#include "anisopp/errors.hpp"

namespace anisopp {

struct KEntryKey {
  int l, m, lp, mp;
  friend auto operator<=>(const KEntryKey&, const KEntryKey&) = default;
};

class KMatrix {
public:
  KMatrix(double k, int l_max) : k_(k), l_max_(l_max) {
    if (!(k > 0.0)) throw error("KMatrix: wavenumber must be positive");
    if (l_max < 0) throw error("KMatrix: negative l_max");
  }

  double k() const { return k_; }
  int l_max() const { return l_max_; }

  /// Store an entry verbatim (no canonicalization); validate() is the guard.
  void set(int l, int m, int lp, int mp, double value) {
    if (l > l_max_ || lp > l_max_) throw error("KMatrix::set: l exceeds l_max");
    entries_[KEntryKey{l, m, lp, mp}] = value;
  }

  /// Symmetry-completing read: returns the stored value of the entry or of
  /// any of its symmetry images, else 0.
  double entry(int l, int m, int lp, int mp) const {
    for (const KEntryKey& key : {KEntryKey{l, m, lp, mp}, KEntryKey{lp, mp, l, m},
                                 KEntryKey{l, -m, lp, -mp}, KEntryKey{lp, -mp, l, -m}}) {
      const auto it = entries_.find(key);
      if (it != entries_.end()) return it->second;
    }
    return 0.0;
  }

  const std::map<KEntryKey, double>& raw() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  /// Expand canonical storage to all four symmetry images of every entry.
  void fill_symmetric() {
    const auto snapshot = entries_;
    for (const auto& [key, v] : snapshot) {
      entries_.try_emplace(KEntryKey{key.lp, key.mp, key.l, key.m}, v);
      entries_.try_emplace(KEntryKey{key.l, -key.m, key.lp, -key.mp}, v);
      entries_.try_emplace(KEntryKey{key.lp, -key.mp, key.l, -key.m}, v);
    }
  }

private:
  double k_;
  int l_max_;
  std::map<KEntryKey, double> entries_;
};

/// Check every stored entry against the symmetry rules; throws
/// symmetry_violation naming the first broken rule and its indices.
inline void validate(const KMatrix& K) {
  const auto& raw = K.raw();
  for (const auto& [key, v] : raw) {
    if (!std::isfinite(v))
      throw symmetry_violation(violation::non_finite, key.l, key.m, key.lp, key.mp);
    if (key.l < 0 || key.lp < 0 || std::abs(key.m) > key.l || std::abs(key.mp) > key.lp)
      throw symmetry_violation(violation::index_range, key.l, key.m, key.lp, key.mp);
    if (v != 0.0 && key.m != key.mp)
      throw symmetry_violation(violation::m_selection, key.l, key.m, key.lp, key.mp);
    if (v != 0.0 && (key.l + key.lp) % 2 != 0)
      throw symmetry_violation(violation::parity, key.l, key.m, key.lp, key.mp);
  }
  for (const auto& [key, v] : raw) {
    const double tol = 1e-12 * std::max(1.0, std::abs(v));
    const auto flipped = raw.find(KEntryKey{key.l, -key.m, key.lp, -key.mp});
    if (flipped != raw.end() && std::abs(flipped->second - v) > tol)
      throw symmetry_violation(violation::m_sign, key.l, key.m, key.lp, key.mp);
    const auto transposed = raw.find(KEntryKey{key.lp, key.mp, key.l, key.m});
    if (transposed != raw.end() && std::abs(transposed->second - v) > tol)
      throw symmetry_violation(violation::transpose, key.l, key.m, key.lp, key.mp);
  }
}

/// Phase shifts delta_l, indexed l = 0..l_max.
struct PhaseShifts {
  std::vector<double> delta;
  int l_max() const { return static_cast<int>(delta.size()) - 1; }
};

/// Diagonal K-matrix from phase shifts: K(l,m;l,m) = tan(delta_l).
inline KMatrix isotropic(const PhaseShifts& shifts, double k) {
  if (shifts.delta.empty()) throw error("isotropic: no phase shifts given");
  KMatrix K(k, shifts.l_max());
  for (int l = 0; l <= shifts.l_max(); ++l) {
    const double d = shifts.delta[static_cast<std::size_t>(l)];
    if (!std::isfinite(d)) throw error("isotropic: non-finite phase shift");
    if (std::abs(std::cos(d)) < 1e-12)
      throw divergent_tangent("isotropic: delta_" + std::to_string(l) +
                              " is pi/2 (mod pi); tangent diverges");
    const double t = std::tan(d);
    if (t == 0.0) continue;
    for (int m = 0; m <= l; ++m) K.set(l, m, l, m, t);
  }
  validate(K);
  return K;
}

/// Axially symmetric radial interaction V(r) = V_L(r) P_L(cos theta), with
/// V_L either a power law C / r^s (s > 2) or a sampled table.
class RadialPotential {
public:
  struct PowerLaw {
    double C, s;
  };
  struct Table {
    std::vector<double> r, V;
  };

  static RadialPotential power_law(int L, double C, double s) {
    check_rank(L);
    if (!(s > 2.0))
      throw long_range("power-law exponent s = " + std::to_string(s) +
                       " <= 2: true long-range tail, no contact description");
    return RadialPotential(L, PowerLaw{C, s});
  }

  /// Dipole-dipole interaction between moments D aligned with z:
  /// V(r) = D^2 (3 cos^2 theta - 1)/r^3 = -2 D^2 / r^3 * P_2(cos theta).
  static RadialPotential dipolar(double D) { return power_law(2, -2.0 * D * D, 3.0); }

  static RadialPotential tabulated(int L, std::vector<double> r, std::vector<double> V) {
    check_rank(L);
    if (r.size() != V.size() || r.size() < 2)
      throw error("tabulated potential needs matching r/V samples (>= 2)");
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (!(r[i] > 0.0)) throw error("tabulated potential: radii must be positive");
      if (i > 0 && !(r[i] > r[i - 1])) throw error("tabulated potential: radii must increase");
    }
    return RadialPotential(L, Table{std::move(r), std::move(V)});
  }

  int anisotropy() const { return L_; }
  bool is_power_law() const { return std::holds_alternative<PowerLaw>(form_); }
  const PowerLaw& as_power_law() const { return std::get<PowerLaw>(form_); }
  const Table& as_table() const { return std::get<Table>(form_); }

private:
  RadialPotential(int L, std::variant<PowerLaw, Table> form) : L_(L), form_(std::move(form)) {}
  static void check_rank(int L) {
    if (L < 0 || L % 2 != 0) throw error("anisotropy rank L must be even and non-negative");
  }

  int L_;
  std::variant<PowerLaw, Table> form_;
};

namespace detail {

// Exact trigonometric split of the spherical Bessel function:
//   j_l(t) = S_l(1/t) sin t + C_l(1/t) cos t
// with polynomial coefficient vectors (index = power of 1/t).
inline void bessel_trig_polys(int l, std::vector<double>& S, std::vector<double>& C) {
  std::vector<double> Sm{0.0, 1.0}, Cm{};         // l = 0: sin(t)/t
  std::vector<double> Sp{}, Cp{0.0, 1.0};         // l = -1: cos(t)/t
  if (l == -1) {
    S = Sp;
    C = Cp;
    return;
  }
  for (int n = 0; n < l; ++n) {
    auto step = [&](const std::vector<double>& cur, const std::vector<double>& prev) {
      std::vector<double> next(cur.size() + 1, 0.0);
      for (std::size_t k = 0; k < cur.size(); ++k) next[k + 1] += (2.0 * n + 1.0) * cur[k];
      for (std::size_t k = 0; k < prev.size(); ++k) next[k] -= prev[k];
      return next;
    };
    std::vector<double> Sn = step(Sm, Sp);
    std::vector<double> Cn = step(Cm, Cp);
    Sp = std::move(Sm);
    Cp = std::move(Cm);
    Sm = std::move(Sn);
    Cm = std::move(Cn);
  }
  S = Sm;
  C = Cm;
}

inline std::vector<double> poly_mul(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> out(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Tail integral of j_l(t) j_lp(t) t^{2-s} over [T, inf), computed exactly from
// the trigonometric split: the oscillatory pieces int_T^inf {cos,sin}(2t) t^-p dt
// follow the integration-by-parts recursion
//   Cint(p) = -sin(2T) T^-p / 2 + (p/2) Sint(p+1)
//   Sint(p) =  cos(2T) T^-p / 2 - (p/2) Cint(p+1)
// truncated once the terms fall below machine precision (T >= 50 keeps the
// series strongly convergent for every order reached here).
inline double bessel_moment_tail(int l, int lp, double s, double T) {
  std::vector<double> Sl, Cl, Sp, Cp;
  bessel_trig_polys(l, Sl, Cl);
  bessel_trig_polys(lp, Sp, Cp);
  const auto A = poly_mul(Sl, Sp);  // sin^2 part
  const auto B = poly_mul(Cl, Cp);  // cos^2 part
  auto Dm = poly_mul(Sl, Cp);       // sin cos part
  {
    const auto D2 = poly_mul(Cl, Sp);
    if (D2.size() > Dm.size()) Dm.resize(D2.size(), 0.0);
    for (std::size_t k = 0; k < D2.size(); ++k) Dm[k] += D2[k];
  }
  const std::size_t kmax = std::max({A.size(), B.size(), Dm.size()});

  // oscillatory integrals at p = k + s - 2 for k = 0..kmax-1, by a single
  // backward pass from depth
  const int depth = 48;
  const std::size_t nn = kmax + depth;
  std::vector<double> Cint(nn + 1, 0.0), Sint(nn + 1, 0.0);
  const double s2T = std::sin(2.0 * T), c2T = std::cos(2.0 * T);
  for (std::size_t i = nn; i-- > 0;) {
    const double p = static_cast<double>(i) + s - 2.0;
    const double tp = std::pow(T, -p);
    Cint[i] = -s2T * tp / 2.0 + p / 2.0 * Sint[i + 1];
    Sint[i] = c2T * tp / 2.0 - p / 2.0 * Cint[i + 1];
  }

  double tail = 0.0;
  for (std::size_t k = 0; k < kmax; ++k) {
    const double a = k < A.size() ? A[k] : 0.0;
    const double b = k < B.size() ? B[k] : 0.0;
    const double d = k < Dm.size() ? Dm[k] : 0.0;
    const double p = static_cast<double>(k) + s - 2.0;
    if (a != 0.0 || b != 0.0) {
      // sin^2 = (1 - cos 2t)/2, cos^2 = (1 + cos 2t)/2
      const double plain = std::pow(T, 1.0 - p) / (p - 1.0);
      tail += 0.5 * (a + b) * plain + 0.5 * (b - a) * Cint[k];
    }
    if (d != 0.0) tail += 0.5 * d * Sint[k];
  }
  return tail;
}

// Series integration of j_l j_lp t^{2-s} over [0, a]; the integrand power at
// the origin is l + lp + 2 - s > -1 (checked by the caller).
inline double bessel_moment_origin(int l, int lp, double s, double a) {
  constexpr int nmax = 40;
  auto series_coeffs = [](int ll) {
    std::vector<double> c(nmax + 1);
    double dfact = 1.0;
    for (int i = 1; i <= ll; ++i) dfact *= 2.0 * i + 1.0;
    c[0] = 1.0 / dfact;
    for (int i = 1; i <= nmax; ++i) c[static_cast<std::size_t>(i)] =
        c[static_cast<std::size_t>(i - 1)] * (-0.5) / (i * (2.0 * ll + 2.0 * i + 1.0));
    return c;
  };
  const auto cl = series_coeffs(l);
  const auto cp = series_coeffs(lp);
  double acc = 0.0;
  for (int n = 0; n <= nmax; ++n) {
    double dn = 0.0;
    for (int i = 0; i <= n; ++i) dn += cl[static_cast<std::size_t>(i)] * cp[static_cast<std::size_t>(n - i)];
    const double p = l + lp + 2 * n + 2.0 - s;
    const double term = dn * std::pow(a, p + 1.0) / (p + 1.0);
    acc += term;
    if (n > 4 && std::abs(term) < 1e-17 * std::abs(acc)) break;
  }
  return acc;
}

// Q(l, lp, s) = int_0^inf j_l(t) j_lp(t) t^{2-s} dt: series near the origin,
// adaptive Gauss-Kronrod on [a, T], exact asymptotic tail beyond.
inline double bessel_moment(int l, int lp, double s) {
  const double a = 1.0;
  const double T = std::max(50.0, 20.0 * (l + lp));
  const double origin = bessel_moment_origin(l, lp, s, a);
  double err = 0.0;
  const double mid = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [l, lp, s](double t) { return sph_bessel_j(l, t) * sph_bessel_j(lp, t) * std::pow(t, 2.0 - s); },
      a, T, 14, 1e-13, &err);
  const double tail = bessel_moment_tail(l, lp, s, T);
  const double total = origin + mid + tail;
  if (err > 1e-8 * std::max(1.0, std::abs(total)))
    throw quadrature_failure("bessel_moment: quadrature error estimate " + std::to_string(err) +
                             " above tolerance");
  return total;
}

} // namespace detail

/// Radial Born integral I^(L)_{l l'} = int_0^inf x^2 dx V_L(x) j_l(kx) j_l'(kx).
/// For a power law C/r^s this is C k^{s-3} int_0^inf j_l j_l' t^{2-s} dt; the
/// integrand must be integrable at the origin (l + l' + 2 - s > -1).
inline double born_radial_integral(const RadialPotential& V, int l, int lp, double k) {
  if (!(k > 0.0)) throw error("born_radial_integral: k must be positive");
  if (l < 0 || lp < 0) throw error("born_radial_integral: negative partial wave");
  if (V.is_power_law()) {
    const auto& pl = V.as_power_law();
    if (!(l + lp + 2.0 - pl.s > -1.0))
      throw divergent_integral("born_radial_integral: integrand ~ t^" +
                               std::to_string(l + lp + 2.0 - pl.s) +
                               " at the origin is not integrable");
    if (pl.C == 0.0) return 0.0;
    return pl.C * std::pow(k, pl.s - 3.0) * detail::bessel_moment(l, lp, pl.s);
  }
  // Tabulated potential: integrate over the table's support only (linear
  // interpolation of V against log r). The missing asymptotic tail matters
  // for a contact description, so say so.
  const auto& tab = V.as_table();
  std::cerr << "anisopp: warning: tabulated potential integrated over its sampled support ["
            << tab.r.front() << ", " << tab.r.back() << "] only; the asymptotic tail is absent\n";
  auto interp = [&tab](double r) {
    const double x = std::log(r);
    std::size_t hi = 1;
    while (hi + 1 < tab.r.size() && std::log(tab.r[hi]) < x) ++hi;
    const double x0 = std::log(tab.r[hi - 1]), x1 = std::log(tab.r[hi]);
    const double w = (x - x0) / (x1 - x0);
    return (1.0 - w) * tab.V[hi - 1] + w * tab.V[hi];
  };
  double err = 0.0;
  const double val = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [&](double r) { return r * r * interp(r) * sph_bessel_j(l, k * r) * sph_bessel_j(lp, k * r); },
      tab.r.front(), tab.r.back(), 14, 1e-12, &err);
  if (err > 1e-8 * std::max(1.0, std::abs(val)))
    throw quadrature_failure("born_radial_integral: table quadrature did not converge");
  return val;
}

/// First-order (Born) reactance matrix
///   K^{l'm}_{lm} = -(2 mu / hbar^2) k I^(L)_{ll'} <lm|C^L_0|l'm>,
/// in units hbar = M = 1 (2 mu = M). Index pairs failing the angular
/// selection rules are skipped before any radial integration.
inline KMatrix born_kmatrix(const RadialPotential& V, int l_max, double k) {
  KMatrix K(k, l_max);
  const int L = V.anisotropy();
  for (int l = 0; l <= l_max; ++l) {
    for (int lp = l; lp <= l_max; ++lp) {
      if ((l + lp + L) % 2 != 0) continue;
      if (L < lp - l || L > l + lp) continue;
      const double red = reduced_c(l, L, lp);
      if (red == 0.0) continue;
      const double I = born_radial_integral(V, l, lp, k);
      for (int m = 0; m <= std::min(l, lp); ++m) {
        const double ang = detail::parity_sign(l - m) * wigner3j(l, L, lp, -m, 0, m) * red;
        const double value = -k * I * ang;
        if (value != 0.0) K.set(l, m, lp, m, value);
      }
    }
  }
  validate(K);
  return K;
}

/// Reduced Born K-matrix element <l || K^(2) || l'> for the dipole-dipole
/// interaction with moment D, at wavenumber k:
///   D^2 k <l||C^2||l'> x { 1/[l(l+1)], 1/[3(l+1)(l+2)], 1/[3l(l-1)] }
/// for l' = l, l+2, l-2. The overall sign follows the quadrature chain
/// V_2 = -2 D^2/r^3 -> I -> Wigner-Eckart, which anchors
/// a_sd(Born) = -D^2/(6 sqrt 5).
inline double born_dipolar_reduced(int l, int lp, double D, double k) {
  if (l < 0 || lp < 0) throw error("born_dipolar_reduced: negative partial wave");
  if (l == 0 && lp == 0)
    throw selection_rule("born_dipolar_reduced: rank-2 tensor cannot couple s to s");
  double bracket = 0.0;
  if (lp == l)
    bracket = 1.0 / (static_cast<double>(l) * (l + 1.0));
  else if (lp == l + 2)
    bracket = 1.0 / (3.0 * (l + 1.0) * (l + 2.0));
  else if (lp == l - 2)
    bracket = 1.0 / (3.0 * static_cast<double>(l) * (l - 1.0));
  else
    throw selection_rule("born_dipolar_reduced: l' must be l or l +/- 2");
  return D * D * k * reduced_c(l, 2, lp) * bracket;
}

struct ScatteringLengths {
  double a_ss;
  double a_sd;
};

/// a_ss = -K(0,0;0,0)/k and a_sd = -K(2,0;0,0)/k at the matrix's wavenumber.
inline ScatteringLengths scattering_lengths(const KMatrix& K) {
  return {-K.entry(0, 0, 0, 0) / K.k(), -K.entry(0, 0, 2, 0) / K.k()};
}

namespace detail {

inline std::string fmt_g17k(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

} // namespace detail

/// Write the canonical entries (m >= 0, l <= l') as
///   # k=<value> l_max=<n>
///   l m l' m' value
inline void save_kmatrix(const KMatrix& K, const std::string& path) {
  validate(K);
  std::ofstream out(path);
  if (!out) throw error("save_kmatrix: cannot open '" + path + "'");
  out << "# k=" << detail::fmt_g17k(K.k()) << " l_max=" << K.l_max() << "\n";
  std::map<KEntryKey, double> canonical;
  for (const auto& [key, v] : K.raw()) {
    KEntryKey c = key;
    if (c.l > c.lp || (c.l == c.lp && c.m > c.mp)) {
      std::swap(c.l, c.lp);
      std::swap(c.m, c.mp);
    }
    if (c.m < 0 && c.mp < 0) {
      c.m = -c.m;
      c.mp = -c.mp;
    }
    // zero placeholders that cannot be written canonically are dropped
    if (c.m < 0 || c.mp < 0) continue;
    canonical[c] = v;
  }
  for (const auto& [key, v] : canonical)
    out << key.l << " " << key.m << " " << key.lp << " " << key.mp << " "
        << detail::fmt_g17k(v) << "\n";
  if (!out) throw error("save_kmatrix: write failed for '" + path + "'");
}

inline KMatrix load_kmatrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw error("load_kmatrix: cannot open '" + path + "'");
  std::string line;
  std::size_t line_no = 0;
  double k = 0.0;
  int l_max = -1;
  bool have_header = false;
  while (std::getline(in, line) && !have_header) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string hash, kfield, lfield;
    ss >> hash >> kfield >> lfield;
    if (hash != "#" || kfield.rfind("k=", 0) != 0 || lfield.rfind("l_max=", 0) != 0)
      throw parse_error(line_no, "expected header '# k=<value> l_max=<n>'");
    try {
      std::size_t used = 0;
      k = std::stod(kfield.substr(2), &used);
      if (used != kfield.size() - 2) throw std::invalid_argument(kfield);
      l_max = std::stoi(lfield.substr(6), &used);
      if (used != lfield.size() - 6) throw std::invalid_argument(lfield);
    } catch (const std::exception&) {
      throw parse_error(line_no, "bad header values");
    }
    have_header = true;
  }
  if (!have_header) throw parse_error(line_no + 1, "missing header");
  if (!(k > 0.0) || l_max < 0) throw parse_error(line_no, "header requires k > 0 and l_max >= 0");

  KMatrix K(k, l_max);
  std::map<KEntryKey, bool> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<std::string> fields;
    std::string tok;
    while (ss >> tok) fields.push_back(tok);
    if (fields.size() != 5)
      throw parse_error(line_no, "expected 5 fields 'l m l' m' value', got " +
                                     std::to_string(fields.size()));
    int idx[4];
    double value = 0.0;
    try {
      for (int i = 0; i < 4; ++i) {
        std::size_t used = 0;
        idx[i] = std::stoi(fields[static_cast<std::size_t>(i)], &used);
        if (used != fields[static_cast<std::size_t>(i)].size()) throw std::invalid_argument(tok);
      }
      std::size_t used = 0;
      value = std::stod(fields[4], &used);
      if (used != fields[4].size()) throw std::invalid_argument(fields[4]);
    } catch (const std::exception&) {
      throw parse_error(line_no, "malformed row '" + line + "'");
    }
    const KEntryKey key{idx[0], idx[1], idx[2], idx[3]};
    if (key.m < 0 || key.mp < 0 || key.l > key.lp)
      throw parse_error(line_no, "non-canonical row (need m >= 0 and l <= l')");
    if (key.l > l_max || key.lp > l_max) throw parse_error(line_no, "l exceeds header l_max");
    if (seen.count(key)) throw parse_error(line_no, "duplicate entry");
    seen[key] = true;
    K.set(key.l, key.m, key.lp, key.mp, value);
  }
  validate(K);
  return K;
}

} // namespace anisopp
