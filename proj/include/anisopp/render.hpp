#pragma once

/*
 * Deterministic renderings of derivative polynomials: a canonical text form,
 * LaTeX in the (dx + i dy, dx - i dy, dz) basis, and a machine format that
 * round-trips through parse_machine_*.
 *
 * Machine format: header "# kc=<value>", then one term per line,
 *   one-sided:  "ket:a,b,c re im"
 *   two-sided:  "bra:a,b,c ket:a,b,c re im"
 * in canonical (lexicographic) term order, full double precision.
 */

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "anisopp/operator_algebra.hpp"

namespace anisopp {

enum class RenderFormat { text, latex, machine };

namespace detail {

inline std::string fmt_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Recognize x as a fraction p/q with a small denominator (continued fractions).
inline bool to_fraction(double x, long long& p, long long& q, long long max_q = 1000000,
                        double eps = 1e-10) {
  const double sign = x < 0 ? -1.0 : 1.0;
  x = std::abs(x);
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = x;
  for (int i = 0; i < 64; ++i) {
    const auto a = static_cast<long long>(std::floor(frac));
    const long long p2 = a * p1 + p0;
    const long long q2 = a * q1 + q0;
    if (q2 > max_q) break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) < eps * std::max(1.0, x)) {
      p = static_cast<long long>(sign) * p1;
      q = q1;
      return true;
    }
    const double rem = frac - static_cast<double>(a);
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  return false;
}

inline bool is_square(long long n, long long& root) {
  if (n < 0) return false;
  root = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(n))));
  for (long long r = std::max<long long>(0, root - 1); r <= root + 1; ++r)
    if (r * r == n) {
      root = r;
      return true;
    }
  return false;
}

// Render a positive factor g as "p/q" when rational, "sqrt(p/q)" when its
// square is rational, else as a plain number.
inline std::string factor_string(double g, bool latex) {
  long long p = 0, q = 1;
  if (to_fraction(g, p, q)) {
    if (q == 1) return std::to_string(p);
    return latex ? "\\tfrac{" + std::to_string(p) + "}{" + std::to_string(q) + "}"
                 : std::to_string(p) + "/" + std::to_string(q);
  }
  if (to_fraction(g * g, p, q)) {
    long long sp = 0, sq = 0;
    if (is_square(p, sp) && is_square(q, sq))
      return latex ? "\\tfrac{" + std::to_string(sp) + "}{" + std::to_string(sq) + "}"
                   : std::to_string(sp) + "/" + std::to_string(sq);
    const std::string inner = std::to_string(p) + "/" + std::to_string(q);
    return latex ? "\\sqrt{" + inner + "}" : "sqrt(" + inner + ")";
  }
  return fmt_g12(g);
}

inline bool near_gaussian_integer(Complex z, long long& re, long long& im, double eps = 1e-9) {
  re = std::llround(z.real());
  im = std::llround(z.imag());
  return std::abs(z.real() - static_cast<double>(re)) < eps &&
         std::abs(z.imag() - static_cast<double>(im)) < eps;
}

// "Dxx", "Lxz Rzz", "1"...; prefix 'D' one-sided, 'L'/'R' for bra/ket.
inline std::string monomial_name(const MultiIndex& idx, char prefix) {
  static const char axes[3] = {'x', 'y', 'z'};
  std::string s;
  for (int a = 0; a < 3; ++a)
    for (int k = 0; k < idx[static_cast<std::size_t>(a)]; ++k) {
      if (s.empty()) s += prefix;
      s += axes[a];
    }
  return s;
}

struct NamedTerm {
  std::string name; // empty means the constant term
  Complex coeff;
};

inline std::string gaussian_int_string(long long re, long long im, const std::string& name) {
  std::string coeff;
  if (im == 0) {
    if (re == 1)
      coeff = "";
    else if (re == -1)
      coeff = "-";
    else
      coeff = std::to_string(re) + " ";
  } else if (re == 0) {
    if (im == 1)
      coeff = "i ";
    else if (im == -1)
      coeff = "-i ";
    else
      coeff = std::to_string(im) + "i ";
  } else {
    coeff = "(" + std::to_string(re) + (im > 0 ? "+" : "-") + std::to_string(std::llabs(im)) +
            "i) ";
  }
  if (name.empty()) {
    if (coeff.empty()) return "1";
    if (coeff == "-") return "-1";
    // trim the trailing separator before a missing name
    if (!coeff.empty() && coeff.back() == ' ') coeff.pop_back();
    return coeff;
  }
  return coeff + name;
}

inline std::string join_terms(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i == 0) {
      out = parts[i];
      continue;
    }
    if (!parts[i].empty() && parts[i][0] == '-')
      out += " - " + parts[i].substr(1);
    else
      out += " + " + parts[i];
  }
  return out;
}

// Canonical text: factor out the smallest coefficient magnitude when the
// ratios are Gaussian integers, e.g. "(1/2)(-Dxx - Dyy + 2 Dzz)/kc^2".
inline std::string render_text(const std::vector<NamedTerm>& terms, int suffix_order, bool latex) {
  if (terms.empty()) return "0";
  double gmin = 0.0;
  for (const auto& t : terms) {
    const double a = std::abs(t.coeff);
    if (gmin == 0.0 || a < gmin) gmin = a;
  }
  bool nice = true;
  std::vector<std::pair<long long, long long>> ratios;
  ratios.reserve(terms.size());
  for (const auto& t : terms) {
    long long re = 0, im = 0;
    if (!near_gaussian_integer(t.coeff / gmin, re, im)) {
      nice = false;
      break;
    }
    ratios.emplace_back(re, im);
  }

  std::string body;
  if (nice) {
    std::vector<std::string> parts;
    for (std::size_t i = 0; i < terms.size(); ++i)
      parts.push_back(gaussian_int_string(ratios[i].first, ratios[i].second, terms[i].name));
    body = join_terms(parts);
    const bool unit = std::abs(gmin - 1.0) < 1e-12;
    if (!unit)
      body = "(" + factor_string(gmin, latex) + ")(" + body + ")";
    else if (terms.size() > 1)
      body = "(" + body + ")";
  } else {
    std::vector<std::string> parts;
    for (const auto& t : terms) {
      std::string c = "(" + fmt_g12(t.coeff.real()) + (t.coeff.imag() < 0 ? "" : "+") +
                      fmt_g12(t.coeff.imag()) + "i)";
      parts.push_back(t.name.empty() ? c : c + " " + t.name);
    }
    body = join_terms(parts);
    if (terms.size() > 1) body = "(" + body + ")";
  }

  if (suffix_order > 0) {
    if (latex)
      body += suffix_order == 1 ? "/k_c" : "/k_c^{" + std::to_string(suffix_order) + "}";
    else
      body += suffix_order == 1 ? "/kc" : "/kc^" + std::to_string(suffix_order);
  }
  return body;
}

// Change of basis from (dx, dy, dz) monomials to powers of
// u = dx + i dy, v = dx - i dy, dz; used by the LaTeX rendering.
struct UvzTerm {
  std::array<int, 3> pqr;
  Complex coeff;
};

inline std::map<std::array<int, 3>, Complex> to_uvz(const DerivativePolynomial::TermMap& terms) {
  std::map<std::array<int, 3>, Complex> out;
  for (const auto& [idx, c] : terms) {
    const int a = idx[0], b = idx[1], r = idx[2];
    // dx^a = ((u+v)/2)^a, dy^b = (-i(u-v)/2)^b
    for (int i = 0; i <= a; ++i) {
      const double bin_a = dfactorial(a) / (dfactorial(i) * dfactorial(a - i));
      for (int j = 0; j <= b; ++j) {
        const double bin_b = dfactorial(b) / (dfactorial(j) * dfactorial(b - j));
        Complex f = c * bin_a * bin_b * std::pow(0.5, a + b);
        f *= std::pow(Complex{0.0, -1.0}, b);
        if ((b - j) % 2 != 0) f = -f;
        const std::array<int, 3> key{i + j, (a - i) + (b - j), r};
        auto [it, inserted] = out.try_emplace(key, f);
        if (!inserted) it->second += f;
      }
    }
  }
  prune(out);
  return out;
}

inline std::string uvz_name(const std::array<int, 3>& pqr, bool bra) {
  const std::string dx = bra ? "\\overleftarrow{\\partial}_x" : "\\partial_x";
  const std::string dy = bra ? "\\overleftarrow{\\partial}_y" : "\\partial_y";
  const std::string dz = bra ? "\\overleftarrow{\\partial}_z" : "\\partial_z";
  auto pow_str = [](const std::string& base, int n) -> std::string {
    if (n == 0) return "";
    if (n == 1) return base;
    return base + "^" + std::to_string(n);
  };
  std::string s;
  s += pow_str("(" + dx + " + i" + dy + ")", pqr[0]);
  s += pow_str("(" + dx + " - i" + dy + ")", pqr[1]);
  s += pow_str(dz, pqr[2]);
  return s;
}

} // namespace detail

inline std::string render(const DerivativePolynomial& poly, RenderFormat format) {
  using namespace detail;
  const auto order = poly.homogeneous_order();
  const int suffix = order.value_or(0);
  const double unscale = suffix > 0 ? std::pow(poly.kc, suffix) : 1.0;

  switch (format) {
  case RenderFormat::machine: {
    std::string out = "# kc=" + fmt_g17(poly.kc) + "\n";
    for (const auto& [idx, c] : poly.terms)
      out += "ket:" + std::to_string(idx[0]) + "," + std::to_string(idx[1]) + "," +
             std::to_string(idx[2]) + " " + fmt_g17(c.real()) + " " + fmt_g17(c.imag()) + "\n";
    return out;
  }
  case RenderFormat::text: {
    std::vector<NamedTerm> terms;
    for (const auto& [idx, c] : poly.terms) terms.push_back({monomial_name(idx, 'D'), c * unscale});
    return render_text(terms, suffix, false);
  }
  case RenderFormat::latex: {
    const auto uvz = to_uvz(poly.terms);
    std::vector<NamedTerm> terms;
    for (const auto& [pqr, c] : uvz) terms.push_back({uvz_name(pqr, false), c * unscale});
    return render_text(terms, suffix, true);
  }
  }
  return {};
}

inline std::string render(const TwoSidedOperator& op, RenderFormat format) {
  using namespace detail;
  const auto orders = op.homogeneous_orders();
  const int suffix = orders ? orders->first + orders->second : 0;
  const double unscale = suffix > 0 ? std::pow(op.kc, suffix) : 1.0;

  switch (format) {
  case RenderFormat::machine: {
    std::string out = "# kc=" + fmt_g17(op.kc) + "\n";
    for (const auto& [key, c] : op.terms) {
      const auto& [b, k] = key;
      out += "bra:" + std::to_string(b[0]) + "," + std::to_string(b[1]) + "," +
             std::to_string(b[2]) + " ket:" + std::to_string(k[0]) + "," + std::to_string(k[1]) +
             "," + std::to_string(k[2]) + " " + fmt_g17(c.real()) + " " + fmt_g17(c.imag()) + "\n";
    }
    return out;
  }
  case RenderFormat::text: {
    std::vector<NamedTerm> terms;
    for (const auto& [key, c] : op.terms) {
      std::string name = monomial_name(key.first, 'L');
      const std::string ket = monomial_name(key.second, 'R');
      if (!name.empty() && !ket.empty()) name += " ";
      name += ket;
      terms.push_back({name, c * unscale});
    }
    return render_text(terms, suffix, false);
  }
  case RenderFormat::latex: {
    // group by bra monomial, expand each side in the uvz basis
    std::vector<NamedTerm> terms;
    std::map<MultiIndex, DerivativePolynomial::TermMap> by_bra;
    for (const auto& [key, c] : op.terms) by_bra[key.first][key.second] = c;
    for (const auto& [bra, kets] : by_bra) {
      DerivativePolynomial::TermMap bra_only{{bra, {1.0, 0.0}}};
      const auto bra_uvz = to_uvz(bra_only);
      const auto ket_uvz = to_uvz(kets);
      for (const auto& [bp, bc] : bra_uvz)
        for (const auto& [kp, kc_] : ket_uvz) {
          std::string name = uvz_name(bp, true);
          const std::string kn = uvz_name(kp, false);
          if (!name.empty() && !kn.empty()) name += " ";
          name += kn;
          terms.push_back({name, bc * kc_ * unscale});
        }
    }
    return render_text(terms, suffix, true);
  }
  }
  return {};
}

namespace detail {

struct MachineLine {
  bool two_sided = false;
  MultiIndex bra{0, 0, 0};
  MultiIndex ket{0, 0, 0};
  Complex coeff;
};

inline MultiIndex parse_multi_index(const std::string& field, const char* tag, std::size_t line_no) {
  const std::string prefix = std::string(tag) + ":";
  if (field.rfind(prefix, 0) != 0) throw parse_error(line_no, "expected '" + prefix + "a,b,c'");
  MultiIndex idx{};
  const std::string rest = field.substr(prefix.size());
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t next = rest.find(',', pos);
    const std::string tok =
        rest.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    try {
      std::size_t used = 0;
      idx[static_cast<std::size_t>(i)] = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw parse_error(line_no, "bad multi-index component '" + tok + "'");
    }
    if (i < 2) {
      if (next == std::string::npos) throw parse_error(line_no, "multi-index needs 3 components");
      pos = next + 1;
    } else if (next != std::string::npos) {
      throw parse_error(line_no, "multi-index has too many components");
    }
  }
  return idx;
}

inline double parse_double_field(const std::string& tok, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw parse_error(line_no, "bad number '" + tok + "'");
  }
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

inline std::pair<double, std::vector<MachineLine>> parse_machine(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  double kc = 0.0;
  bool have_header = false;
  std::vector<MachineLine> lines;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto pos = line.find("kc=");
      if (pos != std::string::npos && !have_header) {
        kc = parse_double_field(line.substr(pos + 3), line_no);
        have_header = true;
      }
      continue;
    }
    const auto fields = split_fields(line);
    MachineLine ml;
    if (fields.size() == 4) {
      ml.two_sided = true;
      ml.bra = parse_multi_index(fields[0], "bra", line_no);
      ml.ket = parse_multi_index(fields[1], "ket", line_no);
      ml.coeff = {parse_double_field(fields[2], line_no), parse_double_field(fields[3], line_no)};
    } else if (fields.size() == 3) {
      ml.two_sided = false;
      ml.ket = parse_multi_index(fields[0], "ket", line_no);
      ml.coeff = {parse_double_field(fields[1], line_no), parse_double_field(fields[2], line_no)};
    } else {
      throw parse_error(line_no, "expected 3 (one-sided) or 4 (two-sided) fields");
    }
    lines.push_back(ml);
  }
  if (!have_header) throw parse_error(1, "missing '# kc=<value>' header");
  return {kc, lines};
}

} // namespace detail

/// Parse the machine rendering of a one-sided polynomial.
inline DerivativePolynomial parse_machine_polynomial(const std::string& text) {
  const auto [kc, lines] = detail::parse_machine(text);
  DerivativePolynomial poly;
  poly.kc = kc;
  for (const auto& ml : lines) {
    if (ml.two_sided) throw parse_error(1, "two-sided term in one-sided polynomial");
    poly.add(ml.ket, ml.coeff);
  }
  return poly;
}

/// Parse the machine rendering of a two-sided operator.
inline TwoSidedOperator parse_machine_two_sided(const std::string& text) {
  const auto [kc, lines] = detail::parse_machine(text);
  TwoSidedOperator op;
  op.kc = kc;
  for (const auto& ml : lines) {
    if (!ml.two_sided) throw parse_error(1, "one-sided term in two-sided operator");
    op.add(ml.bra, ml.ket, ml.coeff);
  }
  return op;
}

} // namespace anisopp
