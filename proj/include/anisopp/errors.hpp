#pragma once

#include <stdexcept>
#include <string>

namespace anisopp {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Rule broken by a reactance-matrix entry set.
enum class violation : int {
  m_selection,  // nonzero entry with m != m'
  parity,       // nonzero entry with l + l' odd
  m_sign,       // entry(l,-m,l',-m) != entry(l,+m,l',+m)
  transpose,    // entry(l,m,l',m) != entry(l',m,l,m)
  index_range,  // |m| > l or negative l
  non_finite,   // NaN or infinite value
};

inline const char* violation_name(violation v) {
  switch (v) {
  case violation::m_selection: return "m-selection";
  case violation::parity: return "parity";
  case violation::m_sign: return "m-sign";
  case violation::transpose: return "transpose";
  case violation::index_range: return "index-range";
  case violation::non_finite: return "non-finite";
  }
  return "unknown";
}

class symmetry_violation : public error {
public:
  symmetry_violation(violation which, int l, int m, int lp, int mp)
      : error(std::string("K-matrix symmetry violation [") + violation_name(which) +
              "] at (l=" + std::to_string(l) + ", m=" + std::to_string(m) +
              ", l'=" + std::to_string(lp) + ", m'=" + std::to_string(mp) + ")"),
        which_(which), l_(l), m_(m), lp_(lp), mp_(mp) {}

  violation which() const { return which_; }
  int l() const { return l_; }
  int m() const { return m_; }
  int lp() const { return lp_; }
  int mp() const { return mp_; }

private:
  violation which_;
  int l_, m_, lp_, mp_;
};

class divergent_tangent : public error {
public:
  using error::error;
};

class divergent_integral : public error {
public:
  using error::error;
};

class quadrature_failure : public error {
public:
  using error::error;
};

class selection_rule : public error {
public:
  using error::error;
};

class triangle_violation : public error {
public:
  using error::error;
};

class odd_j : public error {
public:
  using error::error;
};

/// Potential tail falls off too slowly for a contact description (1/r^s with s <= 2).
class long_range : public error {
public:
  using error::error;
};

class cap_exceeded : public error {
public:
  using error::error;
};

class parse_error : public error {
public:
  parse_error(std::size_t line, const std::string& what)
      : error("parse error at line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class config_error : public error {
public:
  using error::error;
};

} // namespace anisopp
