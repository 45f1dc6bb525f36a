#pragma once

/*
 * Harmonic trap configuration, collision-momentum selection and validity
 * diagnostics for the contact description. Units hbar = M = 1 throughout
 * (reduced mass mu = 1/2).
 */

#include <array>
#include <cmath>

#include "anisopp/errors.hpp"
#include "anisopp/kmatrix.hpp"

namespace anisopp {

/// Trap frequencies and the quantum numbers of the relative-motion state.
struct TrapConfig {
  std::array<double, 3> omega{1.0, 1.0, 1.0};
  std::array<int, 3> n{0, 0, 0};

  void check() const {
    for (double w : omega)
      if (!(w > 0.0)) throw error("TrapConfig: frequencies must be positive");
    for (int q : n)
      if (q < 0) throw error("TrapConfig: negative quantum number");
  }

  double mean_omega() const { return (omega[0] + omega[1] + omega[2]) / 3.0; }

  /// Relative-motion energy E_r = sum_i omega_i (n_i + 1/2).
  double relative_energy() const {
    double e = 0.0;
    for (int i = 0; i < 3; ++i)
      e += omega[static_cast<std::size_t>(i)] * (n[static_cast<std::size_t>(i)] + 0.5);
    return e;
  }
};

/// On-shell collision momentum fixed by the trap state:
/// hbar^2 k_c^2 / (2 mu) = E_r with mu = M/2, i.e. k_c = sqrt(E_r).
/// For the ground state this reduces to k_c^2 = (3/2) mean(omega).
inline double collision_momentum(const TrapConfig& trap) {
  trap.check();
  return std::sqrt(trap.relative_energy());
}

/// Multipolar radius of a 1/r^s tail with strength |C|: the length where the
/// centrifugal term overtakes the tail, |C|^{1/(s-2)} in units hbar = M = 1.
inline double multipolar_radius(double C, double s) {
  if (!(s > 2.0))
    throw long_range("multipolar_radius: exponent s = " + std::to_string(s) +
                     " <= 2 is true long range");
  return std::pow(std::abs(C), 1.0 / (s - 2.0));
}

enum class Verdict { ok, marginal, invalid };

inline const char* verdict_name(Verdict v) {
  switch (v) {
  case Verdict::ok: return "ok";
  case Verdict::marginal: return "marginal";
  case Verdict::invalid: return "invalid";
  }
  return "unknown";
}

struct ValidityThresholds {
  double ok = 0.1;      // rho below this: contact description fine
  double invalid = 1.0; // rho at or above this: multipolar radius reaches the trap
};

struct ValidityReport {
  std::array<double, 3> oscillator_length; // L_i = omega_i^{-1/2}, single-particle mass M
  double multipolar_radius = 0.0;
  double rho = 0.0; // multipolar radius / min oscillator length
  Verdict verdict = Verdict::ok;
  double tail_exponent = 0.0;
  double tail_coefficient = 0.0;
};

/// Compare the potential's multipolar radius with the trap lengths. The
/// contact description needs the wavefunction flat across the interaction
/// region, i.e. rho well below one. For tabulated potentials the tail
/// (C, s) is estimated from the two outermost samples.
inline ValidityReport validity_report(const TrapConfig& trap, const RadialPotential& V,
                                      ValidityThresholds thresholds = {}) {
  trap.check();
  double C = 0.0, s = 0.0;
  if (V.is_power_law()) {
    C = V.as_power_law().C;
    s = V.as_power_law().s;
  } else {
    const auto& tab = V.as_table();
    const std::size_t nn = tab.r.size();
    const double v0 = std::abs(tab.V[nn - 2]), v1 = std::abs(tab.V[nn - 1]);
    if (v0 == 0.0 || v1 == 0.0) throw error("validity_report: zero tail sample in table");
    s = -(std::log(v1) - std::log(v0)) / (std::log(tab.r[nn - 1]) - std::log(tab.r[nn - 2]));
    if (!(s > 2.0))
      throw long_range("validity_report: tabulated tail falls off like 1/r^" + std::to_string(s));
    C = v1 * std::pow(tab.r[nn - 1], s);
  }

  ValidityReport rep;
  rep.tail_exponent = s;
  rep.tail_coefficient = C;
  double lmin = 0.0;
  for (int i = 0; i < 3; ++i) {
    rep.oscillator_length[static_cast<std::size_t>(i)] =
        1.0 / std::sqrt(trap.omega[static_cast<std::size_t>(i)]);
    if (i == 0 || rep.oscillator_length[static_cast<std::size_t>(i)] < lmin)
      lmin = rep.oscillator_length[static_cast<std::size_t>(i)];
  }
  rep.multipolar_radius = multipolar_radius(C, s);
  rep.rho = rep.multipolar_radius / lmin;
  rep.verdict = rep.rho < thresholds.ok      ? Verdict::ok
                : rep.rho < thresholds.invalid ? Verdict::marginal
                                               : Verdict::invalid;
  return rep;
}

} // namespace anisopp
