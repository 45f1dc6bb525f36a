#pragma once

/*
 * Command-line front end, kept in the library so the commands can be driven
 * directly from tests. Output is deterministic: fixed ordering everywhere and
 * full-precision (%.17g) numbers in the machine/csv formats, so identical
 * configurations produce byte-identical output.
 */

#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "anisopp/matel.hpp"
#include "anisopp/pseudopotential.hpp"
#include "anisopp/render.hpp"
#include "anisopp/states.hpp"
#include "anisopp/trap.hpp"

namespace anisopp {

enum class Command { table_i, coupling, assemble, matel, diagnose };

enum class OutputFormat { text, csv, machine };

enum class InteractionKind { dipolar, powerlaw, isotropic, kmatrix_file };

enum class AssemblyMode { general, born, isotropic, truncated };

struct RunConfig {
  // [trap]
  TrapConfig trap;

  // [interaction]
  InteractionKind kind = InteractionKind::dipolar;
  double dipole = 1.0;                // dipolar: moment D
  double coefficient = 1.0;           // powerlaw: C
  double exponent = 3.0;              // powerlaw: s
  int anisotropy = 2;                 // powerlaw: rank L
  std::vector<double> shifts;         // isotropic: delta_l, l = 0..
  std::string kmatrix_path;           // kmatrix-file
  double a_ss = 0.0;                  // truncated mode
  std::optional<double> a_sd;         // truncated mode; defaults to the Born value

  // [assembly]
  int l_max = 2;
  Gauge gauge = Gauge::tensor;
  AssemblyMode mode = AssemblyMode::general;
  std::optional<double> kc; // unset: derived from the trap state

  // [output]
  OutputFormat format = OutputFormat::text;
  std::string output_path; // empty: stdout
};

namespace detail {

inline constexpr int cli_l_max_cap = 8;

inline double effective_kc(const RunConfig& cfg) {
  if (cfg.kc) {
    if (!(*cfg.kc > 0.0)) throw config_error("kc must be positive");
    return *cfg.kc;
  }
  return collision_momentum(cfg.trap);
}

inline RadialPotential config_potential(const RunConfig& cfg) {
  switch (cfg.kind) {
  case InteractionKind::dipolar: return RadialPotential::dipolar(cfg.dipole);
  case InteractionKind::powerlaw:
    return RadialPotential::power_law(cfg.anisotropy, cfg.coefficient, cfg.exponent);
  default:
    throw config_error("this command needs a dipolar or powerlaw interaction");
  }
}

inline KMatrix config_kmatrix(const RunConfig& cfg, double kc) {
  switch (cfg.kind) {
  case InteractionKind::dipolar:
  case InteractionKind::powerlaw: return born_kmatrix(config_potential(cfg), cfg.l_max, kc);
  case InteractionKind::isotropic: {
    if (cfg.shifts.empty()) throw config_error("isotropic interaction needs 'shifts'");
    return isotropic(PhaseShifts{cfg.shifts}, kc);
  }
  case InteractionKind::kmatrix_file: {
    if (cfg.kmatrix_path.empty()) throw config_error("kmatrix-file interaction needs 'path'");
    return load_kmatrix(cfg.kmatrix_path);
  }
  }
  throw config_error("unknown interaction kind");
}

inline PseudoPotentialOperator config_operator(const RunConfig& cfg, double kc) {
  switch (cfg.mode) {
  case AssemblyMode::general: return assemble_general(config_kmatrix(cfg, kc), cfg.l_max, kc);
  case AssemblyMode::born: return assemble_born(config_potential(cfg), cfg.l_max, kc);
  case AssemblyMode::isotropic:
    if (cfg.kind != InteractionKind::isotropic)
      throw config_error("mode 'isotropic' needs interaction kind 'isotropic'");
    return assemble_isotropic(PhaseShifts{cfg.shifts}, cfg.l_max, kc);
  case AssemblyMode::truncated: {
    if (cfg.kind != InteractionKind::dipolar)
      throw config_error("mode 'truncated' needs interaction kind 'dipolar'");
    const double asd = cfg.a_sd ? *cfg.a_sd
                                : -cfg.dipole * cfg.dipole / (6.0 * std::sqrt(5.0));
    return truncated_dipolar(cfg.a_ss, asd, kc, cfg.gauge);
  }
  }
  throw config_error("unknown assembly mode");
}

inline void check_config(const RunConfig& cfg) {
  cfg.trap.check();
  if (cfg.l_max < 0 || cfg.l_max > cli_l_max_cap)
    throw config_error("l_max must lie in [0, " + std::to_string(cli_l_max_cap) + "]");
}

inline const char* format_name(OutputFormat f) {
  switch (f) {
  case OutputFormat::text: return "text";
  case OutputFormat::csv: return "csv";
  case OutputFormat::machine: return "machine";
  }
  return "?";
}

inline void run_table_i(const RunConfig& cfg, std::ostream& out) {
  const double kc = 1.0;
  const RenderFormat rf =
      cfg.format == OutputFormat::machine ? RenderFormat::machine : RenderFormat::text;
  for (int l = 0; l <= 2; ++l)
    for (int m = -l; m <= l; ++m) {
      const auto poly = c_tensor_nabla(l, m, kc);
      if (rf == RenderFormat::machine) {
        out << "## C(l=" << l << ",m=" << m << ")\n" << render(poly, rf);
      } else {
        out << "(" << l << "," << m << ")  " << render(poly, rf) << "\n";
      }
    }
}

inline void run_coupling(const RunConfig& cfg, std::ostream& out) {
  const double kc = effective_kc(cfg);
  const auto K = config_kmatrix(cfg, kc);
  const auto table = coupling_table(K, cfg.l_max, kc);
  if (cfg.format == OutputFormat::text) {
    out << "# coupling coefficients, kc = " << fmt_g17(table.kc) << "\n";
    out << "J  l  lp  T\n";
    for (const auto& row : table.rows)
      out << row.J << "  " << row.l << "  " << row.lp << "  " << fmt_g17(row.T) << "\n";
  } else {
    out << to_csv(table);
  }
}

inline void run_assemble(const RunConfig& cfg, std::ostream& out) {
  const double kc = effective_kc(cfg);
  const auto V = config_operator(cfg, kc);
  switch (cfg.format) {
  case OutputFormat::csv: {
    out << "J,l,lp,T\n";
    for (const auto& block : V.blocks)
      out << block.J << "," << block.l << "," << block.lp << "," << fmt_g17(block.T) << "\n";
    break;
  }
  case OutputFormat::machine: {
    out << "# provenance=" << provenance_name(V.provenance) << " kc=" << fmt_g17(V.kc)
        << " blocks=" << V.blocks.size() << "\n";
    for (const auto& block : V.blocks) {
      out << "## block J=" << block.J << " l=" << block.l << " lp=" << block.lp
          << " T=" << fmt_g17(block.T) << "\n";
      out << render(block.op, RenderFormat::machine);
    }
    break;
  }
  case OutputFormat::text: {
    out << "contact operator (" << provenance_name(V.provenance) << "), kc = " << fmt_g17(V.kc)
        << ", " << V.blocks.size() << " block(s)\n";
    for (const auto& block : V.blocks) {
      out << "  [J=" << block.J << " l=" << block.l << " lp=" << block.lp
          << "]  T = " << fmt_g17(block.T) << "\n";
      out << "      " << render(block.op, RenderFormat::text) << "\n";
    }
    break;
  }
  }
}

inline void run_matel(const RunConfig& cfg, std::ostream& out) {
  const double kc = effective_kc(cfg);
  const auto V = config_operator(cfg, kc);
  const auto state = HermiteGaussian3D::relative_motion(cfg.trap);
  const auto result = expectation(V, state, state);
  switch (cfg.format) {
  case OutputFormat::machine: {
    out << "kc=" << fmt_g17(kc) << "\n";
    out << "value_re=" << fmt_g17(result.value.real()) << "\n";
    out << "value_im=" << fmt_g17(result.value.imag()) << "\n";
    for (const auto& b : result.blocks)
      out << "block J=" << b.J << " l=" << b.l << " lp=" << b.lp << " re="
          << fmt_g17(b.value.real()) << " im=" << fmt_g17(b.value.imag()) << "\n";
    break;
  }
  case OutputFormat::csv: {
    out << "J,l,lp,re,im\n";
    for (const auto& b : result.blocks)
      out << b.J << "," << b.l << "," << b.lp << "," << fmt_g17(b.value.real()) << ","
          << fmt_g17(b.value.imag()) << "\n";
    out << "total,,," << fmt_g17(result.value.real()) << "," << fmt_g17(result.value.imag())
        << "\n";
    break;
  }
  case OutputFormat::text: {
    out << "<psi| V |psi> = " << fmt_g17(result.value.real());
    if (result.value.imag() != 0.0) out << " + " << fmt_g17(result.value.imag()) << " i";
    out << "   (kc = " << fmt_g17(kc) << ")\n";
    for (const auto& b : result.blocks)
      out << "  block [J=" << b.J << " l=" << b.l << " lp=" << b.lp
          << "]: " << fmt_g17(b.value.real()) << "\n";
    break;
  }
  }
}

inline void run_diagnose(const RunConfig& cfg, std::ostream& out) {
  const auto rep = validity_report(cfg.trap, config_potential(cfg));
  const double kc = effective_kc(cfg);
  if (cfg.format == OutputFormat::machine || cfg.format == OutputFormat::csv) {
    out << "Lx=" << fmt_g17(rep.oscillator_length[0]) << "\n"
        << "Ly=" << fmt_g17(rep.oscillator_length[1]) << "\n"
        << "Lz=" << fmt_g17(rep.oscillator_length[2]) << "\n"
        << "rbar=" << fmt_g17(rep.multipolar_radius) << "\n"
        << "rho=" << fmt_g17(rep.rho) << "\n"
        << "kc=" << fmt_g17(kc) << "\n"
        << "verdict=" << verdict_name(rep.verdict) << "\n";
  } else {
    out << "oscillator lengths: " << fmt_g17(rep.oscillator_length[0]) << " "
        << fmt_g17(rep.oscillator_length[1]) << " " << fmt_g17(rep.oscillator_length[2]) << "\n"
        << "multipolar radius:  " << fmt_g17(rep.multipolar_radius) << " (tail ~ "
        << fmt_g17(rep.tail_coefficient) << "/r^" << fmt_g17(rep.tail_exponent) << ")\n"
        << "rho = rbar/min L:   " << fmt_g17(rep.rho) << "\n"
        << "collision momentum: " << fmt_g17(kc) << "\n"
        << "verdict:            " << verdict_name(rep.verdict) << "\n";
  }
}

} // namespace detail

/// Execute one command against a configuration, writing the rendered result
/// to `out`. Returns 0 on success; domain failures surface as exceptions
/// (config_error for inconsistent configurations).
inline int run(Command cmd, const RunConfig& cfg, std::ostream& out) {
  detail::check_config(cfg);
  switch (cmd) {
  case Command::table_i: detail::run_table_i(cfg, out); break;
  case Command::coupling: detail::run_coupling(cfg, out); break;
  case Command::assemble: detail::run_assemble(cfg, out); break;
  case Command::matel: detail::run_matel(cfg, out); break;
  case Command::diagnose: detail::run_diagnose(cfg, out); break;
  }
  return 0;
}

/// Run a command, honoring cfg.output_path (empty means write to `fallback`).
inline int run_to_configured_output(Command cmd, const RunConfig& cfg, std::ostream& fallback) {
  if (cfg.output_path.empty()) return run(cmd, cfg, fallback);
  std::ofstream file(cfg.output_path);
  if (!file) throw error("cannot open output file '" + cfg.output_path + "'");
  return run(cmd, cfg, file);
}

} // namespace anisopp
