#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "anisopp/anisopp.hpp"

namespace {

anisopp::Command parse_command(const std::string& name) {
  static const std::map<std::string, anisopp::Command> table{
      {"table-i", anisopp::Command::table_i},   {"coupling", anisopp::Command::coupling},
      {"assemble", anisopp::Command::assemble}, {"matel", anisopp::Command::matel},
      {"diagnose", anisopp::Command::diagnose},
  };
  return table.at(name);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"contact pseudopotential for anisotropically interacting trapped particles"};
  app.require_subcommand(1);
  app.fallthrough();

  anisopp::RunConfig cfg;
  std::string kind = "dipolar", mode = "general", gauge = "tensor", format = "text";
  std::string shifts_csv;
  double kc_flag = 0.0;

  app.set_config("--config", "", "configuration file ([section] key = value)");

  app.add_option("--trap.wx", cfg.trap.omega[0], "trap frequency, x");
  app.add_option("--trap.wy", cfg.trap.omega[1], "trap frequency, y");
  app.add_option("--trap.wz", cfg.trap.omega[2], "trap frequency, z");
  app.add_option("--trap.nx", cfg.trap.n[0], "relative-motion quantum number, x");
  app.add_option("--trap.ny", cfg.trap.n[1], "relative-motion quantum number, y");
  app.add_option("--trap.nz", cfg.trap.n[2], "relative-motion quantum number, z");

  app.add_option("--interaction.kind", kind, "dipolar | powerlaw | isotropic | kmatrix-file");
  app.add_option("--interaction.d", cfg.dipole, "dipole moment D");
  app.add_option("--interaction.coefficient", cfg.coefficient, "power-law coefficient C");
  app.add_option("--interaction.exponent", cfg.exponent, "power-law exponent s (> 2)");
  app.add_option("--interaction.anisotropy", cfg.anisotropy, "power-law rank L (even)");
  app.add_option("--interaction.shifts", shifts_csv, "comma-separated phase shifts delta_l");
  app.add_option("--interaction.path", cfg.kmatrix_path, "K-matrix table file");
  app.add_option("--interaction.ass", cfg.a_ss, "a_ss for the truncated form");
  double asd_flag = std::numeric_limits<double>::quiet_NaN();
  app.add_option("--interaction.asd", asd_flag, "a_sd for the truncated form (default: Born)");

  app.add_option("--assembly.lmax,--lmax", cfg.l_max, "largest partial wave (<= 8)");
  app.add_option("--assembly.gauge,--gauge", gauge, "zero | tensor");
  app.add_option("--assembly.mode", mode, "general | born | isotropic | truncated");
  app.add_option("--assembly.kc,--kc", kc_flag, "collision momentum override (> 0)");

  app.add_option("--output.format,--format", format, "text | csv | machine");
  app.add_option("--output.path,--output", cfg.output_path, "output file (default: stdout)");

  for (const char* name : {"table-i", "coupling", "assemble", "matel", "diagnose"})
    app.add_subcommand(name)->silent(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    static const std::map<std::string, anisopp::InteractionKind> kinds{
        {"dipolar", anisopp::InteractionKind::dipolar},
        {"powerlaw", anisopp::InteractionKind::powerlaw},
        {"isotropic", anisopp::InteractionKind::isotropic},
        {"kmatrix-file", anisopp::InteractionKind::kmatrix_file}};
    static const std::map<std::string, anisopp::AssemblyMode> modes{
        {"general", anisopp::AssemblyMode::general},
        {"born", anisopp::AssemblyMode::born},
        {"isotropic", anisopp::AssemblyMode::isotropic},
        {"truncated", anisopp::AssemblyMode::truncated}};
    static const std::map<std::string, anisopp::Gauge> gauges{
        {"zero", anisopp::Gauge::zero}, {"tensor", anisopp::Gauge::tensor}};
    static const std::map<std::string, anisopp::OutputFormat> formats{
        {"text", anisopp::OutputFormat::text},
        {"csv", anisopp::OutputFormat::csv},
        {"machine", anisopp::OutputFormat::machine}};

    auto lookup = [](const auto& table, const std::string& key, const char* what) {
      const auto it = table.find(key);
      if (it == table.end()) throw anisopp::config_error(std::string("unknown ") + what + " '" + key + "'");
      return it->second;
    };
    cfg.kind = lookup(kinds, kind, "interaction kind");
    cfg.mode = lookup(modes, mode, "assembly mode");
    cfg.gauge = lookup(gauges, gauge, "gauge");
    cfg.format = lookup(formats, format, "output format");
    if (kc_flag != 0.0) cfg.kc = kc_flag;
    if (!std::isnan(asd_flag)) cfg.a_sd = asd_flag;
    if (!shifts_csv.empty()) {
      std::istringstream ss(shifts_csv);
      std::string tok;
      while (std::getline(ss, tok, ',')) cfg.shifts.push_back(std::stod(tok));
    }

    const anisopp::Command cmd = parse_command(app.get_subcommands().front()->get_name());
    return anisopp::run_to_configured_output(cmd, cfg, std::cout);
  } catch (const anisopp::config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
