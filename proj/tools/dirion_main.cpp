#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "dirion/error.hpp"

using namespace dirion;
using namespace dirion::cli;

namespace {

// "key=value" overrides given with --set
std::vector<std::pair<std::string, std::string>> split_overrides(const std::vector<std::string>& items) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& s : items) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(ErrorKind::config, "--set expects key=value, got '" + s + "'");
    out.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dirion: multiphoton ionization of hydrogenlike ions (TDDE / TDSE, dipole approximation)"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;

  auto* eigen = app.add_subcommand("eigen", "field-free spectrum of every channel");
  eigen->add_option("config", config_path, "config file")->required();
  eigen->add_option("--set", overrides, "override a config key (key=value)");

  auto* prop = app.add_subcommand("propagate", "one pulse, yields and diagnostics");
  prop->add_option("config", config_path, "config file or results JSON (re-run from its manifest)")->required();
  prop->add_option("--set", overrides, "override a config key (key=value)");

  auto* sweep = app.add_subcommand("sweep", "single-axis parameter sweep (resumable)");
  sweep->add_option("spec", config_path, "config file with sweep.axis and sweep.values")->required();

  ScaleArgs sa;
  double wl = 0, pe = 0, in = 0, fa = 0;
  auto* scale = app.add_subcommand("scale", "Z-scaling quantities and rate-table transform");
  scale->add_option("--Z", sa.z, "nuclear charge")->required();
  auto* o_wl = scale->add_option("--wavelength-nm", wl);
  auto* o_pe = scale->add_option("--photon-energy-au", pe)->excludes(o_wl);
  auto* o_in = scale->add_option("--intensity-wcm2", in);
  auto* o_fa = scale->add_option("--field-au", fa)->excludes(o_in);
  scale->add_option("--cycles", sa.cycles);
  scale->add_option("--rate-table", sa.rate_table, "hydrogen rate table CSV (f0_z3au,gamma_z2au)");
  scale->add_option("--rate-out", sa.rate_table_out, "write the transformed table here");

  ValidateArgs va;
  std::string report;
  auto* val = app.add_subcommand("validate", "invariant suite; non-zero exit on any failure");
  val->add_option("--basis-n", va.basis_n, "spline count for the precision checks");
  val->add_flag("--mutate-velocity", va.mutate_velocity, "inject a velocity-operator fault");
  val->add_option("--report", report, "also write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  try {
    if (*eigen) {
      const RunConfig cfg = parse_config(config_text_from_file(config_path), split_overrides(overrides));
      std::cout << cmd_eigen(cfg, std::cerr).dump(2) << '\n';
      return kOk;
    }
    if (*prop) {
      const RunConfig cfg = parse_config(config_text_from_file(config_path), split_overrides(overrides));
      const PropagateOutcome o = cmd_propagate(cfg, std::cerr);
      std::cout << o.result.dump(2) << '\n';
      if (!o.ok) {
        std::cerr << "error: " << o.error << '\n';
        return o.error_kind == ErrorKind::numerical || o.error_kind == ErrorKind::internal ? kNumericalFailure
                                                                                          : kConfigError;
      }
      return kOk;
    }
    if (*sweep) {
      const SweepSpec spec = parse_sweep(read_file(config_path));
      const SweepOutcome o = cmd_sweep(spec, std::cerr);
      std::cerr << "sweep: " << o.completed << " computed, " << o.skipped << " resumed, " << o.failed
                << " failed\n";
      return o.failed ? kNumericalFailure : kOk;
    }
    if (*scale) {
      if (*o_wl) sa.wavelength_nm = wl;
      if (*o_pe) sa.photon_energy_au = pe;
      if (*o_in) sa.intensity_wcm2 = in;
      if (*o_fa) sa.field_au = fa;
      std::cout << cmd_scale(sa).dump(2) << '\n';
      return kOk;
    }
    if (*val) {
      const auto rep = cmd_validate(va, std::cerr);
      std::cout << rep.dump(2) << '\n';
      if (!report.empty()) std::ofstream(report) << rep.dump(2) << '\n';
      for (const auto& c : rep["checks"])
        std::cerr << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << "  value="
                  << c["value"].dump() << " tol=" << c["tolerance"].dump()
                  << (c.contains("message") ? "  (" + c["message"].get<std::string>() + ")" : "") << '\n';
      return rep["pass"].get<bool>() ? kOk : kValidationFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kOk;
}
