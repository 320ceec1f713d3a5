#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dirion/dipole.hpp"
#include "dirion/pulse.hpp"

namespace dirion::cli {

// Flat "key = value" run description. Optional fields are emitted by
// serialize() only when set, so parse -> serialize -> parse is exact.
struct RunConfig {
  Theory theory = Theory::dirac;
  double z = 1.0;
  Gauge gauge = Gauge::length;
  std::optional<bool> include_ne;  // Dirac only; default true
  std::optional<int> two_j_max;    // Dirac only; default 5/2
  std::optional<int> l_max;        // Schrodinger only; default 3

  int basis_n = 200;
  int basis_k = 9;
  std::optional<double> basis_radius;  // default 250 / Z
  int basis_n_geom = 100;
  double basis_ratio = 1.1;

  double cycles = 20.0;
  std::optional<double> photon_energy_au;
  std::optional<double> wavelength_nm;
  std::optional<double> intensity_wcm2;
  std::optional<double> field_au;

  double rtol = 1e-8;
  double atol = 1e-12;
  std::optional<double> max_step;
  double energy_cutoff_au = 0.0;

  std::string output = "dirion_run";
  std::string cache_dir;  // empty: no coupling cache

  bool operator==(const RunConfig&) const = default;

  bool include_ne_value() const { return theory == Theory::dirac && include_ne.value_or(true); }
  int two_j_max_value() const { return two_j_max.value_or(5); }
  int l_max_value() const { return l_max.value_or(3); }
  int truncation() const { return theory == Theory::dirac ? two_j_max_value() : l_max_value(); }
  double radius() const { return basis_radius.value_or(250.0 / z); }
  double omega() const;
  double f0() const;
  PulseParams pulse() const;
};

// Throws Error(config) naming the offending key.
RunConfig parse_config(const std::string& text);
// Parses, then overlays the given key/value pairs in order.
RunConfig parse_config(const std::string& text,
                       const std::vector<std::pair<std::string, std::string>>& overrides);
std::string serialize(const RunConfig& cfg);
// Consistency rules; `need_pulse` also demands the pulse keys.
void validate(const RunConfig& cfg, bool need_pulse);

// Hash of every input that can change a result (output paths excluded).
std::uint64_t config_hash(const RunConfig& cfg);
// Hash of the inputs that determine the coupling set only.
std::uint64_t structure_hash(const RunConfig& cfg);
std::string hex(std::uint64_t h);

enum class SweepAxis { wavelength_nm, photon_energy_au, j_max, z, intensity_wcm2 };

struct SweepSpec {
  RunConfig base;
  SweepAxis axis = SweepAxis::wavelength_nm;
  std::vector<double> values;
  int threads = 0;  // 0: DIRION_THREADS or hardware concurrency
};

const char* to_string(SweepAxis a);
// Config text plus sweep.axis, sweep.values (comma separated), sweep.threads.
SweepSpec parse_sweep(const std::string& text);
void validate(const SweepSpec& spec);
RunConfig sweep_point(const SweepSpec& spec, double value);

std::string format_double(double v);
std::string read_file(const std::string& path);

}  // namespace dirion::cli
