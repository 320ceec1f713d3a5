#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dirion/constants.hpp"
#include "dirion/error.hpp"

namespace dirion::cli {

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  fail(ErrorKind::config, "config key '" + key + "': " + why);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    bad(key, "expected a number, got '" + v + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad(key, "expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  bad(key, "expected true/false, got '" + v + "'");
}

// "11/2" or "5.5" -> 11
int to_two_j(const std::string& key, const std::string& v) {
  int two_j = 0;
  const auto slash = v.find('/');
  if (slash != std::string::npos) {
    if (trim(v.substr(slash + 1)) != "2") bad(key, "expected a half-integer such as 11/2");
    two_j = to_int(key, trim(v.substr(0, slash)));
  } else {
    const double j = to_double(key, v);
    if (std::abs(2 * j - std::round(2 * j)) > 1e-12) bad(key, "expected a half-integer");
    two_j = static_cast<int>(std::lround(2 * j));
  }
  if (two_j <= 0 || two_j % 2 == 0) bad(key, "must be a positive half-odd-integer (1/2, 3/2, ...)");
  return two_j;
}

using Setter = void (*)(RunConfig&, const std::string& key, const std::string& value);

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> m = {
      {"theory",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "dirac")
           c.theory = Theory::dirac;
         else if (v == "schrodinger")
           c.theory = Theory::schrodinger;
         else
           bad(k, "expected dirac or schrodinger");
       }},
      {"Z", [](RunConfig& c, const std::string& k, const std::string& v) { c.z = to_double(k, v); }},
      {"gauge",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         if (v == "length")
           c.gauge = Gauge::length;
         else if (v == "velocity")
           c.gauge = Gauge::velocity;
         else
           bad(k, "expected length or velocity");
       }},
      {"include_ne", [](RunConfig& c, const std::string& k, const std::string& v) { c.include_ne = to_bool(k, v); }},
      {"j_max", [](RunConfig& c, const std::string& k, const std::string& v) { c.two_j_max = to_two_j(k, v); }},
      {"l_max", [](RunConfig& c, const std::string& k, const std::string& v) { c.l_max = to_int(k, v); }},
      {"basis.n", [](RunConfig& c, const std::string& k, const std::string& v) { c.basis_n = to_int(k, v); }},
      {"basis.k", [](RunConfig& c, const std::string& k, const std::string& v) { c.basis_k = to_int(k, v); }},
      {"basis.R", [](RunConfig& c, const std::string& k, const std::string& v) { c.basis_radius = to_double(k, v); }},
      {"basis.n_geom", [](RunConfig& c, const std::string& k, const std::string& v) { c.basis_n_geom = to_int(k, v); }},
      {"basis.g", [](RunConfig& c, const std::string& k, const std::string& v) { c.basis_ratio = to_double(k, v); }},
      {"pulse.cycles", [](RunConfig& c, const std::string& k, const std::string& v) { c.cycles = to_double(k, v); }},
      {"pulse.photon_energy_au",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.photon_energy_au = to_double(k, v); }},
      {"pulse.wavelength_nm",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.wavelength_nm = to_double(k, v); }},
      {"pulse.intensity_wcm2",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.intensity_wcm2 = to_double(k, v); }},
      {"pulse.field_au", [](RunConfig& c, const std::string& k, const std::string& v) { c.field_au = to_double(k, v); }},
      {"prop.rtol", [](RunConfig& c, const std::string& k, const std::string& v) { c.rtol = to_double(k, v); }},
      {"prop.atol", [](RunConfig& c, const std::string& k, const std::string& v) { c.atol = to_double(k, v); }},
      {"prop.max_step", [](RunConfig& c, const std::string& k, const std::string& v) { c.max_step = to_double(k, v); }},
      {"prop.energy_cutoff_au",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.energy_cutoff_au = to_double(k, v); }},
      {"output", [](RunConfig& c, const std::string&, const std::string& v) { c.output = v; }},
      {"cache_dir", [](RunConfig& c, const std::string&, const std::string& v) { c.cache_dir = v; }},
  };
  return m;
}

// key/value pairs in file order; `#` starts a comment
std::vector<std::pair<std::string, std::string>> split_lines(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorKind::config, "config line " + std::to_string(lineno) + ": expected 'key = value'");
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

void apply(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) bad(key, "unknown key");
  it->second(cfg, key, value);
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::config, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double RunConfig::omega() const {
  if (photon_energy_au) return *photon_energy_au;
  if (wavelength_nm) return wavelength_to_omega(*wavelength_nm);
  fail(ErrorKind::config, "config key 'pulse.photon_energy_au': photon energy or wavelength required");
}

double RunConfig::f0() const {
  if (field_au) return *field_au;
  if (intensity_wcm2) return intensity_to_field(*intensity_wcm2);
  fail(ErrorKind::config, "config key 'pulse.intensity_wcm2': intensity or field required");
}

PulseParams RunConfig::pulse() const {
  PulseParams p = make_pulse(cycles, omega(), f0());
  p.intensity_wcm2 = intensity_wcm2 ? *intensity_wcm2 : field_to_intensity(p.f0);
  return p;
}

RunConfig parse_config(const std::string& text) { return parse_config(text, {}); }

RunConfig parse_config(const std::string& text,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  RunConfig cfg;
  for (const auto& [k, v] : split_lines(text)) apply(cfg, k, v);
  for (const auto& [k, v] : overrides) apply(cfg, k, v);
  return cfg;
}

std::string serialize(const RunConfig& c) {
  std::ostringstream o;
  auto put = [&](const char* k, const std::string& v) { o << k << " = " << v << '\n'; };
  auto num = [&](const char* k, double v) { put(k, format_double(v)); };
  put("theory", to_string(c.theory));
  num("Z", c.z);
  put("gauge", to_string(c.gauge));
  if (c.include_ne) put("include_ne", *c.include_ne ? "true" : "false");
  if (c.two_j_max) put("j_max", std::to_string(*c.two_j_max) + "/2");
  if (c.l_max) put("l_max", std::to_string(*c.l_max));
  put("basis.n", std::to_string(c.basis_n));
  put("basis.k", std::to_string(c.basis_k));
  if (c.basis_radius) num("basis.R", *c.basis_radius);
  put("basis.n_geom", std::to_string(c.basis_n_geom));
  num("basis.g", c.basis_ratio);
  num("pulse.cycles", c.cycles);
  if (c.photon_energy_au) num("pulse.photon_energy_au", *c.photon_energy_au);
  if (c.wavelength_nm) num("pulse.wavelength_nm", *c.wavelength_nm);
  if (c.intensity_wcm2) num("pulse.intensity_wcm2", *c.intensity_wcm2);
  if (c.field_au) num("pulse.field_au", *c.field_au);
  num("prop.rtol", c.rtol);
  num("prop.atol", c.atol);
  if (c.max_step) num("prop.max_step", *c.max_step);
  num("prop.energy_cutoff_au", c.energy_cutoff_au);
  put("output", c.output);
  if (!c.cache_dir.empty()) put("cache_dir", c.cache_dir);
  return o.str();
}

void validate(const RunConfig& c, bool need_pulse) {
  if (!(c.z > 0.0)) bad("Z", "must be positive");
  if (c.theory == Theory::dirac && !(c.z < constants::speed_of_light))
    fail(ErrorKind::config, "config key 'Z': Dirac theory needs Z < c = 137.036");
  if (c.theory == Theory::schrodinger) {
    if (c.include_ne) bad("include_ne", "only meaningful for theory = dirac");
    if (c.two_j_max) bad("j_max", "only meaningful for theory = dirac; use l_max");
    if (c.l_max_value() < 0) bad("l_max", "must be non-negative");
  } else if (c.l_max) {
    bad("l_max", "only meaningful for theory = schrodinger; use j_max");
  }
  if (c.basis_k < 2) bad("basis.k", "spline order must be at least 2");
  if (c.basis_n <= c.basis_k) bad("basis.n", "must exceed basis.k");
  if (!(c.radius() > 0.0)) bad("basis.R", "must be positive");
  if (c.basis_n_geom < 0) bad("basis.n_geom", "must be non-negative");
  if (c.basis_n_geom > 0 && !(c.basis_ratio > 1.0)) bad("basis.g", "must exceed 1 with a geometric head");
  if (c.photon_energy_au && c.wavelength_nm)
    bad("pulse.wavelength_nm", "give exactly one of pulse.photon_energy_au and pulse.wavelength_nm");
  if (c.intensity_wcm2 && c.field_au)
    bad("pulse.field_au", "give exactly one of pulse.intensity_wcm2 and pulse.field_au");
  if (c.photon_energy_au && !(*c.photon_energy_au > 0.0)) bad("pulse.photon_energy_au", "must be positive");
  if (c.wavelength_nm && !(*c.wavelength_nm > 0.0)) bad("pulse.wavelength_nm", "must be positive");
  if (c.intensity_wcm2 && !(*c.intensity_wcm2 >= 0.0)) bad("pulse.intensity_wcm2", "must be non-negative");
  if (c.field_au && !(*c.field_au >= 0.0)) bad("pulse.field_au", "must be non-negative");
  if (need_pulse) {
    if (!c.photon_energy_au && !c.wavelength_nm)
      bad("pulse.photon_energy_au", "one of pulse.photon_energy_au and pulse.wavelength_nm is required");
    if (!c.intensity_wcm2 && !c.field_au)
      bad("pulse.intensity_wcm2", "one of pulse.intensity_wcm2 and pulse.field_au is required");
    if (!(c.cycles > 0.0)) bad("pulse.cycles", "must be positive");
  }
  if (!(c.rtol >= 1e-12 && c.rtol <= 1e-4)) bad("prop.rtol", "must lie in [1e-12, 1e-4]");
  if (!(c.atol > 0.0)) bad("prop.atol", "must be positive");
  if (c.max_step && !(*c.max_step > 0.0)) bad("prop.max_step", "must be positive");
  if (!(c.energy_cutoff_au >= 0.0)) bad("prop.energy_cutoff_au", "must be non-negative (0 disables)");
  if (c.output.empty()) bad("output", "must not be empty");
}

std::uint64_t config_hash(const RunConfig& cfg) {
  RunConfig c = cfg;
  c.output.clear();
  c.cache_dir.clear();
  return fnv1a(serialize(c));
}

std::uint64_t structure_hash(const RunConfig& c) {
  std::ostringstream o;
  o << "coupling-v2|" << to_string(c.theory) << '|' << format_double(c.z) << '|' << to_string(c.gauge)
    << '|' << c.include_ne_value() << '|' << c.truncation() << '|' << c.basis_n << '|' << c.basis_k
    << '|' << format_double(c.radius()) << '|' << c.basis_n_geom << '|' << format_double(c.basis_ratio)
    << '|' << format_double(c.energy_cutoff_au);
  return fnv1a(o.str());
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

const char* to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::wavelength_nm: return "wavelength_nm";
    case SweepAxis::photon_energy_au: return "photon_energy_au";
    case SweepAxis::j_max: return "j_max";
    case SweepAxis::z: return "Z";
    case SweepAxis::intensity_wcm2: return "intensity_wcm2";
  }
  return "?";
}

SweepSpec parse_sweep(const std::string& text) {
  SweepSpec spec;
  std::ostringstream rest;
  bool have_axis = false, have_values = false;
  for (const auto& [k, v] : split_lines(text)) {
    if (k == "sweep.axis") {
      have_axis = true;
      if (v == "wavelength_nm")
        spec.axis = SweepAxis::wavelength_nm;
      else if (v == "photon_energy_au")
        spec.axis = SweepAxis::photon_energy_au;
      else if (v == "j_max")
        spec.axis = SweepAxis::j_max;
      else if (v == "Z")
        spec.axis = SweepAxis::z;
      else if (v == "intensity_wcm2")
        spec.axis = SweepAxis::intensity_wcm2;
      else
        bad(k, "expected wavelength_nm, photon_energy_au, j_max, Z or intensity_wcm2");
    } else if (k == "sweep.values") {
      have_values = true;
      std::string item;
      std::istringstream in(v);
      while (std::getline(in, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        // j_max values may be written as 11/2
        if (item.find('/') != std::string::npos)
          spec.values.push_back(0.5 * to_two_j(k, item));
        else
          spec.values.push_back(to_double(k, item));
      }
    } else if (k == "sweep.threads") {
      spec.threads = to_int(k, v);
    } else {
      rest << k << " = " << v << '\n';
    }
  }
  if (!have_axis) bad("sweep.axis", "required");
  if (!have_values) bad("sweep.values", "required");
  spec.base = parse_config(rest.str());
  return spec;
}

RunConfig sweep_point(const SweepSpec& spec, double v) {
  RunConfig c = spec.base;
  switch (spec.axis) {
    case SweepAxis::wavelength_nm:
      c.photon_energy_au.reset();
      c.wavelength_nm = v;
      break;
    case SweepAxis::photon_energy_au:
      c.wavelength_nm.reset();
      c.photon_energy_au = v;
      break;
    case SweepAxis::j_max:
      if (c.theory == Theory::dirac)
        c.two_j_max = static_cast<int>(std::lround(2 * v));
      else
        c.l_max = static_cast<int>(std::lround(v));
      break;
    case SweepAxis::z:
      c.z = v;
      break;
    case SweepAxis::intensity_wcm2:
      c.field_au.reset();
      c.intensity_wcm2 = v;
      break;
  }
  return c;
}

void validate(const SweepSpec& spec) {
  if (spec.values.empty()) bad("sweep.values", "grid must not be empty");
  if (!std::is_sorted(spec.values.begin(), spec.values.end()) ||
      std::adjacent_find(spec.values.begin(), spec.values.end()) != spec.values.end())
    bad("sweep.values", "grid must be strictly increasing");
  if (spec.threads < 0) bad("sweep.threads", "must be non-negative");
  if (spec.axis == SweepAxis::j_max) {
    for (double v : spec.values) {
      const double twice = spec.base.theory == Theory::dirac ? 2 * v : v;
      if (std::abs(twice - std::round(twice)) > 1e-12) bad("sweep.values", "j_max/l_max grid must be (half-)integers");
    }
  }
  for (double v : spec.values) validate(sweep_point(spec, v), true);
}

}  // namespace dirion::cli
