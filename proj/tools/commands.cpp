#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "dirion/constants.hpp"
#include "dirion/error.hpp"
#include "dirion/observables.hpp"
#include "dirion/propagator.hpp"
#include "dirion/scaling.hpp"

namespace dirion::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

RadialBasis make_basis(const RunConfig& c) {
  return RadialBasis(build_grid(c.radius(), c.basis_n, c.basis_k, c.basis_n_geom, c.basis_ratio), c.basis_k);
}

struct Structure {
  RadialBasis basis;
  RadialMatrices mats;
  std::vector<ChannelSpectrum> rel;
  std::vector<NonrelSpectrum> nr;

  explicit Structure(const RunConfig& c) : basis(make_basis(c)), mats(radial_matrices(basis)) {
    if (c.theory == Theory::dirac) {
      for (KappaChannel ch : enumerate_channels(c.two_j_max_value()))
        rel.push_back(solve_channel(basis, mats, c.z, ch));
    } else {
      for (int l = 0; l <= c.l_max_value(); ++l) nr.push_back(solve_channel_nr(basis, mats, c.z, l));
    }
  }
};

void write_text(const std::string& path, const std::string& text) {
  const fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  const fs::path tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) fail(ErrorKind::config, "cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, p);
}

std::string fmt(double v) { return format_double(v); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::mutex g_cache_mutex;
std::map<std::uint64_t, std::shared_ptr<const CouplingSet>> g_cache;

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::domain: return "domain";
    case ErrorKind::config: return "config";
    case ErrorKind::numerical: return "numerical";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::internal: return "internal";
  }
  return "unknown";
}

}  // namespace

int exit_code_for(const std::exception& e) {
  if (const auto* de = dynamic_cast<const Error*>(&e)) {
    switch (de->kind()) {
      case ErrorKind::config:
      case ErrorKind::parameter:
      case ErrorKind::domain:
      case ErrorKind::unsupported:
        return kConfigError;
      case ErrorKind::numerical:
      case ErrorKind::internal:
        return kNumericalFailure;
    }
  }
  return kNumericalFailure;
}

std::string config_text_from_file(const std::string& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    const json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.contains("manifest") || !j["manifest"].contains("config_text"))
      fail(ErrorKind::config, path + ": JSON input must be a results file with manifest.config_text");
    return j["manifest"]["config_text"].get<std::string>();
  }
  return text;
}

json manifest(const RunConfig& cfg, double wall_seconds, const std::string& kernel) {
  json m;
  m["program"] = "dirion";
  m["version"] = kVersion;
  m["compiler"] = __VERSION__;
  m["config_text"] = serialize(cfg);
  m["config_hash"] = hex(config_hash(cfg));
  m["structure_hash"] = hex(structure_hash(cfg));
  m["constants"] = {{"speed_of_light", constants::speed_of_light},
                    {"intensity_au_wcm2", constants::intensity_au_wcm2},
                    {"omega_times_wavelength_nm", constants::omega_times_wavelength_nm},
                    {"hartree_ev", constants::hartree_ev}};
  m["kernel"] = kernel;
  m["threads_per_run"] = 1;
  m["wall_seconds"] = wall_seconds;
  return m;
}

std::shared_ptr<const CouplingSet> coupling_for(const RunConfig& cfg, std::ostream& log) {
  const std::uint64_t key = structure_hash(cfg);
  std::lock_guard lock(g_cache_mutex);
  if (auto it = g_cache.find(key); it != g_cache.end()) return it->second;
  std::string path;
  if (!cfg.cache_dir.empty()) {
    fs::create_directories(cfg.cache_dir);
    path = (fs::path(cfg.cache_dir) / ("coupling_" + hex(key) + ".bin")).string();
    auto set = std::make_shared<CouplingSet>();
    if (load_coupling(path, key, *set)) {
      log << "coupling: loaded " << path << " (" << set->size() << " states)\n";
      g_cache[key] = set;
      return set;
    }
  }
  const auto t0 = std::chrono::steady_clock::now();
  const Structure s(cfg);
  DipoleOptions opt;
  opt.energy_cutoff = cfg.energy_cutoff_au;
  auto set = std::make_shared<CouplingSet>(
      cfg.theory == Theory::dirac
          ? build_coupling(s.mats, s.rel, cfg.gauge, cfg.include_ne_value(), cfg.two_j_max_value(), opt)
          : build_coupling(s.mats, s.nr, cfg.gauge, cfg.l_max_value(), opt));
  log << "coupling: built " << set->size() << " states, " << set->blocks.size() << " blocks in "
      << seconds_since(t0) << " s\n";
  for (const auto& spec : s.rel)
    for (const auto& w : spec.warnings) log << "warning: " << spec.channel.label() << ": " << w << '\n';
  if (!path.empty()) {
    save_coupling(*set, key, path + ".tmp");
    fs::rename(path + ".tmp", path);
  }
  g_cache[key] = set;
  return set;
}

json cmd_eigen(const RunConfig& cfg, std::ostream& log) {
  validate(cfg, false);
  const auto t0 = std::chrono::steady_clock::now();
  const Structure s(cfg);
  std::ostringstream csv;
  csv << "channel,index,class,energy_au\n";
  json counts = {{"bound", 0}, {"continuum", 0}, {"negative", 0}, {"spurious_flagged", 0}};
  double ground = 0.0;
  bool have_ground = false;
  if (cfg.theory == Theory::dirac) {
    for (const auto& spec : s.rel) {
      for (std::size_t k = 0; k < spec.size(); ++k) {
        const StateClass cls = spec.classes[k];
        if (cls == StateClass::spurious) {
          counts["spurious_flagged"] = counts["spurious_flagged"].get<int>() + 1;
          continue;
        }
        counts[to_string(cls)] = counts[to_string(cls)].get<int>() + 1;
        const double e = spec.energies[static_cast<Eigen::Index>(k)];
        csv << spec.channel.label() << ',' << k << ',' << to_string(cls) << ',' << fmt(e) << '\n';
        if (cls == StateClass::bound && (!have_ground || e < ground)) {
          ground = e;
          have_ground = true;
        }
      }
      for (const auto& w : spec.warnings) log << "warning: " << spec.channel.label() << ": " << w << '\n';
    }
  } else {
    const char* letters = "spdfghiklmnoqrtuvwxyz";
    for (const auto& spec : s.nr) {
      for (std::size_t k = 0; k < spec.size(); ++k) {
        const bool bound = spec.classes[k] == NonrelClass::bound;
        const char* cls = bound ? "bound" : "continuum";
        counts[cls] = counts[cls].get<int>() + 1;
        const double e = spec.energies[static_cast<Eigen::Index>(k)];
        csv << letters[std::min(spec.l, 20)] << ',' << k << ',' << cls << ',' << fmt(e) << '\n';
        if (bound && (!have_ground || e < ground)) {
          ground = e;
          have_ground = true;
        }
      }
    }
  }
  json summary;
  summary["counts"] = counts;
  summary["ground_energy_au"] = have_ground ? json(ground) : json(nullptr);
  summary["basis_size"] = s.basis.size();
  summary["manifest"] = manifest(cfg, seconds_since(t0), "none");
  write_text(cfg.output + "_spectrum.csv", csv.str());
  write_text(cfg.output + "_eigen.json", summary.dump(2) + "\n");
  log << "eigen: wrote " << cfg.output << "_spectrum.csv\n";
  return summary;
}

PropagateOutcome cmd_propagate(const RunConfig& cfg, std::ostream& log, bool write_files) {
  validate(cfg, true);
  PropagateOutcome out;
  const auto t0 = std::chrono::steady_clock::now();
  json& r = out.result;
  std::shared_ptr<const CouplingSet> set;
  try {
    set = coupling_for(cfg, log);
    const PulseParams pulse = cfg.pulse();
    r["pulse"] = {{"omega_au", pulse.omega}, {"f0_au", pulse.f0}, {"a0_au", pulse.a0},
                  {"duration_au", pulse.duration}, {"cycles", pulse.cycles}};
    double emax = 0.0;
    for (Eigen::Index i = 0; i < set->energies.size(); ++i) emax = std::max(emax, std::abs(set->energies[i]));
    r["states"] = set->size();
    r["max_abs_energy_au"] = emax;
    PropagationSettings ps;
    ps.rtol = cfg.rtol;
    ps.atol = cfg.atol;
    if (cfg.max_step) ps.max_step = *cfg.max_step;
    const std::size_t g = ground_index(*set);
    const PropagationResult res = propagate(*set, pulse, g, ps);
    const YieldReport y = ionization_yield(*set, res.coefficients, g);
    r["status"] = "ok";
    r["yield"] = y.yield;
    r["survival"] = y.survival;
    r["excitation"] = y.excitation;
    r["negative_energy"] = y.negative_energy;
    r["norm"] = y.norm;
    r["partition_residual"] = y.partition_residual();
    r["max_norm_deviation"] = res.max_norm_deviation;
    r["stats"] = {{"steps", res.stats.steps},
                  {"rejected", res.stats.rejected},
                  {"rhs_evals", res.stats.rhs_evals},
                  {"highest_order", res.stats.highest_order},
                  {"smallest_step", res.stats.smallest_step},
                  {"largest_step", res.stats.largest_step}};
    r["propagation_seconds"] = res.wall_seconds;
    r["manifest"] = manifest(cfg, seconds_since(t0), res.kernel);
    out.ok = true;
    if (write_files) {
      std::ostringstream pop, cps;
      pop << "channel,bound,continuum,negative_energy\n";
      for (const auto& c : y.channels)
        pop << c.label << ',' << fmt(c.bound) << ',' << fmt(c.continuum) << ',' << fmt(c.negative_energy) << '\n';
      cps << "t_au,norm,bound,continuum,negative_energy\n";
      for (const auto& c : res.checkpoints)
        cps << fmt(c.t) << ',' << fmt(c.norm) << ',' << fmt(c.bound) << ',' << fmt(c.continuum) << ','
            << fmt(c.negative_energy) << '\n';
      write_text(cfg.output + "_populations.csv", pop.str());
      write_text(cfg.output + "_checkpoints.csv", cps.str());
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config || e.kind() == ErrorKind::parameter) throw;
    out.ok = false;
    out.error = e.what();
    out.error_kind = e.kind();
    r["status"] = "failed";
    r["error"] = e.what();
    r["error_kind"] = kind_name(e.kind());
    r["manifest"] = manifest(cfg, seconds_since(t0), kernels::active_kernels().name);
  }
  if (write_files) write_text(cfg.output + ".json", r.dump(2) + "\n");
  return out;
}

// ---- sweep ---------------------------------------------------------------

namespace {

const char* kSweepHeader =
    "axis,value,config_hash,status,yield,survival,excitation,negative_energy,norm,max_norm_deviation,"
    "steps,rejected,error";

std::string sanitize(std::string s) {
  for (char& ch : s)
    if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, ',')) out.push_back(item);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

int worker_count(const SweepSpec& spec) {
  if (const char* env = std::getenv("DIRION_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  if (spec.threads > 0) return spec.threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

SweepOutcome cmd_sweep(const SweepSpec& spec, std::ostream& log) {
  validate(spec);
  const std::string out_csv = spec.base.output + ".csv";
  const std::string journal = spec.base.output + ".journal.csv";
  if (fs::path(journal).has_parent_path()) fs::create_directories(fs::path(journal).parent_path());

  // latest journal row per config hash
  std::map<std::string, std::string> done;
  {
    std::ifstream in(journal);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line.rfind("axis,", 0) == 0) continue;
      const auto f = split_csv(line);
      if (f.size() < 13) continue;  // torn write from an interrupted run
      done[f[2]] = line;
    }
  }
  const bool fresh = !fs::exists(journal);
  bool torn_tail = false;
  if (!fresh && fs::file_size(journal) > 0) {
    std::ifstream in(journal, std::ios::binary);
    in.seekg(-1, std::ios::end);
    torn_tail = in.get() != '\n';
  }
  std::ofstream jout(journal, std::ios::app);
  if (!jout) fail(ErrorKind::config, "cannot write " + journal);
  if (fresh) jout << kSweepHeader << '\n' << std::flush;
  if (torn_tail) jout << '\n' << std::flush;  // never extend a half-written row

  struct Point {
    double value;
    RunConfig cfg;
    std::string hash;
  };
  std::vector<Point> points;
  std::vector<std::size_t> todo;
  SweepOutcome outcome;
  for (double v : spec.values) {
    RunConfig c = sweep_point(spec, v);
    const std::string h = hex(config_hash(c));
    points.push_back({v, c, h});
    const auto it = done.find(h);
    if (it != done.end() && split_csv(it->second)[3] == "ok")
      ++outcome.skipped;
    else
      todo.push_back(points.size() - 1);
  }
  log << "sweep: " << points.size() << " points, " << outcome.skipped << " already done\n";

  std::mutex writer;
  std::atomic<std::size_t> next{0};
  std::map<std::string, double> wall;
  auto work = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= todo.size()) return;
      const Point& p = points[todo[t]];
      std::ostringstream row, plog;
      row << to_string(spec.axis) << ',' << fmt(p.value) << ',' << p.hash << ',';
      const auto t0 = std::chrono::steady_clock::now();
      bool ok = false;
      try {
        const PropagateOutcome o = cmd_propagate(p.cfg, plog, false);
        if (o.ok) {
          const json& r = o.result;
          row << "ok," << fmt(r["yield"]) << ',' << fmt(r["survival"]) << ',' << fmt(r["excitation"]) << ','
              << fmt(r["negative_energy"]) << ',' << fmt(r["norm"]) << ',' << fmt(r["max_norm_deviation"])
              << ',' << r["stats"]["steps"].get<long>() << ',' << r["stats"]["rejected"].get<long>() << ',';
          ok = true;
        } else {
          row << "failed:" << kind_name(o.error_kind) << ",,,,,,,,," << sanitize(o.error);
        }
      } catch (const std::exception& e) {
        row << "failed:exception,,,,,,,,," << sanitize(e.what());
      }
      std::lock_guard lock(writer);
      jout << row.str() << '\n' << std::flush;
      done[p.hash] = row.str();
      wall[p.hash] = seconds_since(t0);
      ok ? ++outcome.completed : ++outcome.failed;
      log << plog.str() << "sweep: " << to_string(spec.axis) << '=' << fmt(p.value) << (ok ? " ok" : " FAILED")
          << " (" << outcome.completed + outcome.failed << '/' << todo.size() << ")\n";
    }
  };
  const int nworkers = std::min<int>(worker_count(spec), static_cast<int>(std::max<std::size_t>(todo.size(), 1)));
  std::vector<std::thread> pool;
  for (int w = 1; w < nworkers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();

  std::ostringstream csv;
  csv << kSweepHeader << '\n';
  json rows = json::array();
  for (const Point& p : points) {
    csv << done[p.hash] << '\n';
    json r = {{"value", p.value}, {"config_hash", p.hash}};
    if (wall.count(p.hash)) r["wall_seconds"] = wall[p.hash];
    rows.push_back(r);
  }
  write_text(out_csv, csv.str());
  json m = manifest(spec.base, 0.0, kernels::active_kernels().name);
  m.erase("wall_seconds");
  m["axis"] = to_string(spec.axis);
  m["workers"] = nworkers;
  m["rows"] = rows;
  write_text(spec.base.output + ".manifest.json", m.dump(2) + "\n");
  return outcome;
}

// ---- scale ---------------------------------------------------------------

json cmd_scale(const ScaleArgs& a) {
  if (!(a.z > 0.0)) fail(ErrorKind::config, "scale: --Z must be positive");
  if (a.wavelength_nm && a.photon_energy_au)
    fail(ErrorKind::config, "scale: give only one of --wavelength-nm and --photon-energy-au");
  if (a.intensity_wcm2 && a.field_au)
    fail(ErrorKind::config, "scale: give only one of --intensity-wcm2 and --field-au");
  json j;
  j["Z"] = a.z;
  j["ip_nonrel_au"] = ionization_potential(a.z, false);
  j["ip_rel_au"] = ionization_potential(a.z, true);
  j["delta_ip_au"] = delta_ip(a.z);
  j["z_prime"] = scaled_charge(a.z);
  j["critical_field_au"] = critical_field();
  std::optional<double> omega, f0;
  if (a.wavelength_nm) omega = wavelength_to_omega(*a.wavelength_nm);
  if (a.photon_energy_au) omega = *a.photon_energy_au;
  if (a.intensity_wcm2) f0 = intensity_to_field(*a.intensity_wcm2);
  if (a.field_au) f0 = *a.field_au;
  if (omega) {
    j["omega_au"] = *omega;
    j["wavelength_nm"] = omega_to_wavelength(*omega);
    j["lambda_z2_nm"] = omega_to_wavelength(*omega) * a.z * a.z;
    j["photons_to_ionize_rel"] = photon_count(a.z, *omega, true);
    j["photons_to_ionize_nonrel"] = photon_count(a.z, *omega, false);
    j["photons_pair_threshold"] = pair_threshold_photons(*omega);
  }
  if (f0) {
    j["f0_au"] = *f0;
    j["f0_over_critical"] = *f0 / critical_field();
  }
  if (omega && f0) {
    j["keldysh"] = keldysh(a.z, *omega, *f0);
    // hydrogen (Z=1) problem equivalent under Z-scaling
    const double z2 = a.z * a.z;
    j["hydrogen_equivalent"] = {{"omega_au", *omega / z2},
                                {"f0_au", *f0 / (z2 * a.z)},
                                {"intensity_wcm2", field_to_intensity(*f0 / (z2 * a.z))},
                                {"cycles", a.cycles}};
  }
  if (!a.rate_table.empty()) {
    const RateTable in = read_rate_table(a.rate_table);
    const RateTable out = rate_scale(in, a.z);
    j["rate_table"] = {{"input", a.rate_table},
                       {"input_peak_f0", in.f0[in.peak()]},
                       {"input_peak_gamma", in.gamma[in.peak()]},
                       {"scaled_peak_f0", out.f0[out.peak()]},
                       {"scaled_peak_gamma", out.gamma[out.peak()]}};
    if (!a.rate_table_out.empty()) {
      write_rate_table(out, a.rate_table_out);
      j["rate_table"]["output"] = a.rate_table_out;
    }
  }
  return j;
}

}  // namespace dirion::cli
