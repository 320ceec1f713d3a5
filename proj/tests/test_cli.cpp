#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "dirion/error.hpp"

using namespace dirion;
using namespace dirion::cli;
namespace fs = std::filesystem;

namespace {

const char* kSmallHydrogen = R"(# hydrogen, reduced basis
theory = schrodinger
Z = 1
gauge = length
l_max = 2
basis.n = 40
basis.k = 7
basis.R = 40
basis.n_geom = 10
basis.g = 1.2
pulse.cycles = 3
pulse.photon_energy_au = 0.7
pulse.intensity_wcm2 = 5e13
)";

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / "dirion_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) { return read_file(p.string()); }

int run_binary(const std::string& args) {
  const std::string cmd = std::string(DIRION_BINARY) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void expect_config_error(const std::string& text, const std::string& key, bool need_pulse = true) {
  try {
    validate(parse_config(text), need_pulse);
    FAIL("no error for key " << key);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config);
    CHECK(std::string(e.what()).find("'" + key + "'") != std::string::npos);
  }
}

}  // namespace

TEST_CASE("config parse and serialize round trip") {
  const std::string texts[] = {
      kSmallHydrogen,
      "theory = dirac\nZ = 50\ngauge = velocity\ninclude_ne = false\nj_max = 11/2\nbasis.n = 150\n"
      "basis.n_geom = 0\npulse.wavelength_nm = 0.0911\npulse.field_au = 3774.6\nprop.max_step = 0.001\n"
      "prop.energy_cutoff_au = 5000\ncache_dir = /tmp/x\n",
      "Z = 3.3\n",
  };
  for (const auto& t : texts) {
    const RunConfig a = parse_config(t);
    const std::string s = serialize(a);
    const RunConfig b = parse_config(s);
    CHECK(a == b);
    CHECK(serialize(b) == s);
  }
  const RunConfig d = parse_config(texts[1]);
  CHECK(d.two_j_max == 11);
  CHECK_FALSE(d.include_ne_value());
  CHECK(d.radius() == doctest::Approx(5.0));
  CHECK(parse_config("j_max = 5.5\n").two_j_max == 11);
  CHECK(parse_config("Z = 2 # comment\n\n").z == 2.0);
  CHECK(parse_config("Z = 1\n", {{"Z", "7"}}).z == 7.0);
}

TEST_CASE("config errors name the offending key") {
  expect_config_error("Z = 1\nfoo = 3\n", "foo");
  expect_config_error("Z = abc\n", "Z");
  expect_config_error("j_max = 3\n", "j_max");
  expect_config_error("Z = -1\n", "Z", false);
  expect_config_error("theory = schrodinger\ninclude_ne = true\n", "include_ne", false);
  expect_config_error("theory = schrodinger\nj_max = 1/2\n", "j_max", false);
  expect_config_error("theory = dirac\nl_max = 2\n", "l_max", false);
  expect_config_error("pulse.photon_energy_au = 1\npulse.wavelength_nm = 45\npulse.field_au = 1\n",
                      "pulse.wavelength_nm");
  expect_config_error("pulse.photon_energy_au = 1\npulse.intensity_wcm2 = 1\npulse.field_au = 1\n", "pulse.field_au");
  expect_config_error("pulse.photon_energy_au = 1\n", "pulse.intensity_wcm2");
  expect_config_error("pulse.field_au = 1\n", "pulse.photon_energy_au");
  expect_config_error("prop.rtol = 1e-2\n", "prop.rtol", false);
  expect_config_error("basis.n = 5\n", "basis.n", false);
  expect_config_error("theory = dirac\nZ = 140\n", "Z", false);
  CHECK_THROWS_AS(parse_config("just text\n"), Error);
}

TEST_CASE("hashes") {
  RunConfig a = parse_config(kSmallHydrogen);
  RunConfig b = a;
  b.output = "elsewhere";
  b.cache_dir = "/tmp";
  CHECK(config_hash(a) == config_hash(b));
  b.z = 2.0;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(structure_hash(a) != structure_hash(b));
  RunConfig c = a;
  c.photon_energy_au = 0.9;
  CHECK(config_hash(a) != config_hash(c));
  CHECK(structure_hash(a) == structure_hash(c));  // pulse does not enter the coupling
  CHECK(hex(0xabcull) == "0000000000000abc");
}

TEST_CASE("eigen command") {
  const fs::path dir = scratch("eigen");
  std::ostringstream log;
  RunConfig h = parse_config("theory = schrodinger\nZ = 1\nl_max = 1\nbasis.n = 80\nbasis.R = 80\nbasis.n_geom = 20\n");
  h.output = (dir / "h").string();
  const auto sh = cmd_eigen(h, log);
  CHECK(sh["ground_energy_au"].get<double>() == doctest::Approx(-0.5).epsilon(1e-9));
  const std::string csv = slurp(dir / "h_spectrum.csv");
  CHECK(csv.rfind("channel,index,class,energy_au\n", 0) == 0);

  RunConfig d = parse_config("theory = dirac\nZ = 50\nj_max = 3/2\nbasis.n = 120\nbasis.n_geom = 60\n");
  d.output = (dir / "d").string();
  const auto sd = cmd_eigen(d, log);
  CHECK(sd["ground_energy_au"].get<double>() == doctest::Approx(-1294.626).epsilon(1e-6));
  CHECK(sd["counts"]["spurious_flagged"].get<int>() == 2);  // kappa = 1, 2
  CHECK(slurp(dir / "d_spectrum.csv").find("spurious") == std::string::npos);
  CHECK(fs::exists(dir / "d_eigen.json"));
}

TEST_CASE("propagate: zero intensity, files, and re-run from the manifest") {
  const fs::path dir = scratch("prop");
  std::ostringstream log;
  RunConfig z = parse_config(kSmallHydrogen, {{"pulse.intensity_wcm2", "0"}});
  z.output = (dir / "zero").string();
  const auto oz = cmd_propagate(z, log);
  REQUIRE(oz.ok);
  CHECK(oz.result["yield"].get<double>() == 0.0);
  CHECK(oz.result["survival"].get<double>() == 1.0);

  RunConfig c = parse_config(kSmallHydrogen);
  c.output = (dir / "run").string();
  const auto o1 = cmd_propagate(c, log);
  REQUIRE(o1.ok);
  CHECK(o1.result["yield"].get<double>() > 0.0);
  CHECK(std::abs(o1.result["partition_residual"].get<double>()) < 1e-12);
  CHECK(fs::exists(dir / "run.json"));
  CHECK(fs::exists(dir / "run_populations.csv"));
  CHECK(fs::exists(dir / "run_checkpoints.csv"));

  const RunConfig again = parse_config(config_text_from_file((dir / "run.json").string()));
  CHECK(again == c);
  const auto o2 = cmd_propagate(again, log, false);
  CHECK(o2.result["yield"].get<double>() == o1.result["yield"].get<double>());
  CHECK(o2.result["survival"].get<double>() == o1.result["survival"].get<double>());
}

TEST_CASE("coupling cache on disk") {
  const fs::path dir = scratch("cache");
  std::ostringstream log;
  RunConfig c = parse_config(kSmallHydrogen, {{"basis.n", "41"}});
  c.cache_dir = (dir / "cache").string();
  const auto a = coupling_for(c, log);
  CHECK(fs::exists(dir / "cache" / ("coupling_" + hex(structure_hash(c)) + ".bin")));
  CouplingSet loaded;
  CHECK(load_coupling((dir / "cache" / ("coupling_" + hex(structure_hash(c)) + ".bin")).string(),
                      structure_hash(c), loaded));
  CHECK(loaded.size() == a->size());
}

TEST_CASE("sweep is ordered and resumable") {
  const fs::path dir = scratch("sweep");
  const std::string text = std::string(kSmallHydrogen) + "output = " + (dir / "s").string() +
                           "\nsweep.axis = photon_energy_au\nsweep.values = 0.6, 0.7, 0.8\nsweep.threads = 2\n";
  const SweepSpec spec = parse_sweep(text);
  std::ostringstream log;
  const SweepOutcome first = cmd_sweep(spec, log);
  CHECK(first.completed == 3);
  CHECK(first.failed == 0);
  const std::string csv = slurp(dir / "s.csv");
  std::istringstream rows(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(rows, line)) lines.push_back(line);
  REQUIRE(lines.size() == 4);
  CHECK(lines[1].find(",0.59999999999999998,") != std::string::npos);
  CHECK(lines[3].find(",0.80000000000000004,") != std::string::npos);

  // simulate an interruption: last journal row lost, final CSV never written
  std::string journal = slurp(dir / "s.journal.csv");
  journal.pop_back();
  journal.erase(journal.rfind('\n') + 1);
  std::ofstream(dir / "s.journal.csv", std::ios::trunc) << journal << "photon_energy_au,0.7,";
  fs::remove(dir / "s.csv");
  const SweepOutcome second = cmd_sweep(spec, log);
  CHECK(second.skipped == 2);
  CHECK(second.completed == 1);
  CHECK(slurp(dir / "s.csv") == csv);

  // single-thread run gives the same rows
  SweepSpec serial = spec;
  serial.threads = 1;
  serial.base.output = (dir / "serial").string();
  cmd_sweep(serial, log);
  CHECK(slurp(dir / "serial.csv") == csv);
}

TEST_CASE("sweep validation") {
  CHECK_THROWS_AS(parse_sweep("Z = 1\nsweep.values = 1, 2\n"), Error);
  SweepSpec s = parse_sweep(std::string(kSmallHydrogen) + "sweep.axis = photon_energy_au\nsweep.values = 0.8, 0.7\n");
  CHECK_THROWS_AS(validate(s), Error);
  SweepSpec j = parse_sweep("theory = dirac\nZ = 50\npulse.photon_energy_au = 500\npulse.intensity_wcm2 = 1e20\n"
                            "sweep.axis = j_max\nsweep.values = 1/2, 3/2, 5/2\n");
  CHECK(j.values == std::vector<double>{0.5, 1.5, 2.5});
  CHECK(sweep_point(j, 2.5).two_j_max == 5);
  CHECK_NOTHROW(validate(j));
  SweepSpec w = parse_sweep(std::string(kSmallHydrogen) + "sweep.axis = wavelength_nm\nsweep.values = 50, 60\n");
  const RunConfig p = sweep_point(w, 50.0);
  CHECK_FALSE(p.photon_energy_au.has_value());
  CHECK(p.wavelength_nm == 50.0);
}

TEST_CASE("thread count override") {
  SweepSpec s;
  s.threads = 3;
  ::unsetenv("DIRION_THREADS");
  CHECK(worker_count(s) == 3);
  ::setenv("DIRION_THREADS", "2", 1);
  CHECK(worker_count(s) == 2);
  ::unsetenv("DIRION_THREADS");
}

TEST_CASE("scale command") {
  ScaleArgs a;
  a.z = 50;
  a.wavelength_nm = 0.05;
  a.intensity_wcm2 = 5e22;
  const auto j = cmd_scale(a);
  CHECK(std::abs(j["z_prime"].get<double>() - 50.88) < 0.01);
  CHECK(std::round(100 * j["keldysh"].get<double>()) == 3817.0);
  CHECK(j["critical_field_au"].get<double>() == doctest::Approx(2.57e6).epsilon(2e-3));
  a.photon_energy_au = 1.0;
  CHECK_THROWS_AS(cmd_scale(a), Error);
}

TEST_CASE("exit codes of the binary") {
  const fs::path dir = scratch("exit");
  std::ofstream(dir / "bad.cfg") << "Z = 1\nnot_a_key = 1\n";
  std::ofstream(dir / "ok.cfg") << kSmallHydrogen << "output = " << (dir / "ok").string() << "\n";
  CHECK(run_binary("eigen " + (dir / "bad.cfg").string()) == 2);
  CHECK(run_binary("eigen " + (dir / "missing.cfg").string()) == 2);
  CHECK(run_binary("eigen " + (dir / "ok.cfg").string()) == 0);
  CHECK(run_binary("propagate " + (dir / "ok.cfg").string()) == 0);
  CHECK(run_binary("nonsense") == 2);
  CHECK(run_binary("scale --Z 50") == 0);
  CHECK(run_binary("validate --basis-n 60") == 4);
  CHECK(exit_code_for(Error(ErrorKind::numerical, "x")) == 3);
  CHECK(exit_code_for(Error(ErrorKind::config, "x")) == 2);
}
