#include "dirion/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "dirion/constants.hpp"
#include "dirion/error.hpp"
#include "dirion/observables.hpp"
#include "dirion/pulse.hpp"

namespace dirion {

ScaledConfig scale_config(double z, const BaseSetup& base) {
  if (!(z > 0.0)) fail(ErrorKind::parameter, "scaling: Z must be positive");
  if (!(base.omega > 0.0) || !(base.cycles > 0.0) || !(base.radius > 0.0) ||
      !(base.intensity_wcm2 >= 0.0))
    fail(ErrorKind::parameter, "scaling: invalid base setup");
  ScaledConfig s;
  s.z = z;
  s.base = base;
  s.cycles = base.cycles;
  s.omega = z * z * base.omega;
  s.intensity_wcm2 = std::pow(z, 6) * base.intensity_wcm2;
  s.f0 = intensity_to_field(s.intensity_wcm2);
  s.a0 = s.f0 / s.omega;
  s.radius = base.radius / z;
  s.duration = 2.0 * constants::pi * base.cycles / s.omega;
  return s;
}

BaseSetup unscale(const ScaledConfig& s) {
  BaseSetup b;
  b.cycles = s.cycles;
  b.omega = s.omega / (s.z * s.z);
  b.intensity_wcm2 = s.intensity_wcm2 / std::pow(s.z, 6);
  b.radius = s.radius * s.z;
  return b;
}

double delta_ip(double z) {
  const double x = z / constants::speed_of_light;
  if (!(z > 0.0)) fail(ErrorKind::parameter, "scaling: Z must be positive");
  if (!(x < 1.0)) fail(ErrorKind::unsupported, "scaling: Z >= c");
  // c^2 x^4 / (2 (1 + sqrt(1 - x^2))^2), free of cancellation for small Z
  const double s = 1.0 + std::sqrt(1.0 - x * x);
  return constants::c2 * x * x * x * x / (2.0 * s * s);
}

double scaled_charge(double z) { return std::sqrt(2.0 * ionization_potential(z, true)); }

double keldysh(double z, double omega, double f0) {
  if (!(f0 > 0.0)) fail(ErrorKind::parameter, "keldysh: field must be positive");
  return z * omega / f0;
}

double critical_field() { return constants::critical_field; }

void RateTable::validate() const {
  if (f0.size() != gamma.size()) fail(ErrorKind::config, "rate table: column length mismatch");
  if (f0.size() < 2) fail(ErrorKind::config, "rate table: need at least two rows");
  for (std::size_t i = 0; i < f0.size(); ++i) {
    if (!(gamma[i] >= 0.0)) fail(ErrorKind::config, "rate table: negative rate");
    if (i > 0 && !(f0[i] > f0[i - 1]))
      fail(ErrorKind::config, "rate table: fields must be strictly increasing");
  }
}

double RateTable::at(double field) const {
  validate();
  if (!(field >= f0.front() && field <= f0.back())) {
    std::ostringstream msg;
    msg << "rate table: field " << field << " outside [" << f0.front() << ", " << f0.back()
        << "]";
    fail(ErrorKind::domain, msg.str());
  }
  const bool logs = std::all_of(gamma.begin(), gamma.end(), [](double g) { return g > 0.0; });
  const std::size_t n = f0.size();
  std::vector<double> y(n), slope(n - 1), d(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = logs ? std::log(gamma[i]) : gamma[i];
  for (std::size_t i = 0; i + 1 < n; ++i) slope[i] = (y[i + 1] - y[i]) / (f0[i + 1] - f0[i]);
  // Fritsch-Carlson derivatives
  d[0] = slope[0];
  d[n - 1] = slope[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (slope[i - 1] * slope[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double h0 = f0[i] - f0[i - 1], h1 = f0[i + 1] - f0[i];
      const double w1 = 2.0 * h1 + h0, w2 = h1 + 2.0 * h0;
      d[i] = (w1 + w2) / (w1 / slope[i - 1] + w2 / slope[i]);
    }
  }
  std::size_t i = std::upper_bound(f0.begin(), f0.end(), field) - f0.begin();
  i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
  const double h = f0[i + 1] - f0[i];
  const double s = (field - f0[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  const double v = h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1];
  return logs ? std::exp(v) : std::max(v, 0.0);
}

std::size_t RateTable::peak() const {
  return static_cast<std::size_t>(std::max_element(gamma.begin(), gamma.end()) - gamma.begin());
}

RateTable read_rate_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::config, "rate table: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::config, "rate table: empty file " + path);
  line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
  if (line != "f0_z3au,gamma_z2au")
    fail(ErrorKind::config, "rate table: header must be 'f0_z3au,gamma_z2au'");
  RateTable t;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a, b;
    if (!(row >> a >> b))
      fail(ErrorKind::config, "rate table: malformed row " + std::to_string(lineno));
    t.f0.push_back(a);
    t.gamma.push_back(b);
  }
  t.validate();
  return t;
}

void write_rate_table(const RateTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::config, "rate table: cannot write " + path);
  out << "f0_z3au,gamma_z2au\n" << std::setprecision(17);
  for (std::size_t i = 0; i < t.f0.size(); ++i) out << t.f0[i] << ',' << t.gamma[i] << '\n';
}

RateTable rate_scale(const RateTable& table, double z) {
  table.validate();
  const double r = scaled_charge(z) / z;
  RateTable out;
  for (std::size_t i = 0; i < table.f0.size(); ++i) {
    out.f0.push_back(table.f0[i] * r * r * r);
    out.gamma.push_back(r * r * table.gamma[i]);
  }
  return out;
}

double rate_scale_at(const RateTable& table, double z, double field) {
  const double r = scaled_charge(z) / z;
  return r * r * table.at(field / (r * r * r));
}

}  // namespace dirion
