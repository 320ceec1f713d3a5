#pragma once

#include <string>
#include <vector>

namespace dirion {

// Pulse and box of the hydrogen (Z=1) problem.
struct BaseSetup {
  double cycles = 20.0;
  double omega = 1.0;  // a.u.
  double intensity_wcm2 = 1e13;
  double radius = 250.0;
};

// The same problem mapped to charge Z: omega Z^2, I Z^6, A0 Z, R / Z, T / Z^2.
struct ScaledConfig {
  double z = 1.0;
  BaseSetup base;
  double omega = 0.0;
  double intensity_wcm2 = 0.0;
  double f0 = 0.0;
  double a0 = 0.0;
  double radius = 0.0;
  double duration = 0.0;
  double cycles = 0.0;
};

ScaledConfig scale_config(double z, const BaseSetup& base);
BaseSetup unscale(const ScaledConfig& scaled);

// c^2 (1 - sqrt(1 - Z^2/c^2)) - Z^2/2
double delta_ip(double z);
// Z' with Z'^2 / 2 equal to the Dirac ionization potential of charge Z
double scaled_charge(double z);
// sqrt(2 I_p) omega / F0 with the nonrelativistic I_p = Z^2 / 2
double keldysh(double z, double omega, double f0);
// c^3
double critical_field();

// Static-field ionization rates of hydrogen in scaled units
// (field in Z^3 a.u., rate in Z^2 a.u.).
struct RateTable {
  std::vector<double> f0;
  std::vector<double> gamma;

  void validate() const;
  // Shape-preserving cubic interpolation of log(gamma) (of gamma itself if
  // the table contains zeros). Throws outside [f0.front(), f0.back()].
  double at(double field) const;
  std::size_t peak() const;
};

RateTable read_rate_table(const std::string& path);
void write_rate_table(const RateTable& t, const std::string& path);

// Gamma'(F0) = (Z'/Z)^2 Gamma(F0 (Z/Z')^3), tabulated on the mapped field grid.
RateTable rate_scale(const RateTable& table, double z);
// Same transform at one field value, interpolating the source table.
double rate_scale_at(const RateTable& table, double z, double field);

}  // namespace dirion
