#pragma once

#include <optional>

namespace dirion {

// N-cycle cos^2-envelope pulse, linearly polarized along z:
//   A(t) = A0 cos^2(pi t / T) sin(omega t) on (-T/2, T/2), zero outside.
struct PulseParams {
  double cycles = 0.0;
  double omega = 0.0;     // a.u.
  double f0 = 0.0;        // nominal peak field, a.u.
  double a0 = 0.0;        // F0 / omega
  double duration = 0.0;  // 2 pi N / omega
  std::optional<double> intensity_wcm2;

  double start() const { return -0.5 * duration; }
  double end() const { return 0.5 * duration; }
};

PulseParams make_pulse(double cycles, double omega, double f0);
PulseParams make_pulse_from_intensity(double cycles, double omega, double intensity_wcm2);

double vector_potential(const PulseParams& p, double t);
// F = -dA/dt, analytic.
double electric_field(const PulseParams& p, double t);

double intensity_to_field(double intensity_wcm2);
double field_to_intensity(double f0);
double wavelength_to_omega(double wavelength_nm);
double omega_to_wavelength(double omega);

}  // namespace dirion
