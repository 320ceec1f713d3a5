#include "dirion/pulse.hpp"

#include <cmath>

#include "dirion/constants.hpp"
#include "dirion/error.hpp"

namespace dirion {

PulseParams make_pulse(double cycles, double omega, double f0) {
  if (!(cycles > 0.0)) fail(ErrorKind::parameter, "pulse: cycle count must be positive");
  if (!(omega > 0.0)) fail(ErrorKind::parameter, "pulse: photon energy must be positive");
  if (!(f0 >= 0.0)) fail(ErrorKind::parameter, "pulse: field amplitude must be non-negative");
  PulseParams p;
  p.cycles = cycles;
  p.omega = omega;
  p.f0 = f0;
  p.a0 = f0 / omega;
  p.duration = 2.0 * constants::pi * cycles / omega;
  return p;
}

PulseParams make_pulse_from_intensity(double cycles, double omega, double intensity_wcm2) {
  PulseParams p = make_pulse(cycles, omega, intensity_to_field(intensity_wcm2));
  p.intensity_wcm2 = intensity_wcm2;
  return p;
}

double vector_potential(const PulseParams& p, double t) {
  if (!(t > p.start() && t < p.end())) return 0.0;
  // envelope and carrier phases in units of the pulse
  const double env = std::cos(constants::pi * t / p.duration);
  return p.a0 * env * env * std::sin(p.omega * t);
}

double electric_field(const PulseParams& p, double t) {
  if (!(t > p.start() && t < p.end())) return 0.0;
  const double x = constants::pi * t / p.duration;
  const double env = std::cos(x);
  const double phase = p.omega * t;
  const double denv = -(constants::pi / p.duration) * std::sin(2.0 * x);  // d cos^2 / dt
  return -p.a0 * (denv * std::sin(phase) + env * env * p.omega * std::cos(phase));
}

double intensity_to_field(double intensity_wcm2) {
  if (!(intensity_wcm2 >= 0.0)) fail(ErrorKind::parameter, "intensity must be non-negative");
  return std::sqrt(intensity_wcm2 / constants::intensity_au_wcm2);
}

double field_to_intensity(double f0) { return f0 * f0 * constants::intensity_au_wcm2; }

double wavelength_to_omega(double wavelength_nm) {
  if (!(wavelength_nm > 0.0)) fail(ErrorKind::parameter, "wavelength must be positive");
  return constants::omega_times_wavelength_nm / wavelength_nm;
}

double omega_to_wavelength(double omega) {
  if (!(omega > 0.0)) fail(ErrorKind::parameter, "photon energy must be positive");
  return constants::omega_times_wavelength_nm / omega;
}

}  // namespace dirion
