#pragma once

// Physical constants in atomic units (e = m_e = hbar = 1).

namespace dirion::constants {

inline constexpr double speed_of_light = 137.035999;
inline constexpr double c2 = speed_of_light * speed_of_light;
inline constexpr double critical_field = c2 * speed_of_light;

inline constexpr double hartree_ev = 27.211386;
// Intensity whose peak field is 1 a.u.
inline constexpr double intensity_au_wcm2 = 3.509445e16;
// omega[a.u.] * lambda[nm]
inline constexpr double omega_times_wavelength_nm = 45.56335;

inline constexpr double pi = 3.14159265358979323846;

}  // namespace dirion::constants
