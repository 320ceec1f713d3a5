#pragma once

#include <complex>
#include <string>
#include <vector>

#include "dirion/dipole.hpp"

namespace dirion {

struct ChannelPopulation {
  std::string label;
  double bound = 0.0;
  double continuum = 0.0;
  double negative_energy = 0.0;
};

// Final-state partition. The yield counts positive-energy continuum states
// only; negative-energy population is reported on its own.
struct YieldReport {
  double yield = 0.0;
  double survival = 0.0;
  double excitation = 0.0;       // bound states other than the initial one
  double negative_energy = 0.0;  // Dirac only
  double norm = 0.0;
  std::vector<ChannelPopulation> channels;

  double partition_residual() const {
    return yield + survival + excitation + negative_energy - norm;
  }
};

YieldReport ionization_yield(const CouplingSet& set,
                             const std::vector<std::complex<double>>& coefficients,
                             std::size_t initial);

double ionization_potential(double z, bool relativistic);
// ceil(I_p / omega)
int photon_count(double z, double omega, bool relativistic);
// ceil(2 c^2 / omega)
int pair_threshold_photons(double omega);

}  // namespace dirion
