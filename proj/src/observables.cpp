#include "dirion/observables.hpp"

#include <cmath>

#include "dirion/constants.hpp"
#include "dirion/error.hpp"

namespace dirion {

YieldReport ionization_yield(const CouplingSet& set,
                             const std::vector<std::complex<double>>& coefficients,
                             std::size_t initial) {
  if (coefficients.size() != set.size())
    fail(ErrorKind::internal, "coefficient vector does not match coupling set");
  if (initial >= set.size()) fail(ErrorKind::internal, "initial state index out of range");
  YieldReport rep;
  for (const auto& ch : set.channels) {
    ChannelPopulation cp;
    cp.label = ch.label;
    for (std::size_t k = ch.offset; k < ch.offset + ch.count; ++k) {
      const double p = std::norm(coefficients[k]);
      rep.norm += p;
      switch (set.classes[k]) {
        case StateClass::bound:
          cp.bound += p;
          if (k == initial)
            rep.survival += p;
          else
            rep.excitation += p;
          break;
        case StateClass::positive_continuum:
          cp.continuum += p;
          rep.yield += p;
          break;
        case StateClass::negative_energy:
          cp.negative_energy += p;
          rep.negative_energy += p;
          break;
        case StateClass::spurious:
          fail(ErrorKind::internal, "spurious state reached the yield reduction");
      }
    }
    rep.channels.push_back(cp);
  }
  return rep;
}

double ionization_potential(double z, bool relativistic) {
  if (!(z > 0.0)) fail(ErrorKind::parameter, "nuclear charge must be positive");
  if (!relativistic) return 0.5 * z * z;
  const double x = z / constants::speed_of_light;
  if (!(x < 1.0)) fail(ErrorKind::unsupported, "Z >= c has no Dirac bound state");
  // c^2 (1 - sqrt(1 - x^2)) without cancellation
  return constants::c2 * x * x / (1.0 + std::sqrt(1.0 - x * x));
}

int photon_count(double z, double omega, bool relativistic) {
  if (!(omega > 0.0)) fail(ErrorKind::parameter, "photon energy must be positive");
  return static_cast<int>(std::ceil(ionization_potential(z, relativistic) / omega));
}

int pair_threshold_photons(double omega) {
  if (!(omega > 0.0)) fail(ErrorKind::parameter, "photon energy must be positive");
  return static_cast<int>(std::ceil(2.0 * constants::c2 / omega));
}

}  // namespace dirion
