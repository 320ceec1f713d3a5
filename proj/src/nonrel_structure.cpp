#include "dirion/nonrel_structure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dirion/error.hpp"

namespace dirion {

const char* to_string(NonrelClass c) {
  return c == NonrelClass::bound ? "bound" : "continuum";
}

std::size_t NonrelSpectrum::count(NonrelClass c) const {
  return static_cast<std::size_t>(std::count(classes.begin(), classes.end(), c));
}

SchrodingerState NonrelSpectrum::state(std::size_t s) const {
  const auto i = static_cast<Eigen::Index>(s);
  return SchrodingerState{energies[i], coeffs.col(i), l, classes[s]};
}

NonrelSpectrum solve_channel_nr(const RadialBasis& basis, const RadialMatrices& mats, double z,
                                int l) {
  if (l < 0) fail(ErrorKind::parameter, "solve_channel_nr: l must be >= 0");
  if (!(z > 0.0)) fail(ErrorKind::parameter, "solve_channel_nr: Z must be positive");
  const double centrifugal = 0.5 * l * (l + 1);
  BandedMatrix h = 0.5 * mats.kinetic + (-z) * mats.inv_r;
  if (l > 0) h = h + centrifugal * mats.inv_r2;

  GeneralizedEigen eig;
  try {
    eig = solve_banded_generalized(h, mats.overlap);
  } catch (const Error& e) {
    fail(ErrorKind::numerical, "solve_channel_nr(l=" + std::to_string(l) + "): " + e.what());
  }

  NonrelSpectrum out;
  out.l = l;
  out.energies = eig.values;
  out.coeffs = std::move(eig.vectors);
  out.classes.resize(basis.size());
  for (std::size_t s = 0; s < basis.size(); ++s) {
    const auto i = static_cast<Eigen::Index>(s);
    out.classes[s] = out.energies[i] > 0.0 ? NonrelClass::continuum : NonrelClass::bound;
    auto col = out.coeffs.col(i);
    if (out.classes[s] == NonrelClass::bound) refine_eigenpair(h, mats.overlap, out.energies[i], col);
    const double cut = 1e-6 * col.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < col.size(); ++j) {
      if (std::abs(col[j]) > cut) {
        if (col[j] < 0.0) col = -col;
        break;
      }
    }
  }
  return out;
}

NonrelSpectrum solve_channel_nr(const RadialBasis& basis, double z, int l) {
  return solve_channel_nr(basis, radial_matrices(basis), z, l);
}

SchrodingerState ground_state_nr(const std::vector<NonrelSpectrum>& spectra) {
  for (const auto& sp : spectra) {
    if (sp.l != 0) continue;
    if (sp.size() == 0 || sp.classes[0] != NonrelClass::bound) {
      fail(ErrorKind::numerical, "ground_state_nr: no bound s state; basis or box too small");
    }
    return sp.state(0);
  }
  fail(ErrorKind::config, "ground_state_nr: l=0 channel not solved");
}

}  // namespace dirion
