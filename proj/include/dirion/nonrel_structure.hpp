#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "dirion/bspline.hpp"

namespace dirion {

enum class NonrelClass { bound, continuum };

const char* to_string(NonrelClass c);

struct SchrodingerState {
  double energy = 0.0;
  Eigen::VectorXd rho;
  int l = 0;
  NonrelClass cls = NonrelClass::bound;
};

// All n eigenstates of one l channel; pseudostates (E > 0) are kept.
struct NonrelSpectrum {
  int l = 0;
  Eigen::VectorXd energies;
  Eigen::MatrixXd coeffs;  // column per state
  std::vector<NonrelClass> classes;

  std::size_t size() const { return classes.size(); }
  std::size_t count(NonrelClass c) const;
  SchrodingerState state(std::size_t s) const;
};

NonrelSpectrum solve_channel_nr(const RadialBasis& basis, const RadialMatrices& mats, double z,
                                int l);
NonrelSpectrum solve_channel_nr(const RadialBasis& basis, double z, int l);

SchrodingerState ground_state_nr(const std::vector<NonrelSpectrum>& spectra);

}  // namespace dirion
