#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dirion/bspline.hpp"

namespace dirion {

// Relativistic angular quantum number with its derived (j, l, l_bar).
struct KappaChannel {
  int kappa = -1;

  int two_j() const { return 2 * (kappa < 0 ? -kappa : kappa) - 1; }
  double j() const { return 0.5 * two_j(); }
  int l() const { return kappa < 0 ? -kappa - 1 : kappa; }
  int l_bar() const { return kappa < 0 ? -kappa : kappa - 1; }
  std::string label() const;  // e.g. "p3/2"

  friend bool operator==(KappaChannel, KappaChannel) = default;
};

enum class StateClass { bound, positive_continuum, negative_energy, spurious };

const char* to_string(StateClass c);

struct DiracState {
  double energy = 0.0;  // rest energy c^2 subtracted
  Eigen::VectorXd p, q;
  KappaChannel channel;
  StateClass cls = StateClass::bound;
};

// Full 2n-state spectrum of one kappa channel, including the state flagged
// spurious. Column s of p/q holds the coefficients of state s; states are
// in ascending energy.
struct ChannelSpectrum {
  KappaChannel channel;
  Eigen::VectorXd energies;
  Eigen::MatrixXd p, q;
  std::vector<StateClass> classes;
  std::vector<std::string> warnings;

  std::size_t size() const { return classes.size(); }
  std::size_t count(StateClass c) const;
  DiracState state(std::size_t s) const;
};

// Energy band below -2c^2 that still counts as negative-energy.
double classification_tolerance();

// Closed-form point-nucleus Dirac energy (rest energy subtracted).
double sommerfeld_energy(double z, int n, int kappa);

// All kappa with |kappa| <= j_max + 1/2, ordered by (j, sign kappa).
std::vector<KappaChannel> enumerate_channels(int two_j_max);

ChannelSpectrum solve_channel(const RadialBasis& basis, const RadialMatrices& mats, double z,
                              KappaChannel channel);
ChannelSpectrum solve_channel(const RadialBasis& basis, double z, KappaChannel channel);

// Lowest bound state of the kappa = -1 channel.
DiracState ground_state(const std::vector<ChannelSpectrum>& spectra);

// Sign changes of P across the quadrature nodes where |P| exceeds 1% of its
// peak. The equal-basis discretization leaves a small oscillating tail that
// must not count.
int count_nodes(const RadialBasis& basis, const Eigen::VectorXd& coeffs);

}  // namespace dirion
