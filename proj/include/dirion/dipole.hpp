#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dirion/angular.hpp"
#include "dirion/bspline.hpp"
#include "dirion/nonrel_structure.hpp"
#include "dirion/rel_structure.hpp"

namespace dirion {

enum class Theory { dirac, schrodinger };
enum class Gauge { length, velocity };

const char* to_string(Theory t);
const char* to_string(Gauge g);

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Magnetic quantum numbers fixed by the ground-state initial condition.
inline constexpr int kRelTwoM = 1;  // m = 1/2
inline constexpr int kNonrelM = 0;

// ---- radial integrals --------------------------------------------------

// int r (P_i P_f + Q_i Q_f) dr
double radial_length_rel(const RadialMatrices& mats, const DiracState& f, const DiracState& i);
// int [(1 + D_fi) P_i Q_f - (1 - D_fi) Q_i P_f] dr
double radial_velocity_rel(const RadialMatrices& mats, const DiracState& f, const DiracState& i);
// int r R_i R_f dr
double radial_length_nr(const RadialMatrices& mats, const SchrodingerState& f,
                        const SchrodingerState& i);
// int R_f [d/dr + s lambda / r] R_i dr with (s, lambda) = (+1, l_i) when
// l_f < l_i and (-1, l_f) when l_f > l_i. Throws unless |l_f - l_i| = 1.
double radial_velocity_nr(const RadialMatrices& mats, const SchrodingerState& f,
                          const SchrodingerState& i);

// All-pairs versions: rows index states of the bra spectrum, columns the ket.
Eigen::MatrixXd radial_length_rel(const RadialMatrices& mats, const ChannelSpectrum& f,
                                  const ChannelSpectrum& i);
Eigen::MatrixXd radial_velocity_rel(const RadialMatrices& mats, const ChannelSpectrum& f,
                                    const ChannelSpectrum& i);
Eigen::MatrixXd radial_length_nr(const RadialMatrices& mats, const NonrelSpectrum& f,
                                  const NonrelSpectrum& i);
Eigen::MatrixXd radial_velocity_nr(const RadialMatrices& mats, const NonrelSpectrum& f,
                                   const NonrelSpectrum& i);

// ---- full matrix elements ----------------------------------------------
// <f| z |i> and <f| v_z |i> (v_z = c alpha_z or p_z) with the angular factor
// for the fixed m. The velocity element is purely imaginary.
double length_element_rel(const RadialMatrices& mats, const DiracState& f, const DiracState& i);
std::complex<double> velocity_element_rel(const RadialMatrices& mats, const DiracState& f,
                                          const DiracState& i);
double length_element_nr(const RadialMatrices& mats, const SchrodingerState& f,
                         const SchrodingerState& i);
std::complex<double> velocity_element_nr(const RadialMatrices& mats, const SchrodingerState& f,
                                         const SchrodingerState& i);

// ---- coupling assembly -------------------------------------------------

struct CouplingChannel {
  int quantum = 0;  // kappa (Dirac) or l (Schrodinger)
  int l = 0;
  std::string label;
  std::size_t offset = 0;  // first global state index
  std::size_t count = 0;
  std::vector<std::size_t> source_state;  // index into the channel spectrum
};

// One off-diagonal channel pair (bra < ket). The full coupling is
//   length:   V(t) = F(t) M,    M real symmetric
//   velocity: V(t) = i A(t) M,  M real antisymmetric
// and M restricted to (bra, ket) is `matrix`; the (ket, bra) block follows by
// (anti)symmetry.
struct CouplingBlock {
  std::size_t bra = 0;
  std::size_t ket = 0;
  RowMatrix matrix;
};

struct CouplingSet {
  Theory theory = Theory::dirac;
  Gauge gauge = Gauge::length;
  bool include_ne = true;
  int truncation = 0;  // 2 j_max (Dirac) or l_max
  double energy_cutoff = 0.0;
  std::vector<CouplingChannel> channels;
  Eigen::VectorXd energies;
  std::vector<StateClass> classes;
  std::vector<CouplingBlock> blocks;
  // Largest mismatch between independently built (bra,ket) and (ket,bra)
  // blocks after applying the (anti)symmetry, relative to max |M|.
  double hermiticity_error = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(energies.size()); }
  bool antisymmetric() const { return gauge == Gauge::velocity; }
  // Global index of state `source` of channel `ch`, or npos.
  std::size_t index_of(std::size_t ch, std::size_t source) const;
  // Static part M as a dense matrix (test and validation sizes only).
  Eigen::MatrixXd dense_static() const;
  // max|V - V^dagger| / max|V| of dense_static() with the gauge phase applied.
  double hermiticity_residual() const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

struct DipoleOptions {
  // Validation mutation: reverses the sign of D_fi (Dirac) or of the l/r
  // term (Schrodinger) in the velocity integrand. The operator stays
  // Hermitian but the gauge identity breaks.
  bool velocity_fault = false;
  // When positive, drop pseudostates more than this far above their
  // threshold: E > cutoff, and negative-energy states with E < -2c^2 - cutoff.
  double energy_cutoff = 0.0;
};

CouplingSet build_coupling(const RadialMatrices& mats, const std::vector<ChannelSpectrum>& spectra,
                           Gauge gauge, bool include_ne, int two_j_max,
                           const DipoleOptions& options = {});
CouplingSet build_coupling(const RadialMatrices& mats, const std::vector<NonrelSpectrum>& spectra,
                           Gauge gauge, int l_max, const DipoleOptions& options = {});

// ---- cache -------------------------------------------------------------

// Versioned binary image of a CouplingSet; `key` identifies its inputs.
void save_coupling(const CouplingSet& set, std::uint64_t key, const std::string& path);
// Returns false when the file is absent, of another version, or of another key.
bool load_coupling(const std::string& path, std::uint64_t key, CouplingSet& set);

}  // namespace dirion
