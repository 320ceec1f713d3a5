#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "dirion/adams.hpp"
#include "dirion/dipole.hpp"
#include "dirion/kernels.hpp"
#include "dirion/pulse.hpp"

namespace dirion {

struct PropagationSettings {
  double rtol = 1e-8;
  double atol = 1e-12;
  int max_order = 12;
  double max_step = std::numeric_limits<double>::infinity();
  bool dense_output = false;  // keep the full state at every checkpoint
};

void validate(const PropagationSettings& s);

// Time profile multiplying the static coupling: F(t) for the length form,
// A(t) for the velocity form.
using Profile = std::function<double(double)>;
Profile coupling_profile(const CouplingSet& set, const PulseParams& pulse);

// C'_K = -i sum_K' exp(i (E_K - E_K') t) V_KK'(t) C_K', evaluated as
// phase * M * conj-phase with one pass over the channel blocks.
class CouplingRhs {
 public:
  CouplingRhs(const CouplingSet& set, Profile profile,
              const kernels::KernelTable& k = kernels::active_kernels());
  // y and dy are split complex arrays of length 2 * size()
  void operator()(double t, const double* y, double* dy);
  std::size_t size() const { return n_; }

 private:
  const CouplingSet* set_;
  Profile profile_;
  const kernels::KernelTable* k_;
  std::size_t n_;
  std::vector<double> cos_, sin_, msin_, x_, z_;
};

struct Checkpoint {
  double t = 0.0;
  double norm = 0.0;
  double bound = 0.0;
  double continuum = 0.0;
  double negative_energy = 0.0;
  std::vector<std::complex<double>> state;  // dense output only
};

struct PropagationResult {
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<std::complex<double>> coefficients;
  std::vector<Checkpoint> checkpoints;
  double max_norm_deviation = 0.0;
  AdamsStats stats;
  double wall_seconds = 0.0;
  std::string kernel;
};

// Lowest-energy bound state of the coupling set.
std::size_t ground_index(const CouplingSet& set);

// Integrates from -T/2 to T/2 starting in `initial`, with checkpoints at
// every carrier period.
PropagationResult propagate(const CouplingSet& set, const PulseParams& pulse,
                            std::size_t initial, const PropagationSettings& settings,
                            const kernels::KernelTable& k = kernels::active_kernels());

// General form: arbitrary profile, interval and initial vector.
PropagationResult propagate(const CouplingSet& set, const Profile& profile, double t0, double t1,
                            const std::vector<std::complex<double>>& initial,
                            const std::vector<double>& checkpoint_times,
                            const PropagationSettings& settings,
                            const kernels::KernelTable& k = kernels::active_kernels());

}  // namespace dirion
