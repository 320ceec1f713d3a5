#include "dirion/propagator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "dirion/constants.hpp"
#include "dirion/error.hpp"

namespace dirion {

void validate(const PropagationSettings& s) {
  AdamsSettings a;
  a.rtol = s.rtol;
  a.atol = s.atol;
  a.max_order = s.max_order;
  a.max_step = s.max_step;
  validate(a);
}

Profile coupling_profile(const CouplingSet& set, const PulseParams& pulse) {
  if (set.gauge == Gauge::length) return [pulse](double t) { return electric_field(pulse, t); };
  return [pulse](double t) { return vector_potential(pulse, t); };
}

CouplingRhs::CouplingRhs(const CouplingSet& set, Profile profile, const kernels::KernelTable& k)
    : set_(&set), profile_(std::move(profile)), k_(&k), n_(set.size()) {
  cos_.resize(n_);
  sin_.resize(n_);
  msin_.resize(n_);
  x_.resize(2 * n_);
  z_.resize(2 * n_);
}

void CouplingRhs::operator()(double t, const double* y, double* dy) {
  const double g = profile_(t);
  if (g == 0.0) {
    std::fill(dy, dy + 2 * n_, 0.0);
    return;
  }
  const double* e = set_->energies.data();
  for (std::size_t i = 0; i < n_; ++i) {
    const double ph = e[i] * t;
    cos_[i] = std::cos(ph);
    sin_[i] = std::sin(ph);
    msin_[i] = -sin_[i];
  }
  double* xr = x_.data();
  double* xi = xr + n_;
  double* zr = z_.data();
  double* zi = zr + n_;
  k_->rotate(n_, cos_.data(), msin_.data(), y, y + n_, xr, xi);
  std::fill(z_.begin(), z_.end(), 0.0);
  const double sign = set_->antisymmetric() ? -1.0 : 1.0;
  for (const auto& blk : set_->blocks) {
    const auto& a = set_->channels[blk.bra];
    const auto& b = set_->channels[blk.ket];
    k_->block_pair(blk.matrix.data(), a.count, b.count, xr + a.offset, xi + a.offset,
                   xr + b.offset, xi + b.offset, zr + a.offset, zi + a.offset, zr + b.offset,
                   zi + b.offset, sign);
  }
  k_->rotate(n_, cos_.data(), sin_.data(), zr, zi, xr, xi);
  if (set_->gauge == Gauge::length) {
    // -i F w
    for (std::size_t i = 0; i < n_; ++i) {
      dy[i] = g * xi[i];
      dy[i + n_] = -g * xr[i];
    }
  } else {
    // -i (i A) w = A w
    for (std::size_t i = 0; i < n_; ++i) {
      dy[i] = g * xr[i];
      dy[i + n_] = g * xi[i];
    }
  }
}

std::size_t ground_index(const CouplingSet& set) {
  std::size_t best = CouplingSet::npos;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (set.classes[i] != StateClass::bound) continue;
    if (best == CouplingSet::npos || set.energies[i] < set.energies[best]) best = i;
  }
  if (best == CouplingSet::npos) fail(ErrorKind::internal, "coupling set has no bound state");
  return best;
}

namespace {

Checkpoint make_checkpoint(const CouplingSet& set, double t, const std::vector<double>& y,
                           bool keep_state) {
  const std::size_t n = set.size();
  Checkpoint c;
  c.t = t;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = y[i] * y[i] + y[i + n] * y[i + n];
    c.norm += p;
    switch (set.classes[i]) {
      case StateClass::bound: c.bound += p; break;
      case StateClass::positive_continuum: c.continuum += p; break;
      case StateClass::negative_energy: c.negative_energy += p; break;
      case StateClass::spurious: fail(ErrorKind::internal, "spurious state in coupling set");
    }
  }
  if (keep_state) {
    c.state.resize(n);
    for (std::size_t i = 0; i < n; ++i) c.state[i] = {y[i], y[i + n]};
  }
  return c;
}

}  // namespace

PropagationResult propagate(const CouplingSet& set, const Profile& profile, double t0, double t1,
                            const std::vector<std::complex<double>>& initial,
                            const std::vector<double>& checkpoint_times,
                            const PropagationSettings& settings, const kernels::KernelTable& k) {
  validate(settings);
  const std::size_t n = set.size();
  if (initial.size() != n) fail(ErrorKind::internal, "initial state does not match coupling set");
  if (!(t1 >= t0)) fail(ErrorKind::parameter, "propagation interval is reversed");

  const auto clock0 = std::chrono::steady_clock::now();
  CouplingRhs rhs(set, profile, k);
  AdamsSettings as;
  as.rtol = settings.rtol;
  as.atol = settings.atol;
  as.max_order = settings.max_order;
  as.max_step = settings.max_step;
  AdamsIntegrator integ(n, std::ref(rhs), as, k);

  std::vector<double> y(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = initial[i].real();
    y[i + n] = initial[i].imag();
  }
  PropagationResult res;
  res.t_start = t0;
  res.t_end = t1;
  res.kernel = k.name;
  integ.start(t0, y);
  const double norm0 = make_checkpoint(set, t0, y, false).norm;

  std::vector<double> stops;
  for (double tc : checkpoint_times)
    if (tc > t0 && tc < t1) stops.push_back(tc);
  std::sort(stops.begin(), stops.end());
  stops.push_back(t1);
  for (double tc : stops) {
    integ.advance_to(tc);
    res.checkpoints.push_back(make_checkpoint(set, tc, integ.state(), settings.dense_output));
    res.max_norm_deviation =
        std::max(res.max_norm_deviation, std::abs(res.checkpoints.back().norm - norm0));
  }

  const auto& yf = integ.state();
  res.coefficients.resize(n);
  for (std::size_t i = 0; i < n; ++i) res.coefficients[i] = {yf[i], yf[i + n]};
  res.stats = integ.stats();
  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - clock0).count();
  return res;
}

PropagationResult propagate(const CouplingSet& set, const PulseParams& pulse,
                            std::size_t initial, const PropagationSettings& settings,
                            const kernels::KernelTable& k) {
  if (initial >= set.size()) fail(ErrorKind::internal, "initial state index out of range");
  std::vector<std::complex<double>> c0(set.size(), 0.0);
  c0[initial] = 1.0;
  std::vector<double> stops;
  const double period = 2.0 * constants::pi / pulse.omega;
  for (int m = 1; pulse.start() + m * period < pulse.end() - 1e-9 * period; ++m)
    stops.push_back(pulse.start() + m * period);
  return propagate(set, coupling_profile(set, pulse), pulse.start(), pulse.end(), c0, stops,
                   settings, k);
}

}  // namespace dirion
