#include "dirion/rel_structure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dirion/constants.hpp"
#include "dirion/error.hpp"

namespace dirion {

namespace {

constexpr char kOrbitalLetters[] = "spdfghiklmnoqrtuvwxyz";

// Makes the first non-negligible coefficient of the dominant component positive.
void fix_sign(Eigen::Ref<Eigen::VectorXd> p, Eigen::Ref<Eigen::VectorXd> q) {
  const Eigen::Ref<Eigen::VectorXd>& lead = p.norm() >= q.norm() ? p : q;
  const double cut = 1e-6 * lead.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < lead.size(); ++i) {
    if (std::abs(lead[i]) > cut) {
      if (lead[i] < 0.0) {
        p = -p;
        q = -q;
      }
      return;
    }
  }
}

}  // namespace

std::string KappaChannel::label() const {
  const int ll = l();
  std::string s(1, ll < static_cast<int>(sizeof(kOrbitalLetters) - 1) ? kOrbitalLetters[ll] : '?');
  return s + std::to_string(two_j()) + "/2";
}

const char* to_string(StateClass c) {
  switch (c) {
    case StateClass::bound: return "bound";
    case StateClass::positive_continuum: return "continuum";
    case StateClass::negative_energy: return "negative";
    case StateClass::spurious: return "spurious";
  }
  return "?";
}

std::size_t ChannelSpectrum::count(StateClass c) const {
  return static_cast<std::size_t>(std::count(classes.begin(), classes.end(), c));
}

DiracState ChannelSpectrum::state(std::size_t s) const {
  return DiracState{energies[static_cast<Eigen::Index>(s)], p.col(static_cast<Eigen::Index>(s)),
                    q.col(static_cast<Eigen::Index>(s)), channel, classes[s]};
}

double classification_tolerance() { return 1e-6 * constants::c2; }

double sommerfeld_energy(double z, int n, int kappa) {
  const double za = z / constants::speed_of_light;
  const int ak = std::abs(kappa);
  const double gamma = std::sqrt(static_cast<double>(ak * ak) - za * za);
  const double denom = static_cast<double>(n - ak) + gamma;
  const double x = za / denom;
  // c^2 (1/sqrt(1+x^2) - 1) without cancellation
  const double s = std::sqrt(1.0 + x * x);
  return -constants::c2 * x * x / (s * (1.0 + s));
}

std::vector<KappaChannel> enumerate_channels(int two_j_max) {
  if (two_j_max < 1 || two_j_max % 2 == 0)
    fail(ErrorKind::parameter, "j_max must be a positive half-integer (2 j_max odd)");
  std::vector<KappaChannel> out;
  for (int tj = 1; tj <= two_j_max; tj += 2) {
    const int mag = (tj + 1) / 2;
    out.push_back({-mag});
    out.push_back({mag});
  }
  return out;
}

ChannelSpectrum solve_channel(const RadialBasis& basis, const RadialMatrices& mats, double z,
                              KappaChannel channel) {
  const double c = constants::speed_of_light;
  if (channel.kappa == 0) fail(ErrorKind::parameter, "solve_channel: kappa must be nonzero");
  if (!(z > 0.0)) fail(ErrorKind::parameter, "solve_channel: Z must be positive");
  if (z >= c) fail(ErrorKind::unsupported, "solve_channel: Z >= c is supercritical");

  const std::size_t n = basis.size();
  const std::size_t w = mats.overlap.half_bandwidth();
  const double kappa = channel.kappa;

  // Interleaved (p1, q1, p2, q2, ...), energies measured from c^2.
  BandedMatrix h(2 * n, 2 * w + 1, true);
  BandedMatrix s(2 * n, 2 * w, true);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i > w ? i - w : 0;
    const std::size_t hi = std::min(n - 1, i + w);
    for (std::size_t j = lo; j <= hi; ++j) {
      const double ov = mats.overlap(i, j);
      const double pot = -z * mats.inv_r(i, j);
      h.at(2 * i, 2 * j) = pot;
      h.at(2 * i + 1, 2 * j + 1) = pot - 2.0 * constants::c2 * ov;
      h.at(2 * i, 2 * j + 1) = c * (kappa * mats.inv_r(i, j) - mats.derivative(i, j));
      h.at(2 * i + 1, 2 * j) = c * (kappa * mats.inv_r(i, j) + mats.derivative(i, j));
      s.at(2 * i, 2 * j) = ov;
      s.at(2 * i + 1, 2 * j + 1) = ov;
    }
  }

  GeneralizedEigen eig;
  try {
    eig = solve_banded_generalized(h, s);
  } catch (const Error& e) {
    fail(ErrorKind::numerical, "solve_channel(kappa=" + std::to_string(channel.kappa) +
                                   "): " + e.what());
  }

  // Bound states: polish against the large spectral radius of the discretized operator.
  for (std::size_t st = n; st < 2 * n; ++st) {
    const auto col = static_cast<Eigen::Index>(st);
    const double e = eig.values[col];
    if (e >= 0.0) break;
    if (channel.kappa > 0 && st == n) continue;
    if (e > -constants::c2) refine_eigenpair(h, s, eig.values[col], eig.vectors.col(col));
  }

  ChannelSpectrum out;
  out.channel = channel;
  out.energies = eig.values;
  out.p.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(2 * n));
  out.q.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(2 * n));
  for (std::size_t st = 0; st < 2 * n; ++st) {
    for (std::size_t i = 0; i < n; ++i) {
      out.p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(st)) =
          eig.vectors(static_cast<Eigen::Index>(2 * i), static_cast<Eigen::Index>(st));
      out.q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(st)) =
          eig.vectors(static_cast<Eigen::Index>(2 * i + 1), static_cast<Eigen::Index>(st));
    }
    fix_sign(out.p.col(static_cast<Eigen::Index>(st)), out.q.col(static_cast<Eigen::Index>(st)));
  }

  const double ne_limit = -2.0 * constants::c2 + classification_tolerance();
  out.classes.resize(2 * n);
  for (std::size_t st = 0; st < 2 * n; ++st) {
    const double e = out.energies[static_cast<Eigen::Index>(st)];
    if (e < ne_limit) {
      out.classes[st] = StateClass::negative_energy;
    } else if (e > -constants::c2 && e < 0.0) {
      out.classes[st] = StateClass::bound;
    } else if (e >= 0.0) {
      out.classes[st] = StateClass::positive_continuum;
    } else {
      fail(ErrorKind::numerical, "solve_channel(kappa=" + std::to_string(channel.kappa) +
                                     "): eigenvalue " + std::to_string(e) +
                                     " inside the mass gap");
    }
  }
  if (out.count(StateClass::negative_energy) != n) {
    fail(ErrorKind::numerical, "solve_channel(kappa=" + std::to_string(channel.kappa) +
                                   "): expected " + std::to_string(n) +
                                   " negative-energy states, found " +
                                   std::to_string(out.count(StateClass::negative_energy)));
  }

  if (channel.kappa > 0) {
    out.classes[n] = StateClass::spurious;
    // The lowest physical kappa>0 state has principal number kappa+1.
    const double expected = sommerfeld_energy(z, channel.kappa + 1, channel.kappa);
    const double found = out.energies[static_cast<Eigen::Index>(n + 1)];
    if (std::abs(found - expected) > 1e-4 * std::abs(expected)) {
      out.warnings.push_back("kappa=" + std::to_string(channel.kappa) +
                             ": lowest state after spurious removal at " +
                             std::to_string(found) + " a.u., analytic " +
                             std::to_string(expected));
    }
  }
  return out;
}

ChannelSpectrum solve_channel(const RadialBasis& basis, double z, KappaChannel channel) {
  return solve_channel(basis, radial_matrices(basis), z, channel);
}

DiracState ground_state(const std::vector<ChannelSpectrum>& spectra) {
  for (const auto& sp : spectra) {
    if (sp.channel.kappa != -1) continue;
    for (std::size_t s = 0; s < sp.size(); ++s) {
      if (sp.classes[s] == StateClass::bound) return sp.state(s);
    }
    fail(ErrorKind::numerical, "ground_state: no bound kappa=-1 state; basis or box too small");
  }
  fail(ErrorKind::config, "ground_state: kappa=-1 channel not solved");
}

int count_nodes(const RadialBasis& basis, const Eigen::VectorXd& coeffs) {
  const auto& nodes = basis.quadrature().nodes;
  std::vector<double> vals;
  vals.reserve(nodes.size());
  double peak = 0.0;
  for (double r : nodes) {
    vals.push_back(basis.expand({coeffs.data(), static_cast<std::size_t>(coeffs.size())}, r));
    peak = std::max(peak, std::abs(vals.back()));
  }
  int changes = 0;
  double last = 0.0;
  for (double v : vals) {
    if (std::abs(v) < 1e-2 * peak) continue;
    if (last != 0.0 && (v > 0) != (last > 0)) ++changes;
    last = v;
  }
  return changes;
}

}  // namespace dirion
