#include "dirion/dipole.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include "dirion/constants.hpp"
#include "dirion/error.hpp"

namespace dirion {

namespace {

// <f| c alpha_z |i> = i kRelVelocityPhase c W_fi I_fi, with I_fi the
// radial_velocity_rel integral. Fixed by the (E_f - E_i) operator identity.
constexpr double kRelVelocityPhase = 1.0;

double bilinear(const BandedMatrix& m, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  return a.dot(m.multiply(b));
}

void check_nr_pair(int l_f, int l_i) {
  if (std::abs(l_f - l_i) != 1) {
    fail(ErrorKind::parameter, "radial_velocity_nr: requires |l_f - l_i| = 1, got l_f=" +
                                   std::to_string(l_f) + " l_i=" + std::to_string(l_i));
  }
}

// Banded operator (d/dr + s lambda / r) for the nonrelativistic velocity form.
// `fault` = -1 reverses the centrifugal term (validation mutation).
BandedMatrix nr_velocity_operator(const RadialMatrices& mats, int l_f, int l_i, double fault = 1.0) {
  check_nr_pair(l_f, l_i);
  if (l_f < l_i) return mats.derivative + fault * static_cast<double>(l_i) * mats.inv_r;
  return mats.derivative + fault * static_cast<double>(-l_f) * mats.inv_r;
}

double angular_rel_value(int kappa_f, int kappa_i) {
  return angular_rel({kappa_f, kRelTwoM}, {kappa_i, kRelTwoM}).value;
}

double angular_nr_value(int l_f, int l_i) {
  return angular_nonrel(l_f, kNonrelM, l_i, kNonrelM).value;
}

bool beyond_cutoff(double energy, double cutoff) {
  if (!(cutoff > 0.0)) return false;
  return energy > cutoff || energy < -2.0 * constants::c2 - cutoff;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& m, const std::vector<std::size_t>& cols) {
  Eigen::MatrixXd out(m.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    out.col(static_cast<Eigen::Index>(c)) = m.col(static_cast<Eigen::Index>(cols[c]));
  }
  return out;
}

struct RelChannelData {
  Eigen::MatrixXd p, q;  // selected states
};

// Static coupling M restricted to (bra a, ket b) for the Dirac theory.
Eigen::MatrixXd rel_block(const RadialMatrices& mats, Gauge gauge, int kappa_a,
                          const RelChannelData& a, int kappa_b, const RelChannelData& b,
                          double w, double fault) {
  if (gauge == Gauge::length) {
    return w * (a.p.transpose() * mats.r.multiply(b.p) + a.q.transpose() * mats.r.multiply(b.q));
  }
  const double d = fault * delta_fi(kappa_a, kappa_b);
  const Eigen::MatrixXd integral = (1.0 + d) * (a.q.transpose() * mats.overlap.multiply(b.p)) -
                                   (1.0 - d) * (a.p.transpose() * mats.overlap.multiply(b.q));
  return (kRelVelocityPhase * constants::speed_of_light * w) * integral;
}

Eigen::MatrixXd nr_block(const RadialMatrices& mats, Gauge gauge, int l_a,
                         const Eigen::MatrixXd& a, int l_b, const Eigen::MatrixXd& b, double w,
                         double fault) {
  if (gauge == Gauge::length) return w * (a.transpose() * mats.r.multiply(b));
  // <f|p_z|i> = -i W X  =>  M = -W X
  return -w * (a.transpose() * nr_velocity_operator(mats, l_a, l_b, fault).multiply(b));
}

void finish_blocks(CouplingSet& set, double worst_mismatch) {
  double peak = 0.0;
  for (const auto& blk : set.blocks) peak = std::max(peak, blk.matrix.cwiseAbs().maxCoeff());
  set.hermiticity_error = peak > 0.0 ? worst_mismatch / peak : 0.0;
  if (set.hermiticity_error > 1e-10) {
    fail(ErrorKind::internal, "build_coupling: coupling operator not Hermitian (residual " +
                                  std::to_string(set.hermiticity_error) + ")");
  }
}

}  // namespace

const char* to_string(Theory t) { return t == Theory::dirac ? "dirac" : "schrodinger"; }
const char* to_string(Gauge g) { return g == Gauge::length ? "length" : "velocity"; }

double radial_length_rel(const RadialMatrices& mats, const DiracState& f, const DiracState& i) {
  return bilinear(mats.r, f.p, i.p) + bilinear(mats.r, f.q, i.q);
}

double radial_velocity_rel(const RadialMatrices& mats, const DiracState& f, const DiracState& i) {
  const double d = delta_fi(f.channel.kappa, i.channel.kappa);
  return (1.0 + d) * bilinear(mats.overlap, f.q, i.p) -
         (1.0 - d) * bilinear(mats.overlap, f.p, i.q);
}

double radial_length_nr(const RadialMatrices& mats, const SchrodingerState& f,
                        const SchrodingerState& i) {
  return bilinear(mats.r, f.rho, i.rho);
}

double radial_velocity_nr(const RadialMatrices& mats, const SchrodingerState& f,
                          const SchrodingerState& i) {
  return bilinear(nr_velocity_operator(mats, f.l, i.l), f.rho, i.rho);
}

Eigen::MatrixXd radial_length_rel(const RadialMatrices& mats, const ChannelSpectrum& f,
                                  const ChannelSpectrum& i) {
  return f.p.transpose() * mats.r.multiply(i.p) + f.q.transpose() * mats.r.multiply(i.q);
}

Eigen::MatrixXd radial_velocity_rel(const RadialMatrices& mats, const ChannelSpectrum& f,
                                    const ChannelSpectrum& i) {
  const double d = delta_fi(f.channel.kappa, i.channel.kappa);
  return (1.0 + d) * (f.q.transpose() * mats.overlap.multiply(i.p)) -
         (1.0 - d) * (f.p.transpose() * mats.overlap.multiply(i.q));
}

Eigen::MatrixXd radial_length_nr(const RadialMatrices& mats, const NonrelSpectrum& f,
                                  const NonrelSpectrum& i) {
  return f.coeffs.transpose() * mats.r.multiply(i.coeffs);
}

Eigen::MatrixXd radial_velocity_nr(const RadialMatrices& mats, const NonrelSpectrum& f,
                                   const NonrelSpectrum& i) {
  return f.coeffs.transpose() * nr_velocity_operator(mats, f.l, i.l).multiply(i.coeffs);
}

double length_element_rel(const RadialMatrices& mats, const DiracState& f, const DiracState& i) {
  return angular_rel_value(f.channel.kappa, i.channel.kappa) * radial_length_rel(mats, f, i);
}

std::complex<double> velocity_element_rel(const RadialMatrices& mats, const DiracState& f,
                                          const DiracState& i) {
  const double w = angular_rel_value(f.channel.kappa, i.channel.kappa);
  return {0.0, kRelVelocityPhase * constants::speed_of_light * w * radial_velocity_rel(mats, f, i)};
}

double length_element_nr(const RadialMatrices& mats, const SchrodingerState& f,
                         const SchrodingerState& i) {
  return angular_nr_value(f.l, i.l) * radial_length_nr(mats, f, i);
}

std::complex<double> velocity_element_nr(const RadialMatrices& mats, const SchrodingerState& f,
                                         const SchrodingerState& i) {
  return {0.0, -angular_nr_value(f.l, i.l) * radial_velocity_nr(mats, f, i)};
}

std::size_t CouplingSet::index_of(std::size_t ch, std::size_t source) const {
  const auto& c = channels.at(ch);
  const auto it = std::find(c.source_state.begin(), c.source_state.end(), source);
  if (it == c.source_state.end()) return npos;
  return c.offset + static_cast<std::size_t>(it - c.source_state.begin());
}

Eigen::MatrixXd CouplingSet::dense_static() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  const double sign = antisymmetric() ? -1.0 : 1.0;
  for (const auto& blk : blocks) {
    const auto& a = channels[blk.bra];
    const auto& b = channels[blk.ket];
    const auto ra = static_cast<Eigen::Index>(a.offset), rb = static_cast<Eigen::Index>(b.offset);
    const auto na = static_cast<Eigen::Index>(a.count), nb = static_cast<Eigen::Index>(b.count);
    m.block(ra, rb, na, nb) = blk.matrix;
    m.block(rb, ra, nb, na) = sign * blk.matrix.transpose();
  }
  return m;
}

double CouplingSet::hermiticity_residual() const {
  const Eigen::MatrixXd m = dense_static();
  const double peak = m.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 0.0;
  // V = F M (length) or i A M (velocity)
  const double residual = antisymmetric() ? (m + m.transpose()).cwiseAbs().maxCoeff()
                                          : (m - m.transpose()).cwiseAbs().maxCoeff();
  return residual / peak;
}

CouplingSet build_coupling(const RadialMatrices& mats, const std::vector<ChannelSpectrum>& spectra,
                           Gauge gauge, bool include_ne, int two_j_max,
                           const DipoleOptions& options) {
  CouplingSet set;
  set.theory = Theory::dirac;
  set.gauge = gauge;
  set.include_ne = include_ne;
  set.truncation = two_j_max;
  set.energy_cutoff = options.energy_cutoff;
  const double fault = options.velocity_fault ? -1.0 : 1.0;

  std::vector<const ChannelSpectrum*> used;
  std::vector<RelChannelData> data;
  std::vector<double> energies;
  for (const KappaChannel ch : enumerate_channels(two_j_max)) {
    const auto it = std::find_if(spectra.begin(), spectra.end(),
                                 [&](const ChannelSpectrum& s) { return s.channel == ch; });
    if (it == spectra.end()) {
      fail(ErrorKind::config, "build_coupling: channel kappa=" + std::to_string(ch.kappa) +
                                  " (" + ch.label() + ") not solved");
    }
    CouplingChannel cc;
    cc.quantum = ch.kappa;
    cc.l = ch.l();
    cc.label = ch.label();
    cc.offset = energies.size();
    for (std::size_t s = 0; s < it->size(); ++s) {
      const StateClass cls = it->classes[s];
      if (cls == StateClass::spurious) continue;
      if (cls == StateClass::negative_energy && !include_ne) continue;
      if (beyond_cutoff(it->energies[static_cast<Eigen::Index>(s)], options.energy_cutoff))
        continue;
      cc.source_state.push_back(s);
      energies.push_back(it->energies[static_cast<Eigen::Index>(s)]);
      set.classes.push_back(cls);
    }
    cc.count = cc.source_state.size();
    data.push_back({select_columns(it->p, cc.source_state), select_columns(it->q, cc.source_state)});
    used.push_back(&*it);
    set.channels.push_back(std::move(cc));
  }
  set.energies = Eigen::Map<Eigen::VectorXd>(energies.data(), static_cast<Eigen::Index>(energies.size()));

  const double sym = gauge == Gauge::velocity ? -1.0 : 1.0;
  double worst = 0.0;
  for (std::size_t a = 0; a < set.channels.size(); ++a) {
    for (std::size_t b = a + 1; b < set.channels.size(); ++b) {
      const int ka = set.channels[a].quantum, kb = set.channels[b].quantum;
      const double w_ab = angular_rel_value(ka, kb);
      if (w_ab == 0.0) continue;
      CouplingBlock blk;
      blk.bra = a;
      blk.ket = b;
      blk.matrix = rel_block(mats, gauge, ka, data[a], kb, data[b], w_ab, fault);
      const Eigen::MatrixXd reverse =
          rel_block(mats, gauge, kb, data[b], ka, data[a], angular_rel_value(kb, ka), fault);
      worst = std::max(worst, (reverse.transpose() - sym * Eigen::MatrixXd(blk.matrix))
                                  .cwiseAbs()
                                  .maxCoeff());
      set.blocks.push_back(std::move(blk));
    }
  }
  finish_blocks(set, worst);
  return set;
}

CouplingSet build_coupling(const RadialMatrices& mats, const std::vector<NonrelSpectrum>& spectra,
                           Gauge gauge, int l_max, const DipoleOptions& options) {
  CouplingSet set;
  set.theory = Theory::schrodinger;
  set.gauge = gauge;
  set.include_ne = false;
  set.truncation = l_max;
  set.energy_cutoff = options.energy_cutoff;
  const double fault = options.velocity_fault ? -1.0 : 1.0;

  std::vector<Eigen::MatrixXd> kept;
  std::vector<double> energies;
  for (int l = 0; l <= l_max; ++l) {
    const auto it = std::find_if(spectra.begin(), spectra.end(),
                                 [&](const NonrelSpectrum& s) { return s.l == l; });
    if (it == spectra.end()) {
      fail(ErrorKind::config, "build_coupling: channel l=" + std::to_string(l) + " not solved");
    }
    CouplingChannel cc;
    cc.quantum = l;
    cc.l = l;
    cc.label = std::string(1, "spdfghiklmnoqrtuvwxyz"[std::min(l, 20)]);
    cc.offset = energies.size();
    for (std::size_t s = 0; s < it->size(); ++s) {
      if (beyond_cutoff(it->energies[static_cast<Eigen::Index>(s)], options.energy_cutoff))
        continue;
      cc.source_state.push_back(s);
      energies.push_back(it->energies[static_cast<Eigen::Index>(s)]);
      set.classes.push_back(it->classes[s] == NonrelClass::bound ? StateClass::bound
                                                                 : StateClass::positive_continuum);
    }
    cc.count = cc.source_state.size();
    kept.push_back(select_columns(it->coeffs, cc.source_state));
    set.channels.push_back(std::move(cc));
  }
  set.energies = Eigen::Map<Eigen::VectorXd>(energies.data(), static_cast<Eigen::Index>(energies.size()));

  const double sym = gauge == Gauge::velocity ? -1.0 : 1.0;
  double worst = 0.0;
  for (std::size_t a = 0; a + 1 < set.channels.size(); ++a) {
    const std::size_t b = a + 1;
    const int la = set.channels[a].l, lb = set.channels[b].l;
    CouplingBlock blk;
    blk.bra = a;
    blk.ket = b;
    blk.matrix = nr_block(mats, gauge, la, kept[a], lb, kept[b],
                          angular_nr_value(la, lb), fault);
    const Eigen::MatrixXd reverse = nr_block(mats, gauge, lb, kept[b], la, kept[a],
                                             angular_nr_value(lb, la), fault);
    worst = std::max(worst, (reverse.transpose() - sym * Eigen::MatrixXd(blk.matrix))
                                .cwiseAbs()
                                .maxCoeff());
    set.blocks.push_back(std::move(blk));
  }
  finish_blocks(set, worst);
  return set;
}

// ---- cache ---------------------------------------------------------------

namespace {

constexpr char kMagic[8] = {'D', 'I', 'R', 'C', 'P', 'L', 'S', 'T'};
constexpr std::uint32_t kCacheVersion = 2;

template <typename T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
bool get(std::istream& is, T& v) {
  return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

}  // namespace

void save_coupling(const CouplingSet& set, std::uint64_t key, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorKind::config, "cannot write coupling cache " + path);
  os.write(kMagic, sizeof(kMagic));
  put(os, kCacheVersion);
  put(os, key);
  put(os, static_cast<std::int32_t>(set.theory));
  put(os, static_cast<std::int32_t>(set.gauge));
  put(os, static_cast<std::int32_t>(set.include_ne));
  put(os, static_cast<std::int32_t>(set.truncation));
  put(os, set.energy_cutoff);
  put(os, set.hermiticity_error);
  put(os, static_cast<std::uint64_t>(set.channels.size()));
  for (const auto& ch : set.channels) {
    put(os, static_cast<std::int32_t>(ch.quantum));
    put(os, static_cast<std::int32_t>(ch.l));
    put(os, static_cast<std::uint64_t>(ch.label.size()));
    os.write(ch.label.data(), static_cast<std::streamsize>(ch.label.size()));
    put(os, static_cast<std::uint64_t>(ch.offset));
    put(os, static_cast<std::uint64_t>(ch.count));
    for (std::size_t s : ch.source_state) put(os, static_cast<std::uint64_t>(s));
  }
  put(os, static_cast<std::uint64_t>(set.size()));
  for (Eigen::Index i = 0; i < set.energies.size(); ++i) put(os, set.energies[i]);
  for (StateClass c : set.classes) put(os, static_cast<std::int32_t>(c));
  put(os, static_cast<std::uint64_t>(set.blocks.size()));
  for (const auto& blk : set.blocks) {
    put(os, static_cast<std::uint64_t>(blk.bra));
    put(os, static_cast<std::uint64_t>(blk.ket));
    put(os, static_cast<std::uint64_t>(blk.matrix.rows()));
    put(os, static_cast<std::uint64_t>(blk.matrix.cols()));
    os.write(reinterpret_cast<const char*>(blk.matrix.data()),
             static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(blk.matrix.size())));
  }
  if (!os) fail(ErrorKind::config, "failed writing coupling cache " + path);
}

bool load_coupling(const std::string& path, std::uint64_t key, CouplingSet& set) {
  std::ifstream is(path, std::ios::binary);
  if (!is) return false;
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) return false;
  std::uint32_t version = 0;
  std::uint64_t stored_key = 0;
  if (!get(is, version) || version != kCacheVersion) return false;
  if (!get(is, stored_key) || stored_key != key) return false;

  CouplingSet out;
  std::int32_t theory = 0, gauge = 0, ne = 0, trunc = 0;
  std::uint64_t nch = 0;
  if (!get(is, theory) || !get(is, gauge) || !get(is, ne) || !get(is, trunc) || !get(is, out.energy_cutoff) ||
      !get(is, out.hermiticity_error) || !get(is, nch)) {
    return false;
  }
  out.theory = static_cast<Theory>(theory);
  out.gauge = static_cast<Gauge>(gauge);
  out.include_ne = ne != 0;
  out.truncation = trunc;
  for (std::uint64_t c = 0; c < nch; ++c) {
    CouplingChannel ch;
    std::int32_t q = 0, l = 0;
    std::uint64_t len = 0, offset = 0, count = 0;
    if (!get(is, q) || !get(is, l) || !get(is, len) || len > 64) return false;
    ch.quantum = q;
    ch.l = l;
    ch.label.resize(len);
    if (!is.read(ch.label.data(), static_cast<std::streamsize>(len))) return false;
    if (!get(is, offset) || !get(is, count)) return false;
    ch.offset = offset;
    ch.count = count;
    for (std::uint64_t s = 0; s < count; ++s) {
      std::uint64_t src = 0;
      if (!get(is, src)) return false;
      ch.source_state.push_back(src);
    }
    out.channels.push_back(std::move(ch));
  }
  std::uint64_t n = 0;
  if (!get(is, n)) return false;
  out.energies.resize(static_cast<Eigen::Index>(n));
  for (std::uint64_t i = 0; i < n; ++i) {
    if (!get(is, out.energies[static_cast<Eigen::Index>(i)])) return false;
  }
  for (std::uint64_t i = 0; i < n; ++i) {
    std::int32_t c = 0;
    if (!get(is, c)) return false;
    out.classes.push_back(static_cast<StateClass>(c));
  }
  std::uint64_t nb = 0;
  if (!get(is, nb)) return false;
  for (std::uint64_t b = 0; b < nb; ++b) {
    std::uint64_t bra = 0, ket = 0, rows = 0, cols = 0;
    if (!get(is, bra) || !get(is, ket) || !get(is, rows) || !get(is, cols)) return false;
    CouplingBlock blk;
    blk.bra = bra;
    blk.ket = ket;
    blk.matrix.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    if (!is.read(reinterpret_cast<char*>(blk.matrix.data()),
                 static_cast<std::streamsize>(sizeof(double) * rows * cols))) {
      return false;
    }
    out.blocks.push_back(std::move(blk));
  }
  set = std::move(out);
  return true;
}

}  // namespace dirion
