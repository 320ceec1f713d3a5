#include "dirion/adams.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dirion/bspline.hpp"
#include "dirion/error.hpp"

namespace dirion {

namespace {

constexpr int kQuadPoints = 14;  // exact for the degree <= 25 polynomials that occur

struct UnitQuadrature {
  std::vector<double> x, w;
  UnitQuadrature() {
    std::vector<double> nodes, weights;
    gauss_legendre(kQuadPoints, nodes, weights);
    for (int i = 0; i < kQuadPoints; ++i) {
      x.push_back(0.5 * (nodes[i] + 1.0));
      w.push_back(0.5 * weights[i]);
    }
  }
};

const UnitQuadrature& unit_rule() {
  static const UnitQuadrature rule;
  return rule;
}

// weights[j] = integral over [0,1] of the Lagrange polynomial for nodes[j]
void lagrange_integrals(const double* nodes, int count, double* weights) {
  const auto& q = unit_rule();
  for (int j = 0; j < count; ++j) weights[j] = 0.0;
  for (int p = 0; p < kQuadPoints; ++p) {
    const double s = q.x[p];
    for (int j = 0; j < count; ++j) {
      double l = 1.0;
      for (int i = 0; i < count; ++i)
        if (i != j) l *= (s - nodes[i]) / (nodes[j] - nodes[i]);
      weights[j] += q.w[p] * l;
    }
  }
}

}  // namespace

void validate(const AdamsSettings& s) {
  if (!(s.rtol >= 1e-12 && s.rtol <= 1e-4))
    fail(ErrorKind::parameter, "integrator: rtol must lie in [1e-12, 1e-4]");
  if (!(s.atol > 0.0)) fail(ErrorKind::parameter, "integrator: atol must be positive");
  if (s.max_order < 1 || s.max_order > 12)
    fail(ErrorKind::parameter, "integrator: max_order must lie in [1, 12]");
  if (!(s.max_step > 0.0)) fail(ErrorKind::parameter, "integrator: max_step must be positive");
  if (s.initial_step < 0.0) fail(ErrorKind::parameter, "integrator: negative initial step");
}

AdamsIntegrator::AdamsIntegrator(std::size_t m, Rhs rhs, AdamsSettings settings,
                                 const kernels::KernelTable& k)
    : m_(m), rhs_(std::move(rhs)), set_(settings), k_(&k) {
  validate(set_);
  const std::size_t n = 2 * m_;
  f_.assign(set_.max_order + 2, std::vector<double>(n, 0.0));
  tf_.assign(set_.max_order + 2, 0.0);
  yp_.resize(n);
  yc_.resize(n);
  fp_.resize(n);
  scratch_.resize(n);
}

void AdamsIntegrator::start(double t0, const std::vector<double>& y0) {
  if (y0.size() != 2 * m_) fail(ErrorKind::internal, "integrator: state size mismatch");
  t_ = t0;
  y_ = y0;
  rhs_(t_, y_.data(), f_[0].data());
  tf_[0] = t_;
  ++stats_.rhs_evals;
  filled_ = 1;
  order_ = 1;
  since_order_change_ = 0;
  h_ = 0.0;
}

double AdamsIntegrator::error_norm(const std::vector<double>& a,
                                   const std::vector<double>& b) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < m_; ++i) {
    const double er = a[i] - b[i], ei = a[i + m_] - b[i + m_];
    const double ya = std::hypot(y_[i], y_[i + m_]);
    const double yb = std::hypot(a[i], a[i + m_]);
    const double w = set_.atol + set_.rtol * std::max(ya, yb);
    worst = std::max(worst, std::hypot(er, ei) / w);
  }
  return worst;
}

void AdamsIntegrator::predictor_coefficients(int q, double h, std::vector<double>& beta) const {
  double nodes[16];
  for (int j = 0; j < q; ++j) nodes[j] = (tf_[j] - t_) / h;
  beta.assign(q, 0.0);
  lagrange_integrals(nodes, q, beta.data());
}

void AdamsIntegrator::corrector_coefficients(int q, double h, std::vector<double>& gamma) const {
  double nodes[16];
  nodes[0] = 1.0;
  for (int j = 0; j < q; ++j) nodes[j + 1] = (tf_[j] - t_) / h;
  gamma.assign(q + 1, 0.0);
  lagrange_integrals(nodes, q + 1, gamma.data());
}

// out = base + h (coef[0] extra + sum_j coef[j + off] f_j), off = extra ? 1 : 0
void AdamsIntegrator::combine(const std::vector<double>& base, double h,
                              const std::vector<double>& coef, const double* extra, int q,
                              std::vector<double>& out) const {
  const double* vecs[16];
  double c[16];
  int cnt = 0;
  int off = 0;
  if (extra) {
    vecs[cnt] = extra;
    c[cnt++] = h * coef[0];
    off = 1;
  }
  for (int j = 0; j < q; ++j) {
    vecs[cnt] = f_[j].data();
    c[cnt++] = h * coef[j + off];
  }
  k_->lincomb(2 * m_, base.data(), cnt, vecs, c, out.data());
}

double AdamsIntegrator::initial_step_guess(double span) {
  double h = std::min(span, set_.max_step);
  if (set_.initial_step > 0.0) return std::min(set_.initial_step, h);
  // Euler probe: size the first step from the first and second derivative
  // scales, never more than a small fraction of the span (the derivative
  // may vanish at the start, e.g. a vector potential switching on).
  auto wnorm = [&](const std::vector<double>& v, double scale) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const double w = set_.atol + set_.rtol * std::hypot(y_[i], y_[i + m_]);
      worst = std::max(worst, scale * std::hypot(v[i], v[i + m_]) / w);
    }
    return worst;
  };
  const double cap = 1e-3 * h;
  const double d1 = wnorm(f_[0], 1.0);
  double h0 = d1 > 1.0 ? std::min(cap, 1.0 / d1) : cap;
  for (std::size_t i = 0; i < 2 * m_; ++i) yp_[i] = y_[i] + h0 * f_[0][i];
  rhs_(t_ + h0, yp_.data(), fp_.data());
  ++stats_.rhs_evals;
  for (std::size_t i = 0; i < 2 * m_; ++i) scratch_[i] = fp_[i] - f_[0][i];
  const double d2 = wnorm(scratch_, 1.0 / h0);
  const double dmax = std::max(d1, d2 * h0);
  double h1 = d2 > 0.0 ? std::sqrt(2.0 / d2) : cap;
  if (dmax <= 0.0) h1 = cap;
  return std::min({100.0 * h0, h1, cap});
}

void AdamsIntegrator::advance_to(double t_end) {
  if (!(t_end >= t_)) fail(ErrorKind::internal, "integrator: cannot integrate backwards");
  if (t_end == t_) return;
  if (h_ == 0.0) h_ = initial_step_guess(t_end - t_);

  std::vector<double> beta, gamma, beta_alt;
  int rejections_in_row = 0;
  const double tiny = 64.0 * std::numeric_limits<double>::epsilon();

  while (t_ < t_end) {
    if (stats_.steps >= set_.max_steps) {
      std::ostringstream msg;
      msg << "integrator: step budget of " << set_.max_steps << " exhausted at t=" << t_;
      fail(ErrorKind::numerical, msg.str());
    }
    const double remaining = t_end - t_;
    double h = std::min(h_, set_.max_step);
    bool clipped = false;
    if (h >= remaining * (1.0 - 1e-12)) {
      h = remaining;
      clipped = true;
    }
    if (h <= tiny * std::max(1.0, std::abs(t_))) {
      std::ostringstream msg;
      msg << "integrator: step size underflow (h=" << h << ") at t=" << t_
          << "; loosen rtol/atol, reduce the basis energy range, or drop negative-energy states";
      fail(ErrorKind::numerical, msg.str());
    }

    const int q = std::min(order_, filled_);
    predictor_coefficients(q, h, beta);
    combine(y_, h, beta, nullptr, q, yp_);
    rhs_(t_ + h, yp_.data(), fp_.data());
    ++stats_.rhs_evals;
    corrector_coefficients(q, h, gamma);
    combine(y_, h, gamma, fp_.data(), q, yc_);
    const double err = error_norm(yc_, yp_);

    if (!(err <= 1.0)) {
      ++stats_.rejected;
      ++rejections_in_row;
      const double factor =
          std::isfinite(err) ? std::clamp(0.9 * std::pow(err, -1.0 / (q + 1)), 0.1, 0.9) : 0.1;
      h_ = h * factor;
      if (rejections_in_row >= 2 && order_ > 1) {
        order_ = std::max(1, order_ - 1);
        since_order_change_ = 0;
      }
      continue;
    }
    rejections_in_row = 0;

    // candidate errors for neighbouring orders, measured against the corrector
    double err_lo = std::numeric_limits<double>::infinity();
    double err_hi = std::numeric_limits<double>::infinity();
    if (q > 1) {
      predictor_coefficients(q - 1, h, beta_alt);
      combine(y_, h, beta_alt, nullptr, q - 1, scratch_);
      err_lo = error_norm(yc_, scratch_);
    }
    const bool can_raise = q < set_.max_order && filled_ > q && since_order_change_ >= q;
    if (can_raise) {
      predictor_coefficients(q + 1, h, beta_alt);
      combine(y_, h, beta_alt, nullptr, q + 1, scratch_);
      err_hi = error_norm(yc_, scratch_);
    }

    // accept: shift history and evaluate at the corrected point
    const int keep = std::min(filled_, set_.max_order + 1);
    std::rotate(f_.begin(), f_.begin() + keep, f_.begin() + keep + 1);
    for (int j = keep; j > 0; --j) tf_[j] = tf_[j - 1];
    t_ = clipped ? t_end : t_ + h;
    y_.swap(yc_);
    rhs_(t_, y_.data(), f_[0].data());
    tf_[0] = t_;
    ++stats_.rhs_evals;
    filled_ = std::min(filled_ + 1, set_.max_order + 1);
    ++stats_.steps;
    ++since_order_change_;
    stats_.highest_order = std::max(stats_.highest_order, q);
    if (!clipped) {
      stats_.smallest_step = std::min(stats_.smallest_step, h);
      stats_.largest_step = std::max(stats_.largest_step, h);
    }

    auto ratio = [](double e, int p) {
      return e > 0.0 ? std::pow(e, -1.0 / (p + 1)) : 4.0;
    };
    double best = ratio(err, q);
    int next = q;
    if (q > 1 && ratio(err_lo, q - 1) > best) {
      best = ratio(err_lo, q - 1);
      next = q - 1;
    }
    if (can_raise && ratio(err_hi, q + 1) > 1.1 * best) {
      best = ratio(err_hi, q + 1);
      next = q + 1;
    }
    if (next != order_) {
      order_ = next;
      since_order_change_ = 0;
    }
    double factor = 0.9 * best;
    if (factor >= 1.2)
      factor = std::min(factor, 2.0);
    else if (factor < 1.0)
      factor = std::max(factor, 0.5);
    else
      factor = 1.0;
    // a clipped step says nothing about the natural size
    h_ = clipped ? std::max(h_, h * factor) : h * factor;
  }
}

}  // namespace dirion
