#include "dirion/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dirion/constants.hpp"
#include "dirion/error.hpp"

namespace dirion {

KnotGrid build_grid(double radius, int n, int k, int n_geom, double ratio) {
  if (!(radius > 0.0)) fail(ErrorKind::parameter, "build_grid: box radius must be positive");
  if (k < 2) fail(ErrorKind::parameter, "build_grid: spline order must be >= 2");
  if (n <= k) fail(ErrorKind::parameter, "build_grid: need n > k");
  if (!(ratio > 1.0)) fail(ErrorKind::parameter, "build_grid: geometric ratio must exceed 1");
  const int intervals = n - k + 3;
  if (n_geom < 0 || intervals <= n_geom) {
    fail(ErrorKind::parameter, "build_grid: interval count " + std::to_string(intervals) +
                                   " must exceed n_geom=" + std::to_string(n_geom));
  }

  // Head d, d g, ..., d g^(n_geom-1); tail intervals of length d g^(n_geom-1).
  const long double g = ratio;
  long double head = 0.0L;
  long double tail_len = 1.0L;
  if (n_geom > 0) {
    head = (std::pow(g, n_geom) - 1.0L) / (g - 1.0L);
    tail_len = std::pow(g, n_geom - 1);
  }
  const long double d = static_cast<long double>(radius) /
                        (head + static_cast<long double>(intervals - n_geom) * tail_len);

  KnotGrid grid;
  grid.radius = radius;
  grid.n_geom = n_geom;
  grid.ratio = ratio;
  grid.breakpoints.resize(static_cast<std::size_t>(intervals) + 1);
  long double r = 0.0L;
  long double step = d;
  grid.breakpoints[0] = 0.0;
  for (int i = 0; i < intervals; ++i) {
    r += (i < n_geom) ? step : d * tail_len;
    if (i < n_geom) step *= g;
    grid.breakpoints[static_cast<std::size_t>(i) + 1] = static_cast<double>(r);
  }
  grid.breakpoints.back() = radius;
  return grid;
}

void gauss_legendre(int points, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(points), 0.0);
  weights.assign(static_cast<std::size_t>(points), 0.0);
  for (int i = 0; i < (points + 1) / 2; ++i) {
    double x = std::cos(constants::pi * (i + 0.75) / (points + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= points; ++j) {
        const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      if (points == 1) p0 = 1.0, p1 = x;
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= points; ++j) {
      const double p2 = ((2 * j - 1) * x * p1 - (j - 1) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = points * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(points - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(points - 1 - i)] = w;
  }
}

Kernel Kernel::power(int p) {
  return {[p](double r) { return std::pow(r, p); }, p < 0 ? -p : 0};
}

RadialBasis::RadialBasis(KnotGrid grid, int order, int quad_points)
    : grid_(std::move(grid)), order_(order) {
  const std::size_t m = grid_.intervals();
  if (order_ < 2 || m == 0) fail(ErrorKind::parameter, "RadialBasis: invalid order or grid");
  const std::size_t k = static_cast<std::size_t>(order_);
  // n + 2 raw splines, n - k + 3 intervals
  const std::size_t raw = m + k - 1;
  if (raw < 3) fail(ErrorKind::parameter, "RadialBasis: too few splines");
  size_ = raw - 2;

  knots_.assign(k, 0.0);
  for (std::size_t i = 1; i < m; ++i) knots_.push_back(grid_.breakpoints[i]);
  knots_.insert(knots_.end(), k, grid_.radius);

  const int q = quad_points > 0 ? quad_points : order_ + 7;
  std::vector<double> x, w;
  gauss_legendre(q, x, w);
  quad_.points_per_interval = q;
  quad_.nodes.reserve(m * static_cast<std::size_t>(q));
  quad_.weights.reserve(m * static_cast<std::size_t>(q));
  for (std::size_t i = 0; i < m; ++i) {
    const double a = grid_.breakpoints[i], b = grid_.breakpoints[i + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int j = 0; j < q; ++j) {
      quad_.nodes.push_back(mid + half * x[static_cast<std::size_t>(j)]);
      quad_.weights.push_back(half * w[static_cast<std::size_t>(j)]);
    }
  }

  node_values_.resize(quad_.size() * k);
  node_derivs_.resize(quad_.size() * k);
  node_first_raw_.resize(quad_.size());
  for (std::size_t p = 0; p < quad_.size(); ++p) {
    node_first_raw_[p] = evaluate_raw(quad_.nodes[p], {&node_values_[p * k], k},
                                      {&node_derivs_[p * k], k});
  }
}

std::size_t RadialBasis::interval_of(double r) const {
  const auto& b = grid_.breakpoints;
  if (r >= b.back()) return b.size() - 2;
  auto it = std::upper_bound(b.begin(), b.end(), r);
  return static_cast<std::size_t>(it - b.begin()) - 1;
}

std::size_t RadialBasis::evaluate_raw(double r, std::span<double> values,
                                      std::span<double> derivs) const {
  const std::size_t k = static_cast<std::size_t>(order_);
  const std::size_t j = interval_of(r);
  const std::size_t mu = j + k - 1;  // knots_[mu] <= r < knots_[mu+1]
  const auto& t = knots_;

  std::vector<double> left(k), right(k), lower(k, 0.0);
  std::vector<double> n(k, 0.0);
  n[0] = 1.0;
  for (std::size_t order = 1; order < k; ++order) {
    if (order == k - 1) std::copy(n.begin(), n.end(), lower.begin());
    left[order] = r - t[mu + 1 - order];
    right[order] = t[mu + order] - r;
    double saved = 0.0;
    for (std::size_t s = 0; s < order; ++s) {
      const double temp = n[s] / (right[s + 1] + left[order - s]);
      n[s] = saved + right[s + 1] * temp;
      saved = left[order - s] * temp;
    }
    n[order] = saved;
  }
  if (k == 1) lower[0] = 0.0;

  // lower[s] holds B_{first+1+s, k-1}, s = 0..k-2
  const std::size_t first = mu + 1 - k;
  const double km1 = static_cast<double>(k - 1);
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t i = first + s;
    double d = 0.0;
    if (s >= 1) {
      const double span = t[i + k - 1] - t[i];
      if (span > 0.0) d += lower[s - 1] / span;
    }
    if (s + 1 < k) {
      const double span = t[i + k] - t[i + 1];
      if (span > 0.0) d -= lower[s] / span;
    }
    values[s] = n[s];
    derivs[s] = km1 * d;
  }
  return first;
}

std::vector<SplineValue> RadialBasis::evaluate(double r) const {
  if (!(r >= 0.0 && r <= grid_.radius)) {
    fail(ErrorKind::domain, "eval_splines: r=" + std::to_string(r) + " outside [0, R]");
  }
  const std::size_t k = static_cast<std::size_t>(order_);
  std::vector<double> v(k), d(k);
  const std::size_t first = evaluate_raw(r, v, d);
  std::vector<SplineValue> out;
  out.reserve(k);
  for (std::size_t s = 0; s < k; ++s) {
    const std::size_t raw = first + s;
    if (raw == 0 || raw > size_) continue;
    out.push_back({raw - 1, v[s], d[s]});
  }
  return out;
}

BandedMatrix RadialBasis::assemble(const Kernel& kernel, Factor row, Factor col) const {
  const int plain = (row == Factor::value ? 1 : 0) + (col == Factor::value ? 1 : 0);
  if (kernel.singular_power > plain) {
    fail(ErrorKind::parameter,
         "assemble: kernel ~ r^-" + std::to_string(kernel.singular_power) +
             " is not integrable against this spline product");
  }
  const std::size_t k = static_cast<std::size_t>(order_);
  BandedMatrix m(size_, k - 1, row == col);
  for (std::size_t p = 0; p < quad_.size(); ++p) {
    const double w = quad_.weights[p] * kernel.f(quad_.nodes[p]);
    const double* a = row == Factor::value ? &node_values_[p * k] : &node_derivs_[p * k];
    const double* b = col == Factor::value ? &node_values_[p * k] : &node_derivs_[p * k];
    const std::size_t first = node_first_raw_[p];
    for (std::size_t s = 0; s < k; ++s) {
      const std::size_t ri = first + s;
      if (ri == 0 || ri > size_) continue;
      const double wa = w * a[s];
      for (std::size_t u = 0; u < k; ++u) {
        const std::size_t rj = first + u;
        if (rj == 0 || rj > size_) continue;
        m.add(ri - 1, rj - 1, wa * b[u]);
      }
    }
  }
  return m;
}

double RadialBasis::expand(std::span<const double> coeffs, double r) const {
  double sum = 0.0;
  for (const auto& sv : evaluate(r)) sum += coeffs[sv.index] * sv.value;
  return sum;
}

double RadialBasis::expand_derivative(std::span<const double> coeffs, double r) const {
  double sum = 0.0;
  for (const auto& sv : evaluate(r)) sum += coeffs[sv.index] * sv.derivative;
  return sum;
}

}  // namespace dirion

namespace dirion {

RadialMatrices radial_matrices(const RadialBasis& basis) {
  return RadialMatrices{
      basis.assemble(Kernel::one()),
      basis.assemble(Kernel::power(-1)),
      basis.assemble(Kernel::power(-2)),
      basis.assemble(Kernel::power(1)),
      basis.assemble(Kernel::one(), Factor::value, Factor::derivative),
      basis.assemble(Kernel::one(), Factor::derivative, Factor::derivative),
  };
}

}  // namespace dirion
