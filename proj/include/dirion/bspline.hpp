#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dirion/banded.hpp"

namespace dirion {

// Breakpoints on [0, R]: a geometric head of n_geom intervals with ratio g,
// followed by equal intervals of the last head length.
struct KnotGrid {
  double radius = 0.0;
  std::vector<double> breakpoints;
  int n_geom = 0;
  double ratio = 1.0;

  std::size_t intervals() const { return breakpoints.empty() ? 0 : breakpoints.size() - 1; }
  double interval_length(std::size_t i) const { return breakpoints[i + 1] - breakpoints[i]; }
};

// Grid supporting a basis of n retained splines of order k
// (n + 2 raw splines, n - k + 3 intervals).
KnotGrid build_grid(double radius, int n, int k, int n_geom, double ratio);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int points, std::vector<double>& nodes, std::vector<double>& weights);

struct QuadratureRule {
  int points_per_interval = 0;
  std::vector<double> nodes;    // interval-major
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

struct SplineValue {
  std::size_t index;  // retained-basis index, 0..n-1
  double value;
  double derivative;
};

enum class Factor { value, derivative };

// Radial weight in an assembled integral. singular_power p declares
// kernel ~ r^-p near the origin.
struct Kernel {
  std::function<double(double)> f;
  int singular_power = 0;

  static Kernel one() { return {[](double) { return 1.0; }, 0}; }
  static Kernel power(int p);  // r^p, p may be negative
};

class RadialBasis {
 public:
  // quad_points = 0 selects k + 7 points per interval: k alone is exact for
  // polynomial integrands only, and the 1/r, 1/r^2 kernels need more near
  // the origin.
  RadialBasis(KnotGrid grid, int order, int quad_points = 0);

  int order() const { return order_; }
  std::size_t size() const { return size_; }
  double radius() const { return grid_.radius; }
  const KnotGrid& grid() const { return grid_; }
  const std::vector<double>& knots() const { return knots_; }
  const QuadratureRule& quadrature() const { return quad_; }

  // Nonzero retained splines at r with values and first derivatives.
  std::vector<SplineValue> evaluate(double r) const;

  // All k raw splines nonzero on the interval containing r (raw indices
  // first_raw .. first_raw + k - 1), values and derivatives.
  std::size_t evaluate_raw(double r, std::span<double> values, std::span<double> derivs) const;

  // Integral of B_i^(row) kernel B_j^(col) over [0, R].
  BandedMatrix assemble(const Kernel& kernel, Factor row = Factor::value,
                        Factor col = Factor::value) const;

  // Sum_i coeffs[i] B_i(r) and its derivative.
  double expand(std::span<const double> coeffs, double r) const;
  double expand_derivative(std::span<const double> coeffs, double r) const;

 private:
  std::size_t interval_of(double r) const;

  KnotGrid grid_;
  int order_;
  std::size_t size_;
  std::vector<double> knots_;
  QuadratureRule quad_;
  // Cached raw spline values/derivatives at quadrature nodes: k per node.
  std::vector<double> node_values_;
  std::vector<double> node_derivs_;
  std::vector<std::size_t> node_first_raw_;
};

}  // namespace dirion

namespace dirion {

// Radial matrices shared by the structure solvers and dipole integrals.
struct RadialMatrices {
  BandedMatrix overlap;     // int B_i B_j
  BandedMatrix inv_r;       // int B_i B_j / r
  BandedMatrix inv_r2;      // int B_i B_j / r^2
  BandedMatrix r;           // int B_i r B_j
  BandedMatrix derivative;  // int B_i B_j'
  BandedMatrix kinetic;     // int B_i' B_j'
};

RadialMatrices radial_matrices(const RadialBasis& basis);

}  // namespace dirion
