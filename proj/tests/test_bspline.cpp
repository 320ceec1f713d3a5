#include <cmath>
#include <functional>
#include <numeric>

#include "doctest.h"
#include "dirion/bspline.hpp"
#include "dirion/error.hpp"

using namespace dirion;

namespace {

// Adaptive Simpson on [a, b]; the oracle for assembled integrals.
double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 24);
}

double spline_at(const RadialBasis& basis, std::size_t i, double r) {
  for (const auto& sv : basis.evaluate(r))
    if (sv.index == i) return sv.value;
  return 0.0;
}

double binom(int n, int k) { return std::tgamma(n + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(n - k + 1.0)); }

double beta_fn(double a, double b) { return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b)); }

}  // namespace

TEST_CASE("grid: paper-size box has 494 intervals with a geometric head") {
  const KnotGrid g = build_grid(5.0, 500, 9, 40, 1.05);
  CHECK(g.intervals() == 494);
  CHECK(g.breakpoints.front() == 0.0);
  CHECK(g.breakpoints.back() == doctest::Approx(5.0).epsilon(1e-14));
  for (int i = 1; i < 40; ++i)
    CHECK(g.interval_length(i) / g.interval_length(i - 1) == doctest::Approx(1.05).epsilon(1e-9));
  for (std::size_t i = 40; i < g.intervals(); ++i)
    CHECK(g.interval_length(i) == doctest::Approx(g.interval_length(39)).epsilon(1e-9));
}

TEST_CASE("grid: no head gives a uniform grid") {
  const KnotGrid g = build_grid(2.0, 30, 5, 0, 1.3);
  REQUIRE(g.intervals() == 28);
  for (std::size_t i = 0; i < g.intervals(); ++i)
    CHECK(g.interval_length(i) == doctest::Approx(2.0 / 28).epsilon(1e-13));
}

TEST_CASE("grid: hand-solved small case d = 1/39") {
  const KnotGrid g = build_grid(1.0, 12, 4, 3, 2.0);
  REQUIRE(g.intervals() == 11);
  const double d = 1.0 / 39.0;
  CHECK(g.interval_length(0) == doctest::Approx(d).epsilon(1e-14));
  CHECK(g.interval_length(1) == doctest::Approx(2 * d).epsilon(1e-14));
  CHECK(g.interval_length(2) == doctest::Approx(4 * d).epsilon(1e-14));
  for (std::size_t i = 3; i < 11; ++i) CHECK(g.interval_length(i) == doctest::Approx(4 * d).epsilon(1e-13));
}

TEST_CASE("grid: parameter errors") {
  CHECK_THROWS_AS(build_grid(0.0, 20, 4, 0, 1.1), Error);
  CHECK_THROWS_AS(build_grid(1.0, 20, 4, 3, 1.0), Error);
  CHECK_THROWS_AS(build_grid(1.0, 4, 4, 0, 1.1), Error);
  CHECK_THROWS_AS(build_grid(1.0, 10, 4, 9, 1.1), Error);  // 9 intervals, head of 9
  try {
    build_grid(-1.0, 20, 4, 0, 1.1);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::parameter);
  }
}

TEST_CASE("gauss-legendre integrates degree 2p-1 exactly") {
  for (int p = 1; p <= 14; ++p) {
    std::vector<double> x, w;
    gauss_legendre(p, x, w);
    for (int deg = 0; deg <= 2 * p - 1; ++deg) {
      double s = 0.0;
      for (int i = 0; i < p; ++i) s += w[i] * std::pow(x[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(s == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
  }
}

TEST_CASE("splines: partition of unity away from the end intervals") {
  const RadialBasis basis(build_grid(3.0, 25, 7, 6, 1.2), 7);
  const auto& bp = basis.grid().breakpoints;
  const auto& q = basis.quadrature();
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double r = q.nodes[i];
    if (r < bp[1] || r > bp[bp.size() - 2]) continue;
    double s = 0.0;
    for (const auto& sv : basis.evaluate(r)) s += sv.value;
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
}

TEST_CASE("splines: retained functions vanish at the origin and the wall") {
  const RadialBasis basis(build_grid(3.0, 25, 7, 6, 1.2), 7);
  for (const auto& sv : basis.evaluate(0.0)) CHECK(sv.value == doctest::Approx(0.0).scale(1.0));
  for (const auto& sv : basis.evaluate(3.0)) CHECK(std::abs(sv.value) < 1e-14);
  CHECK_THROWS_AS(basis.evaluate(-0.1), Error);
  CHECK_THROWS_AS(basis.evaluate(3.1), Error);
}

TEST_CASE("splines: uniform quadratic at an interior breakpoint") {
  // cardinal quadratic B-spline: value 1/2 and slope +-1/h at its knots
  const double h = 0.1;
  const RadialBasis basis(build_grid(1.0, 10, 3, 0, 1.1), 3);
  REQUIRE(basis.grid().intervals() == 10);
  const auto vals = basis.evaluate(0.5);
  std::vector<SplineValue> nz;
  for (const auto& sv : vals)
    if (std::abs(sv.value) > 1e-15 || std::abs(sv.derivative) > 1e-12) nz.push_back(sv);
  REQUIRE(nz.size() == 2);
  CHECK(nz[0].value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(nz[1].value == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(nz[0].derivative == doctest::Approx(-1.0 / h).epsilon(1e-12));
  CHECK(nz[1].derivative == doctest::Approx(1.0 / h).epsilon(1e-12));
}

TEST_CASE("splines: derivative matches finite differences") {
  const RadialBasis basis(build_grid(2.0, 20, 6, 4, 1.3), 6);
  const double step = 1e-6;
  for (double r : {0.013, 0.2, 0.77, 1.5, 1.93}) {
    for (const auto& sv : basis.evaluate(r)) {
      const double fd = (spline_at(basis, sv.index, r + step) - spline_at(basis, sv.index, r - step)) /
                        (2 * step);
      CHECK(sv.derivative == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("assembly: overlap is symmetric positive definite") {
  const RadialBasis basis(build_grid(5.0, 40, 9, 10, 1.1), 9);
  const BandedMatrix s = basis.assemble(Kernel::one());
  CHECK(s.asymmetry() < 1e-15);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s.to_dense());
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("assembly: derivative matrix is antisymmetric and transposes between factors") {
  const RadialBasis basis(build_grid(5.0, 40, 9, 10, 1.1), 9);
  const BandedMatrix d = basis.assemble(Kernel::one(), Factor::value, Factor::derivative);
  const BandedMatrix dt = basis.assemble(Kernel::one(), Factor::derivative, Factor::value);
  const Eigen::MatrixXd dd = d.to_dense();
  CHECK((dd + dd.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((dd - dt.to_dense().transpose()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("assembly: Coulomb kernel against adaptive quadrature") {
  const double z = 3.0;
  const RadialBasis basis(build_grid(4.0, 12, 5, 3, 1.5), 5);
  Kernel coulomb{[z](double r) { return -z / r; }, 1};
  const BandedMatrix v = basis.assemble(coulomb);
  const auto& bp = basis.grid().breakpoints;
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i; j < basis.size() && j <= i + 4; ++j) {
      auto f = [&](double r) {
        if (r <= 0.0) return 0.0;
        return spline_at(basis, i, r) * spline_at(basis, j, r) * (-z / r);
      };
      double exact = 0.0;
      for (std::size_t s = 0; s + 1 < bp.size(); ++s) exact += integrate(f, bp[s], bp[s + 1], 1e-16);
      if (exact == 0.0) continue;
      worst = std::max(worst, std::abs(v(i, j) - exact) / std::abs(exact));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("assembly: monomial integrals on a single interval are exact") {
  // one interval: the raw splines are Bernstein polynomials of degree k-1
  const int k = 6;
  const double big_r = 1.7;
  KnotGrid one;
  one.radius = big_r;
  one.breakpoints = {0.0, big_r};
  const RadialBasis basis(one, k);
  REQUIRE(basis.grid().intervals() == 1);
  REQUIRE(basis.size() == static_cast<std::size_t>(k - 2));
  for (int p : {0, 1}) {
    const BandedMatrix m = basis.assemble(Kernel::power(p));
    for (int a = 1; a <= k - 2; ++a)
      for (int b = 1; b <= k - 2; ++b) {
        const double exact = std::pow(big_r, p + 1) * binom(k - 1, a) * binom(k - 1, b) *
                             beta_fn(a + b + p + 1, 2 * k - 1 - a - b);
        CHECK(m(a - 1, b - 1) == doctest::Approx(exact).epsilon(1e-13));
      }
  }
  // higher powers need more points per interval
  const RadialBasis fine(one, k, k + 3);
  for (int p : {2, 5, 7}) {
    const BandedMatrix m = fine.assemble(Kernel::power(p));
    for (int a = 1; a <= k - 2; ++a)
      for (int b = 1; b <= k - 2; ++b) {
        const double exact = std::pow(big_r, p + 1) * binom(k - 1, a) * binom(k - 1, b) *
                             beta_fn(a + b + p + 1, 2 * k - 1 - a - b);
        CHECK(m(a - 1, b - 1) == doctest::Approx(exact).epsilon(1e-13));
      }
  }
}

TEST_CASE("assembly: symmetric forms are symmetric, kinetic form is positive") {
  const RadialBasis basis(build_grid(2.0, 18, 6, 0, 1.1), 6);
  const RadialMatrices m = radial_matrices(basis);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.kinetic.to_dense());
  CHECK(es.eigenvalues().minCoeff() > 0.0);
  CHECK(m.kinetic.asymmetry() < 1e-12);
  CHECK(m.inv_r2.asymmetry() < 1e-12);
  CHECK(m.r.asymmetry() < 1e-14);
}

TEST_CASE("assembly: kernel too singular for the factors is rejected") {
  const RadialBasis basis(build_grid(2.0, 18, 6, 0, 1.1), 6);
  Kernel bad{[](double r) { return 1.0 / (r * r * r); }, 3};
  CHECK_THROWS_AS(basis.assemble(bad), Error);
}

TEST_CASE("expansion reproduces a smooth function's projection") {
  const RadialBasis basis(build_grid(3.0, 40, 7, 0, 1.1), 7);
  const RadialMatrices m = radial_matrices(basis);
  // project f(r) = r^2 (3 - r) e^{-r}, which vanishes at both ends
  auto f = [](double r) { return r * r * (3.0 - r) * std::exp(-r); };
  const auto& q = basis.quadrature();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.size());
  for (std::size_t n = 0; n < q.size(); ++n)
    for (const auto& sv : basis.evaluate(q.nodes[n])) rhs[sv.index] += q.weights[n] * sv.value * f(q.nodes[n]);
  const Eigen::VectorXd c = m.overlap.to_dense().ldlt().solve(rhs);
  std::vector<double> cv(c.data(), c.data() + c.size());
  for (double r : {0.1, 0.9, 1.7, 2.6})
    CHECK(basis.expand(cv, r) == doctest::Approx(f(r)).epsilon(1e-7));
  const double h = 1e-6;
  CHECK(basis.expand_derivative(cv, 1.3) ==
        doctest::Approx((f(1.3 + h) - f(1.3 - h)) / (2 * h)).epsilon(1e-5));
}
