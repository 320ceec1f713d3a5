#include <random>

#include "doctest.h"
#include "dirion/banded.hpp"
#include "dirion/error.hpp"

using namespace dirion;

namespace {

BandedMatrix random_band(std::size_t n, std::size_t w, unsigned seed, double diag_shift) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BandedMatrix a(n, w, true);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j; i < n && i <= j + w; ++i) {
      const double v = u(gen) + (i == j ? diag_shift : 0.0);
      a.at(i, j) = v;
      a.at(j, i) = v;
    }
  return a;
}

}  // namespace

TEST_CASE("band storage round-trips through dense") {
  const BandedMatrix a = random_band(9, 2, 1, 0.0);
  const Eigen::MatrixXd d = a.to_dense();
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j) CHECK(a(i, j) == d(i, j));
  CHECK(d(0, 5) == 0.0);
  CHECK(a.asymmetry() == 0.0);
  Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(9, -1.0, 2.0);
  CHECK((a.multiply(x) - d * x).norm() < 1e-14);
  CHECK((a.transposed().to_dense() - d.transpose()).norm() == 0.0);
  const BandedMatrix s = a + 2.0 * a;
  CHECK((s.to_dense() - 3.0 * d).norm() < 1e-14);
}

TEST_CASE("generalized banded eigensolver agrees with a dense solver") {
  const std::size_t n = 40;
  const BandedMatrix h = random_band(n, 3, 7, 0.0);
  const BandedMatrix s = random_band(n, 2, 8, 6.0);  // diagonally dominant: SPD
  const GeneralizedEigen ge = solve_banded_generalized(h, s);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ref(h.to_dense(), s.to_dense());
  for (std::size_t i = 0; i < n; ++i) CHECK(ge.values[i] == doctest::Approx(ref.eigenvalues()[i]).epsilon(1e-11));
  const Eigen::MatrixXd gram = ge.vectors.transpose() * s.to_dense() * ge.vectors;
  CHECK((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  const Eigen::MatrixXd resid = h.to_dense() * ge.vectors - s.to_dense() * ge.vectors * ge.values.asDiagonal();
  CHECK(resid.cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("refinement recovers a perturbed eigenpair") {
  const std::size_t n = 30;
  const BandedMatrix h = random_band(n, 2, 11, 0.0);
  const BandedMatrix s = random_band(n, 1, 12, 5.0);
  const GeneralizedEigen ge = solve_banded_generalized(h, s);
  double value = ge.values[4] * (1.0 + 1e-6);
  Eigen::VectorXd v = ge.vectors.col(4) + 1e-4 * Eigen::VectorXd::Ones(n);
  refine_eigenpair(h, s, value, v, 3);
  CHECK(value == doctest::Approx(ge.values[4]).epsilon(1e-13));
  const double align = std::abs(v.dot(s.multiply(Eigen::VectorXd(ge.vectors.col(4)))));
  CHECK(align == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("non-definite overlap is reported as a numerical error") {
  const BandedMatrix h = random_band(10, 1, 3, 0.0);
  BandedMatrix s = random_band(10, 1, 4, 0.0);
  s.at(0, 0) = -5.0;
  try {
    solve_banded_generalized(h, s);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::numerical);
  }
}
