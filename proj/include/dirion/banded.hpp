#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace dirion {

// Square band matrix with equal lower and upper half-bandwidth.
// Entry (i, j) with |i - j| <= half_bandwidth lives at
// data[(half_bandwidth + i - j) + j * (2 * half_bandwidth + 1)].
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(std::size_t dim, std::size_t half_bandwidth, bool symmetric);

  std::size_t dim() const { return dim_; }
  std::size_t half_bandwidth() const { return half_bw_; }
  bool symmetric() const { return symmetric_; }

  bool in_band(std::size_t i, std::size_t j) const {
    return (i > j ? i - j : j - i) <= half_bw_;
  }

  double operator()(std::size_t i, std::size_t j) const;
  double& at(std::size_t i, std::size_t j);
  void add(std::size_t i, std::size_t j, double v) { at(i, j) += v; }

  // Largest |A(i,j) - A(j,i)| over the band.
  double asymmetry() const;

  BandedMatrix transposed() const;
  Eigen::MatrixXd to_dense() const;

  // y = A x
  Eigen::VectorXd multiply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd multiply(const Eigen::MatrixXd& x) const;

  // LAPACK column-major upper symmetric band storage with the given kd
  // (kd >= half_bandwidth). Uses the upper triangle of this matrix.
  std::vector<double> lapack_upper(std::size_t kd) const;

 private:
  std::size_t dim_ = 0;
  std::size_t half_bw_ = 0;
  bool symmetric_ = false;
  std::vector<double> data_;
};

BandedMatrix operator+(const BandedMatrix& a, const BandedMatrix& b);
BandedMatrix operator*(double s, const BandedMatrix& a);

struct GeneralizedEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, normalized so that V^T S V = I
};

// Solves H v = E S v for symmetric banded H and symmetric positive definite
// banded S (LAPACK dsbgvd). Throws Error{numerical} on failure.
GeneralizedEigen solve_banded_generalized(const BandedMatrix& h,
                                          const BandedMatrix& s);

// Inverse iteration on (H - value S) x = S v followed by a Rayleigh quotient;
// restores full accuracy of low eigenpairs when |H| spans many decades.
void refine_eigenpair(const BandedMatrix& h, const BandedMatrix& s, double& value,
                      Eigen::Ref<Eigen::VectorXd> vec, int iterations = 2);

}  // namespace dirion
