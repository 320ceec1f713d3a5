#include "dirion/banded.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <lapacke.h>

#include "dirion/error.hpp"

namespace dirion {

BandedMatrix::BandedMatrix(std::size_t dim, std::size_t half_bandwidth,
                           bool symmetric)
    : dim_(dim),
      half_bw_(half_bandwidth),
      symmetric_(symmetric),
      data_((2 * half_bandwidth + 1) * dim, 0.0) {}

double BandedMatrix::operator()(std::size_t i, std::size_t j) const {
  if (!in_band(i, j)) return 0.0;
  return data_[(half_bw_ + i - j) + j * (2 * half_bw_ + 1)];
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
  if (i >= dim_ || j >= dim_ || !in_band(i, j)) {
    fail(ErrorKind::internal, "BandedMatrix: entry (" + std::to_string(i) +
                                  "," + std::to_string(j) +
                                  ") outside band");
  }
  return data_[(half_bw_ + i - j) + j * (2 * half_bw_ + 1)];
}

double BandedMatrix::asymmetry() const {
  double worst = 0.0;
  for (std::size_t j = 0; j < dim_; ++j) {
    const std::size_t lo = j > half_bw_ ? j - half_bw_ : 0;
    for (std::size_t i = lo; i < j; ++i) {
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
    }
  }
  return worst;
}

BandedMatrix BandedMatrix::transposed() const {
  BandedMatrix t(dim_, half_bw_, symmetric_);
  for (std::size_t j = 0; j < dim_; ++j) {
    const std::size_t lo = j > half_bw_ ? j - half_bw_ : 0;
    const std::size_t hi = std::min(dim_ - 1, j + half_bw_);
    for (std::size_t i = lo; i <= hi; ++i) t.at(j, i) = (*this)(i, j);
  }
  return t;
}

Eigen::MatrixXd BandedMatrix::to_dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_, dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    const std::size_t lo = j > half_bw_ ? j - half_bw_ : 0;
    const std::size_t hi = std::min(dim_ - 1, j + half_bw_);
    for (std::size_t i = lo; i <= hi; ++i) m(i, j) = (*this)(i, j);
  }
  return m;
}

Eigen::VectorXd BandedMatrix::multiply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    const std::size_t lo = j > half_bw_ ? j - half_bw_ : 0;
    const std::size_t hi = std::min(dim_ - 1, j + half_bw_);
    for (std::size_t i = lo; i <= hi; ++i) y[i] += (*this)(i, j) * x[j];
  }
  return y;
}

Eigen::MatrixXd BandedMatrix::multiply(const Eigen::MatrixXd& x) const {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(dim_, x.cols());
  for (std::size_t j = 0; j < dim_; ++j) {
    const std::size_t lo = j > half_bw_ ? j - half_bw_ : 0;
    const std::size_t hi = std::min(dim_ - 1, j + half_bw_);
    for (std::size_t i = lo; i <= hi; ++i) y.row(i) += (*this)(i, j) * x.row(j);
  }
  return y;
}

std::vector<double> BandedMatrix::lapack_upper(std::size_t kd) const {
  const std::size_t ld = kd + 1;
  std::vector<double> ab(ld * dim_, 0.0);
  for (std::size_t j = 0; j < dim_; ++j) {
    const std::size_t lo = j > half_bw_ ? j - half_bw_ : 0;
    for (std::size_t i = lo; i <= j; ++i) ab[(kd + i - j) + j * ld] = (*this)(i, j);
  }
  return ab;
}

BandedMatrix operator+(const BandedMatrix& a, const BandedMatrix& b) {
  if (a.dim() != b.dim()) fail(ErrorKind::internal, "BandedMatrix: dimension mismatch");
  const std::size_t w = std::max(a.half_bandwidth(), b.half_bandwidth());
  BandedMatrix sum(a.dim(), w, a.symmetric() && b.symmetric());
  for (std::size_t j = 0; j < a.dim(); ++j) {
    const std::size_t lo = j > w ? j - w : 0;
    const std::size_t hi = std::min(a.dim() - 1, j + w);
    for (std::size_t i = lo; i <= hi; ++i) sum.at(i, j) = a(i, j) + b(i, j);
  }
  return sum;
}

BandedMatrix operator*(double s, const BandedMatrix& a) {
  BandedMatrix r = a;
  const std::size_t w = a.half_bandwidth();
  for (std::size_t j = 0; j < a.dim(); ++j) {
    const std::size_t lo = j > w ? j - w : 0;
    const std::size_t hi = std::min(a.dim() - 1, j + w);
    for (std::size_t i = lo; i <= hi; ++i) r.at(i, j) *= s;
  }
  return r;
}

GeneralizedEigen solve_banded_generalized(const BandedMatrix& h,
                                          const BandedMatrix& s) {
  const std::size_t n = h.dim();
  if (s.dim() != n) fail(ErrorKind::internal, "eigensolver: dimension mismatch");
  const std::size_t ka = std::max(h.half_bandwidth(), s.half_bandwidth());
  const std::size_t kb = s.half_bandwidth();
  std::vector<double> ab = h.lapack_upper(ka);
  std::vector<double> bb = s.lapack_upper(kb);

  GeneralizedEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  const lapack_int info = LAPACKE_dsbgvd(
      LAPACK_COL_MAJOR, 'V', 'U', static_cast<lapack_int>(n),
      static_cast<lapack_int>(ka), static_cast<lapack_int>(kb), ab.data(),
      static_cast<lapack_int>(ka + 1), bb.data(), static_cast<lapack_int>(kb + 1),
      out.values.data(), out.vectors.data(), static_cast<lapack_int>(n));
  if (info != 0) {
    fail(ErrorKind::numerical,
         "dsbgvd failed with info=" + std::to_string(info) +
             (info > static_cast<lapack_int>(n) ? " (overlap not positive definite)" : ""));
  }
  return out;
}

void refine_eigenpair(const BandedMatrix& h, const BandedMatrix& s, double& value,
                      Eigen::Ref<Eigen::VectorXd> vec, int iterations) {
  const std::size_t n = h.dim();
  const std::size_t w = std::max(h.half_bandwidth(), s.half_bandwidth());
  const std::size_t ld = 3 * w + 1;
  std::vector<lapack_int> pivots(n);
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> ab(ld * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t lo = j > w ? j - w : 0;
      const std::size_t hi = std::min(n - 1, j + w);
      for (std::size_t i = lo; i <= hi; ++i) {
        ab[(2 * w + i - j) + j * ld] = h(i, j) - value * s(i, j);
      }
    }
    Eigen::VectorXd rhs = s.multiply(Eigen::VectorXd(vec));
    const lapack_int info = LAPACKE_dgbsv(
        LAPACK_COL_MAJOR, static_cast<lapack_int>(n), static_cast<lapack_int>(w),
        static_cast<lapack_int>(w), 1, ab.data(), static_cast<lapack_int>(ld), pivots.data(),
        rhs.data(), static_cast<lapack_int>(n));
    if (info < 0) fail(ErrorKind::internal, "dgbsv: bad argument");
    if (info > 0) return;  // exactly singular: value already an eigenvalue to working precision
    const double norm = std::sqrt(rhs.dot(s.multiply(rhs)));
    if (!(norm > 0.0) || !std::isfinite(norm)) return;
    rhs /= norm;
    if (rhs.dot(s.multiply(Eigen::VectorXd(vec))) < 0.0) rhs = -rhs;
    vec = rhs;
    value = rhs.dot(h.multiply(rhs));
  }
}

}  // namespace dirion
