// Compiled with -mavx2 -mfma; only reached after a CPUID check.
#include <immintrin.h>

#include "dirion/kernels.hpp"

namespace dirion::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

void block_pair_avx2(const double* b, std::size_t rows, std::size_t cols, const double* xa_re,
                     const double* xa_im, const double* xb_re, const double* xb_im,
                     double* ya_re, double* ya_im, double* yb_re, double* yb_im, double sign) {
  const std::size_t cv = cols & ~std::size_t{3};
  // two rows per pass halves the traffic on x_b and y_b
  std::size_t r = 0;
  for (; r + 1 < rows; r += 2) {
    const double* r0 = b + r * cols;
    const double* r1 = r0 + cols;
    __m256d s0r = _mm256_setzero_pd(), s0i = _mm256_setzero_pd();
    __m256d s1r = _mm256_setzero_pd(), s1i = _mm256_setzero_pd();
    const __m256d a0r = _mm256_set1_pd(sign * xa_re[r]), a0i = _mm256_set1_pd(sign * xa_im[r]);
    const __m256d a1r = _mm256_set1_pd(sign * xa_re[r + 1]);
    const __m256d a1i = _mm256_set1_pd(sign * xa_im[r + 1]);
    std::size_t c = 0;
    for (; c < cv; c += 4) {
      const __m256d v0 = _mm256_loadu_pd(r0 + c), v1 = _mm256_loadu_pd(r1 + c);
      const __m256d xr = _mm256_loadu_pd(xb_re + c), xi = _mm256_loadu_pd(xb_im + c);
      s0r = _mm256_fmadd_pd(v0, xr, s0r);
      s0i = _mm256_fmadd_pd(v0, xi, s0i);
      s1r = _mm256_fmadd_pd(v1, xr, s1r);
      s1i = _mm256_fmadd_pd(v1, xi, s1i);
      __m256d yr = _mm256_loadu_pd(yb_re + c), yi = _mm256_loadu_pd(yb_im + c);
      yr = _mm256_fmadd_pd(v0, a0r, yr);
      yi = _mm256_fmadd_pd(v0, a0i, yi);
      yr = _mm256_fmadd_pd(v1, a1r, yr);
      yi = _mm256_fmadd_pd(v1, a1i, yi);
      _mm256_storeu_pd(yb_re + c, yr);
      _mm256_storeu_pd(yb_im + c, yi);
    }
    double t0r = hsum(s0r), t0i = hsum(s0i), t1r = hsum(s1r), t1i = hsum(s1i);
    const double b0r = sign * xa_re[r], b0i = sign * xa_im[r];
    const double b1r = sign * xa_re[r + 1], b1i = sign * xa_im[r + 1];
    for (; c < cols; ++c) {
      const double v0 = r0[c], v1 = r1[c];
      t0r += v0 * xb_re[c];
      t0i += v0 * xb_im[c];
      t1r += v1 * xb_re[c];
      t1i += v1 * xb_im[c];
      yb_re[c] += v0 * b0r + v1 * b1r;
      yb_im[c] += v0 * b0i + v1 * b1i;
    }
    ya_re[r] += t0r;
    ya_im[r] += t0i;
    ya_re[r + 1] += t1r;
    ya_im[r + 1] += t1i;
  }
  for (; r < rows; ++r) {
    const double* r0 = b + r * cols;
    __m256d sr = _mm256_setzero_pd(), si = _mm256_setzero_pd();
    const __m256d ar = _mm256_set1_pd(sign * xa_re[r]), ai = _mm256_set1_pd(sign * xa_im[r]);
    std::size_t c = 0;
    for (; c < cv; c += 4) {
      const __m256d v = _mm256_loadu_pd(r0 + c);
      sr = _mm256_fmadd_pd(v, _mm256_loadu_pd(xb_re + c), sr);
      si = _mm256_fmadd_pd(v, _mm256_loadu_pd(xb_im + c), si);
      _mm256_storeu_pd(yb_re + c, _mm256_fmadd_pd(v, ar, _mm256_loadu_pd(yb_re + c)));
      _mm256_storeu_pd(yb_im + c, _mm256_fmadd_pd(v, ai, _mm256_loadu_pd(yb_im + c)));
    }
    double tr = hsum(sr), ti = hsum(si);
    const double br = sign * xa_re[r], bi = sign * xa_im[r];
    for (; c < cols; ++c) {
      tr += r0[c] * xb_re[c];
      ti += r0[c] * xb_im[c];
      yb_re[c] += r0[c] * br;
      yb_im[c] += r0[c] * bi;
    }
    ya_re[r] += tr;
    ya_im[r] += ti;
  }
}

void lincomb_avx2(std::size_t n, const double* base, std::size_t count,
                  const double* const* vecs, const double* coef, double* out) {
  const std::size_t nv = n & ~std::size_t{3};
  std::size_t i = 0;
  for (; i < nv; i += 4) {
    __m256d s = _mm256_setzero_pd();
    for (std::size_t j = 0; j < count; ++j)
      s = _mm256_fmadd_pd(_mm256_set1_pd(coef[j]), _mm256_loadu_pd(vecs[j] + i), s);
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(base + i), s));
  }
  for (; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < count; ++j) s += coef[j] * vecs[j][i];
    out[i] = base[i] + s;
  }
}

void rotate_avx2(std::size_t n, const double* cos_t, const double* sin_t, const double* in_re,
                 const double* in_im, double* out_re, double* out_im) {
  const std::size_t nv = n & ~std::size_t{3};
  std::size_t i = 0;
  for (; i < nv; i += 4) {
    const __m256d c = _mm256_loadu_pd(cos_t + i), s = _mm256_loadu_pd(sin_t + i);
    const __m256d re = _mm256_loadu_pd(in_re + i), im = _mm256_loadu_pd(in_im + i);
    _mm256_storeu_pd(out_re + i, _mm256_fmsub_pd(c, re, _mm256_mul_pd(s, im)));
    _mm256_storeu_pd(out_im + i, _mm256_fmadd_pd(s, re, _mm256_mul_pd(c, im)));
  }
  for (; i < n; ++i) {
    const double re = in_re[i], im = in_im[i];
    out_re[i] = cos_t[i] * re - sin_t[i] * im;
    out_im[i] = sin_t[i] * re + cos_t[i] * im;
  }
}

const KernelTable kAvx2{"avx2", &block_pair_avx2, &lincomb_avx2, &rotate_avx2};

}  // namespace

const KernelTable& avx2_table() { return kAvx2; }

}  // namespace dirion::kernels
