#include "dirion/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace dirion::kernels {

namespace {

void block_pair_scalar(const double* b, std::size_t rows, std::size_t cols, const double* xa_re,
                       const double* xa_im, const double* xb_re, const double* xb_im,
                       double* ya_re, double* ya_im, double* yb_re, double* yb_im, double sign) {
  for (std::size_t r = 0; r < rows; ++r) {
    const double* row = b + r * cols;
    double acc_re = 0.0, acc_im = 0.0;
    const double ar = sign * xa_re[r], ai = sign * xa_im[r];
    for (std::size_t c = 0; c < cols; ++c) {
      const double v = row[c];
      acc_re += v * xb_re[c];
      acc_im += v * xb_im[c];
      yb_re[c] += v * ar;
      yb_im[c] += v * ai;
    }
    ya_re[r] += acc_re;
    ya_im[r] += acc_im;
  }
}

void lincomb_scalar(std::size_t n, const double* base, std::size_t count,
                    const double* const* vecs, const double* coef, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < count; ++j) s += coef[j] * vecs[j][i];
    out[i] = base[i] + s;
  }
}

void rotate_scalar(std::size_t n, const double* cos_t, const double* sin_t, const double* in_re,
                   const double* in_im, double* out_re, double* out_im) {
  for (std::size_t i = 0; i < n; ++i) {
    const double re = in_re[i], im = in_im[i];
    out_re[i] = cos_t[i] * re - sin_t[i] * im;
    out_im[i] = sin_t[i] * re + cos_t[i] * im;
  }
}

const KernelTable kScalar{"scalar", &block_pair_scalar, &lincomb_scalar, &rotate_scalar};

}  // namespace

#ifdef DIRION_HAVE_AVX2
const KernelTable& avx2_table();
#endif

const KernelTable& scalar_kernels() { return kScalar; }

const KernelTable* avx2_kernels() {
#ifdef DIRION_HAVE_AVX2
  return &avx2_table();
#else
  return nullptr;
#endif
}

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& active_kernels() {
  static const KernelTable* chosen = [] {
    const char* env = std::getenv("DIRION_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return &kScalar;
    const KernelTable* v = avx2_kernels();
    if (v && cpu_has_avx2()) return v;
    return &kScalar;
  }();
  return *chosen;
}

}  // namespace dirion::kernels
