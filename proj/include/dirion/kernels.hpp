#pragma once

#include <cstddef>

// Data-parallel inner loops of the propagator. Every kernel has a scalar
// reference version and an AVX2/FMA version; the table is chosen once at
// startup from CPUID (override with DIRION_SIMD=scalar).

namespace dirion::kernels {

// For a row-major rows x cols block B acting between channel a (rows) and
// channel b (cols) of a split complex vector:
//   y_a += B x_b,   y_b += sign * B^T x_a
using BlockPairFn = void (*)(const double* b, std::size_t rows, std::size_t cols,
                             const double* xa_re, const double* xa_im, const double* xb_re,
                             const double* xb_im, double* ya_re, double* ya_im, double* yb_re,
                             double* yb_im, double sign);

// out[i] = base[i] + sum_j coef[j] * vecs[j][i]
using LinCombFn = void (*)(std::size_t n, const double* base, std::size_t count,
                           const double* const* vecs, const double* coef, double* out);

// out = (cos + i sin) * in, element-wise on split complex arrays
using RotateFn = void (*)(std::size_t n, const double* cos_t, const double* sin_t,
                          const double* in_re, const double* in_im, double* out_re,
                          double* out_im);

struct KernelTable {
  const char* name;
  BlockPairFn block_pair;
  LinCombFn lincomb;
  RotateFn rotate;
};

const KernelTable& scalar_kernels();
// nullptr when the binary was built without AVX2 support.
const KernelTable* avx2_kernels();
bool cpu_has_avx2();

// Runtime selection (cached).
const KernelTable& active_kernels();

}  // namespace dirion::kernels
