// Compiled with -mavx2 -mfma. Only reached through the dispatch table after a
// runtime CPU check, so nothing here may be inlined into portable code.

#include <immintrin.h>

#include "gkslkit/kernels.hpp"
#include "kernels_internal.hpp"

namespace gkslkit::kernels {
namespace {

// One __m256d holds two complex numbers: [re0, im0, re1, im1].

inline __m256d cmul_bcast(__m256d ar, __m256d ai, __m256d b) {
  const __m256d bswap = _mm256_permute_pd(b, 0b0101);
  return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, bswap));
}

void gemm_avx2(std::size_t m, std::size_t n, std::size_t k, const cplx* a, const cplx* b, cplx* c) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = cplx{0.0, 0.0};
  const std::size_t n4 = n & ~std::size_t{3};
  const std::size_t n2 = n & ~std::size_t{1};
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = reinterpret_cast<double*>(c + i * n);
    for (std::size_t p = 0; p < k; ++p) {
      const double arv = a[i * k + p].real();
      const double aiv = a[i * k + p].imag();
      if (arv == 0.0 && aiv == 0.0) continue;
      const __m256d ar = _mm256_set1_pd(arv);
      const __m256d ai = _mm256_set1_pd(aiv);
      const double* brow = reinterpret_cast<const double*>(b + p * n);
      std::size_t j = 0;
      for (; j < n4; j += 4) {
        const __m256d b0 = _mm256_loadu_pd(brow + 2 * j);
        const __m256d b1 = _mm256_loadu_pd(brow + 2 * j + 4);
        __m256d c0 = _mm256_loadu_pd(crow + 2 * j);
        __m256d c1 = _mm256_loadu_pd(crow + 2 * j + 4);
        c0 = _mm256_add_pd(c0, cmul_bcast(ar, ai, b0));
        c1 = _mm256_add_pd(c1, cmul_bcast(ar, ai, b1));
        _mm256_storeu_pd(crow + 2 * j, c0);
        _mm256_storeu_pd(crow + 2 * j + 4, c1);
      }
      for (; j < n2; j += 2) {
        const __m256d b0 = _mm256_loadu_pd(brow + 2 * j);
        __m256d c0 = _mm256_loadu_pd(crow + 2 * j);
        c0 = _mm256_add_pd(c0, cmul_bcast(ar, ai, b0));
        _mm256_storeu_pd(crow + 2 * j, c0);
      }
      for (; j < n; ++j) {
        const double br = brow[2 * j];
        const double bi = brow[2 * j + 1];
        crow[2 * j] += arv * br - aiv * bi;
        crow[2 * j + 1] += arv * bi + aiv * br;
      }
    }
  }
}

cplx dotc_avx2(std::size_t n, const cplx* x, const cplx* y) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  __m256d acc_re = _mm256_setzero_pd();  // [xr*yr, xi*yi, ...]
  __m256d acc_im = _mm256_setzero_pd();  // [xr*yi, xi*yr, ...]
  const std::size_t n2 = n & ~std::size_t{1};
  std::size_t i = 0;
  for (; i < n2; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    acc_re = _mm256_fmadd_pd(xv, yv, acc_re);
    acc_im = _mm256_fmadd_pd(xv, _mm256_permute_pd(yv, 0b0101), acc_im);
  }
  alignas(32) double r[4];
  alignas(32) double s[4];
  _mm256_store_pd(r, acc_re);
  _mm256_store_pd(s, acc_im);
  double re = r[0] + r[1] + r[2] + r[3];
  double im = (s[0] - s[1]) + (s[2] - s[3]);
  for (; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

void axpy_avx2(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  const std::size_t n2 = n & ~std::size_t{1};
  std::size_t i = 0;
  for (; i < n2; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul_bcast(ar, ai, xv)));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = cplx{y[i].real() + (alpha.real() * xr - alpha.imag() * xi),
                y[i].imag() + (alpha.real() * xi + alpha.imag() * xr)};
  }
}

double norm_sq_avx2(std::size_t n, const cplx* x) {
  const double* xd = reinterpret_cast<const double*>(x);
  __m256d acc = _mm256_setzero_pd();
  const std::size_t n2 = n & ~std::size_t{1};
  std::size_t i = 0;
  for (; i < n2; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    acc = _mm256_fmadd_pd(xv, xv, acc);
  }
  alignas(32) double r[4];
  _mm256_store_pd(r, acc);
  double s = (r[0] + r[1]) + (r[2] + r[3]);
  for (; i < n; ++i) s += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  return s;
}

}  // namespace

namespace detail {

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", &gemm_avx2, &dotc_avx2, &axpy_avx2, &norm_sq_avx2};
  return table;
}

}  // namespace detail
}  // namespace gkslkit::kernels
