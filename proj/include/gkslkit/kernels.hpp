#pragma once

// Complex double-precision inner loops. Every kernel has a portable scalar
// reference; an AVX2/FMA variant is compiled separately and picked at runtime
// when the CPU supports it. Buffers hold interleaved (re, im) pairs, row-major.

#include <complex>
#include <cstddef>
#include <string_view>

namespace gkslkit::kernels {

using cplx = std::complex<double>;

struct KernelTable {
  std::string_view name;

  /// c[m x n] = a[m x k] * b[k x n]; c must not alias a or b.
  void (*gemm)(std::size_t m, std::size_t n, std::size_t k, const cplx* a, const cplx* b, cplx* c);

  /// sum_i conj(x_i) * y_i
  cplx (*dotc)(std::size_t n, const cplx* x, const cplx* y);

  /// y += alpha * x
  void (*axpy)(std::size_t n, cplx alpha, const cplx* x, cplx* y);

  /// sum_i |x_i|^2
  double (*norm_sq)(std::size_t n, const cplx* x);
};

const KernelTable& scalar();

/// The AVX2/FMA table, or nullptr when it was not built or the CPU lacks the ISA.
const KernelTable* avx2();

/// Table used by the library. Chosen once: AVX2 when available, unless the
/// environment variable GKSL_KIT_KERNELS=scalar forces the reference path.
const KernelTable& active();

}  // namespace gkslkit::kernels
