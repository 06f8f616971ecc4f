#include <random>
#include <vector>

#include "doctest.h"
#include "gkslkit/kernels.hpp"

using gkslkit::kernels::cplx;
using gkslkit::kernels::KernelTable;

namespace {

std::vector<cplx> random_buffer(std::size_t n, std::mt19937_64& rng, double zero_fraction = 0.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> v(n);
  for (auto& x : v) x = u(rng) < zero_fraction ? cplx(0.0) : cplx(g(rng), g(rng));
  return v;
}

void naive_gemm(std::size_t m, std::size_t n, std::size_t k, const cplx* a, const cplx* b, cplx* c) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      cplx s = 0.0;
      for (std::size_t l = 0; l < k; ++l) s += a[i * k + l] * b[l * n + j];
      c[i * n + j] = s;
    }
  }
}

double max_abs_diff(const std::vector<cplx>& x, const std::vector<cplx>& y) {
  double m = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

std::vector<const KernelTable*> tables() {
  std::vector<const KernelTable*> t{&gkslkit::kernels::scalar()};
  if (const auto* v = gkslkit::kernels::avx2()) t.push_back(v);
  return t;
}

}  // namespace

TEST_CASE("gemm matches a naive triple loop for awkward shapes") {
  std::mt19937_64 rng(11);
  const std::size_t shapes[][3] = {{1, 1, 1}, {1, 7, 3}, {5, 1, 4}, {3, 5, 7}, {4, 4, 4}, {9, 13, 6}, {16, 16, 16}, {17, 3, 31}};
  for (const auto* t : tables()) {
    CAPTURE(t->name);
    for (const auto& s : shapes) {
      const auto a = random_buffer(s[0] * s[2], rng, 0.2);
      const auto b = random_buffer(s[2] * s[1], rng);
      std::vector<cplx> c(s[0] * s[1], cplx(99.0, 99.0)), ref(s[0] * s[1]);
      t->gemm(s[0], s[1], s[2], a.data(), b.data(), c.data());
      naive_gemm(s[0], s[1], s[2], a.data(), b.data(), ref.data());
      CHECK(max_abs_diff(c, ref) < 1e-12 * (1.0 + static_cast<double>(s[2])));
    }
  }
}

TEST_CASE("gemm overwrites c even when a is all zeros") {
  for (const auto* t : tables()) {
    std::vector<cplx> a(6, 0.0), b(6, cplx(1.0, 2.0)), c(4, cplx(5.0, 5.0));
    t->gemm(2, 2, 3, a.data(), b.data(), c.data());
    for (const auto& x : c) CHECK(x == cplx(0.0));
  }
}

TEST_CASE("dotc, axpy and norm_sq agree across kernel variants") {
  std::mt19937_64 rng(12);
  for (std::size_t n : {0u, 1u, 2u, 3u, 8u, 15u, 64u, 101u}) {
    const auto x = random_buffer(n, rng);
    const auto y = random_buffer(n, rng);
    cplx dot_ref = 0.0;
    double nrm_ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      dot_ref += std::conj(x[i]) * y[i];
      nrm_ref += std::norm(x[i]);
    }
    const cplx alpha(0.3, -1.7);
    std::vector<cplx> axpy_ref = y;
    for (std::size_t i = 0; i < n; ++i) axpy_ref[i] += alpha * x[i];

    for (const auto* t : tables()) {
      CAPTURE(t->name);
      CHECK(std::abs(t->dotc(n, x.data(), y.data()) - dot_ref) < 1e-12 * (1.0 + static_cast<double>(n)));
      CHECK(std::abs(t->norm_sq(n, x.data()) - nrm_ref) < 1e-12 * (1.0 + nrm_ref));
      std::vector<cplx> out = y;
      t->axpy(n, alpha, x.data(), out.data());
      CHECK(max_abs_diff(out, axpy_ref) < 1e-13);
    }
  }
}

TEST_CASE("scalar and SIMD variants agree to rounding on the same inputs") {
  const auto* simd = gkslkit::kernels::avx2();
  if (simd == nullptr) {
    MESSAGE("AVX2 variant unavailable on this machine; equivalence not exercised");
    return;
  }
  std::mt19937_64 rng(13);
  const std::size_t m = 36, n = 36, k = 36;
  const auto a = random_buffer(m * k, rng);
  const auto b = random_buffer(k * n, rng);
  std::vector<cplx> c1(m * n), c2(m * n);
  gkslkit::kernels::scalar().gemm(m, n, k, a.data(), b.data(), c1.data());
  simd->gemm(m, n, k, a.data(), b.data(), c2.data());
  CHECK(max_abs_diff(c1, c2) < 1e-12);
}

TEST_CASE("active table honours the selection rule") {
  const auto& active = gkslkit::kernels::active();
  const char* env = std::getenv("GKSL_KIT_KERNELS");
  if (env != nullptr && std::string_view(env) == "scalar") {
    CHECK(active.name == gkslkit::kernels::scalar().name);
  } else if (gkslkit::kernels::avx2() != nullptr) {
    CHECK(active.name == gkslkit::kernels::avx2()->name);
  }
}
