#include <cstdlib>
#include <string_view>

#include "gkslkit/kernels.hpp"
#include "kernels_internal.hpp"

namespace gkslkit::kernels {
namespace {

bool cpu_has_avx2_fma() {
#if defined(GKSLKIT_HAS_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  if (const char* env = std::getenv("GKSL_KIT_KERNELS"); env != nullptr && std::string_view(env) == "scalar") {
    return scalar();
  }
  if (const KernelTable* t = avx2()) return *t;
  return scalar();
}

}  // namespace

const KernelTable* avx2() {
#if defined(GKSLKIT_HAS_AVX2)
  static const bool ok = cpu_has_avx2_fma();
  return ok ? &detail::avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace gkslkit::kernels
