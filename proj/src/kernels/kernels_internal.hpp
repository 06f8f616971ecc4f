#pragma once

#include "gkslkit/kernels.hpp"

namespace gkslkit::kernels::detail {

#if defined(GKSLKIT_HAS_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace gkslkit::kernels::detail
