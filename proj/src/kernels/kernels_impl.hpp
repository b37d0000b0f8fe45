#pragma once
// Internal: per-ISA table constructors.

#include "ris/kernels.hpp"

namespace ris::kernels::detail {

const KernelTable& make_scalar_table();

#if defined(RIS_HAVE_AVX2_KERNELS)
const KernelTable& make_avx2_table();
#endif

#if defined(RIS_HAVE_NEON_KERNELS)
const KernelTable& make_neon_table();
#endif

}  // namespace ris::kernels::detail
