#pragma once

#include "seaforge/kernels.hpp"

namespace sea::kernels::detail {

extern const Table kScalarTable;

#if defined(SEA_FORGE_HAVE_AVX2)
extern const Table kAvx2Table;
#endif

}  // namespace sea::kernels::detail
