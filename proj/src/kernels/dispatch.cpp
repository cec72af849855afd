#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace sea::kernels {

const Table& scalar() noexcept { return detail::kScalarTable; }

const Table* avx2() noexcept {
#if defined(SEA_FORGE_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return supported ? &detail::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const Table& active() noexcept {
  static const Table& chosen = []() -> const Table& {
    if (const char* env = std::getenv("SEA_FORGE_KERNELS"); env != nullptr && std::string_view(env) == "scalar") {
      return scalar();
    }
    if (const Table* t = avx2()) return *t;
    return scalar();
  }();
  return chosen;
}

}  // namespace sea::kernels
