#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

#include "bmo/simd/kernels.hpp"

namespace bmo::simd {

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(BMO_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

const char* isa_name(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

const KernelTable& kernels_for(Isa isa) {
  if (!isa_available(isa))
    throw std::runtime_error(std::string("SIMD variant unavailable: ") + isa_name(isa));
#if defined(BMO_HAVE_AVX2)
  if (isa == Isa::avx2) return detail::avx2_table();
#endif
  return detail::scalar_table();
}

namespace {
const KernelTable& select() {
  const char* env = std::getenv("BMOFORGE_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return detail::scalar_table();
  if (isa_available(Isa::avx2)) return kernels_for(Isa::avx2);
  return detail::scalar_table();
}
}  // namespace

const KernelTable& kernels() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace bmo::simd
