#include <cstdlib>
#include <string>

#include "hls/simd/kernels.hpp"

namespace hls::simd {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  const char* env = std::getenv("HLS_SIMD");
  if (env != nullptr && std::string(env) == "scalar") return scalar::table();
  if (isa_available(Isa::Avx2)) return avx2::table();
  return scalar::table();
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
      return avx2::compiled() && cpu_has_avx2();
  }
  return false;
}

const KernelTable& kernels(Isa isa) {
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) return avx2::table();
  return scalar::table();
}

const KernelTable& kernels() {
  static const KernelTable& active = select();
  return active;
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace hls::simd
