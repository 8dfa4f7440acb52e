#include <cstdlib>
#include <cstring>

#include "sigrace/kernels.hpp"

namespace sigrace::kernels {

bool isa_available(Isa isa) {
  if (isa == Isa::scalar) return true;
#if defined(__x86_64__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* forced = std::getenv("SIGRACE_ISA");
    if (forced && std::strcmp(forced, "scalar") == 0) return Isa::scalar;
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
  }();
  return isa;
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

void finalize_sqrt(double* acc, const std::uint64_t* rem, std::size_t count, Isa isa) {
#if defined(__x86_64__)
  if (isa == Isa::avx2) return avx2::finalize_sqrt(acc, rem, count);
#endif
  (void)isa;
  scalar::finalize_sqrt(acc, rem, count);
}

void classify_double(const double* left, const double* right, double tol, std::int8_t* out, std::size_t count,
                     Isa isa) {
#if defined(__x86_64__)
  if (isa == Isa::avx2) return avx2::classify_double(left, right, tol, out, count);
#endif
  (void)isa;
  scalar::classify_double(left, right, tol, out, count);
}

void classify_u64(const std::uint64_t* left, const std::uint64_t* right, std::int8_t* out, std::size_t count,
                  Isa isa) {
#if defined(__x86_64__)
  if (isa == Isa::avx2) return avx2::classify_u64(left, right, out, count);
#endif
  (void)isa;
  scalar::classify_u64(left, right, out, count);
}

}  // namespace sigrace::kernels
