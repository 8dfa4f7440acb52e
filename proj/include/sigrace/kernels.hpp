#pragma once

// Batch kernels used by the race scanner. Every kernel has a scalar
// reference and an AVX2 variant; the two must agree bit for bit.

#include <cstddef>
#include <cstdint>

namespace sigrace::kernels {

enum class Isa { scalar, avx2 };

/// Best ISA the CPU supports, unless SIGRACE_ISA=scalar forces the reference.
Isa active_isa();
bool isa_available(Isa isa);
const char* isa_name(Isa isa);

/// acc[i] *= 1 + sqrt(rem[i]) when rem[i] > 1. Requires rem[i] < 2^52.
void finalize_sqrt(double* acc, const std::uint64_t* rem, std::size_t count, Isa isa);

/// out[i] = +1 if l - r > tol (l + r), -1 if r - l > tol (l + r), else 0.
/// Inputs are positive.
void classify_double(const double* left, const double* right, double tol, std::int8_t* out, std::size_t count,
                     Isa isa);

/// out[i] = sign(left[i] - right[i]).
void classify_u64(const std::uint64_t* left, const std::uint64_t* right, std::int8_t* out, std::size_t count,
                  Isa isa);

namespace scalar {
void finalize_sqrt(double* acc, const std::uint64_t* rem, std::size_t count);
void classify_double(const double* left, const double* right, double tol, std::int8_t* out, std::size_t count);
void classify_u64(const std::uint64_t* left, const std::uint64_t* right, std::int8_t* out, std::size_t count);
}  // namespace scalar

#if defined(__x86_64__)
namespace avx2 {
void finalize_sqrt(double* acc, const std::uint64_t* rem, std::size_t count);
void classify_double(const double* left, const double* right, double tol, std::int8_t* out, std::size_t count);
void classify_u64(const std::uint64_t* left, const std::uint64_t* right, std::int8_t* out, std::size_t count);
}  // namespace avx2
#endif

}  // namespace sigrace::kernels
