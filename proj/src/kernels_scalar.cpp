#include <cmath>

#include "sigrace/kernels.hpp"

namespace sigrace::kernels::scalar {

void finalize_sqrt(double* acc, const std::uint64_t* rem, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    if (rem[i] > 1) acc[i] *= 1.0 + std::sqrt(static_cast<double>(rem[i]));
  }
}

void classify_double(const double* left, const double* right, double tol, std::int8_t* out, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    double diff = left[i] - right[i];
    double band = tol * (left[i] + right[i]);
    out[i] = diff > band ? 1 : (-diff > band ? -1 : 0);
  }
}

void classify_u64(const std::uint64_t* left, const std::uint64_t* right, std::int8_t* out, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<std::int8_t>((left[i] > right[i]) - (left[i] < right[i]));
}

}  // namespace sigrace::kernels::scalar
