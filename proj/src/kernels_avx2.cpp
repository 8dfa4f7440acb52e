#if defined(__x86_64__)

#include <immintrin.h>

#include "sigrace/kernels.hpp"

namespace sigrace::kernels::avx2 {

namespace {

// Exact u64 -> double for values below 2^52.
__attribute__((target("avx2"))) inline __m256d to_double(__m256i v) {
  const __m256i magic_bits = _mm256_set1_epi64x(0x4330000000000000ll);
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);
  return _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(v, magic_bits)), magic);
}

}  // namespace

__attribute__((target("avx2"))) void finalize_sqrt(double* acc, const std::uint64_t* rem, std::size_t count) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d r = to_double(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(rem + i)));
    __m256d f = _mm256_add_pd(one, _mm256_sqrt_pd(r));
    __m256d use = _mm256_cmp_pd(r, one, _CMP_GT_OQ);
    f = _mm256_blendv_pd(one, f, use);
    __m256d a = _mm256_loadu_pd(acc + i);
    // acc * 1 is exact, so lanes with rem <= 1 are left unchanged.
    _mm256_storeu_pd(acc + i, _mm256_mul_pd(a, f));
  }
  scalar::finalize_sqrt(acc + i, rem + i, count - i);
}

__attribute__((target("avx2"))) void classify_double(const double* left, const double* right, double tol,
                                                     std::int8_t* out, std::size_t count) {
  const __m256d vtol = _mm256_set1_pd(tol);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d l = _mm256_loadu_pd(left + i);
    __m256d r = _mm256_loadu_pd(right + i);
    __m256d diff = _mm256_sub_pd(l, r);
    __m256d band = _mm256_mul_pd(vtol, _mm256_add_pd(l, r));
    int gt = _mm256_movemask_pd(_mm256_cmp_pd(diff, band, _CMP_GT_OQ));
    int lt = _mm256_movemask_pd(_mm256_cmp_pd(_mm256_sub_pd(_mm256_setzero_pd(), diff), band, _CMP_GT_OQ));
    for (int j = 0; j < 4; ++j) out[i + j] = static_cast<std::int8_t>(((gt >> j) & 1) - ((lt >> j) & 1));
  }
  scalar::classify_double(left + i, right + i, tol, out + i, count - i);
}

__attribute__((target("avx2"))) void classify_u64(const std::uint64_t* left, const std::uint64_t* right,
                                                  std::int8_t* out, std::size_t count) {
  // Flip the sign bit so the signed compare orders unsigned values.
  const __m256i flip = _mm256_set1_epi64x(static_cast<long long>(0x8000000000000000ull));
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256i l = _mm256_xor_si256(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(left + i)), flip);
    __m256i r = _mm256_xor_si256(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(right + i)), flip);
    int gt = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpgt_epi64(l, r)));
    int lt = _mm256_movemask_pd(_mm256_castsi256_pd(_mm256_cmpgt_epi64(r, l)));
    for (int j = 0; j < 4; ++j) out[i + j] = static_cast<std::int8_t>(((gt >> j) & 1) - ((lt >> j) & 1));
  }
  scalar::classify_u64(left + i, right + i, out + i, count - i);
}

}  // namespace sigrace::kernels::avx2

#endif
