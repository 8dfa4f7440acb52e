#pragma once

// Segmented factorization of the progression members a*n + b.

#include <cstdint>
#include <functional>
#include <vector>

#include "sigrace/factor.hpp"
#include "sigrace/numerics.hpp"
#include "sigrace/primes.hpp"

namespace sigrace {

struct ProgressionSpec {
  std::uint64_t a = 1;
  std::uint64_t b = 0;

  std::uint64_t value(std::uint64_t n) const { return a * n + b; }
};

/// Largest progression value the sieve handles; keeps every cofactor exact
/// as a double.
inline constexpr std::uint64_t kMaxSieveValue = 1ull << 52;

/// Largest n with a*n + b <= kMaxSieveValue.
std::uint64_t max_sieve_n(const ProgressionSpec& p);

/// Throws DomainError for n_lo == 0 or an empty range, ResourceError when the
/// top value passes kMaxSieveValue (the message names the largest feasible
/// n_hi).
void check_sieve_range(const ProgressionSpec& p, std::uint64_t n_lo, std::uint64_t n_hi);

/// Sieving primes up to sqrt(max_value), shared read-only across threads.
class SievePrimes {
 public:
  explicit SievePrimes(std::uint64_t max_value);
  const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }
  std::uint64_t max_value() const noexcept { return max_value_; }

  /// Factors a*n + b for n in [n_lo, n_lo + count). Calls
  /// hit(i, prime_index, alpha) for every prime power found; afterwards rem[i]
  /// is 1 or the single prime factor above sqrt(value).
  template <class Hit>
  void sieve(const ProgressionSpec& p, std::uint64_t n_lo, std::size_t count, std::vector<std::uint64_t>& rem,
             Hit&& hit) const;

 private:
  std::uint64_t max_value_;
  std::vector<std::uint32_t> primes_;
};

struct ScanSummary {
  std::uint64_t terms = 0;
  std::uint64_t segments = 0;
  ScalarValue total = mpq_class(0);  // exact for integer s
};

struct ScanOptions {
  std::size_t segment = 1u << 16;
};

/// Delivers (n, sigma_s(a*n + b)) in increasing n, identical to factorize +
/// sigma_s pointwise.
ScanSummary scan_progression(const ProgressionSpec& p, std::uint64_t n_lo, std::uint64_t n_hi, const Exponent& s,
                             unsigned prec, const std::function<void(std::uint64_t, const ScalarValue&)>& sink,
                             const ScanOptions& options = {});

// ---------------------------------------------------------------------------

template <class Hit>
void SievePrimes::sieve(const ProgressionSpec& p, std::uint64_t n_lo, std::size_t count,
                        std::vector<std::uint64_t>& rem, Hit&& hit) const {
  rem.resize(count);
  for (std::size_t i = 0; i < count; ++i) rem[i] = p.value(n_lo + i);
  if (count == 0) return;
  const std::uint64_t top = p.value(n_lo + count - 1);
  const std::uint64_t first = p.value(n_lo);
  for (std::size_t pi = 0; pi < primes_.size(); ++pi) {
    const std::uint64_t q = primes_[pi];
    if (q * q > top) break;
    std::size_t start;
    std::size_t stride;
    if (p.a % q == 0) {
      if (p.b % q != 0) continue;
      start = 0;
      stride = 1;
    } else {
      // a*(n_lo + i) + b = 0 (mod q)  <=>  i = -first * a^{-1} (mod q)
      std::uint64_t inv = powmod_u64(p.a % q, q - 2, q);
      std::uint64_t neg = (q - first % q) % q;
      start = static_cast<std::size_t>(mulmod_u64(neg, inv, q));
      stride = static_cast<std::size_t>(q);
    }
    // Skip values below q^2 so each value's split into sieved primes and
    // residual does not depend on where the segment ends.
    if (q * q > first) {
      const std::uint64_t need = (q * q - first + p.a - 1) / p.a;
      if (need >= count) continue;
      if (start < need) start += (need - start + stride - 1) / stride * stride;
    }
    for (std::size_t i = start; i < count; i += stride) {
      std::uint64_t r = rem[i];
      unsigned alpha = 0;
      do {
        r /= q;
        ++alpha;
      } while (r % q == 0);
      rem[i] = r;
      hit(i, pi, alpha);
    }
  }
}

}  // namespace sigrace
