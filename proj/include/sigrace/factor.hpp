#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "sigrace/errors.hpp"

namespace sigrace {

struct PrimePower {
  mpz_class p;
  unsigned alpha = 1;
  bool proven = true;  // false when p only passed the probable-prime battery
};

/// n = prod p^alpha with strictly increasing primes.
class Factorization {
 public:
  Factorization() : n_(1) {}
  /// Sorts and merges repeated primes, then checks the product.
  static Factorization from_factors(mpz_class n, std::vector<PrimePower> factors);
  static Factorization of_u64(std::uint64_t n, const std::vector<std::pair<std::uint64_t, unsigned>>& factors);

  const mpz_class& n() const noexcept { return n_; }
  const std::vector<PrimePower>& factors() const noexcept { return factors_; }
  bool is_unit() const noexcept { return factors_.empty(); }
  bool all_proven() const noexcept;
  std::string to_string() const;

 private:
  mpz_class n_;
  std::vector<PrimePower> factors_;
};

/// Smallest-prime-factor table for 2 <= m <= limit.
class SpfTable {
 public:
  static constexpr std::uint64_t kDefaultBudget = 1ull << 26;
  static SpfTable build(std::uint64_t limit, std::uint64_t budget = kDefaultBudget);

  std::uint64_t limit() const noexcept { return limit_; }
  std::uint32_t spf(std::uint64_t m) const { return spf_.at(m); }
  Factorization factor(std::uint64_t m) const;

 private:
  std::uint64_t limit_ = 0;
  std::vector<std::uint32_t> spf_;
};

struct FactorBudget {
  std::uint32_t trial_bound = 1u << 16;
  std::uint64_t rho_iterations = 1ull << 24;  // total across all rho attempts
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

/// Raised when a composite cofactor survives the rho budget.
class PartialFactorizationError : public ResourceError {
 public:
  PartialFactorizationError(std::vector<PrimePower> found, mpz_class cofactor)
      : ResourceError("factorization budget exhausted; unfactored cofactor " + cofactor.get_str()),
        found_(std::move(found)),
        cofactor_(std::move(cofactor)) {}
  const std::vector<PrimePower>& found() const noexcept { return found_; }
  const mpz_class& cofactor() const noexcept { return cofactor_; }

 private:
  std::vector<PrimePower> found_;
  mpz_class cofactor_;
};

/// Complete factorization of n >= 1. Uses the table when n <= its limit,
/// otherwise trial division then Brent's rho with a fixed seed.
Factorization factorize(const mpz_class& n, const SpfTable* table = nullptr, const FactorBudget& budget = {});

/// Fast path for machine words.
Factorization factorize_u64(std::uint64_t n);

/// Number of divisors, and the divisor list (ascending) subject to a cap.
mpz_class divisor_count(const Factorization& f);
std::vector<mpz_class> divisors(const Factorization& f, std::uint64_t cap = 1ull << 20);

}  // namespace sigrace
