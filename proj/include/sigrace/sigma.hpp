#pragma once

#include <cstdint>
#include <utility>

#include "sigrace/factor.hpp"
#include "sigrace/numerics.hpp"

namespace sigrace {

/// sigma_s(n) = sum_{d | n} d^s through the product over p^alpha || n.
/// Exact for integer s (including negative s); a ball otherwise.
ScalarValue sigma_s(const Factorization& f, const Exponent& s, unsigned prec = 128);

/// (sigma_{-r}(m), sigma_r(m) / m^r); the two are equal.
std::pair<ScalarValue, ScalarValue> sigma_reflect_check(const Factorization& f, const Exponent& r,
                                                        unsigned prec = 128);

/// Certified comparison of sigma_s(x) with sigma_s(y), escalating precision
/// for non-integer s.
Comparison compare_sigma(const mpz_class& x, const mpz_class& y, const Exponent& s, const PrecisionPolicy& policy = {});

struct SmallFunctions {
  mpz_class tau;
  mpz_class sigma;
  mpz_class phi;
  unsigned omega = 0;
  unsigned big_omega = 0;
};

SmallFunctions small_functions(const Factorization& f);

/// Sum of d^s over divisors d of n with d = residue (mod modulus).
ScalarValue sigma_restricted(const Factorization& f, const mpz_class& modulus, const mpz_class& residue,
                             const Exponent& s, unsigned prec = 128, std::uint64_t divisor_cap = 1ull << 20);

}  // namespace sigrace
