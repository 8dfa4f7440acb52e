#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <vector>

namespace sigrace {

/// All primes p <= limit, by the sieve of Eratosthenes.
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

/// The k-th prime, 1-indexed (nth_prime(1) == 2).
std::uint64_t nth_prime(std::size_t k);

/// Primes p_1..p_k.
std::vector<std::uint64_t> first_primes(std::size_t k);

enum class Primality { composite, prime, probable_prime };

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

/// Strong-probable-prime battery. Bases 2..37 decide primality exactly below
/// 3.317e24; above that extra bases are used and the result is flagged
/// probable.
Primality classify_prime(const mpz_class& n);

/// Bound below which classify_prime is exact.
const mpz_class& deterministic_mr_bound();

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m);

}  // namespace sigrace
