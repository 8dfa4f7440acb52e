#include "sigrace/primes.hpp"

#include <array>
#include <cmath>

#include "sigrace/errors.hpp"

namespace sigrace {

namespace {

constexpr std::array<unsigned, 12> kBases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
constexpr std::array<unsigned, 8> kExtraBases = {41, 43, 47, 53, 59, 61, 67, 71};

bool strong_probable_prime_u64(std::uint64_t n, std::uint64_t base) {
  std::uint64_t d = n - 1;
  unsigned r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  std::uint64_t x = powmod_u64(base % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < r; ++i) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

bool strong_probable_prime(const mpz_class& n, unsigned base) {
  mpz_class d = n - 1;
  mp_bitcnt_t r = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), r);
  mpz_class x, b = base, nm1 = n - 1;
  mpz_powm(x.get_mpz_t(), b.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == nm1) return true;
  for (mp_bitcnt_t i = 1; i < r; ++i) {
    x = x * x % n;
    if (x == nm1) return true;
  }
  return false;
}

}  // namespace

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) result = mulmod_u64(result, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return result;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  if (limit > (1ull << 32)) throw ResourceError("primes_up_to: limit above 2^32");
  // Odd-only sieve.
  std::vector<bool> composite((limit - 1) / 2 + 1, false);
  primes.push_back(2);
  for (std::uint64_t i = 3; i <= limit; i += 2) {
    if (composite[i / 2]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += 2 * i) composite[j / 2] = true;
  }
  return primes;
}

std::vector<std::uint64_t> first_primes(std::size_t k) {
  if (k == 0) return {};
  // p_k < k (ln k + ln ln k) for k >= 6.
  double kd = static_cast<double>(k);
  std::uint64_t bound = k < 6 ? 15 : static_cast<std::uint64_t>(kd * (std::log(kd) + std::log(std::log(kd)))) + 1;
  auto ps = primes_up_to(bound);
  if (ps.size() < k) throw ResourceError("first_primes: sieve bound too small");
  return std::vector<std::uint64_t>(ps.begin(), ps.begin() + static_cast<std::ptrdiff_t>(k));
}

std::uint64_t nth_prime(std::size_t k) {
  if (k == 0) throw DomainError("nth_prime is 1-indexed");
  return first_primes(k).back();
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (unsigned p : kBases) {
    if (n % p == 0) return n == p;
  }
  for (unsigned p : kBases) {
    if (!strong_probable_prime_u64(n, p)) return false;
  }
  return true;
}

const mpz_class& deterministic_mr_bound() {
  static const mpz_class bound("3317044064679887385961981", 10);
  return bound;
}

Primality classify_prime(const mpz_class& n) {
  if (n < 2) return Primality::composite;
  if (n.fits_ulong_p()) return is_prime_u64(n.get_ui()) ? Primality::prime : Primality::composite;
  for (unsigned p : kBases) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return Primality::composite;
  }
  for (unsigned p : kBases) {
    if (!strong_probable_prime(n, p)) return Primality::composite;
  }
  if (n < deterministic_mr_bound()) return Primality::prime;
  for (unsigned p : kExtraBases) {
    if (!strong_probable_prime(n, p)) return Primality::composite;
  }
  return Primality::probable_prime;
}

}  // namespace sigrace
