#include "doctest.h"
#include "oracles.hpp"
#include "sigrace/factor.hpp"
#include "sigrace/primes.hpp"

using namespace sigrace;

TEST_CASE("prime tables") {
  auto ref = oracle::sieve(1000000);
  auto got = primes_up_to(1000000);
  REQUIRE(got.size() == ref.size());
  CHECK(got.size() == 78498);
  for (std::size_t i = 0; i < ref.size(); i += 997) CHECK(got[i] == ref[i]);
  CHECK(nth_prime(1) == 2);
  CHECK(nth_prime(4) == 7);
  CHECK(nth_prime(383) == ref[382]);
  CHECK(nth_prime(388) == ref[387]);
  CHECK(first_primes(5) == std::vector<std::uint64_t>{2, 3, 5, 7, 11});
}

TEST_CASE("primality") {
  auto g = oracle::rng(3);
  for (int i = 0; i < 20000; ++i) {
    std::uint64_t n = oracle::uniform(g, 0, 20000000);
    CHECK(is_prime_u64(n) == oracle::is_prime(n));
  }
  // Strong pseudoprimes to several small bases.
  for (std::uint64_t n : {2047ull, 1373653ull, 25326001ull, 3215031751ull, 2152302898747ull, 3474749660383ull,
                          341550071728321ull, 3825123056546413051ull})
    CHECK_FALSE(is_prime_u64(n));
  CHECK(is_prime_u64((1ull << 61) - 1));
  CHECK(is_prime_u64(18446744073709551557ull));  // largest 64-bit prime
  CHECK(classify_prime(mpz_class(97)) == Primality::prime);
  CHECK(classify_prime(mpz_class(1)) == Primality::composite);
  mpz_class m89 = (mpz_class(1) << 89) - 1;
  CHECK(classify_prime(m89) == Primality::probable_prime);
  CHECK(classify_prime(m89 * 3) == Primality::composite);
  // Below the deterministic bound every answer is exact.
  mpz_class big = (mpz_class(1) << 67) - 1;  // 193707721 * 761838257287
  CHECK(classify_prime(big) == Primality::composite);
  CHECK(classify_prime(mpz_class("761838257287")) == Primality::prime);
}

TEST_CASE("modular helpers") {
  CHECK(mulmod_u64(~0ull, ~0ull, 1000000007ull) == mpz_class(mpz_class("340282366920938463426481119284349108225") % 1000000007).get_ui());
  CHECK(powmod_u64(3, 1000000006ull, 1000000007ull) == 1);
}

TEST_CASE("smallest prime factor table") {
  SpfTable t10 = SpfTable::build(10);
  CHECK(t10.spf(9) == 3);
  CHECK(t10.spf(7) == 7);
  CHECK(t10.spf(8) == 2);
  CHECK(SpfTable::build(100).spf(91) == 7);
  CHECK(SpfTable::build(30).spf(30) == 2);
  SpfTable t = SpfTable::build(100000);
  auto g = oracle::rng(4);
  for (int i = 0; i < 500; ++i) {
    std::uint64_t n = oracle::uniform(g, 2, 100000);
    CHECK(t.spf(n) == oracle::trial_factor(n).front().first);
  }
  CHECK_THROWS_AS(SpfTable::build(1ull << 40, 1ull << 20), ResourceError);
}

TEST_CASE("factorization") {
  Factorization f = factorize(360);
  REQUIRE(f.factors().size() == 3);
  CHECK(f.factors()[0].p == 2);
  CHECK(f.factors()[0].alpha == 3);
  CHECK(f.factors()[1].p == 3);
  CHECK(f.factors()[1].alpha == 2);
  CHECK(f.factors()[2].p == 5);
  CHECK(f.to_string() == "2^3 * 3^2 * 5");
  CHECK(factorize(1).is_unit());
  CHECK_THROWS_AS(factorize(0), DomainError);

  std::uint64_t m = 2338703ull * 30 + 1;
  CHECK(m == 70161091);
  auto ref = oracle::trial_factor(m);
  Factorization fm = factorize(m);
  REQUIRE(fm.factors().size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CHECK(fm.factors()[i].p == ref[i].first);
    CHECK(fm.factors()[i].alpha == ref[i].second);
  }

  auto g = oracle::rng(5);
  for (int i = 0; i < 300; ++i) {
    std::uint64_t n = oracle::uniform(g, 1, 1ull << 40);
    auto r = oracle::trial_factor(n);
    Factorization fu = factorize_u64(n);
    REQUIRE(fu.factors().size() == r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
      CHECK(fu.factors()[j].p == r[j].first);
      CHECK(fu.factors()[j].alpha == r[j].second);
    }
  }

  // Beyond 64 bits: a product of two 40-bit primes and a square.
  mpz_class p1("1099511627791"), p2("1099511628401");
  Factorization big = factorize(p1 * p2 * p2 * 6);
  CHECK(big.n() == p1 * p2 * p2 * 6);
  REQUIRE(big.factors().size() == 4);
  CHECK(big.factors()[3].p == p2);
  CHECK(big.factors()[3].alpha == 2);
  CHECK(big.all_proven());

  FactorBudget tight;
  tight.rho_iterations = 10;
  CHECK_THROWS_AS(factorize(p1 * p2, nullptr, tight), PartialFactorizationError);
}

TEST_CASE("divisors") {
  Factorization f = factorize(360);
  CHECK(divisor_count(f) == 24);
  auto ds = divisors(f);
  auto ref = oracle::divisors(360);
  REQUIRE(ds.size() == ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) CHECK(ds[i] == ref[i]);
  CHECK_THROWS_AS(divisors(f, 10), ResourceError);
}
