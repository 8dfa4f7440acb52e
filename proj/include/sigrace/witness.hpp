#pragma once

// Explicit witnesses for sign changes, with certificates that avoid
// factoring the witness itself.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigrace/numerics.hpp"
#include "sigrace/primes.hpp"

namespace sigrace {

/// Default cap on candidates examined by a prime search.
inline constexpr std::uint64_t kDefaultPrimeBudget = 1'000'000;

struct Modulus {
  mpz_class m = 1;
  std::vector<std::uint64_t> primes;  // primes p <= p_k with p not dividing c
};

Modulus build_modulus(std::size_t k, const mpz_class& c);

/// 0 <= n0 < m with c*n0 = -d (mod m). Requires gcd(c, m) = 1.
mpz_class solve_linear_congruence(const mpz_class& c, const mpz_class& d, const mpz_class& m);

struct ApPrime {
  mpz_class t;
  mpz_class q;  // A + B t
  Primality status = Primality::prime;
};

/// Smallest t >= 1 with A + B t a (probable) prime above lower.
ApPrime find_prime_in_ap(const mpz_class& A, const mpz_class& B, const mpz_class& lower,
                         std::uint64_t budget = kDefaultPrimeBudget);

const char* primality_name(Primality p);
Primality parse_primality(std::string_view text);

struct NewmanWitness {
  std::uint64_t a = 0, b = 0, c = 0, d = 0;
  std::size_t k = 0;
  Modulus modulus;
  mpz_class n0, n, y;
  mpz_class delta, A, B, t, q;
  Primality q_status = Primality::prime;
  mpz_class det_abs;  // |ad - bc|
  mpz_class D;        // 2 tau(|ad - bc|)
};

/// an+b = delta*q with q a large prime, cn+d = m_k*y. Invariants are
/// re-checked before returning.
NewmanWitness construct_newman_witness(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d,
                                       std::size_t k, std::uint64_t budget = kDefaultPrimeBudget);

/// Exact replay of every witness identity; throws VerificationError naming
/// the first one that fails.
void check_newman_witness(const NewmanWitness& w);

enum class Verdict { certified_less, inconclusive };
const char* verdict_name(Verdict v);
Verdict parse_verdict(std::string_view text);

struct Certificate {
  Exponent s;
  mpq_class upper_left;   // >= sigma_s(an+b) / (an+b)^s
  mpq_class lower_right;  // <= sigma_s(cn+d) / (cn+d)^s
  mpq_class ratio_bound;  // >= sigma_s(an+b) / sigma_s(cn+d)
  Verdict verdict = Verdict::inconclusive;
  unsigned prec = 0;
};

/// Rational bounds with outward rounding; CertifiedLess iff ratio_bound < 1,
/// which proves sigma_s(an+b) < sigma_s(cn+d). Accepts 0 <= s <= 1.
Certificate certify_ratio(const NewmanWitness& w, const Exponent& s, unsigned prec = 256);

struct CountCertificate {
  unsigned upper_left = 0;   // bound on the count for a*n+b
  unsigned lower_right = 0;  // bound on the count for c*n+d
  bool certified = false;    // upper_left < lower_right
};

struct OmegaCertificate {
  CountCertificate omega;      // distinct primes
  CountCertificate big_omega;  // with multiplicity
};

OmegaCertificate certify_omega(const NewmanWitness& w);

struct PrimeTripleWitness {
  Exponent s;
  long n_exp = 0;  // ceil(s)
  mpz_class bound;  // 1 + n 2^(n+1)
  mpz_class p;
  Primality status = Primality::prime;
  Comparison before;  // sigma_s(p-1) vs sigma_s(p): greater
  Comparison after;   // sigma_s(p) vs sigma_s(p+1): less
};

std::vector<PrimeTripleWitness> prime_triple_witness(const Exponent& s, std::size_t count,
                                                     std::uint64_t budget = kDefaultPrimeBudget,
                                                     const PrecisionPolicy& policy = {});

struct CrtWitness {
  std::uint64_t a = 0, b = 0, d = 0;  // normalized so b < d
  bool swapped = false;               // inputs arrived with b > d
  Exponent s;
  std::uint64_t ell = 0;  // d - b
  long k = 0;             // ceil(s)
  std::uint64_t q = 0;
  mpz_class threshold;  // max(d, ell + ell k q^(k+1))
  mpz_class p;
  Primality p_status = Primality::prime;
  mpz_class n;  // (p - d) / a: sigma_s(an+b) > sigma_s(an+d)
  Comparison at_n;
  mpz_class m;  // am+b prime: sigma_s(am+b) < sigma_s(am+d)
  Primality m_status = Primality::prime;
  Comparison at_m;
};

/// q == 0 picks the smallest prime not dividing a*ell.
CrtWitness crt_witness(std::uint64_t a, std::uint64_t b, std::uint64_t d, const Exponent& s, std::uint64_t q = 0,
                       std::uint64_t budget = kDefaultPrimeBudget, const PrecisionPolicy& policy = {});

struct MartinNumber {
  mpz_class z;
  mpz_class n;  // (z - 1) / 30
  std::size_t digit_count = 0;
  unsigned long z_mod_30 = 0;
};

MartinNumber martin_number();

}  // namespace sigrace
