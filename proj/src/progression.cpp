#include "sigrace/progression.hpp"

#include <cmath>

#include "sigrace/sigma.hpp"

namespace sigrace {

std::uint64_t max_sieve_n(const ProgressionSpec& p) {
  if (p.a == 0) throw DomainError("progression requires a >= 1");
  if (p.b > kMaxSieveValue) return 0;
  return (kMaxSieveValue - p.b) / p.a;
}

void check_sieve_range(const ProgressionSpec& p, std::uint64_t n_lo, std::uint64_t n_hi) {
  if (p.a == 0) throw DomainError("progression requires a >= 1");
  if (n_lo == 0) throw DomainError("n = 0 is outside the domain (sigma_s(0) is undefined)");
  if (n_hi < n_lo) throw DomainError("empty range: n_hi < n_lo");
  std::uint64_t cap = max_sieve_n(p);
  if (n_hi > cap) {
    throw ResourceError("value " + std::to_string(p.a) + "*" + std::to_string(n_hi) + "+" + std::to_string(p.b) +
                        " exceeds the sieve limit 2^52; split the range at n_hi <= " + std::to_string(cap));
  }
}

SievePrimes::SievePrimes(std::uint64_t max_value) : max_value_(max_value) {
  if (max_value > kMaxSieveValue) throw ResourceError("sieve value limit is 2^52");
  auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(max_value))) + 1;
  while (root * root > max_value && root > 1) --root;
  primes_ = primes_up_to(root + 1);
}

ScanSummary scan_progression(const ProgressionSpec& p, std::uint64_t n_lo, std::uint64_t n_hi, const Exponent& s,
                             unsigned prec, const std::function<void(std::uint64_t, const ScalarValue&)>& sink,
                             const ScanOptions& options) {
  check_sieve_range(p, n_lo, n_hi);
  if (options.segment == 0) throw DomainError("segment size must be positive");
  SievePrimes sp(p.value(n_hi));
  ScanSummary summary;
  std::vector<std::uint64_t> rem;
  std::vector<std::vector<PrimePower>> found;
  for (std::uint64_t lo = n_lo; lo <= n_hi;) {
    std::uint64_t count = std::min<std::uint64_t>(options.segment, n_hi - lo + 1);
    found.assign(count, {});
    sp.sieve(p, lo, count, rem, [&](std::size_t i, std::size_t pi, unsigned alpha) {
      found[i].push_back({mpz_class(static_cast<unsigned long>(sp.primes()[pi])), alpha, true});
    });
    for (std::size_t i = 0; i < count; ++i) {
      if (rem[i] > 1) found[i].push_back({mpz_class(static_cast<unsigned long>(rem[i])), 1, true});
      std::uint64_t n = lo + i;
      Factorization f = Factorization::from_factors(mpz_class(static_cast<unsigned long>(p.value(n))), std::move(found[i]));
      ScalarValue v = sigma_s(f, s, prec);
      summary.total = summary.total + v;
      sink(n, v);
    }
    summary.terms += count;
    ++summary.segments;
    lo += count;
  }
  return summary;
}

}  // namespace sigrace
