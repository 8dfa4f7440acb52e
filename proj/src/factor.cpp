#include "sigrace/factor.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "sigrace/primes.hpp"

namespace sigrace {

namespace {

const std::vector<std::uint32_t>& trial_primes() {
  static const std::vector<std::uint32_t> primes = primes_up_to(1u << 16);
  return primes;
}

// splitmix64: seeds rho deterministically.
std::uint64_t mix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Brent's variant of Pollard rho on 64-bit n (odd, composite). Returns a
// nontrivial factor or 0 when the iteration allowance runs out.
std::uint64_t rho_u64(std::uint64_t n, std::uint64_t& rng, std::uint64_t& allowance) {
  while (allowance > 0) {
    std::uint64_t c = mix(rng) % (n - 1) + 1;
    std::uint64_t y = mix(rng) % n;
    std::uint64_t m = 128, g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto f = [&](std::uint64_t v) { return (mulmod_u64(v, v, n) + c) % n; };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        std::uint64_t lim = std::min(m, r - k);
        for (std::uint64_t i = 0; i < lim; ++i) {
          y = f(y);
          q = mulmod_u64(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += lim;
        allowance = allowance > lim ? allowance - lim : 0;
      } while (k < r && g == 1 && allowance > 0);
      r *= 2;
    } while (g == 1 && allowance > 0);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return 0;
}

mpz_class rho_mpz(const mpz_class& n, std::uint64_t& rng, std::uint64_t& allowance) {
  while (allowance > 0) {
    mpz_class c = mpz_class(mix(rng)) % (n - 1) + 1;
    mpz_class y = mpz_class(mix(rng)) % n;
    mpz_class x, ys, q = 1, g = 1, t;
    std::uint64_t m = 128, r = 1;
    auto f = [&](mpz_class& v) {
      v = (v * v + c) % n;
    };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        std::uint64_t lim = std::min(m, r - k);
        for (std::uint64_t i = 0; i < lim; ++i) {
          f(y);
          t = x - y;
          q = (q * abs(t)) % n;
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += lim;
        allowance = allowance > lim ? allowance - lim : 0;
      } while (k < r && g == 1 && allowance > 0);
      r *= 2;
    } while (g == 1 && allowance > 0);
    if (g == n) {
      do {
        f(ys);
        t = x - ys;
        t = abs(t);
        mpz_gcd(g.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return 0;
}

struct Collector {
  std::map<mpz_class, PrimePower> found;
  void add(const mpz_class& p, unsigned alpha, bool proven) {
    auto [it, inserted] = found.try_emplace(p, PrimePower{p, 0, true});
    it->second.alpha += alpha;
    it->second.proven = it->second.proven && proven;
  }
  std::vector<PrimePower> list() const {
    std::vector<PrimePower> out;
    for (const auto& [p, pp] : found) out.push_back(pp);
    return out;
  }
};

// Splits a cofactor free of small primes into primes.
void split(const mpz_class& n, Collector& out, std::uint64_t& rng, std::uint64_t& allowance,
           std::vector<mpz_class>& stuck) {
  if (n == 1) return;
  Primality pr = classify_prime(n);
  if (pr != Primality::composite) {
    out.add(n, 1, pr == Primality::prime);
    return;
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    mpz_class r = sqrt(n);
    split(r, out, rng, allowance, stuck);
    split(r, out, rng, allowance, stuck);
    return;
  }
  mpz_class d;
  if (n.fits_ulong_p()) {
    d = mpz_class(static_cast<unsigned long>(rho_u64(n.get_ui(), rng, allowance)));
  } else {
    d = rho_mpz(n, rng, allowance);
  }
  if (d == 0) {
    stuck.push_back(n);
    return;
  }
  split(d, out, rng, allowance, stuck);
  split(mpz_class(n / d), out, rng, allowance, stuck);
}

}  // namespace

Factorization Factorization::from_factors(mpz_class n, std::vector<PrimePower> factors) {
  std::sort(factors.begin(), factors.end(), [](const PrimePower& x, const PrimePower& y) { return x.p < y.p; });
  std::vector<PrimePower> merged;
  for (auto& f : factors) {
    if (f.alpha == 0) continue;
    if (!merged.empty() && merged.back().p == f.p) {
      merged.back().alpha += f.alpha;
      merged.back().proven = merged.back().proven && f.proven;
    } else {
      merged.push_back(std::move(f));
    }
  }
  mpz_class prod = 1;
  for (const auto& f : merged) {
    mpz_class pk;
    mpz_pow_ui(pk.get_mpz_t(), f.p.get_mpz_t(), f.alpha);
    prod *= pk;
  }
  if (prod != n) throw DomainError("factorization product mismatch for " + n.get_str());
  Factorization out;
  out.n_ = std::move(n);
  out.factors_ = std::move(merged);
  return out;
}

Factorization Factorization::of_u64(std::uint64_t n, const std::vector<std::pair<std::uint64_t, unsigned>>& factors) {
  std::vector<PrimePower> pp;
  pp.reserve(factors.size());
  for (auto [p, a] : factors) pp.push_back({mpz_class(static_cast<unsigned long>(p)), a, true});
  return from_factors(mpz_class(static_cast<unsigned long>(n)), std::move(pp));
}

bool Factorization::all_proven() const noexcept {
  return std::all_of(factors_.begin(), factors_.end(), [](const PrimePower& f) { return f.proven; });
}

std::string Factorization::to_string() const {
  if (factors_.empty()) return "1";
  std::string s;
  for (const auto& f : factors_) {
    if (!s.empty()) s += " * ";
    s += f.p.get_str();
    if (f.alpha > 1) s += "^" + std::to_string(f.alpha);
    if (!f.proven) s += "(probable)";
  }
  return s;
}

SpfTable SpfTable::build(std::uint64_t limit, std::uint64_t budget) {
  if (limit < 2) throw DomainError("SpfTable limit must be at least 2");
  if (limit > budget) throw ResourceError("SpfTable limit " + std::to_string(limit) + " over budget " + std::to_string(budget));
  SpfTable t;
  t.limit_ = limit;
  t.spf_.assign(limit + 1, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (t.spf_[i] != 0) continue;
    t.spf_[i] = static_cast<std::uint32_t>(i);
    if (i * i > limit) continue;
    for (std::uint64_t j = i * i; j <= limit; j += i) {
      if (t.spf_[j] == 0) t.spf_[j] = static_cast<std::uint32_t>(i);
    }
  }
  return t;
}

Factorization SpfTable::factor(std::uint64_t m) const {
  if (m == 0 || m > limit_) throw DomainError("SpfTable::factor out of range");
  std::vector<std::pair<std::uint64_t, unsigned>> fs;
  std::uint64_t x = m;
  while (x > 1) {
    std::uint32_t p = spf_[x];
    unsigned a = 0;
    while (x % p == 0) {
      x /= p;
      ++a;
    }
    fs.emplace_back(p, a);
  }
  return Factorization::of_u64(m, fs);
}

Factorization factorize_u64(std::uint64_t n) { return factorize(mpz_class(static_cast<unsigned long>(n))); }

Factorization factorize(const mpz_class& n, const SpfTable* table, const FactorBudget& budget) {
  if (n < 1) throw DomainError("factorize requires n >= 1, got " + n.get_str());
  if (table && n.fits_ulong_p() && n.get_ui() <= table->limit()) {
    if (n == 1) return Factorization();
    return table->factor(n.get_ui());
  }
  Collector out;
  mpz_class rest = n;
  for (std::uint32_t p : trial_primes()) {
    if (p > budget.trial_bound) break;
    if (mpz_class(p) * p > rest) break;
    if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
    unsigned a = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++a;
    }
    out.add(mpz_class(p), a, true);
  }
  std::uint64_t rng = budget.seed;
  std::uint64_t allowance = budget.rho_iterations;
  std::vector<mpz_class> stuck;
  split(rest, out, rng, allowance, stuck);
  if (!stuck.empty()) {
    mpz_class cof = 1;
    for (const auto& s : stuck) cof *= s;
    throw PartialFactorizationError(out.list(), cof);
  }
  return Factorization::from_factors(n, out.list());
}

mpz_class divisor_count(const Factorization& f) {
  mpz_class t = 1;
  for (const auto& pp : f.factors()) t *= pp.alpha + 1;
  return t;
}

std::vector<mpz_class> divisors(const Factorization& f, std::uint64_t cap) {
  if (divisor_count(f) > cap) throw ResourceError("divisor count of " + f.n().get_str() + " exceeds cap " + std::to_string(cap));
  std::vector<mpz_class> ds{1};
  for (const auto& pp : f.factors()) {
    std::size_t base = ds.size();
    mpz_class pk = 1;
    for (unsigned k = 1; k <= pp.alpha; ++k) {
      pk *= pp.p;
      for (std::size_t i = 0; i < base; ++i) ds.push_back(ds[i] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

}  // namespace sigrace
