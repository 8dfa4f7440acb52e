#include "sigrace/sigma.hpp"

namespace sigrace {

namespace {

// sigma_r(n) for integer r >= 0.
mpz_class sigma_nonneg_int(const Factorization& f, unsigned long r) {
  mpz_class total = 1;
  for (const auto& pp : f.factors()) {
    if (r == 0) {
      total *= pp.alpha + 1;
      continue;
    }
    mpz_class pr, term = 1, sum = 1;
    mpz_pow_ui(pr.get_mpz_t(), pp.p.get_mpz_t(), r);
    for (unsigned j = 1; j <= pp.alpha; ++j) {
      term *= pr;
      sum += term;
    }
    total *= sum;
  }
  return total;
}

}  // namespace

ScalarValue sigma_s(const Factorization& f, const Exponent& s, unsigned prec) {
  if (s.is_integer()) {
    long si = s.as_long();
    if (si >= 0) return sigma_nonneg_int(f, static_cast<unsigned long>(si));
    unsigned long r = static_cast<unsigned long>(-si);
    mpz_class nr;
    mpz_pow_ui(nr.get_mpz_t(), f.n().get_mpz_t(), r);
    mpq_class q(sigma_nonneg_int(f, r), nr);
    q.canonicalize();
    return q;
  }
  ScalarValue total = mpq_class(1);
  for (const auto& pp : f.factors()) {
    ScalarValue sum = mpq_class(1);
    mpz_class pj = 1;
    for (unsigned j = 1; j <= pp.alpha; ++j) {
      pj *= pp.p;
      sum = sum + pow_scalar(mpq_class(pj), s, prec);
    }
    total = total * sum;
  }
  return total;
}

std::pair<ScalarValue, ScalarValue> sigma_reflect_check(const Factorization& f, const Exponent& r, unsigned prec) {
  if (r.sign() <= 0) throw DomainError("sigma_reflect_check requires r > 0");
  ScalarValue left = sigma_s(f, r.negated(), prec);
  ScalarValue right = sigma_s(f, r, prec) / pow_scalar(mpq_class(f.n()), r, prec);
  return {std::move(left), std::move(right)};
}

SmallFunctions small_functions(const Factorization& f) {
  SmallFunctions out{1, 1, 1, 0, 0};
  for (const auto& pp : f.factors()) {
    mpz_class pk;
    mpz_pow_ui(pk.get_mpz_t(), pp.p.get_mpz_t(), pp.alpha);
    out.tau *= pp.alpha + 1;
    out.sigma *= (pk * pp.p - 1) / (pp.p - 1);
    out.phi *= pk / pp.p * (pp.p - 1);
    out.omega += 1;
    out.big_omega += pp.alpha;
  }
  return out;
}

ScalarValue sigma_restricted(const Factorization& f, const mpz_class& modulus, const mpz_class& residue,
                             const Exponent& s, unsigned prec, std::uint64_t divisor_cap) {
  if (modulus < 2) throw DomainError("sigma_restricted requires modulus >= 2");
  if (residue < 0 || residue >= modulus) throw DomainError("sigma_restricted requires 0 <= residue < modulus");
  ScalarValue total = mpq_class(0);
  for (const mpz_class& d : divisors(f, divisor_cap)) {
    if (d % modulus != residue) continue;
    total = total + pow_scalar(mpq_class(d), s, prec);
  }
  return total;
}

Comparison compare_sigma(const mpz_class& x, const mpz_class& y, const Exponent& s, const PrecisionPolicy& policy) {
  Factorization fx = factorize(x), fy = factorize(y);
  if (s.is_integer()) return compare(sigma_s(fx, s), sigma_s(fy, s));
  return compare_escalating([&](unsigned prec) { return std::make_pair(sigma_s(fx, s, prec), sigma_s(fy, s, prec)); },
                            policy);
}

}  // namespace sigrace
