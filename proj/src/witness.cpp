#include "sigrace/witness.hpp"

#include <numeric>

#include "sigrace/errors.hpp"
#include "sigrace/factor.hpp"
#include "sigrace/sigma.hpp"

namespace sigrace {

namespace {

mpz_class mpz_u(std::uint64_t v) { return mpz_class(static_cast<unsigned long>(v)); }

mpq_class upper_q(const ScalarValue& v) { return v.is_exact() ? v.exact() : v.ball().hi().to_q(); }
mpq_class lower_q(const ScalarValue& v) { return v.is_exact() ? v.exact() : v.ball().lo().to_q(); }

void require(bool ok, const std::string& what) {
  if (!ok) throw VerificationError("witness check failed: " + what);
}

long ceil_exponent(const Exponent& s) {
  mpz_class k = ceil_q(s.value());
  if (!k.fits_slong_p()) throw DomainError("exponent too large");
  return k.get_si();
}

}  // namespace

const char* primality_name(Primality p) {
  switch (p) {
    case Primality::prime: return "proven";
    case Primality::probable_prime: return "probable";
    case Primality::composite: return "composite";
  }
  return "?";
}

Primality parse_primality(std::string_view text) {
  if (text == "proven") return Primality::prime;
  if (text == "probable") return Primality::probable_prime;
  if (text == "composite") return Primality::composite;
  throw DomainError("unknown primality flag '" + std::string(text) + "'");
}

const char* verdict_name(Verdict v) { return v == Verdict::certified_less ? "CertifiedLess" : "Inconclusive"; }

Verdict parse_verdict(std::string_view text) {
  if (text == "CertifiedLess") return Verdict::certified_less;
  if (text == "Inconclusive") return Verdict::inconclusive;
  throw DomainError("unknown verdict '" + std::string(text) + "'");
}

Modulus build_modulus(std::size_t k, const mpz_class& c) {
  if (k == 0) throw DomainError("build_modulus requires k >= 1");
  Modulus out;
  for (std::uint64_t p : first_primes(k)) {
    if (mpz_divisible_ui_p(c.get_mpz_t(), static_cast<unsigned long>(p))) continue;
    out.m *= static_cast<unsigned long>(p);
    out.primes.push_back(p);
  }
  return out;
}

mpz_class solve_linear_congruence(const mpz_class& c, const mpz_class& d, const mpz_class& m) {
  if (m < 1) throw DomainError("modulus must be positive");
  if (m == 1) return 0;
  mpz_class inv;
  if (!mpz_invert(inv.get_mpz_t(), c.get_mpz_t(), m.get_mpz_t()))
    throw DomainError("no solution: gcd(" + c.get_str() + ", " + m.get_str() + ") != 1");
  mpz_class n0 = (-d * inv) % m;
  if (n0 < 0) n0 += m;
  return n0;
}

ApPrime find_prime_in_ap(const mpz_class& A, const mpz_class& B, const mpz_class& lower, std::uint64_t budget) {
  if (B < 1) throw DomainError("find_prime_in_ap requires B >= 1");
  if (A < 0) throw DomainError("find_prime_in_ap requires A >= 0");
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), A.get_mpz_t(), B.get_mpz_t());
  if (g != 1) throw DomainError("find_prime_in_ap requires gcd(A, B) = 1, got " + g.get_str());
  // Smallest t >= 1 with A + B t > lower.
  mpz_class t = 1;
  if (A + B <= lower) t = floor_q(mpq_class(lower - A, B)) + 1;
  for (std::uint64_t tried = 0; tried < budget; ++tried, ++t) {
    mpz_class q = A + B * t;
    Primality st = classify_prime(q);
    if (st != Primality::composite) return {t, q, st};
  }
  throw ResourceError("no prime A + B t found within " + std::to_string(budget) + " candidates");
}

NewmanWitness construct_newman_witness(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d,
                                       std::size_t k, std::uint64_t budget) {
  if (a == 0 || c == 0) throw DomainError("condition (A) requires a, c >= 1");
  NewmanWitness w;
  w.a = a, w.b = b, w.c = c, w.d = d, w.k = k;
  w.det_abs = abs(mpz_u(a) * mpz_u(d) - mpz_u(b) * mpz_u(c));
  if (w.det_abs == 0) throw DomainError("condition (A) requires ad != bc");
  w.modulus = build_modulus(k, mpz_u(c));
  const mpz_class& m = w.modulus.m;
  w.n0 = solve_linear_congruence(mpz_u(c), mpz_u(d), m);
  mpz_class base = mpz_u(a) * w.n0 + mpz_u(b);
  mpz_class am = mpz_u(a) * m;
  mpz_gcd(w.delta.get_mpz_t(), base.get_mpz_t(), am.get_mpz_t());
  if (w.delta < 1) throw DomainError("degenerate delta");
  w.A = base / w.delta;
  w.B = am / w.delta;
  ApPrime hit = find_prime_in_ap(w.A, w.B, w.det_abs, budget);
  w.t = hit.t;
  w.q = hit.q;
  w.q_status = hit.status;
  w.n = w.n0 + m * w.t;
  w.y = (mpz_u(c) * w.n + mpz_u(d)) / m;
  w.D = 2 * divisor_count(factorize(w.det_abs));
  check_newman_witness(w);
  return w;
}

void check_newman_witness(const NewmanWitness& w) {
  const mpz_class a = mpz_u(w.a), b = mpz_u(w.b), c = mpz_u(w.c), d = mpz_u(w.d);
  Modulus fresh = build_modulus(w.k, c);
  require(fresh.m == w.modulus.m, "m_k is the product of primes <= p_k not dividing c");
  require(fresh.primes == w.modulus.primes, "prime list of m_k");
  const mpz_class& m = w.modulus.m;
  require(w.n0 >= 0 && w.n0 < m, "0 <= n0 < m_k");
  require((c * w.n0 + d) % m == 0, "c n0 = -d (mod m_k)");
  require(w.t >= 1, "t >= 1");
  require(w.n == w.n0 + m * w.t, "n = n0 + m_k t");
  require(w.n >= 1 && w.y >= 1, "n, y positive");
  require(c * w.n - m * w.y == -d, "c n - m_k y = -d");
  mpz_class base = a * w.n0 + b, am = a * m, g;
  mpz_gcd(g.get_mpz_t(), base.get_mpz_t(), am.get_mpz_t());
  require(w.delta == g && w.delta >= 1, "delta = gcd(a n0 + b, a m_k)");
  require(w.A * w.delta == base && w.B * w.delta == am, "A = (a n0 + b)/delta, B = a m_k/delta");
  mpz_gcd(g.get_mpz_t(), w.A.get_mpz_t(), w.B.get_mpz_t());
  require(g == 1, "gcd(A, B) = 1");
  require(w.q == w.A + w.B * w.t, "q = A + B t");
  require(a * w.n + b == w.delta * w.q, "a n + b = delta q");
  require(w.det_abs == abs(a * d - b * c), "|ad - bc|");
  require(w.q > w.det_abs && w.det_abs >= w.delta, "q > |bc - ad| >= delta");
  require(w.det_abs % w.delta == 0, "delta divides |ad - bc|");
  Primality st = classify_prime(w.q);
  require(st != Primality::composite, "q is prime");
  require(st == w.q_status, "primality flag of q");
  require(w.D == 2 * divisor_count(factorize(w.det_abs)), "D = 2 tau(|ad - bc|)");
}

Certificate certify_ratio(const NewmanWitness& w, const Exponent& s, unsigned prec) {
  if (s.sign() < 0 || s.value() > 1) throw DomainError("certify_ratio requires 0 <= s <= 1");
  Certificate cert;
  cert.s = s;
  cert.prec = prec;
  const Exponent neg = s.negated();
  ScalarValue ul = sigma_s(factorize(w.delta), neg, prec) * (ScalarValue(1) + pow_scalar(mpq_class(w.q), neg, prec));
  cert.upper_left = upper_q(ul);
  ScalarValue lr = mpq_class(1);
  for (std::uint64_t p : w.modulus.primes) lr = lr * (ScalarValue(1) + pow_scalar(mpq_class(mpz_u(p)), neg, prec));
  cert.lower_right = lower_q(lr);
  mpq_class ratio(mpz_u(w.a) * w.n + mpz_u(w.b), mpz_u(w.c) * w.n + mpz_u(w.d));
  ratio.canonicalize();
  ScalarValue bound = ScalarValue(cert.upper_left) * pow_scalar(ratio, s, prec) / ScalarValue(cert.lower_right);
  cert.ratio_bound = upper_q(bound);
  cert.verdict = cert.ratio_bound < 1 ? Verdict::certified_less : Verdict::inconclusive;
  return cert;
}

OmegaCertificate certify_omega(const NewmanWitness& w) {
  SmallFunctions det = small_functions(factorize(w.det_abs));
  unsigned primes = static_cast<unsigned>(w.modulus.primes.size());
  OmegaCertificate out;
  out.omega = {1 + det.omega, primes, 1 + det.omega < primes};
  // m_k is squarefree, so Omega(m_k) = omega(m_k).
  out.big_omega = {1 + det.big_omega, primes, 1 + det.big_omega < primes};
  return out;
}

std::vector<PrimeTripleWitness> prime_triple_witness(const Exponent& s, std::size_t count, std::uint64_t budget,
                                                     const PrecisionPolicy& policy) {
  if (s.sign() <= 0) throw DomainError("prime_triple_witness requires s > 0");
  long n = ceil_exponent(s);
  if (n > 4096) throw DomainError("exponent too large for the prime-triple bound");
  mpz_class bound;
  mpz_ui_pow_ui(bound.get_mpz_t(), 2, static_cast<unsigned long>(n + 1));
  bound = 1 + bound * n;
  std::vector<PrimeTripleWitness> out;
  mpz_class p = bound;
  for (std::uint64_t tried = 0; out.size() < count; ++tried) {
    if (tried >= budget) throw ResourceError("prime search budget exhausted after " + std::to_string(budget) + " candidates");
    ++p;
    Primality st = classify_prime(p);
    if (st == Primality::composite) continue;
    PrimeTripleWitness w{s, n, bound, p, st, compare_sigma(p - 1, p, s, policy), compare_sigma(p, p + 1, s, policy)};
    if (w.before.kind != Comparison::Kind::greater || w.after.kind != Comparison::Kind::less)
      throw VerificationError("prime triple at p = " + p.get_str() + " does not dip: " + w.before.to_string() + ", " +
                              w.after.to_string());
    out.push_back(std::move(w));
  }
  return out;
}

CrtWitness crt_witness(std::uint64_t a, std::uint64_t b, std::uint64_t d, const Exponent& s, std::uint64_t q,
                       std::uint64_t budget, const PrecisionPolicy& policy) {
  if (a == 0) throw DomainError("crt_witness requires a >= 1");
  if (b == d) throw DomainError("crt_witness requires b != d");
  if (s.sign() <= 0) throw DomainError("crt_witness requires s > 0");
  if (std::gcd(a, b) != 1 || std::gcd(a, d) != 1) throw DomainError("crt_witness requires gcd(a,b) = gcd(a,d) = 1");
  CrtWitness w;
  w.swapped = b > d;
  w.a = a;
  w.b = std::min(b, d);
  w.d = std::max(b, d);
  w.s = s;
  w.ell = w.d - w.b;
  w.k = ceil_exponent(s);
  mpz_class al = mpz_u(a) * mpz_u(w.ell);
  if (q == 0) {
    for (q = 2; !is_prime_u64(q) || mpz_divisible_ui_p(al.get_mpz_t(), q); ++q) {
    }
  } else if (!is_prime_u64(q) || mpz_divisible_ui_p(al.get_mpz_t(), q)) {
    throw DomainError("q must be a prime not dividing a(d-b)");
  }
  w.q = q;
  mpz_class qk;
  mpz_pow_ui(qk.get_mpz_t(), mpz_u(q).get_mpz_t(), static_cast<unsigned long>(w.k + 1));
  w.threshold = mpz_u(w.ell) + mpz_u(w.ell) * w.k * qk;
  if (w.threshold < mpz_u(w.d)) w.threshold = mpz_u(w.d);

  // p = ell (mod q), p = d (mod a): p = ell + q u with u = (d - ell) q^{-1} (mod a).
  mpz_class A = mpz_u(a), Q = mpz_u(q), u = 0;
  if (a > 1) {
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), Q.get_mpz_t(), A.get_mpz_t());
    u = ((mpz_u(w.d) - mpz_u(w.ell)) * inv) % A;
    if (u < 0) u += A;
  }
  mpz_class step = Q * A;
  mpz_class r = (mpz_u(w.ell) + Q * u) % step;
  // First member of r + step*j above the threshold.
  mpz_class p = r + step * (floor_q(mpq_class(w.threshold - r, step)) + 1);
  if (p <= w.threshold) p += step;
  for (std::uint64_t tried = 0;; ++tried, p += step) {
    if (tried >= budget) throw ResourceError("CRT prime search budget exhausted");
    Primality st = classify_prime(p);
    if (st == Primality::composite) continue;
    w.p = p;
    w.p_status = st;
    break;
  }
  w.n = (w.p - mpz_u(w.d)) / A;
  w.at_n = compare_sigma(A * w.n + mpz_u(w.b), A * w.n + mpz_u(w.d), s, policy);
  if (w.at_n.kind != Comparison::Kind::greater)
    throw VerificationError("CRT witness n = " + w.n.get_str() + " does not give sigma_s(an+b) > sigma_s(an+d)");

  mpz_class m = 1;
  for (std::uint64_t tried = 0;; ++tried, ++m) {
    if (tried >= budget) throw ResourceError("prime search for a m + b exhausted its budget");
    Primality st = classify_prime(A * m + mpz_u(w.b));
    if (st == Primality::composite) continue;
    w.m = m;
    w.m_status = st;
    break;
  }
  w.at_m = compare_sigma(A * w.m + mpz_u(w.b), A * w.m + mpz_u(w.d), s, policy);
  if (w.at_m.kind != Comparison::Kind::less)
    throw VerificationError("CRT witness m = " + w.m.get_str() + " does not give sigma_s(am+b) < sigma_s(am+d)");
  return w;
}

MartinNumber martin_number() {
  auto ps = first_primes(388);
  auto p = [&](std::size_t j) { return mpz_u(ps[j - 1]); };
  MartinNumber out;
  out.z = 1;
  for (std::size_t j = 4; j <= 383; ++j) out.z *= p(j);
  out.z *= p(385) * p(388);
  out.z_mod_30 = mpz_fdiv_ui(out.z.get_mpz_t(), 30);
  if (out.z_mod_30 != 1) throw VerificationError("z is not 1 mod 30");
  out.n = (out.z - 1) / 30;
  out.digit_count = out.n.get_str().size();
  return out;
}

}  // namespace sigrace
