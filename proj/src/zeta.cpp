#include <cmath>
#include <cstdio>

#include "sigrace/errors.hpp"
#include "sigrace/numerics.hpp"

namespace sigrace {

namespace {

// log2 of a positive rational, roughly.
double approx_log2(const mpq_class& q) {
  long e_num = 0, e_den = 0;
  double m_num = mpz_get_d_2exp(&e_num, q.get_num_mpz_t());
  double m_den = mpz_get_d_2exp(&e_den, q.get_den_mpz_t());
  return std::log2(m_num / m_den) + static_cast<double>(e_num - e_den);
}

struct Bracket {
  Real lo;
  Real hi;
};

// Sum_{n<=N} n^-s with lower terms evaluated at s_hi and upper terms at s_lo
// (n^-s decreases in s for n >= 1).
Bracket partial_sum(std::uint64_t terms, const Exponent& s, const Real& s_lo, const Real& s_hi, mpfr_prec_t prec) {
  Real lo(prec), hi(prec), t(prec), neg_lo(prec), neg_hi(prec);
  mpfr_neg(neg_lo.get(), s_hi.get(), MPFR_RNDN);  // exact
  mpfr_neg(neg_hi.get(), s_lo.get(), MPFR_RNDN);
  bool integer = s.is_integer() && s.value().get_num().fits_ulong_p();
  unsigned long si = integer ? s.value().get_num().get_ui() : 0;
  // Summing from the smallest terms keeps rounding error small.
  for (std::uint64_t n = terms; n >= 1; --n) {
    unsigned long nn = static_cast<unsigned long>(n);
    if (integer) {
      mpfr_ui_pow_ui(t.get(), nn, si, MPFR_RNDU);
      mpfr_ui_div(t.get(), 1, t.get(), MPFR_RNDD);
      mpfr_add(lo.get(), lo.get(), t.get(), MPFR_RNDD);
      mpfr_ui_pow_ui(t.get(), nn, si, MPFR_RNDD);
      mpfr_ui_div(t.get(), 1, t.get(), MPFR_RNDU);
      mpfr_add(hi.get(), hi.get(), t.get(), MPFR_RNDU);
    } else {
      mpfr_ui_pow(t.get(), nn, neg_lo.get(), MPFR_RNDD);
      mpfr_add(lo.get(), lo.get(), t.get(), MPFR_RNDD);
      mpfr_ui_pow(t.get(), nn, neg_hi.get(), MPFR_RNDU);
      mpfr_add(hi.get(), hi.get(), t.get(), MPFR_RNDU);
    }
  }
  return {std::move(lo), std::move(hi)};
}

// Bounds on sum_{n>N} n^-s. n^-s is convex, so the trapezoid rule gives
//   sum >= N^(1-s)/(s-1) - N^-s/2
// and the midpoint rule gives
//   sum <= (N+1/2)^(1-s)/(s-1).
// The gap is about s N^(-s-1)/4. The tail decreases in s, so the lower
// bound takes s_hi and the upper bound takes s_lo.
Real tail_lower(std::uint64_t n, const Real& s_hi, mpfr_prec_t prec) {
  Real e(prec), x(prec), num(prec), den(prec), r(prec), corr(prec), ms(prec);
  mpfr_set_ui(x.get(), static_cast<unsigned long>(n), MPFR_RNDN);
  mpfr_ui_sub(e.get(), 1, s_hi.get(), MPFR_RNDD);
  mpfr_pow(num.get(), x.get(), e.get(), MPFR_RNDD);
  mpfr_sub_ui(den.get(), s_hi.get(), 1, MPFR_RNDU);
  if (mpfr_sgn(den.get()) <= 0) throw DomainError("zeta: s too close to 1 for the working precision");
  mpfr_div(r.get(), num.get(), den.get(), MPFR_RNDD);
  mpfr_neg(ms.get(), s_hi.get(), MPFR_RNDN);
  mpfr_pow(corr.get(), x.get(), ms.get(), MPFR_RNDU);
  mpfr_div_2ui(corr.get(), corr.get(), 1, MPFR_RNDU);
  mpfr_sub(r.get(), r.get(), corr.get(), MPFR_RNDD);
  return r;
}

Real tail_upper(std::uint64_t n, const Real& s_lo, mpfr_prec_t prec) {
  Real e(prec), x(prec), num(prec), den(prec), r(prec);
  mpfr_set_ui(x.get(), static_cast<unsigned long>(n), MPFR_RNDN);
  mpfr_add_d(x.get(), x.get(), 0.5, MPFR_RNDN);  // exact at prec >= 64
  mpfr_ui_sub(e.get(), 1, s_lo.get(), MPFR_RNDU);
  mpfr_pow(num.get(), x.get(), e.get(), MPFR_RNDU);
  mpfr_sub_ui(den.get(), s_lo.get(), 1, MPFR_RNDD);
  if (mpfr_sgn(den.get()) <= 0) throw DomainError("zeta: s too close to 1 for the working precision");
  mpfr_div(r.get(), num.get(), den.get(), MPFR_RNDU);
  return r;
}

}  // namespace

bool ZetaEnclosure::contains(const Ball& b) const {
  return mpfr_cmp_q(b.lo().get(), lo.get_mpq_t()) >= 0 && mpfr_cmp_q(b.hi().get(), hi.get_mpq_t()) <= 0;
}

Ball ZetaEnclosure::as_ball(unsigned prec) const {
  return Ball(Real::from_q(lo, prec, MPFR_RNDD), Real::from_q(hi, prec, MPFR_RNDU));
}

ZetaEnclosure zeta_enclosure(const Exponent& s, const mpq_class& target_radius, const ZetaOptions& options) {
  if (s.value() <= 1) throw DomainError("zeta_enclosure requires s > 1, got " + s.to_string());
  if (target_radius <= 0) throw DomainError("zeta_enclosure requires a positive target radius");

  const double sd = s.to_double();
  const double log2_r = approx_log2(target_radius);
  // The tail bracket has width about s N^(-s-1)/4; give it half the budget.
  double n_est = std::ceil(std::exp2((std::log2(sd) - 1.0 - log2_r) / (sd + 1.0)));
  if (!(n_est < static_cast<double>(options.max_terms))) {
    double achievable = sd * std::pow(static_cast<double>(options.max_terms), -sd - 1.0) / 2.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", achievable);
    throw ResourceError("zeta_enclosure: radius unreachable within " + std::to_string(options.max_terms) +
                        " terms; achievable radius about " + buf);
  }
  std::uint64_t terms = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n_est));

  const mpq_class cap = s.value() / (s.value() - 1);
  for (int attempt = 0; attempt < 8; ++attempt) {
    auto prec = static_cast<mpfr_prec_t>(
        std::max(64.0, std::ceil(std::log2(static_cast<double>(terms)) - log2_r) + 24.0));
    // The exponent itself must be represented well enough that s_lo > 1.
    prec = std::max<mpfr_prec_t>(prec, static_cast<mpfr_prec_t>(-approx_log2(s.value() - 1)) + 64);
    Real s_lo = Real::from_q(s.value(), prec, MPFR_RNDD);
    Real s_hi = Real::from_q(s.value(), prec, MPFR_RNDU);

    Bracket sum = partial_sum(terms, s, s_lo, s_hi, prec);
    Real lo(prec), hi(prec);
    mpfr_add(lo.get(), sum.lo.get(), tail_lower(terms, s_hi, prec).get(), MPFR_RNDD);
    mpfr_add(hi.get(), sum.hi.get(), tail_upper(terms, s_lo, prec).get(), MPFR_RNDU);

    ZetaEnclosure enc{s, lo.to_q(), hi.to_q(), terms};
    if (enc.hi > cap) enc.hi = cap;
    if (enc.width() <= target_radius) return enc;
    if (terms * 2 > options.max_terms) break;
    terms *= 2;
  }
  throw ResourceError("zeta_enclosure: could not reach the requested radius for s = " + s.to_string());
}

std::optional<bool> zeta_less_than(const Exponent& s, const mpq_class& x, ZetaEnclosure* witness,
                                   const ZetaOptions& options) {
  if (x <= 1) return false;
  mpq_class radius = (x - 1) / 4;
  for (int round = 0; round < 12; ++round) {
    ZetaEnclosure enc;
    try {
      enc = zeta_enclosure(s, radius, options);
    } catch (const ResourceError&) {
      return std::nullopt;
    }
    if (enc.hi < x) {
      if (witness) *witness = enc;
      return true;
    }
    if (enc.lo >= x) {
      if (witness) *witness = enc;
      return false;
    }
    radius /= 1024;
  }
  return std::nullopt;
}

ZetaThreshold solve_zeta_threshold(const mpq_class& x, bool integer_only, const ZetaOptions& options) {
  if (x <= 1) throw DomainError("solve_zeta_threshold requires x > 1");
  ZetaEnclosure enc;
  long s_int = 2;
  for (;; ++s_int) {
    if (s_int > 100000) throw ResourceError("solve_zeta_threshold: no integer s found");
    if (zeta_less_than(Exponent(s_int), x, &enc, options).value_or(false)) break;
  }
  if (integer_only) return {Exponent(s_int), enc};

  // zeta(s) > 1/(s-1), so zeta(1 + 1/x) > x.
  mpq_class lo = s_int > 2 ? mpq_class(s_int - 1) : mpq_class(1 + 1 / x);
  mpq_class hi = s_int;
  const mpq_class width(1, 1000000);
  while (hi - lo > width) {
    mpq_class mid = (lo + hi) / 2;
    ZetaEnclosure e;
    if (zeta_less_than(Exponent::from_q(mid), x, &e, options).value_or(false)) {
      hi = mid;
      enc = e;
    } else {
      lo = mid;
    }
  }
  return {Exponent::from_q(hi), enc};
}

}  // namespace sigrace
