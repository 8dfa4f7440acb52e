#include "sigrace/theorem.hpp"

#include <algorithm>
#include <numeric>

#include "sigrace/factor.hpp"
#include "sigrace/sigma.hpp"

namespace sigrace {

namespace {

mpz_class mpz_u(std::uint64_t v) { return mpz_class(static_cast<unsigned long>(v)); }

mpq_class upper_q(const ScalarValue& v) { return v.is_exact() ? v.exact() : v.ball().hi().to_q(); }
mpq_class lower_q(const ScalarValue& v) { return v.is_exact() ? v.exact() : v.ball().lo().to_q(); }

// An enclosure of zeta(s) with radius at most `radius`, loosened by factors of
// 1000 when the term budget cannot reach it.
ZetaEnclosure tight_zeta(const Exponent& s, mpq_class radius) {
  for (;;) {
    try {
      return zeta_enclosure(s, radius);
    } catch (const ResourceError&) {
      if (radius > mpq_class(1, 100)) throw;
      radius *= 1000;
    }
  }
}

void require_s_above_one(const Exponent& s0) {
  if (s0.value() <= 1) throw DomainError("s0 must exceed 1, got " + s0.to_string());
}

std::string enclosure_text(const ZetaEnclosure& z) {
  return "zeta(" + z.s.to_string() + ") in [" + Ball::exact(z.lo, 64).lo().to_string(12) + ", " +
         Ball::exact(z.hi, 64).hi().to_string(12) + "]";
}

// zeta(s0) < x where x is only known as a ball or exactly.
Clause zeta_clause(const std::string& name, const Exponent& s0, const ScalarValue& x,
                   std::optional<ZetaEnclosure>& witness) {
  Clause cl{name, ClauseStatus::indeterminate, ""};
  ZetaEnclosure enc;
  auto below = zeta_less_than(s0, lower_q(x), &enc);
  if (below.value_or(false)) {
    cl.status = ClauseStatus::certified;
    cl.detail = enclosure_text(enc) + " below " + x.to_string(12);
    witness = enc;
    return cl;
  }
  auto above = zeta_less_than(s0, upper_q(x), &enc);
  if (above.has_value() && !*above) {
    cl.status = ClauseStatus::refuted;
    cl.detail = "zeta(" + s0.to_string() + ") >= " + x.to_string(12);
  } else {
    cl.detail = "enclosure straddles " + x.to_string(12);
  }
  return cl;
}

DominanceCriterion less_clauses(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d,
                                const mpz_class& left, const mpz_class& right, const Exponent& s0,
                                const std::string& lname, const std::string& rname) {
  DominanceCriterion out;
  out.a = a, out.b = b, out.c = c, out.d = d;
  out.s0 = s0;
  mpq_class ratio(right, left);
  ratio.canonicalize();
  ScalarValue x = pow_scalar(ratio, s0);
  out.clauses.push_back(
      zeta_clause(lname + "^s0 zeta(s0) < " + rname + "^s0", s0, x, out.zeta));
  mpq_class lim = mpq_class(right) * (1 - 1 / s0.value());
  bool second = left >= 1 && mpq_class(left) < lim;
  out.clauses.push_back({"1 <= " + lname + " < " + rname + "(1 - 1/s0)",
                         second ? ClauseStatus::certified : ClauseStatus::refuted,
                         left.get_str() + " vs " + rational_to_string(lim)});
  for (const auto& cl : out.clauses) {
    if (cl.status == ClauseStatus::certified) {
      out.fired = cl.name;
      break;
    }
  }
  if (out.fired) out.claim = "sigma_s(an+b) < sigma_s(cn+d) for all n >= 1 and s >= " + s0.to_string();
  return out;
}

void require_condition_a(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  if (a == 0 || c == 0) throw DomainError("condition (A) requires a, c >= 1");
  if (mpz_u(a) * mpz_u(d) == mpz_u(b) * mpz_u(c)) throw DomainError("condition (A) requires ad != bc");
}

}  // namespace

const char* clause_status_name(ClauseStatus s) {
  switch (s) {
    case ClauseStatus::certified: return "certified";
    case ClauseStatus::refuted: return "refuted";
    case ClauseStatus::indeterminate: return "indeterminate";
  }
  return "?";
}

const char* validation_name(Validation v) {
  switch (v) {
    case Validation::valid: return "valid";
    case Validation::invalid: return "invalid";
    case Validation::indeterminate: return "indeterminate";
  }
  return "?";
}

AdEqBcBounds bounds_ad_eq_bc(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d, const Exponent& s,
                             unsigned prec) {
  if (a == 0 || c == 0) throw DomainError("bounds_ad_eq_bc requires a, c >= 1");
  if (mpz_u(a) * mpz_u(d) != mpz_u(b) * mpz_u(c)) throw DomainError("wrong regime: ad != bc");
  AdEqBcBounds out;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), mpz_u(a).get_mpz_t(), mpz_u(c).get_mpz_t());
  out.r1 = mpz_u(c) / g;
  out.r2 = mpz_u(a) / g;
  ScalarValue lo = pow_scalar(mpq_class(out.r2), s, prec) / sigma_s(factorize(out.r1), s, prec);
  ScalarValue hi = sigma_s(factorize(out.r2), s, prec) / pow_scalar(mpq_class(out.r1), s, prec);
  out.bounds = {lower_q(lo), upper_q(hi), "ad = bc: r2^s / sigma_s(r1) <= ratio <= sigma_s(r2) / r1^s"};
  return out;
}

GlobalBounds global_bounds_large_s(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d,
                                   const Exponent& s, unsigned prec) {
  if (a == 0 || c == 0) throw DomainError("global bounds require a, c >= 1");
  Exponent sa = s.abs();
  if (sa.value() <= 1) throw DomainError("wrong regime: |s| must exceed 1");
  GlobalBounds out;
  // The ratio (an+b)/(cn+d) is monotone, so its range over n >= 1 lies
  // between the value at n = 1 and the limit a/c.
  mpq_class first(mpz_u(a + b), mpz_u(c + d)), limit(mpz_u(a), mpz_u(c));
  first.canonicalize();
  limit.canonicalize();
  out.R = std::min({mpq_class(1), first, limit});
  out.M = std::max({mpq_class(1), first, limit});
  out.zeta = tight_zeta(sa, mpq_class(1, 10000000000ul));
  mpq_class lo = lower_q(pow_scalar(out.R, sa, prec)) / out.zeta.hi;
  mpq_class hi = upper_q(pow_scalar(out.M, sa, prec)) * out.zeta.hi;
  out.bounds = {lo, hi, "|s| > 1: R^|s| / zeta(|s|) <= ratio <= zeta(|s|) M^|s|"};
  return out;
}

DominanceCriterion dominance_s0(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  if (!(a > c && c >= 1)) throw DomainError("dominance_s0 requires a > c >= 1");
  if (b < d) throw DomainError("dominance_s0 requires b >= d >= 0");
  DominanceCriterion out;
  out.a = a, out.b = b, out.c = c, out.d = d;
  mpq_class bound = std::min(mpq_class(1, mpz_u(c)), mpq_class(mpz_u(b - d + 1), mpz_u(c + d)));
  bound.canonicalize();
  out.epsilon = bound / 2;
  ZetaThreshold t = solve_zeta_threshold(1 + *out.epsilon, true);
  out.s0 = t.s;
  out.zeta = t.enclosure;
  out.s0_real = solve_zeta_threshold(1 + *out.epsilon, false).s;
  out.N = 1;
  std::string name = "an+b > (1+eps)(cn+d) for n >= 1 and zeta(s0) < 1+eps";
  out.clauses.push_back({name, ClauseStatus::certified,
                         "eps = " + rational_to_string(*out.epsilon) + ", " + enclosure_text(t.enclosure)});
  out.fired = name;
  out.claim = "sigma_s(an+b) > sigma_s(cn+d) for all n >= 1 and s >= " + out.s0->to_string();
  return out;
}

DominanceCriterion eventual_dominance(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  if (a == 0 || c == 0) throw DomainError("eventual_dominance requires a, c >= 1");
  if (a == c) throw DomainError("eventual_dominance requires a != c");
  const bool left_wins = a > c;
  // Work with the faster-growing progression (A, B) against (C, D).
  const mpz_class A = mpz_u(left_wins ? a : c), B = mpz_u(left_wins ? b : d);
  const mpz_class C = mpz_u(left_wins ? c : a), D = mpz_u(left_wins ? d : b);
  DominanceCriterion out;
  out.a = a, out.b = b, out.c = c, out.d = d;
  mpq_class ratio(A, C);
  ratio.canonicalize();
  out.epsilon = (ratio - 1) / 2;
  const mpq_class f = 1 + *out.epsilon;
  ZetaThreshold t = solve_zeta_threshold(f, true);
  out.s0 = t.s;
  out.zeta = t.enclosure;
  out.s0_real = solve_zeta_threshold(f, false).s;
  // A n + B > f (C n + D)  <=>  n > (f D - B) / (A - f C), with A - f C > 0.
  mpz_class n = floor_q((f * D - B) / (A - f * C)) + 1;
  out.N = n < 1 ? mpz_class(1) : n;
  std::string name = "An+B > (1+eps)(Cn+D) for n >= N and zeta(s0) < 1+eps";
  out.clauses.push_back({name, ClauseStatus::certified,
                         "eps = " + rational_to_string(*out.epsilon) + ", N = " + out.N->get_str() + ", " +
                             enclosure_text(t.enclosure)});
  out.fired = name;
  out.claim = std::string("sigma_s(an+b) ") + (left_wins ? ">" : "<") + " sigma_s(cn+d) for all n >= " +
              out.N->get_str() + " and s >= " + out.s0->to_string();
  return out;
}

DominanceCriterion always_less_check(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d,
                                     const Exponent& s0) {
  require_condition_a(a, b, c, d);
  if (mpz_u(a) * mpz_u(d) <= mpz_u(b) * mpz_u(c)) throw DomainError("wrong regime: requires ad > bc");
  require_s_above_one(s0);
  return less_clauses(a, b, c, d, mpz_u(a), mpz_u(c), s0, "a", "c");
}

DominanceCriterion always_less_check_sumform(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d,
                                             const Exponent& s0) {
  require_condition_a(a, b, c, d);
  if (mpz_u(a) * mpz_u(d) >= mpz_u(b) * mpz_u(c)) throw DomainError("wrong regime: requires ad < bc");
  if (a + b >= c + d) throw DomainError("precondition: requires a + b < c + d");
  require_s_above_one(s0);
  return less_clauses(a, b, c, d, mpz_u(a + b), mpz_u(c + d), s0, "(a+b)", "(c+d)");
}

namespace {

struct DBand {
  ZetaEnclosure zeta;
  mpq_class lo, hi;
};

DBand d_band(const Exponent& s0, const mpz_class& M, std::uint64_t a, std::uint64_t b, std::uint64_t c,
             const mpq_class& radius) {
  DBand band;
  band.zeta = tight_zeta(s0, radius);
  auto value = [&](const mpq_class& z) {
    return mpq_class(z * mpz_u(b) + mpq_class(M + 1) * (z * mpz_u(a) - mpz_u(c)));
  };
  band.lo = value(band.zeta.lo);
  band.hi = value(band.zeta.hi);
  return band;
}

void thmA_preconditions(const Exponent& s0, const mpz_class& M, std::uint64_t a, std::uint64_t c) {
  require_s_above_one(s0);
  if (M < 0) throw DomainError("M must be nonnegative");
  if (c == 0) throw DomainError("requires c >= 1");
  mpq_class ratio(mpz_u(a), mpz_u(c));
  ratio.canonicalize();
  auto below = zeta_less_than(s0, ratio);
  if (!below.has_value()) throw DomainError("could not certify a > c zeta(s0)");
  if (!*below) throw DomainError("precondition: requires a > c zeta(s0)");
}

}  // namespace

Validation thmA_validate_d(const Exponent& s0, const mpz_class& M, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                           const mpz_class& d) {
  thmA_preconditions(s0, M, a, c);
  mpq_class radius(1, 1000000);
  radius /= 1000000;
  for (int round = 0; round < 4; ++round, radius /= 1000000) {
    DBand band = d_band(s0, M, a, b, c, radius);
    if (d >= band.hi) return Validation::valid;
    if (d < band.lo) return Validation::invalid;
    if (band.zeta.width() > radius) break;  // budget-limited; cannot tighten
  }
  return Validation::indeterminate;
}

MinDResult thmA_min_d(const Exponent& s0, const mpz_class& M, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                      const std::optional<mpz_class>& check_d) {
  thmA_preconditions(s0, M, a, c);
  MinDResult out;
  out.s0 = s0, out.M = M, out.a = a, out.b = b, out.c = c;
  mpq_class radius(1, 1000000);
  radius /= 1000000;
  DBand band;
  for (int round = 0; round < 4; ++round, radius /= 1000000) {
    band = d_band(s0, M, a, b, c, radius);
    if (ceil_q(band.lo) == ceil_q(band.hi) || band.zeta.width() > radius) break;
  }
  out.zeta = band.zeta;
  out.bound_lo = band.lo;
  out.bound_hi = band.hi;
  out.min_d = ceil_q(band.hi);
  if (check_d) {
    out.checked_d = *check_d;
    out.check = thmA_validate_d(s0, M, a, b, c, *check_d);
  }
  // (an+b)/(cn+d) > zeta(s0) from N on, using the upper end of the enclosure.
  const mpz_class& d = check_d ? *check_d : out.min_d;
  const mpq_class& z = out.zeta.hi;
  mpq_class gap = mpz_u(a) - z * mpz_u(c);
  if (gap > 0) {
    mpz_class n = floor_q((z * d - mpz_u(b)) / gap) + 1;
    out.eventual_N = n < 1 ? mpz_class(1) : n;
  }
  return out;
}

ThmA2Params thmA_part2_params(const mpz_class& M, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                              std::uint64_t q1, std::uint64_t q2) {
  if (M < 1) throw DomainError("precondition: M >= 1");
  if (!(c > b && b >= 1)) throw DomainError("precondition: c > b >= 1");
  if (!(a > 2 * c)) throw DomainError("precondition: a > 2c");
  if (!(0 < q1 && q1 < q2)) throw DomainError("precondition: 0 < q1 < q2");
  if (std::gcd(q1, q2) != 1) throw DomainError("precondition: gcd(q1, q2) = 1");
  if ((a - c) % q2 != 0) throw DomainError("precondition: q2 divides a - c");
  ThmA2Params out;
  out.M = M, out.a = a, out.b = b, out.c = c;
  out.q = mpq_class(mpz_u(q1), mpz_u(q2));
  const mpz_class A = mpz_u(a), B = mpz_u(b), C = mpz_u(c);
  out.d = M * (A - C) + mpz_u(q1) * ((A - C) / mpz_u(q2)) + B;
  out.x1 = mpq_class(out.d + M * C, M * A + B);
  out.x2 = mpq_class((M + 1) * A + B, out.d + (M + 1) * C);
  out.alpha = mpq_class(out.d - B, B);
  for (mpq_class* q : {&out.x1, &out.x2, &out.alpha}) q->canonicalize();
  out.alpha = std::min(out.alpha, mpq_class(2));
  out.threshold = std::min({out.x1, out.x2, out.alpha});
  ZetaThreshold t = solve_zeta_threshold(out.threshold, true);
  out.s0 = t.s;
  out.zeta = t.enclosure;
  out.s0_real = solve_zeta_threshold(out.threshold, false).s;
  return out;
}

}  // namespace sigrace
