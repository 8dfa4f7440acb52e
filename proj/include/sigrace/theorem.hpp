#pragma once

// Calculators for the explicit bounds and sufficient conditions on races with
// |s| > 1 (and the ad = bc case for every s).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sigrace/numerics.hpp"

namespace sigrace {

/// lo <= sigma_s(an+b) / sigma_s(cn+d) <= hi for every n >= 1. Both ends are
/// rationals, rounded outward when the exact value is irrational.
struct RatioBounds {
  ScalarValue lo = mpq_class(0);
  ScalarValue hi = mpq_class(0);
  std::string provenance;
};

struct AdEqBcBounds {
  mpz_class r1, r2;  // r1 (a, b) = r2 (c, d), minimal
  RatioBounds bounds;
};

AdEqBcBounds bounds_ad_eq_bc(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d, const Exponent& s,
                             unsigned prec = 128);

struct GlobalBounds {
  mpq_class R, M;
  ZetaEnclosure zeta;  // at |s|
  RatioBounds bounds;
};

GlobalBounds global_bounds_large_s(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d,
                                   const Exponent& s, unsigned prec = 128);

enum class ClauseStatus { certified, refuted, indeterminate };
const char* clause_status_name(ClauseStatus s);

struct Clause {
  std::string name;
  ClauseStatus status = ClauseStatus::indeterminate;
  std::string detail;
};

struct DominanceCriterion {
  std::uint64_t a = 0, b = 0, c = 0, d = 0;
  std::string claim;                 // the statement certified when a clause fired
  std::optional<std::string> fired;  // name of the clause that fired
  std::vector<Clause> clauses;       // every clause evaluated
  std::optional<Exponent> s0;
  std::optional<Exponent> s0_real;  // bisection to 1e-6, where offered
  std::optional<mpq_class> epsilon;
  std::optional<mpz_class> N;
  std::optional<ZetaEnclosure> zeta;

  bool certified() const { return fired.has_value(); }
};

/// a > c >= 1, b >= d >= 0: sigma_s(an+b) > sigma_s(cn+d) for s >= s0, n >= 1.
DominanceCriterion dominance_s0(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);

/// a != c with any b, d: explicit eps = (max/min - 1)/2, s0 with zeta(s0) < 1 + eps,
/// and N with the larger progression ahead by the factor 1 + eps for n >= N.
DominanceCriterion eventual_dominance(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);

/// ad > bc: a^s0 zeta(s0) < c^s0 or 1 <= a < c (1 - 1/s0).
DominanceCriterion always_less_check(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d,
                                     const Exponent& s0);

/// ad < bc, a + b < c + d: the same clauses with a + b and c + d.
DominanceCriterion always_less_check_sumform(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d,
                                             const Exponent& s0);

enum class Validation { valid, invalid, indeterminate };
const char* validation_name(Validation v);

struct MinDResult {
  Exponent s0;
  mpz_class M;
  std::uint64_t a = 0, b = 0, c = 0;
  ZetaEnclosure zeta;
  mpq_class bound_lo, bound_hi;  // zeta b + (M+1)(a zeta - c) over the enclosure
  mpz_class min_d;
  std::optional<mpz_class> checked_d;
  std::optional<Validation> check;
  mpz_class eventual_N;  // for d = checked_d (or min_d): left ahead for all n >= N
};

MinDResult thmA_min_d(const Exponent& s0, const mpz_class& M, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                      const std::optional<mpz_class>& check_d = std::nullopt);

/// Tri-state check of d >= zeta(s0) b + (M+1)(a zeta(s0) - c), tightening the
/// enclosure before giving up.
Validation thmA_validate_d(const Exponent& s0, const mpz_class& M, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                           const mpz_class& d);

struct ThmA2Params {
  mpz_class M;
  std::uint64_t a = 0, b = 0, c = 0;
  mpq_class q;
  mpz_class d;
  mpq_class x1, x2, alpha, threshold;  // threshold = min(x1, x2, alpha)
  Exponent s0;
  std::optional<Exponent> s0_real;
  ZetaEnclosure zeta;  // certifies zeta(s0) < threshold
};

ThmA2Params thmA_part2_params(const mpz_class& M, std::uint64_t a, std::uint64_t b, std::uint64_t c,
                              std::uint64_t q1, std::uint64_t q2);

}  // namespace sigrace
