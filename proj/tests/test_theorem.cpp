#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "sigrace/race.hpp"
#include "sigrace/theorem.hpp"

using namespace sigrace;

namespace {

constexpr std::uint64_t kScan = 10000;

// Sign of sigma_s(an+b) - sigma_s(cn+d) for n = 1..limit, index n - 1.
std::vector<int> signs(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d, const Exponent& s,
                       std::uint64_t limit = kScan) {
  RaceSpec r;
  r.a = a, r.b = b, r.c = c, r.d = d, r.s = s;
  std::vector<int> out(limit, 2);
  race_stats(r, limit, {}, [&](const RaceRow& row) { out[row.n - 1] = row.sign; });
  return out;
}

Exponent plus_one(const Exponent& s) { return Exponent::from_q(s.value() + 1); }

bool lo_ok(const ScalarValue& left, const ScalarValue& right, const ScalarValue& bound) {
  return compare(left, bound * right).kind != Comparison::Kind::less;
}
bool hi_ok(const ScalarValue& left, const ScalarValue& right, const ScalarValue& bound) {
  return compare(left, bound * right).kind != Comparison::Kind::greater;
}

}  // namespace

TEST_CASE("ad = bc bounds") {
  AdEqBcBounds x = bounds_ad_eq_bc(2, 0, 4, 0, 1);
  CHECK(x.r1 == 2);
  CHECK(x.r2 == 1);
  CHECK(x.bounds.lo.exact() == mpq_class(1, 3));
  CHECK(x.bounds.hi.exact() == mpq_class(1, 2));
  AdEqBcBounds same = bounds_ad_eq_bc(7, 3, 7, 3, Exponent::rational(1, 2));
  CHECK(same.r1 == 1);
  CHECK(same.r2 == 1);
  CHECK(compare(same.bounds.lo, mpq_class(1)).kind == Comparison::Kind::equal);
  AdEqBcBounds t = bounds_ad_eq_bc(3, 6, 1, 2, 0);
  CHECK(t.r1 == 1);
  CHECK(t.r2 == 3);
  CHECK(t.bounds.lo.exact() == 1);
  CHECK(t.bounds.hi.exact() == 2);
  CHECK_THROWS_AS(bounds_ad_eq_bc(2, 5, 6, 17, 1), DomainError);

  // Containment over n <= 1000 for random proportional pairs.
  auto g = oracle::rng(50);
  const char* exps[] = {"0", "1", "1/2", "-1", "2", "-3/2"};
  for (int i = 0; i < 30; ++i) {
    std::uint64_t u = oracle::uniform(g, 1, 6), v = oracle::uniform(g, 0, 6);
    std::uint64_t k1 = oracle::uniform(g, 1, 5), k2 = oracle::uniform(g, 1, 5);
    Exponent s = Exponent::parse(exps[i % 6]);
    AdEqBcBounds bb = bounds_ad_eq_bc(k1 * u, k1 * v, k2 * u, k2 * v, s);
    CHECK(compare(bb.bounds.lo, bb.bounds.hi).kind != Comparison::Kind::greater);
    RaceSpec r;
    r.a = k1 * u, r.b = k1 * v, r.c = k2 * u, r.d = k2 * v, r.s = s;
    for (std::uint64_t n = 1; n <= 1000; n += 7) {
      auto [l, rr] = values_at(r, n, 256);
      INFO("spec ", r.a, " ", r.b, " ", r.c, " ", r.d, " s=", std::string(exps[i % 6]), " n=", n);
      CHECK(lo_ok(l, rr, bb.bounds.lo));
      CHECK(hi_ok(l, rr, bb.bounds.hi));
    }
  }
}

TEST_CASE("global bounds for |s| > 1") {
  GlobalBounds id = global_bounds_large_s(1, 0, 1, 0, 3);
  CHECK(id.R == 1);
  CHECK(id.M == 1);
  oracle::Interval z3 = oracle::zeta(3);
  CHECK(mpfr_cmp_q(z3.hi.get(), id.zeta.hi.get_mpq_t()) <= 0);
  GlobalBounds ex = global_bounds_large_s(2, 5, 6, 17, 2);
  CHECK(ex.R == mpq_class(7, 23));
  CHECK(ex.M == 1);
  CHECK_THROWS_AS(global_bounds_large_s(2, 5, 6, 17, 1), DomainError);
  CHECK_THROWS_AS(global_bounds_large_s(2, 5, 6, 17, Exponent::rational(-1, 2)), DomainError);

  // (2n + 5)/(6n + 17) is increasing, so the extremes are at n = 1 and 1/3.
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    mpq_class q(2 * n + 5, 6 * n + 17);
    q.canonicalize();
    CHECK(q >= ex.R);
    CHECK(q < mpq_class(1, 3));
  }

  auto g = oracle::rng(51);
  const char* exps[] = {"2", "3/2", "-2", "5/2", "-3"};
  for (int i = 0; i < 50; ++i) {
    RaceSpec r;
    r.a = oracle::uniform(g, 1, 9), r.b = oracle::uniform(g, 0, 9), r.c = oracle::uniform(g, 1, 9),
    r.d = oracle::uniform(g, 0, 9);
    r.s = Exponent::parse(exps[i % 5]);
    GlobalBounds gb = global_bounds_large_s(r.a, r.b, r.c, r.d, r.s);
    for (std::uint64_t n = 1; n <= 1000; n += 13) {
      auto [l, rr] = values_at(r, n, 256);
      INFO("spec ", r.a, " ", r.b, " ", r.c, " ", r.d, " n=", n);
      CHECK(lo_ok(l, rr, gb.bounds.lo));
      CHECK(hi_ok(l, rr, gb.bounds.hi));
    }
  }
}

TEST_CASE("dominance thresholds") {
  DominanceCriterion x = dominance_s0(5, 1, 2, 1);
  CHECK(*x.epsilon == mpq_class(1, 6));
  CHECK(*x.s0 == Exponent(4));
  CHECK(x.certified());
  DominanceCriterion y = dominance_s0(2, 0, 1, 0);
  CHECK(*y.epsilon == mpq_class(1, 2));
  CHECK(*y.s0 == Exponent(3));
  CHECK(y.s0_real->value() < 3);
  CHECK_THROWS_AS(dominance_s0(2, 0, 2, 0), DomainError);
  CHECK_THROWS_AS(dominance_s0(3, 0, 2, 1), DomainError);

  // s0 is minimal: zeta(s0 - 1) >= 1 + eps per the independent oracle.
  oracle::Interval z3 = oracle::zeta(3);
  CHECK(mpfr_cmp_q(z3.lo.get(), mpq_class(7, 6).get_mpq_t()) > 0);

  auto g = oracle::rng(52);
  for (int i = 0; i < 50; ++i) {
    std::uint64_t c = oracle::uniform(g, 1, 4), a = c + oracle::uniform(g, 1, 4);
    std::uint64_t d = oracle::uniform(g, 0, 5), b = d + oracle::uniform(g, 0, 5);
    DominanceCriterion dc = dominance_s0(a, b, c, d);
    REQUIRE(dc.certified());
    for (const Exponent& s : {*dc.s0, plus_one(*dc.s0)}) {
      auto sg = signs(a, b, c, d, s);
      INFO("spec ", a, " ", b, " ", c, " ", d, " s=", s.to_string());
      CHECK(std::count(sg.begin(), sg.end(), 1) == static_cast<long>(kScan));
    }
  }
}

TEST_CASE("eventual dominance") {
  DominanceCriterion x = eventual_dominance(2, 0, 1, 0);
  CHECK(*x.s0 == Exponent(3));
  CHECK(*x.N == 1);
  CHECK_THROWS_AS(eventual_dominance(3, 1, 3, 2), DomainError);

  auto g = oracle::rng(53);
  for (int i = 0; i < 50; ++i) {
    std::uint64_t a = oracle::uniform(g, 1, 8), c = oracle::uniform(g, 1, 8);
    if (a == c) continue;
    std::uint64_t b = oracle::uniform(g, 0, 60), d = oracle::uniform(g, 0, 60);
    DominanceCriterion dc = eventual_dominance(a, b, c, d);
    const int want = a > c ? 1 : -1;
    REQUIRE(*dc.N <= kScan);
    std::uint64_t N = dc.N->get_ui();
    for (const Exponent& s : {*dc.s0, plus_one(*dc.s0)}) {
      auto sg = signs(a, b, c, d, s);
      INFO("spec ", a, " ", b, " ", c, " ", d, " N=", N);
      CHECK(std::count(sg.begin() + (N - 1), sg.end(), want) == static_cast<long>(kScan - N + 1));
    }
  }
}

TEST_CASE("always-less criteria") {
  DominanceCriterion e1 = always_less_check(2, 5, 6, 17, 3);
  CHECK(e1.certified());
  CHECK(e1.clauses.size() == 2);
  CHECK(always_less_check(5, 4, 6, 7, 3).certified());
  CHECK(*always_less_check(5, 4, 6, 7, 3).fired == e1.clauses[0].name);
  CHECK_FALSE(always_less_check(6, 1, 2, 5, 3).certified());
  CHECK_THROWS_AS(always_less_check(1, 2, 2, 1, 3), DomainError);
  CHECK_THROWS_AS(always_less_check(2, 5, 6, 17, 1), DomainError);
  CHECK(always_less_check_sumform(1, 1, 3, 0, 4).certified());
  CHECK_THROWS_AS(always_less_check_sumform(1, 2, 2, 1, 3), DomainError);
  CHECK_THROWS_AS(always_less_check_sumform(1, 0, 2, 0, 3), DomainError);

  auto g = oracle::rng(54);
  int fired = 0, tried = 0;
  while (tried < 50) {
    std::uint64_t a = oracle::uniform(g, 1, 6), b = oracle::uniform(g, 0, 8), c = oracle::uniform(g, 1, 12),
                  d = oracle::uniform(g, 0, 20);
    bool sum = a * d < b * c;
    if (a * d == b * c || (sum && a + b >= c + d)) continue;
    ++tried;
    Exponent s0(static_cast<long>(oracle::uniform(g, 2, 5)));
    DominanceCriterion dc = sum ? always_less_check_sumform(a, b, c, d, s0) : always_less_check(a, b, c, d, s0);
    if (!dc.certified()) continue;
    ++fired;
    for (const Exponent& s : {s0, plus_one(s0)}) {
      auto sg = signs(a, b, c, d, s);
      INFO("spec ", a, " ", b, " ", c, " ", d, " s=", s.to_string());
      CHECK(std::count(sg.begin(), sg.end(), -1) == static_cast<long>(kScan));
    }
    // Re-evaluate the fired clause with a much tighter enclosure.
    mpz_class L = sum ? mpz_class(a + b) : mpz_class(a), R = sum ? mpz_class(c + d) : mpz_class(c);
    if (dc.fired == dc.clauses[0].name) {
      ZetaEnclosure z = zeta_enclosure(s0, mpq_class(1, mpz_class("1000000000000000000")));
      mpz_class lp, rp;
      mpz_pow_ui(lp.get_mpz_t(), L.get_mpz_t(), s0.value().get_num().get_ui());
      mpz_pow_ui(rp.get_mpz_t(), R.get_mpz_t(), s0.value().get_num().get_ui());
      CHECK(lp * z.hi < rp);
    } else {
      CHECK(mpq_class(L) < R * (1 - 1 / s0.value()));
    }
  }
  CHECK(fired > 5);
}

TEST_CASE("theorem A, minimal d") {
  MinDResult ex = thmA_min_d(2, 999999, 5, 1, 2, mpz_class(6224673));
  CHECK(ex.min_d == 6224672);
  REQUIRE(ex.check);
  CHECK(*ex.check == Validation::valid);
  CHECK(thmA_validate_d(2, 999999, 5, 1, 2, 6224673) == Validation::valid);
  CHECK(thmA_validate_d(2, 999999, 5, 1, 2, 6224672) == Validation::valid);
  CHECK(thmA_validate_d(2, 999999, 5, 1, 2, 6224671) == Validation::invalid);
  CHECK(thmA_min_d(2, 0, 5, 0, 2).min_d == 7);
  CHECK_THROWS_AS(thmA_min_d(2, 10, 3, 1, 2), DomainError);

  // Independent value: zeta(2) b + (M + 1)(a zeta(2) - c) with mpfr_zeta.
  oracle::Interval z = oracle::zeta(2);
  sigrace::Real t(256);
  mpfr_mul_ui(t.get(), z.hi.get(), 1 + 1000000 * 5, MPFR_RNDU);
  mpfr_sub_ui(t.get(), t.get(), 1000000 * 2, MPFR_RNDU);
  CHECK(mpfr_cmp_ui(t.get(), 6224672) < 0);
  CHECK(mpfr_cmp_ui(t.get(), 6224671) > 0);

  auto g = oracle::rng(55);
  for (int i = 0; i < 50; ++i) {
    Exponent s0(static_cast<long>(oracle::uniform(g, 2, 3)));
    std::uint64_t c = oracle::uniform(g, 1, 3);
    std::uint64_t a = c * 2 + oracle::uniform(g, 0, 3);  // a >= 2c > c zeta(s0)
    std::uint64_t b = oracle::uniform(g, 0, 5);
    mpz_class M = oracle::uniform(g, 0, 40);
    MinDResult r = thmA_min_d(s0, M, a, b, c);
    CHECK(thmA_validate_d(s0, M, a, b, c, r.min_d) == Validation::valid);
    CHECK(thmA_validate_d(s0, M, a, b, c, r.min_d - 1) == Validation::invalid);
    std::uint64_t d = r.min_d.get_ui(), m = M.get_ui();
    std::uint64_t N = r.eventual_N.get_ui();
    for (const Exponent& s : {s0, plus_one(s0)}) {
      auto sg = signs(a, b, c, d, s);
      INFO("a=", a, " b=", b, " c=", c, " d=", d, " M=", m, " N=", N);
      CHECK(std::count(sg.begin(), sg.begin() + m, -1) == static_cast<long>(m));
      if (N <= kScan) CHECK(std::count(sg.begin() + (N - 1), sg.end(), 1) == static_cast<long>(kScan - N + 1));
    }
  }
}

TEST_CASE("theorem A, part two") {
  ThmA2Params p = thmA_part2_params(9999, 5, 1, 2, 1, 3);
  CHECK(p.d == 29999);
  CHECK(p.x1 == mpq_class(49997, 49996));
  CHECK(p.x2 == mpq_class(50001, 49999));
  CHECK(p.s0 == Exponent(16));
  oracle::Interval z16 = oracle::zeta(16), z15 = oracle::zeta(15);
  CHECK(mpfr_cmp_q(z16.hi.get(), p.threshold.get_mpq_t()) < 0);
  CHECK(mpfr_cmp_q(z15.lo.get(), p.threshold.get_mpq_t()) > 0);

  ThmA2Params one = thmA_part2_params(1, 5, 1, 2, 1, 3);
  CHECK(one.d == 5);
  CHECK(one.x1 == mpq_class(7, 6));
  CHECK(one.x2 == mpq_class(11, 9));
  CHECK(one.s0 == Exponent(4));
  CHECK_THROWS_AS(thmA_part2_params(10, 5, 1, 2, 1, 2), DomainError);
  CHECK_THROWS_AS(thmA_part2_params(10, 5, 2, 2, 1, 3), DomainError);
  CHECK_THROWS_AS(thmA_part2_params(10, 4, 1, 2, 1, 2), DomainError);

  // Crossing exactly at n = M + 1 for s0 and s0 + 1.
  auto g = oracle::rng(56);
  int done = 0;
  while (done < 50) {
    std::uint64_t c = oracle::uniform(g, 2, 4), b = oracle::uniform(g, 1, c - 1);
    std::uint64_t a = 2 * c + oracle::uniform(g, 1, 6);
    std::uint64_t q2 = oracle::uniform(g, 2, 6), q1 = oracle::uniform(g, 1, q2 - 1);
    if ((a - c) % q2 || std::gcd(q1, q2) != 1) continue;
    ++done;
    std::uint64_t M = oracle::uniform(g, 1, 60);
    ThmA2Params r = thmA_part2_params(M, a, b, c, q1, q2);
    CHECK(r.threshold <= r.x1);
    CHECK(r.threshold <= r.x2);
    std::uint64_t d = r.d.get_ui();
    for (const Exponent& s : {r.s0, plus_one(r.s0)}) {
      auto sg = signs(a, b, c, d, s, 2000);
      INFO("a=", a, " b=", b, " c=", c, " d=", d, " M=", M, " s=", s.to_string());
      CHECK(std::count(sg.begin(), sg.begin() + M, -1) == static_cast<long>(M));
      CHECK(std::count(sg.begin() + M, sg.end(), 1) == static_cast<long>(2000 - M));
    }
  }
}

TEST_CASE("ratio monotonicity") {
  auto g = oracle::rng(57);
  for (int i = 0; i < 100; ++i) {
    std::uint64_t a = oracle::uniform(g, 1, 20), b = oracle::uniform(g, 0, 20), c = oracle::uniform(g, 1, 20),
                  d = oracle::uniform(g, 0, 20);
    if (a * d == b * c) continue;
    // d/dn (an + b)/(cn + d) has the sign of ad - bc.
    bool decreasing = a * d < b * c;
    mpq_class prev(a + b, c + d), lim(a, c);
    prev.canonicalize(), lim.canonicalize();
    for (std::uint64_t n = 2; n <= 1000; ++n) {
      mpq_class cur(a * n + b, c * n + d);
      cur.canonicalize();
      CHECK((decreasing ? cur < prev : cur > prev));
      CHECK((decreasing ? cur > lim : cur < lim));
      prev = cur;
    }
  }
}
