#include <numeric>
#include <string>

#include "doctest.h"
#include "oracles.hpp"
#include "sigrace/progression.hpp"
#include "sigrace/sigma.hpp"

using namespace sigrace;

namespace {

bool contains(const ScalarValue& v, const oracle::Interval& iv) {
  if (v.is_exact()) return mpfr_cmp_q(iv.lo.get(), v.exact().get_mpq_t()) <= 0 && mpfr_cmp_q(iv.hi.get(), v.exact().get_mpq_t()) >= 0;
  return mpfr_cmp(v.ball().lo().get(), iv.lo.get()) <= 0 && mpfr_cmp(iv.hi.get(), v.ball().hi().get()) <= 0;
}

// x >= y certified, with exact equality allowed.
bool certified_ge(const ScalarValue& x, const ScalarValue& y) {
  auto k = compare(x, y).kind;
  return k == Comparison::Kind::greater || k == Comparison::Kind::equal;
}

const Exponent kHalf = Exponent::rational(1, 2);

}  // namespace

TEST_CASE("sigma_s examples") {
  CHECK(sigma_s(factorize(6), 1).exact() == 12);
  CHECK(sigma_s(factorize(12), 0).exact() == 6);
  CHECK(sigma_s(factorize(6), -1).exact() == 2);
  CHECK(sigma_s(factorize(1), kHalf).exact() == 1);
  ScalarValue four = sigma_s(factorize(4), kHalf);
  REQUIRE_FALSE(four.is_exact());
  CHECK(contains(four, oracle::sigma_real(4, mpq_class(1, 2))));
  CHECK(four.ball().contains(mpq_class(441421356, 100000000)) == false);  // 4.41421356 is just below sqrt(2) + 3
  CHECK(four.ball().lo().to_double() > 4.414213562);
  CHECK(four.ball().hi().to_double() < 4.414213563);
}

TEST_CASE("sigma_s agrees with divisor sums") {
  auto g = oracle::rng(6);
  for (int i = 0; i < 300; ++i) {
    std::uint64_t n = oracle::uniform(g, 1, 2000000);
    Factorization f = factorize(n);
    for (long s : {0, 1, 2, 5}) CHECK(sigma_s(f, s).exact() == oracle::sigma_int(n, static_cast<unsigned long>(s)));
    CHECK(sigma_s(f, -2).exact() == oracle::sigma_neg(n, 2));
    for (const char* text : {"1/2", "-1/3", "0.9", "7/3"}) {
      Exponent s = Exponent::parse(text);
      INFO("n=", n, " s=", text);
      CHECK(contains(sigma_s(f, s), oracle::sigma_real(n, s.value())));
    }
  }
}

TEST_CASE("reflection") {
  auto [l6, r6] = sigma_reflect_check(factorize(6), 1);
  CHECK(l6.exact() == 2);
  CHECK(r6.exact() == 2);
  auto [l10, r10] = sigma_reflect_check(factorize(10), 2);
  CHECK(l10.exact() == mpq_class(13, 10));
  CHECK(r10.exact() == mpq_class(13, 10));
  auto [l1, r1] = sigma_reflect_check(factorize(1), kHalf);
  CHECK(compare(l1, mpq_class(1)).kind == Comparison::Kind::equal);
  CHECK(compare(r1, mpq_class(1)).kind == Comparison::Kind::equal);
  CHECK_THROWS_AS(sigma_reflect_check(factorize(6), 0), DomainError);

  auto g = oracle::rng(7);
  for (int i = 0; i < 200; ++i) {
    std::uint64_t m = oracle::uniform(g, 1, 1000000);
    for (long r : {1, 2, 3}) {
      auto [a, b] = sigma_reflect_check(factorize(m), r);
      CHECK(a.exact() == b.exact());
    }
    auto [a, b] = sigma_reflect_check(factorize(m), kHalf);
    CHECK(a.to_ball(128).overlaps(b.to_ball(128)));
  }
}

TEST_CASE("small arithmetic functions") {
  SmallFunctions f = small_functions(factorize(360));
  CHECK(f.tau == 24);
  CHECK(f.sigma == 1170);
  CHECK(f.phi == 96);
  CHECK(f.omega == 3);
  CHECK(f.big_omega == 6);
  SmallFunctions one = small_functions(factorize(1));
  CHECK(one.tau == 1);
  CHECK(one.sigma == 1);
  CHECK(one.phi == 1);
  CHECK(one.omega == 0);
  CHECK(one.big_omega == 0);
  SmallFunctions thirty = small_functions(factorize(30));
  CHECK(thirty.omega == 3);
  CHECK(thirty.big_omega == 3);
  CHECK(thirty.phi == 8);

  for (std::uint64_t n = 1; n <= 2000; ++n) {
    SmallFunctions s = small_functions(factorize(n));
    std::uint64_t phi = 0;
    for (std::uint64_t k = 1; k <= n; ++k) phi += std::gcd(k, n) == 1;
    CHECK(s.phi == phi);
    CHECK(s.tau == oracle::divisors(n).size());
  }
}

TEST_CASE("restricted divisor sums") {
  CHECK(sigma_restricted(factorize(12), 2, 1, 1).exact() == 4);
  CHECK(sigma_restricted(factorize(12), 2, 0, 1).exact() == 24);
  CHECK(sigma_restricted(factorize(30), 4, 1, 0).exact() == 2);
  CHECK_THROWS_AS(sigma_restricted(factorize(12), 1, 0, 1), DomainError);
  CHECK_THROWS_AS(sigma_restricted(factorize(12), 3, 3, 1), DomainError);

  // Summing over all residues gives back sigma_s(n).
  for (std::uint64_t n = 1; n <= 1000; ++n) {
    Factorization f = factorize(n);
    for (long q : {2, 3, 4}) {
      for (long s : {0, 1, -1}) {
        mpq_class total = 0;
        for (long r = 0; r < q; ++r) total += sigma_restricted(f, q, r, s).exact();
        CHECK(total == sigma_s(f, s).exact());
      }
      ScalarValue total = mpq_class(0);
      for (long r = 0; r < q; ++r) total = total + sigma_restricted(f, q, r, kHalf);
      CHECK(total.to_ball(128).overlaps(sigma_s(f, kHalf).to_ball(128)));
    }
  }
}

TEST_CASE("multiplicativity on coprime pairs") {
  auto g = oracle::rng(8);
  int done = 0;
  while (done < 200) {
    std::uint64_t m = oracle::uniform(g, 1, 1000000), n = oracle::uniform(g, 1, 1000000);
    if (std::gcd(m, n) != 1) continue;
    ++done;
    Factorization fm = factorize(m), fn = factorize(n), fmn = factorize(mpz_class(m) * n);
    for (long s : {-1, 0, 1, 2}) CHECK(sigma_s(fmn, s).exact() == sigma_s(fm, s).exact() * sigma_s(fn, s).exact());
    ScalarValue prod = sigma_s(fm, kHalf) * sigma_s(fn, kHalf);
    CHECK(prod.to_ball(128).overlaps(sigma_s(fmn, kHalf).to_ball(128)));
  }
}

TEST_CASE("sandwich inequality") {
  // sigma_s(m) sigma_s(n) >= sigma_s(mn) >= m^s sigma_s(n), no coprimality.
  auto g = oracle::rng(9);
  for (int i = 0; i < 200; ++i) {
    std::uint64_t m = oracle::uniform(g, 1, 3000), n = oracle::uniform(g, 1, 3000);
    Factorization fm = factorize(m), fn = factorize(n), fmn = factorize(mpz_class(m) * n);
    for (const char* text : {"0", "1/2", "1", "2", "3/2"}) {
      Exponent s = Exponent::parse(text);
      INFO("m=", m, " n=", n, " s=", std::string(text));
      ScalarValue smn = sigma_s(fmn, s), prod = sigma_s(fm, s) * sigma_s(fn, s);
      // Coprime pairs give equality, which balls can only confirm by overlap.
      if (std::gcd(m, n) == 1 && !s.is_integer())
        CHECK(prod.to_ball(128).overlaps(smn.to_ball(128)));
      else
        CHECK(certified_ge(prod, smn));
      CHECK(certified_ge(smn, pow_scalar(mpz_class(m), s) * sigma_s(fn, s)));
      if (s.is_integer()) CHECK(compare(sigma_s(fm, s) * sigma_s(fn, s), smn).decided());
    }
  }
}

TEST_CASE("normalized sigma_2 lies in [1, zeta(2)]") {
  ZetaEnclosure z = zeta_enclosure(2, mpq_class(1, 1000000000));
  for (std::uint64_t n = 1; n <= 10000; ++n) {
    mpq_class v = sigma_s(factorize(n), 2).exact() / (mpq_class(n) * n);
    CHECK(v >= 1);
    CHECK(v <= z.hi);
  }
}

TEST_CASE("progression scan") {
  std::vector<std::pair<std::uint64_t, mpq_class>> seen;
  auto sink = [&](std::uint64_t n, const ScalarValue& v) { seen.emplace_back(n, v.exact()); };
  scan_progression({30, 1}, 1, 5, 1, 128, sink);
  std::vector<long> want = {32, 62, 112, 133, 152};
  REQUIRE(seen.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(seen[i].first == i + 1);
    CHECK(seen[i].second == want[i]);
  }
  seen.clear();
  ScanSummary sum = scan_progression({2, 0}, 1, 3, 0, 128, sink);
  CHECK(seen[0].second == 2);
  CHECK(seen[1].second == 3);
  CHECK(seen[2].second == 4);
  CHECK(sum.total.exact() == 9);

  CHECK_THROWS_AS(scan_progression({2, 0}, 0, 3, 0, 128, sink), DomainError);
  CHECK_THROWS_AS(scan_progression({1ull << 30, 0}, 1, 1ull << 23, 0, 128, sink), ResourceError);
}

TEST_CASE("progression scan matches pointwise evaluation") {
  auto g = oracle::rng(10);
  for (int round = 0; round < 20; ++round) {
    ProgressionSpec p{oracle::uniform(g, 1, 60), oracle::uniform(g, 0, 100)};
    std::uint64_t lo = oracle::uniform(g, 1, 1000000);
    std::uint64_t hi = lo + oracle::uniform(g, 0, 3000);
    Exponent s = round % 2 ? Exponent::rational(1, 2) : Exponent(static_cast<long>(round % 5) - 1);
    std::vector<std::pair<std::uint64_t, ScalarValue>> got;
    scan_progression(p, lo, hi, s, 128, [&](std::uint64_t n, const ScalarValue& v) { got.emplace_back(n, v); },
                     {1000});
    REQUIRE(got.size() == hi - lo + 1);
    for (int k = 0; k < 5; ++k) {
      std::size_t i = oracle::uniform(g, 0, got.size() - 1);
      CHECK(got[i].first == lo + i);
      ScalarValue direct = sigma_s(factorize(p.value(lo + i)), s);
      if (s.is_integer())
        CHECK(got[i].second.exact() == direct.exact());
      else
        CHECK(got[i].second.to_ball(128).overlaps(direct.to_ball(128)));
    }
  }
}

TEST_CASE("compare_sigma") {
  CHECK(compare_sigma(10, 11, 1).kind == Comparison::Kind::greater);
  CHECK(compare_sigma(11, 12, 1).kind == Comparison::Kind::less);
  CHECK(compare_sigma(6, 6, kHalf).kind == Comparison::Kind::undecided);
  CHECK(compare_sigma(18, 19, kHalf).kind == Comparison::Kind::greater);
}
