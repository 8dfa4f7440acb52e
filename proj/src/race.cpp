#include "sigrace/race.hpp"

#include <charconv>
#include <cmath>
#include <exception>
#include <thread>

#include "sigrace/factor.hpp"
#include "sigrace/kernels.hpp"
#include "sigrace/sigma.hpp"

namespace sigrace {

namespace {

using u128 = unsigned __int128;
constexpr std::int8_t kUndecided = 2;

mpz_class to_mpz(u128 v) {
  mpz_class hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
  hi <<= 64;
  return hi + mpz_class(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
}

std::string u128_to_string(u128 v) {
  if (v == 0) return "0";
  char buf[48];
  int pos = 48;
  while (v > 0) {
    buf[--pos] = static_cast<char>('0' + static_cast<int>(v % 10));
    v /= 10;
  }
  return std::string(buf + pos, buf + 48);
}

std::string double_to_string(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

bool pow_checked(u128 x, unsigned long r, u128& out) {
  u128 result = 1;
  for (unsigned long i = 0; i < r; ++i) {
    if (__builtin_mul_overflow(result, x, &result)) return false;
  }
  out = result;
  return true;
}

mpz_class value_mpz(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return mpz_class(static_cast<unsigned long>(a)) * static_cast<unsigned long>(n) + static_cast<unsigned long>(b);
}

std::int8_t sign_of(const Comparison& c) {
  switch (c.kind) {
    case Comparison::Kind::less: return -1;
    case Comparison::Kind::equal: return 0;
    case Comparison::Kind::greater: return 1;
    case Comparison::Kind::undecided: return kUndecided;
  }
  return kUndecided;
}

struct SegmentOutcome {
  std::uint64_t n_lo = 0;
  std::vector<std::int8_t> sign;
  std::vector<std::pair<std::size_t, unsigned>> undecided;  // (index, bits)
  mpz_class sum_left, sum_right;
  std::vector<std::string> left, right;
};

class SegmentEvaluator {
 public:
  SegmentEvaluator(const RaceSpec& spec, std::uint64_t n_max, const RaceConfig& config)
      : spec_(spec), policy_(config.policy), isa_(kernels::active_isa()) {
    std::uint64_t max_value = std::max(spec.left().value(n_max), spec.right().value(n_max));
    const mpq_class& sv = spec.s.value();
    if (spec.s.is_integer()) {
      mode_ = Mode::exact;
      negative_ = spec.s.sign() < 0;
      r_ = static_cast<unsigned long>(std::labs(spec.s.as_long()));
    } else if (std::fabs(sv.get_d()) * std::log2(static_cast<double>(max_value) + 1.0) < 900.0) {
      mode_ = Mode::approx;
      s_double_ = sv.get_d();
      sqrt_ = sv == mpq_class(1, 2);
      // Per-side relative error of the double product stays below
      // (60 + 40 ceil|s|) units of 2^-53; the band is eight times that.
      double gamma = (60.0 + 40.0 * std::ceil(std::fabs(s_double_))) * std::ldexp(1.0, -53);
      tol_ = 8.0 * gamma;
    } else {
      mode_ = Mode::direct;
      return;
    }
    primes_.emplace(max_value);
    build_tables(max_value);
  }

  SegmentOutcome evaluate(std::uint64_t n_lo, std::size_t count, bool want_sums, bool want_rows) const {
    SegmentOutcome out;
    out.n_lo = n_lo;
    out.sign.assign(count, 0);
    if (want_rows) {
      out.left.resize(count);
      out.right.resize(count);
    }
    switch (mode_) {
      case Mode::exact: evaluate_exact(out, count, want_sums, want_rows); break;
      case Mode::approx: evaluate_approx(out, count, want_rows); break;
      case Mode::direct: evaluate_direct(out, count, want_sums, want_rows); break;
    }
    return out;
  }

 private:
  enum class Mode { exact, approx, direct };

  void build_tables(std::uint64_t max_value) {
    const auto& ps = primes_->primes();
    offset_.resize(ps.size() + 1);
    std::size_t total = 0;
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
      offset_[pi] = total;
      std::uint64_t p = ps[pi];
      unsigned amax = 0;
      for (u128 pk = p; pk <= max_value; pk *= p) ++amax;
      total += amax + 1;
    }
    offset_[ps.size()] = total;
    if (mode_ == Mode::exact) {
      exact_table_.assign(total, 0);
      for (std::size_t pi = 0; pi < ps.size(); ++pi) {
        u128 pr = 0;
        bool ok = pow_checked(ps[pi], r_, pr);
        u128 term = 1, sum = 1;
        for (std::size_t j = offset_[pi] + 1; j < offset_[pi + 1]; ++j) {
          ok = ok && !__builtin_mul_overflow(term, pr, &term) && !__builtin_add_overflow(sum, term, &sum);
          exact_table_[j] = ok ? sum : 0;
        }
      }
      return;
    }
    approx_table_.assign(total, 1.0);
    Real s = Real::from_q(spec_.s.value(), 128, MPFR_RNDN);
    Real base(128), t(128), term(128), sum(128);
    for (std::size_t pi = 0; pi < ps.size(); ++pi) {
      mpfr_set_ui(base.get(), ps[pi], MPFR_RNDN);
      mpfr_pow(t.get(), base.get(), s.get(), MPFR_RNDN);
      mpfr_set_ui(term.get(), 1, MPFR_RNDN);
      mpfr_set_ui(sum.get(), 1, MPFR_RNDN);
      for (std::size_t j = offset_[pi] + 1; j < offset_[pi + 1]; ++j) {
        mpfr_mul(term.get(), term.get(), t.get(), MPFR_RNDN);
        mpfr_add(sum.get(), sum.get(), term.get(), MPFR_RNDN);
        approx_table_[j] = mpfr_get_d(sum.get(), MPFR_RNDN);
      }
    }
  }

  // Certified fallback at a single n; records undecided outcomes.
  void fallback(SegmentOutcome& out, std::size_t i) const {
    Comparison c = compare_at(spec_, out.n_lo + i, policy_);
    out.sign[i] = sign_of(c);
    if (!c.decided()) out.undecided.emplace_back(i, c.precision_bits);
  }

  void fill_row_exact(SegmentOutcome& out, std::size_t i) const {
    auto [l, r] = values_at(spec_, out.n_lo + i, policy_.start_bits);
    out.left[i] = l.to_string();
    out.right[i] = r.to_string();
  }

  void evaluate_exact(SegmentOutcome& out, std::size_t count, bool want_sums, bool want_rows) const {
    std::vector<u128> acc[2];
    std::vector<std::uint8_t> ovf[2];
    std::vector<std::uint64_t> rem;
    const ProgressionSpec sides[2] = {spec_.left(), spec_.right()};
    for (int side = 0; side < 2; ++side) {
      auto& a = acc[side];
      auto& o = ovf[side];
      a.assign(count, 1);
      o.assign(count, 0);
      primes_->sieve(sides[side], out.n_lo, count, rem, [&](std::size_t i, std::size_t pi, unsigned alpha) {
        u128 t = exact_table_[offset_[pi] + alpha];
        if (t == 0 || __builtin_mul_overflow(a[i], t, &a[i])) o[i] = 1;
      });
      for (std::size_t i = 0; i < count; ++i) {
        if (rem[i] <= 1) continue;
        u128 f;
        if (!pow_checked(rem[i], r_, f) || __builtin_add_overflow(f, 1, &f) || __builtin_mul_overflow(a[i], f, &a[i]))
          o[i] = 1;
      }
    }

    if (!negative_) {
      bool narrow = true;
      for (std::size_t i = 0; i < count && narrow; ++i)
        narrow = !ovf[0][i] && !ovf[1][i] && (acc[0][i] >> 64) == 0 && (acc[1][i] >> 64) == 0;
      if (narrow) {
        std::vector<std::uint64_t> l(count), r(count);
        for (std::size_t i = 0; i < count; ++i) {
          l[i] = static_cast<std::uint64_t>(acc[0][i]);
          r[i] = static_cast<std::uint64_t>(acc[1][i]);
        }
        kernels::classify_u64(l.data(), r.data(), out.sign.data(), count, isa_);
      } else {
        for (std::size_t i = 0; i < count; ++i) {
          if (ovf[0][i] || ovf[1][i]) {
            fallback(out, i);
          } else {
            out.sign[i] = static_cast<std::int8_t>((acc[0][i] > acc[1][i]) - (acc[0][i] < acc[1][i]));
          }
        }
      }
      if (want_sums || want_rows) {
        for (std::size_t i = 0; i < count; ++i) {
          if (ovf[0][i] || ovf[1][i]) {
            auto [l, r] = values_at(spec_, out.n_lo + i);
            if (want_sums) {
              out.sum_left += l.exact().get_num();
              out.sum_right += r.exact().get_num();
            }
            if (want_rows) {
              out.left[i] = l.to_string();
              out.right[i] = r.to_string();
            }
            continue;
          }
          if (want_sums) {
            out.sum_left += to_mpz(acc[0][i]);
            out.sum_right += to_mpz(acc[1][i]);
          }
          if (want_rows) {
            out.left[i] = u128_to_string(acc[0][i]);
            out.right[i] = u128_to_string(acc[1][i]);
          }
        }
      }
      return;
    }

    // s = -r: compare sigma_r(A) B^r with sigma_r(B) A^r.
    for (std::size_t i = 0; i < count; ++i) {
      std::uint64_t n = out.n_lo + i;
      u128 ar, br, lhs, rhs;
      bool ok = !ovf[0][i] && !ovf[1][i] && pow_checked(spec_.left().value(n), r_, ar) &&
                pow_checked(spec_.right().value(n), r_, br) && !__builtin_mul_overflow(acc[0][i], br, &lhs) &&
                !__builtin_mul_overflow(acc[1][i], ar, &rhs);
      if (ok) {
        out.sign[i] = static_cast<std::int8_t>((lhs > rhs) - (lhs < rhs));
      } else {
        fallback(out, i);
      }
      if (want_rows) fill_row_exact(out, i);
    }
  }

  void evaluate_approx(SegmentOutcome& out, std::size_t count, bool want_rows) const {
    std::vector<double> acc[2];
    std::vector<std::uint64_t> rem;
    const ProgressionSpec sides[2] = {spec_.left(), spec_.right()};
    for (int side = 0; side < 2; ++side) {
      auto& a = acc[side];
      a.assign(count, 1.0);
      primes_->sieve(sides[side], out.n_lo, count, rem, [&](std::size_t i, std::size_t pi, unsigned alpha) {
        a[i] *= approx_table_[offset_[pi] + alpha];
      });
      if (sqrt_) {
        kernels::finalize_sqrt(a.data(), rem.data(), count, isa_);
      } else {
        for (std::size_t i = 0; i < count; ++i) {
          if (rem[i] > 1) a[i] *= 1.0 + std::pow(static_cast<double>(rem[i]), s_double_);
        }
      }
    }
    kernels::classify_double(acc[0].data(), acc[1].data(), tol_, out.sign.data(), count, isa_);
    for (std::size_t i = 0; i < count; ++i) {
      if (out.sign[i] == 0) fallback(out, i);
      if (want_rows) {
        out.left[i] = double_to_string(acc[0][i]);
        out.right[i] = double_to_string(acc[1][i]);
      }
    }
  }

  void evaluate_direct(SegmentOutcome& out, std::size_t count, bool want_sums, bool want_rows) const {
    for (std::size_t i = 0; i < count; ++i) {
      fallback(out, i);
      if (want_rows) fill_row_exact(out, i);
      (void)want_sums;  // direct mode only serves non-integer s
    }
  }

  RaceSpec spec_;
  PrecisionPolicy policy_;
  kernels::Isa isa_;
  Mode mode_ = Mode::direct;
  std::optional<SievePrimes> primes_;
  std::vector<std::size_t> offset_;
  std::vector<u128> exact_table_;  // sigma_r(p^alpha); 0 marks overflow
  std::vector<double> approx_table_;
  unsigned long r_ = 0;
  bool negative_ = false;
  double s_double_ = 0.0;
  bool sqrt_ = false;
  double tol_ = 0.0;
};

// Evaluates segments in batches of config.parallel and hands them to
// consume in increasing n; consume returns false to stop. Results depend only
// on the segment size, never on the thread count.
template <class Consume>
void drive(const SegmentEvaluator& ev, std::uint64_t n_lo, std::uint64_t n_hi, const RaceConfig& config,
           bool want_sums, bool want_rows, Consume&& consume) {
  if (config.segment == 0) throw DomainError("segment size must be positive");
  const unsigned width = std::max(1u, config.parallel);
  std::uint64_t next = n_lo;
  while (next <= n_hi) {
    std::vector<std::pair<std::uint64_t, std::size_t>> jobs;
    while (jobs.size() < width && next <= n_hi) {
      std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(config.segment, n_hi - next + 1));
      jobs.emplace_back(next, count);
      next += count;
    }
    std::vector<SegmentOutcome> results(jobs.size());
    std::vector<std::exception_ptr> errors(jobs.size());
    auto work = [&](std::size_t j) {
      try {
        results[j] = ev.evaluate(jobs[j].first, jobs[j].second, want_sums, want_rows);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    };
    if (jobs.size() == 1) {
      work(0);
    } else {
      std::vector<std::thread> threads;
      threads.reserve(jobs.size());
      for (std::size_t j = 0; j < jobs.size(); ++j) threads.emplace_back(work, j);
      for (auto& t : threads) t.join();
    }
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      if (errors[j]) std::rethrow_exception(errors[j]);
      if (!consume(results[j])) return;
    }
  }
}

[[noreturn]] void throw_undecided(const SegmentOutcome& o, std::size_t i) {
  unsigned bits = 0;
  for (auto [idx, b] : o.undecided) {
    if (idx == i) bits = b;
  }
  std::uint64_t n = o.n_lo + i;
  throw UndecidedError(n, bits,
                       "comparison undecided at n = " + std::to_string(n) + " after " + std::to_string(bits) + " bits");
}

void prepare(const RaceSpec& spec, std::uint64_t limit) {
  spec.validate();
  if (limit == 0) throw DomainError("limit must be at least 1");
  check_sieve_range(spec.left(), 1, limit);
  check_sieve_range(spec.right(), 1, limit);
}

bool is_event(const RaceSpec& spec, int sign) { return spec.dir == Direction::gt ? sign > 0 : sign < 0; }

}  // namespace

Direction parse_direction(std::string_view text) {
  if (text == "gt" || text == ">") return Direction::gt;
  if (text == "lt" || text == "<") return Direction::lt;
  throw DomainError("direction must be gt or lt, got '" + std::string(text) + "'");
}

const char* direction_name(Direction d) { return d == Direction::gt ? "gt" : "lt"; }

std::string ConditionA::classification() const {
  if (!nonnegative) return "violation: negative parameter";
  if (!a_positive) return "violation: a = 0";
  if (!c_positive) return "violation: c = 0";
  if (!independent) return "ad=bc";
  return "A-satisfied (ad-bc = " + det.get_str() + ")";
}

ConditionA check_condition_A(long long a, long long b, long long c, long long d) {
  ConditionA r;
  r.nonnegative = a >= 0 && b >= 0 && c >= 0 && d >= 0;
  r.a_positive = a > 0;
  r.c_positive = c > 0;
  r.det = mpz_class(static_cast<long>(a)) * static_cast<long>(d) - mpz_class(static_cast<long>(b)) * static_cast<long>(c);
  r.independent = r.det != 0;
  return r;
}

bool RaceSpec::ad_eq_bc() const {
  return mpz_class(static_cast<unsigned long>(a)) * static_cast<unsigned long>(d) ==
         mpz_class(static_cast<unsigned long>(b)) * static_cast<unsigned long>(c);
}

void RaceSpec::validate() const {
  if (a == 0) throw DomainError("race requires a >= 1");
  if (c == 0) throw DomainError("race requires c >= 1");
}

RaceSpec RaceSpec::swapped() const {
  return RaceSpec{c, d, a, b, s, dir == Direction::gt ? Direction::lt : Direction::gt};
}

std::pair<ScalarValue, ScalarValue> values_at(const RaceSpec& spec, std::uint64_t n, unsigned prec) {
  if (n == 0) throw DomainError("n = 0 is outside the domain");
  Factorization fl = factorize(value_mpz(spec.a, spec.b, n));
  Factorization fr = factorize(value_mpz(spec.c, spec.d, n));
  return {sigma_s(fl, spec.s, prec), sigma_s(fr, spec.s, prec)};
}

Comparison compare_at(const RaceSpec& spec, std::uint64_t n, const PrecisionPolicy& policy) {
  if (n == 0) throw DomainError("n = 0 is outside the domain");
  Factorization fl = factorize(value_mpz(spec.a, spec.b, n));
  Factorization fr = factorize(value_mpz(spec.c, spec.d, n));
  if (spec.s.is_integer()) return compare(sigma_s(fl, spec.s), sigma_s(fr, spec.s));
  return compare_escalating(
      [&](unsigned prec) { return std::make_pair(sigma_s(fl, spec.s, prec), sigma_s(fr, spec.s, prec)); }, policy);
}

std::optional<CrossingResult> first_crossing(const RaceSpec& spec, std::uint64_t limit, const RaceConfig& config,
                                             const RowSink& rows) {
  prepare(spec, limit);
  SegmentEvaluator ev(spec, limit, config);
  std::optional<std::uint64_t> hit;
  std::uint64_t ties = 0;
  drive(ev, 1, limit, config, false, static_cast<bool>(rows), [&](const SegmentOutcome& o) {
    for (std::size_t i = 0; i < o.sign.size(); ++i) {
      int sg = o.sign[i];
      if (sg == kUndecided) throw_undecided(o, i);
      if (rows) rows({o.n_lo + i, o.left[i], o.right[i], sg});
      if (is_event(spec, sg)) {
        hit = o.n_lo + i;
        return false;
      }
      if (sg == 0) ++ties;
    }
    return true;
  });
  if (!hit) return std::nullopt;
  CrossingResult result;
  result.n = *hit;
  result.ties_before = ties;
  Comparison c = compare_at(spec, *hit, config.policy);
  if (!is_event(spec, sign_of(c))) throw std::logic_error("crossing at n = " + std::to_string(*hit) + " not reproduced");
  result.precision_used = c.precision_bits;
  auto [l, r] = values_at(spec, *hit, c.precision_bits ? c.precision_bits : config.policy.start_bits);
  result.left = std::move(l);
  result.right = std::move(r);
  return result;
}

ConstancyReport scan_constancy(const RaceSpec& spec, std::uint64_t limit, const RaceConfig& config,
                               const RowSink& rows) {
  prepare(spec, limit);
  SegmentEvaluator ev(spec, limit, config);
  ConstancyReport report;
  drive(ev, 1, limit, config, false, static_cast<bool>(rows), [&](const SegmentOutcome& o) {
    for (std::size_t i = 0; i < o.sign.size(); ++i) {
      int sg = o.sign[i];
      if (sg == kUndecided) throw_undecided(o, i);
      if (rows) rows({o.n_lo + i, o.left[i], o.right[i], sg});
      ++report.checked;
      if (!is_event(spec, sg)) {
        report.holds = false;
        report.first_violation = o.n_lo + i;
        return false;
      }
    }
    return true;
  });
  return report;
}

RaceStats race_stats(const RaceSpec& spec, std::uint64_t limit, const RaceConfig& config, const RowSink& rows) {
  prepare(spec, limit);
  SegmentEvaluator ev(spec, limit, config);
  RaceStats st;
  st.limit = limit;
  const bool sums = spec.s.is_integer() && spec.s.sign() >= 0;
  const bool exact_harm = limit <= kExactHarmonicLimit;
  mpz_class sum_l = 0, sum_r = 0;
  mpq_class hq_lt = 0, hq_gt = 0;
  constexpr unsigned kHarmPrec = 128;
  Real lt_lo(kHarmPrec), lt_hi(kHarmPrec), gt_lo(kHarmPrec), gt_hi(kHarmPrec), tmp(kHarmPrec);
  for (Real* r : {&lt_lo, &lt_hi, &gt_lo, &gt_hi}) mpfr_set_ui(r->get(), 0, MPFR_RNDN);
  auto add_recip = [&](Real& lo, Real& hi, std::uint64_t n) {
    mpfr_ui_div(tmp.get(), 1, Real::from_z(mpz_class(static_cast<unsigned long>(n)), 64, MPFR_RNDN).get(), MPFR_RNDD);
    mpfr_add(lo.get(), lo.get(), tmp.get(), MPFR_RNDD);
    mpfr_ui_div(tmp.get(), 1, Real::from_z(mpz_class(static_cast<unsigned long>(n)), 64, MPFR_RNDN).get(), MPFR_RNDU);
    mpfr_add(hi.get(), hi.get(), tmp.get(), MPFR_RNDU);
  };
  drive(ev, 1, limit, config, sums, static_cast<bool>(rows), [&](const SegmentOutcome& o) {
    for (std::size_t i = 0; i < o.sign.size(); ++i) {
      int sg = o.sign[i];
      std::uint64_t n = o.n_lo + i;
      if (sg == kUndecided) throw_undecided(o, i);
      if (rows) rows({n, o.left[i], o.right[i], sg});
      if (sg == 0) {
        ++st.count_eq;
        continue;
      }
      if (sg < 0) {
        ++st.count_lt;
        if (exact_harm) hq_lt += mpq_class(1, static_cast<unsigned long>(n));
        else add_recip(lt_lo, lt_hi, n);
      } else {
        ++st.count_gt;
        if (exact_harm) hq_gt += mpq_class(1, static_cast<unsigned long>(n));
        else add_recip(gt_lo, gt_hi, n);
      }
    }
    if (sums) {
      sum_l += o.sum_left;
      sum_r += o.sum_right;
    }
    return true;
  });
  if (sums) {
    st.sum_left = sum_l;
    st.sum_right = sum_r;
  }
  if (exact_harm) {
    st.harm_lt = hq_lt;
    st.harm_gt = hq_gt;
  } else {
    st.harm_lt = Ball(std::move(lt_lo), std::move(lt_hi));
    st.harm_gt = Ball(std::move(gt_lo), std::move(gt_hi));
  }
  return st;
}

std::vector<TableEntry> table_g(int k_lo, int k_hi, std::uint64_t limit, const RaceConfig& config) {
  if (k_lo < 2 || k_hi < k_lo) throw DomainError("table_g requires 2 <= k_lo <= k_hi");
  std::vector<TableEntry> out;
  for (int k = k_lo; k <= k_hi; ++k) {
    RaceSpec spec{6, 1, 6, 0, Exponent::rational(k - 1, static_cast<unsigned long>(k)), Direction::gt};
    auto hit = first_crossing(spec, limit, config);
    out.push_back({"k=" + std::to_string(k), spec.s, hit ? std::optional(hit->n) : std::nullopt});
  }
  return out;
}

std::vector<TableEntry> table_h(const std::vector<Exponent>& s_list, std::uint64_t limit, const RaceConfig& config) {
  std::vector<TableEntry> out;
  for (const Exponent& s : s_list) {
    if (s.value() <= 1) throw DomainError("table_h requires s > 1");
    RaceSpec spec{5, 1, 2, 29999, s, Direction::gt};
    auto hit = first_crossing(spec, limit, config);
    out.push_back({"s=" + s.to_string(), s, hit ? std::optional(hit->n) : std::nullopt});
  }
  return out;
}

}  // namespace sigrace
