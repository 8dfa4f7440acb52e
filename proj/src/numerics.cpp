#include "sigrace/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <vector>

#include "sigrace/errors.hpp"

namespace sigrace {

namespace {

mpfr_prec_t max_prec(const Ball& x, const Ball& y) { return std::max(x.prec(), y.prec()); }

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

// Exact integer v-th root of a nonnegative integer, if there is one.
std::optional<mpz_class> exact_root(const mpz_class& z, unsigned long v) {
  mpz_class r;
  if (mpz_root(r.get_mpz_t(), z.get_mpz_t(), v) != 0) return r;
  return std::nullopt;
}

mpq_class pow_q(const mpq_class& x, long e) {
  unsigned long m = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), x.get_num_mpz_t(), m);
  mpz_pow_ui(den.get_mpz_t(), x.get_den_mpz_t(), m);
  mpq_class r = e < 0 ? mpq_class(den, num) : mpq_class(num, den);
  r.canonicalize();
  return r;
}

// Ball for x^(u/v) through v-th roots; x > 0.
Ball pow_by_root(const mpq_class& x, const mpz_class& u, unsigned long v, unsigned prec) {
  Real xl = Real::from_q(x, prec, MPFR_RNDD);
  Real xh = Real::from_q(x, prec, MPFR_RNDU);
  Real rl(prec), rh(prec);
  mpfr_rootn_ui(rl.get(), xl.get(), v, MPFR_RNDD);
  mpfr_rootn_ui(rh.get(), xh.get(), v, MPFR_RNDU);
  Ball root(std::move(rl), std::move(rh));
  if (!mpz_class(abs(u)).fits_ulong_p()) throw DomainError("exponent numerator too large");
  if (u >= 0) return root.pow_ui(u.get_ui());
  Ball inv = root.pow_ui(mpz_class(-u).get_ui());
  return Ball::exact(mpq_class(1), prec) / inv;
}

// Ball for exp(s ln x); x > 0.
Ball pow_by_exp_log(const mpq_class& x, const mpq_class& s, unsigned prec) {
  Ball lx = Ball::exact(x, prec).log();
  Ball bs = Ball::exact(s, prec);
  return (lx * bs).exp();
}

}  // namespace

// ---------------------------------------------------------------- Real

std::string Real::to_string(int digits) const {
  std::vector<char> buf(static_cast<size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return std::string(buf.data());
}

// ------------------------------------------------------------ Exponent

Exponent::Exponent(long s) : value_(s), kind_(Kind::integer) {}

Exponent Exponent::from_q(const mpq_class& q) {
  mpq_class v = q;
  v.canonicalize();
  return Exponent(v, v.get_den() == 1 ? Kind::integer : Kind::rational);
}

Exponent Exponent::rational(long num, unsigned long den) {
  if (den == 0) throw DomainError("exponent denominator must be positive");
  return from_q(mpq_class(num, den));
}

Exponent Exponent::decimal(std::string_view literal) {
  mpq_class v = parse_rational(literal);
  return Exponent(v, v.get_den() == 1 ? Kind::integer : Kind::real);
}

Exponent Exponent::parse(std::string_view text) {
  if (text.find('.') != std::string_view::npos) return decimal(text);
  return from_q(parse_rational(text));
}

long Exponent::as_long() const {
  if (!is_integer() || !value_.get_num().fits_slong_p()) throw DomainError("exponent is not a machine integer");
  return value_.get_num().get_si();
}

Exponent Exponent::abs() const { return Exponent(::abs(value_), kind_); }
Exponent Exponent::negated() const { return Exponent(mpq_class(-value_), kind_); }

std::string Exponent::to_string() const {
  if (kind_ == Kind::real) {
    // Decimal literals print back as decimals.
    Real r = Real::from_q(value_, 256, MPFR_RNDN);
    return r.to_string(17);
  }
  return rational_to_string(value_);
}

// ----------------------------------------------------------------- Ball

Ball::Ball(Real lo, Real hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (mpfr_nan_p(lo_.get()) || mpfr_nan_p(hi_.get()) || mpfr_greater_p(lo_.get(), hi_.get()))
    throw DomainError("ball with invalid endpoints");
}

Ball Ball::exact(const mpq_class& q, unsigned prec) {
  return Ball(Real::from_q(q, prec, MPFR_RNDD), Real::from_q(q, prec, MPFR_RNDU));
}

Ball Ball::from_mid_rad(const mpq_class& mid, const mpq_class& rad, unsigned prec) {
  if (rad < 0) throw DomainError("negative ball radius");
  return Ball(Real::from_q(mid - rad, prec, MPFR_RNDD), Real::from_q(mid + rad, prec, MPFR_RNDU));
}

Real Ball::mid() const {
  Real m(prec() + 1);
  mpfr_add(m.get(), lo_.get(), hi_.get(), MPFR_RNDN);
  mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
  return m;
}

Real Ball::rad() const {
  Real m = mid();
  Real a(prec()), b(prec());
  mpfr_sub(a.get(), hi_.get(), m.get(), MPFR_RNDU);
  mpfr_sub(b.get(), m.get(), lo_.get(), MPFR_RNDU);
  return mpfr_greater_p(a.get(), b.get()) ? a : b;
}

bool Ball::contains(const mpq_class& q) const {
  return mpfr_cmp_q(lo_.get(), q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_.get(), q.get_mpq_t()) >= 0;
}

bool Ball::contains(const Ball& inner) const {
  return mpfr_lessequal_p(lo_.get(), inner.lo_.get()) && mpfr_greaterequal_p(hi_.get(), inner.hi_.get());
}

bool Ball::overlaps(const Ball& other) const {
  return mpfr_lessequal_p(lo_.get(), other.hi_.get()) && mpfr_lessequal_p(other.lo_.get(), hi_.get());
}

Ball operator+(const Ball& x, const Ball& y) {
  mpfr_prec_t p = max_prec(x, y);
  Real lo(p), hi(p);
  mpfr_add(lo.get(), x.lo_.get(), y.lo_.get(), MPFR_RNDD);
  mpfr_add(hi.get(), x.hi_.get(), y.hi_.get(), MPFR_RNDU);
  return Ball(std::move(lo), std::move(hi));
}

Ball operator-(const Ball& x, const Ball& y) {
  mpfr_prec_t p = max_prec(x, y);
  Real lo(p), hi(p);
  mpfr_sub(lo.get(), x.lo_.get(), y.hi_.get(), MPFR_RNDD);
  mpfr_sub(hi.get(), x.hi_.get(), y.lo_.get(), MPFR_RNDU);
  return Ball(std::move(lo), std::move(hi));
}

Ball operator*(const Ball& x, const Ball& y) {
  mpfr_prec_t p = max_prec(x, y);
  if (x.is_nonnegative() && y.is_nonnegative()) {
    Real lo(p), hi(p);
    mpfr_mul(lo.get(), x.lo_.get(), y.lo_.get(), MPFR_RNDD);
    mpfr_mul(hi.get(), x.hi_.get(), y.hi_.get(), MPFR_RNDU);
    return Ball(std::move(lo), std::move(hi));
  }
  const Real* xs[2] = {&x.lo_, &x.hi_};
  const Real* ys[2] = {&y.lo_, &y.hi_};
  Real lo(p), hi(p), t(p);
  mpfr_set_inf(lo.get(), 1);
  mpfr_set_inf(hi.get(), -1);
  for (const Real* a : xs) {
    for (const Real* b : ys) {
      mpfr_mul(t.get(), a->get(), b->get(), MPFR_RNDD);
      mpfr_min(lo.get(), lo.get(), t.get(), MPFR_RNDD);
      mpfr_mul(t.get(), a->get(), b->get(), MPFR_RNDU);
      mpfr_max(hi.get(), hi.get(), t.get(), MPFR_RNDU);
    }
  }
  return Ball(std::move(lo), std::move(hi));
}

Ball operator/(const Ball& x, const Ball& y) {
  if (mpfr_sgn(y.lo_.get()) <= 0 && mpfr_sgn(y.hi_.get()) >= 0) throw DomainError("division by a ball containing zero");
  mpfr_prec_t p = max_prec(x, y);
  if (x.is_nonnegative() && y.is_positive()) {
    Real lo(p), hi(p);
    mpfr_div(lo.get(), x.lo_.get(), y.hi_.get(), MPFR_RNDD);
    mpfr_div(hi.get(), x.hi_.get(), y.lo_.get(), MPFR_RNDU);
    return Ball(std::move(lo), std::move(hi));
  }
  Real rl(p), rh(p);
  mpfr_ui_div(rl.get(), 1, y.hi_.get(), MPFR_RNDD);
  mpfr_ui_div(rh.get(), 1, y.lo_.get(), MPFR_RNDU);
  return x * Ball(std::move(rl), std::move(rh));
}

Ball Ball::sqrt() const {
  if (mpfr_sgn(lo_.get()) < 0) throw DomainError("sqrt of a ball with negative part");
  Real lo(prec()), hi(prec());
  mpfr_sqrt(lo.get(), lo_.get(), MPFR_RNDD);
  mpfr_sqrt(hi.get(), hi_.get(), MPFR_RNDU);
  return Ball(std::move(lo), std::move(hi));
}

Ball Ball::log() const {
  if (!is_positive()) throw DomainError("log of a ball that is not positive");
  Real lo(prec()), hi(prec());
  mpfr_log(lo.get(), lo_.get(), MPFR_RNDD);
  mpfr_log(hi.get(), hi_.get(), MPFR_RNDU);
  return Ball(std::move(lo), std::move(hi));
}

Ball Ball::exp() const {
  Real lo(prec()), hi(prec());
  mpfr_exp(lo.get(), lo_.get(), MPFR_RNDD);
  mpfr_exp(hi.get(), hi_.get(), MPFR_RNDU);
  return Ball(std::move(lo), std::move(hi));
}

Ball Ball::pow_ui(unsigned long e) const {
  if (!is_nonnegative()) throw DomainError("pow_ui of a ball with negative part");
  Real lo(prec()), hi(prec());
  mpfr_pow_ui(lo.get(), lo_.get(), e, MPFR_RNDD);
  mpfr_pow_ui(hi.get(), hi_.get(), e, MPFR_RNDU);
  return Ball(std::move(lo), std::move(hi));
}

std::string Ball::to_string(int digits) const {
  return mid().to_string(digits) + " +/- " + rad().to_string(3);
}

// ---------------------------------------------------------- ScalarValue

Ball ScalarValue::to_ball(unsigned prec) const {
  if (is_exact()) return Ball::exact(exact(), prec);
  return ball();
}

std::string ScalarValue::to_string(int digits) const {
  if (is_exact()) return rational_to_string(exact());
  return ball().to_string(digits);
}

double ScalarValue::approx() const {
  if (is_exact()) return exact().get_d();
  return ball().mid().to_double();
}

namespace {
unsigned common_prec(const ScalarValue& x, const ScalarValue& y) {
  unsigned p = std::max(x.prec_hint(), y.prec_hint());
  return p == 0 ? 128 : p;
}
}  // namespace

ScalarValue operator+(const ScalarValue& x, const ScalarValue& y) {
  if (x.is_exact() && y.is_exact()) return mpq_class(x.exact() + y.exact());
  unsigned p = common_prec(x, y);
  return x.to_ball(p) + y.to_ball(p);
}

ScalarValue operator-(const ScalarValue& x, const ScalarValue& y) {
  if (x.is_exact() && y.is_exact()) return mpq_class(x.exact() - y.exact());
  unsigned p = common_prec(x, y);
  return x.to_ball(p) - y.to_ball(p);
}

ScalarValue operator*(const ScalarValue& x, const ScalarValue& y) {
  if (x.is_exact() && y.is_exact()) return mpq_class(x.exact() * y.exact());
  unsigned p = common_prec(x, y);
  return x.to_ball(p) * y.to_ball(p);
}

ScalarValue operator/(const ScalarValue& x, const ScalarValue& y) {
  if (x.is_exact() && y.is_exact()) {
    if (y.exact() == 0) throw DomainError("division by zero");
    return mpq_class(x.exact() / y.exact());
  }
  unsigned p = common_prec(x, y);
  return x.to_ball(p) / y.to_ball(p);
}

// ----------------------------------------------------------- Comparison

std::string Comparison::to_string() const {
  switch (kind) {
    case Kind::less: return "less";
    case Kind::equal: return "equal";
    case Kind::greater: return "greater";
    case Kind::undecided: return "undecided@" + std::to_string(precision_bits);
  }
  return "?";
}

Comparison compare(const ScalarValue& x, const ScalarValue& y) {
  if (x.is_exact() && y.is_exact()) {
    int c = cmp(x.exact(), y.exact());
    return {c < 0 ? Comparison::Kind::less : c > 0 ? Comparison::Kind::greater : Comparison::Kind::equal, 0};
  }
  unsigned p = common_prec(x, y);
  Ball bx = x.to_ball(p), by = y.to_ball(p);
  if (mpfr_less_p(bx.hi().get(), by.lo().get())) return {Comparison::Kind::less, p};
  if (mpfr_greater_p(bx.lo().get(), by.hi().get())) return {Comparison::Kind::greater, p};
  return {Comparison::Kind::undecided, p};
}

Comparison compare_escalating(
    const std::function<std::pair<ScalarValue, ScalarValue>(unsigned prec)>& evaluate,
    const PrecisionPolicy& policy) {
  unsigned prec = policy.start_bits;
  for (;;) {
    auto [x, y] = evaluate(prec);
    Comparison c = compare(x, y);
    if (c.decided()) return c;
    if (prec >= policy.cap_bits) return {Comparison::Kind::undecided, prec};
    prec = std::min(prec * 2, policy.cap_bits);
  }
}

// ----------------------------------------------------------- pow_scalar

ScalarValue pow_scalar(const mpq_class& x, const Exponent& s, unsigned prec) {
  if (x < 0) throw DomainError("pow_scalar: negative base");
  if (x == 0) {
    if (s.sign() > 0) return mpq_class(0);
    throw DomainError("pow_scalar: 0^s with s <= 0");
  }
  if (s.is_integer()) return pow_q(x, s.as_long());

  const mpq_class& e = s.value();
  const mpz_class& u = e.get_num();
  const mpz_class& v = e.get_den();
  if (v.fits_ulong_p()) {
    unsigned long vv = v.get_ui();
    auto rn = exact_root(x.get_num(), vv);
    auto rd = exact_root(x.get_den(), vv);
    if (rn && rd && u.fits_slong_p()) return pow_q(mpq_class(*rn, *rd), u.get_si());
    if (vv <= (1ul << 20)) return pow_by_root(x, u, vv, prec);
  }
  return pow_by_exp_log(x, e, prec);
}

// -------------------------------------------------------------- helpers

mpz_class floor_q(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

mpz_class ceil_q(const mpq_class& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

mpq_class parse_rational(std::string_view text) {
  std::string t(text);
  if (t.empty()) throw DomainError("empty number");
  bool neg = false;
  std::string_view body = t;
  if (body.front() == '-' || body.front() == '+') {
    neg = body.front() == '-';
    body.remove_prefix(1);
  }
  mpq_class q;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash), den = body.substr(slash + 1);
    if (!is_digits(num) || !is_digits(den)) throw DomainError("malformed fraction: " + t);
    q = mpq_class(mpz_class(std::string(num), 10), mpz_class(std::string(den), 10));
    if (q.get_den() == 0) throw DomainError("zero denominator: " + t);
    q.canonicalize();
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto ip = body.substr(0, dot), fp = body.substr(dot + 1);
    if ((!ip.empty() && !is_digits(ip)) || (!fp.empty() && !is_digits(fp)) || (ip.empty() && fp.empty()))
      throw DomainError("malformed decimal: " + t);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
    mpz_class num(std::string(ip.empty() ? "0" : ip) + std::string(fp), 10);
    q = mpq_class(num, den);
    q.canonicalize();
  } else {
    if (!is_digits(body)) throw DomainError("malformed integer: " + t);
    q = mpq_class(mpz_class(std::string(body), 10));
  }
  return neg ? mpq_class(-q) : q;
}

std::string rational_to_string(const mpq_class& value) {
  mpq_class q = value;
  q.canonicalize();
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace sigrace
