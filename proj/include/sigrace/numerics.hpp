#pragma once

// Exact rationals, rigorous balls, and the comparison kernel every other
// module relies on.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "sigrace/real.hpp"

namespace sigrace {

/// Working precision and the escalation cap used when a comparison is
/// undecided.
struct PrecisionPolicy {
  unsigned start_bits = 128;
  unsigned cap_bits = 4096;
};

/// The exponent s of sigma_s. Always held as an exact rational; the kind
/// records how it was written and which evaluation route applies.
class Exponent {
 public:
  enum class Kind { integer, rational, real };

  Exponent() : Exponent(0) {}
  Exponent(long s);  // NOLINT: integers convert implicitly
  static Exponent rational(long num, unsigned long den);
  static Exponent from_q(const mpq_class& q);
  /// Decimal literal such as "0.9"; held exactly as a fraction over a power
  /// of ten.
  static Exponent decimal(std::string_view literal);
  /// Accepts "3", "-1", "1/2", "0.9".
  static Exponent parse(std::string_view text);

  const mpq_class& value() const noexcept { return value_; }
  Kind kind() const noexcept { return kind_; }
  bool is_integer() const noexcept { return kind_ == Kind::integer; }
  long as_long() const;  // requires is_integer()
  int sign() const { return sgn(value_); }
  Exponent abs() const;
  Exponent negated() const;
  double to_double() const { return value_.get_d(); }
  std::string to_string() const;

  friend bool operator==(const Exponent& x, const Exponent& y) { return x.value_ == y.value_; }

 private:
  Exponent(mpq_class v, Kind k) : value_(std::move(v)), kind_(k) {}
  mpq_class value_;
  Kind kind_;
};

/// A real number enclosed in [lo, hi] with directed rounding at a working
/// precision. Presented as midpoint +- radius.
class Ball {
 public:
  Ball(Real lo, Real hi);
  static Ball exact(const mpq_class& q, unsigned prec);
  static Ball from_mid_rad(const mpq_class& mid, const mpq_class& rad, unsigned prec);

  const Real& lo() const noexcept { return lo_; }
  const Real& hi() const noexcept { return hi_; }
  unsigned prec() const noexcept { return static_cast<unsigned>(lo_.prec()); }
  Real mid() const;
  Real rad() const;  // rounded up
  bool contains(const mpq_class& q) const;
  bool contains(const Ball& inner) const;
  bool overlaps(const Ball& other) const;
  bool is_nonnegative() const { return mpfr_sgn(lo_.get()) >= 0; }
  bool is_positive() const { return mpfr_sgn(lo_.get()) > 0; }

  friend Ball operator+(const Ball& x, const Ball& y);
  friend Ball operator-(const Ball& x, const Ball& y);
  friend Ball operator*(const Ball& x, const Ball& y);
  /// Requires y to exclude zero.
  friend Ball operator/(const Ball& x, const Ball& y);

  Ball sqrt() const;
  Ball log() const;
  Ball exp() const;
  Ball pow_ui(unsigned long e) const;  // requires lo >= 0

  std::string to_string(int digits = 20) const;

 private:
  Real lo_;
  Real hi_;
};

/// Either an exact rational or a ball.
class ScalarValue {
 public:
  ScalarValue(mpq_class q) : v_(std::move(q)) {}  // NOLINT
  ScalarValue(const mpz_class& z) : v_(mpq_class(z)) {}  // NOLINT
  ScalarValue(long z) : v_(mpq_class(z)) {}  // NOLINT
  ScalarValue(Ball b) : v_(std::move(b)) {}  // NOLINT

  bool is_exact() const noexcept { return std::holds_alternative<mpq_class>(v_); }
  const mpq_class& exact() const { return std::get<mpq_class>(v_); }
  const Ball& ball() const { return std::get<Ball>(v_); }
  /// The value as a ball; exact values become a tight enclosure at prec.
  Ball to_ball(unsigned prec) const;
  unsigned prec_hint() const { return is_exact() ? 0 : ball().prec(); }
  std::string to_string(int digits = 20) const;
  double approx() const;

  friend ScalarValue operator+(const ScalarValue& x, const ScalarValue& y);
  friend ScalarValue operator-(const ScalarValue& x, const ScalarValue& y);
  friend ScalarValue operator*(const ScalarValue& x, const ScalarValue& y);
  friend ScalarValue operator/(const ScalarValue& x, const ScalarValue& y);

 private:
  std::variant<mpq_class, Ball> v_;
};

struct Comparison {
  enum class Kind { less, equal, greater, undecided };
  Kind kind;
  unsigned precision_bits = 0;  // ball precision used; 0 for exact operands

  bool decided() const noexcept { return kind != Kind::undecided; }
  friend bool operator==(const Comparison& x, const Comparison& y) { return x.kind == y.kind; }
  std::string to_string() const;
};

/// x^s as an exact value when possible, otherwise a ball at prec bits.
ScalarValue pow_scalar(const mpq_class& x, const Exponent& s, unsigned prec = 128);

/// Less/Greater only when certain; Equal only from exact operands.
Comparison compare(const ScalarValue& x, const ScalarValue& y);

/// Re-evaluates both sides at doubling precision until the comparison is
/// decided or the cap is reached.
Comparison compare_escalating(
    const std::function<std::pair<ScalarValue, ScalarValue>(unsigned prec)>& evaluate,
    const PrecisionPolicy& policy = {});

/// Rigorous two-sided rational bound on zeta(s) for real s > 1.
struct ZetaEnclosure {
  Exponent s;
  mpq_class lo;
  mpq_class hi;
  std::uint64_t terms_used = 0;

  mpq_class width() const { return hi - lo; }
  bool contains(const Ball& b) const;
  Ball as_ball(unsigned prec) const;
};

struct ZetaOptions {
  std::uint64_t max_terms = 20'000'000;
};

/// lo = S_N + (N+1)^(1-s)/(s-1), hi = min(S_N + N^(1-s)/(s-1), s/(s-1)),
/// with N large enough that hi - lo <= target_radius.
ZetaEnclosure zeta_enclosure(const Exponent& s, const mpq_class& target_radius,
                             const ZetaOptions& options = {});

/// Result of searching for s with zeta(s) < x.
struct ZetaThreshold {
  Exponent s;
  ZetaEnclosure enclosure;  // certifies zeta(s) < x
};

/// integer_only: minimal integer s >= 2 with zeta(s) < x. Otherwise a real s
/// located by bisection to width 1e-6 below the integer answer.
ZetaThreshold solve_zeta_threshold(const mpq_class& x, bool integer_only,
                                   const ZetaOptions& options = {});

/// Decides zeta(s) < x, tightening the enclosure as needed. nullopt if the
/// enclosure still straddles x at the smallest radius tried.
std::optional<bool> zeta_less_than(const Exponent& s, const mpq_class& x,
                                   ZetaEnclosure* witness = nullptr,
                                   const ZetaOptions& options = {});

/// ceil for rationals; floor for rationals.
mpz_class ceil_q(const mpq_class& q);
mpz_class floor_q(const mpq_class& q);
/// Parses "p/q", an integer, or a decimal into an exact rational.
mpq_class parse_rational(std::string_view text);
std::string rational_to_string(const mpq_class& q);

}  // namespace sigrace
