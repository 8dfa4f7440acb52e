#pragma once

// Races sigma_s(a*n + b) against sigma_s(c*n + d).

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sigrace/numerics.hpp"
#include "sigrace/progression.hpp"

namespace sigrace {

/// Which strict inequality counts as the event: left > right (gt) or
/// left < right (lt).
enum class Direction { gt, lt };

Direction parse_direction(std::string_view text);
const char* direction_name(Direction d);

struct ConditionA {
  bool nonnegative = true;
  bool a_positive = true;
  bool c_positive = true;
  bool independent = true;  // ad != bc
  mpz_class det;            // ad - bc

  bool satisfied() const { return nonnegative && a_positive && c_positive && independent; }
  /// "A-satisfied", "ad=bc", or "violation: ..."
  std::string classification() const;
};

ConditionA check_condition_A(long long a, long long b, long long c, long long d);

struct RaceSpec {
  std::uint64_t a = 1, b = 0, c = 1, d = 0;
  Exponent s;
  Direction dir = Direction::gt;

  ProgressionSpec left() const { return {a, b}; }
  ProgressionSpec right() const { return {c, d}; }
  bool ad_eq_bc() const;
  /// Throws DomainError unless a, c >= 1.
  void validate() const;
  /// Same race seen from the other side: (c, d, a, b) with the opposite
  /// direction.
  RaceSpec swapped() const;
};

struct RaceConfig {
  std::size_t segment = 1u << 16;
  unsigned parallel = 1;
  PrecisionPolicy policy;
};

/// Certified comparison of sigma_s(a*n + b) with sigma_s(c*n + d), from full
/// factorizations; escalates precision for non-integer s.
Comparison compare_at(const RaceSpec& spec, std::uint64_t n, const PrecisionPolicy& policy = {});

/// The two sides at n as exact values or balls.
std::pair<ScalarValue, ScalarValue> values_at(const RaceSpec& spec, std::uint64_t n, unsigned prec = 128);

struct CrossingResult {
  std::uint64_t n = 0;
  ScalarValue left = mpq_class(0);
  ScalarValue right = mpq_class(0);
  unsigned precision_used = 0;               // 0 when both sides are exact
  std::vector<std::uint64_t> undecided_skips;  // always empty for a returned result
  std::uint64_t ties_before = 0;             // n < crossing with left == right
};

struct RaceRow {
  std::uint64_t n;
  std::string left;
  std::string right;
  int sign;  // sign of left - right
};
using RowSink = std::function<void(const RaceRow&)>;

/// Smallest n <= limit where the direction inequality holds strictly.
std::optional<CrossingResult> first_crossing(const RaceSpec& spec, std::uint64_t limit, const RaceConfig& config = {},
                                             const RowSink& rows = {});

struct ConstancyReport {
  bool holds = true;
  std::optional<std::uint64_t> first_violation;
  std::uint64_t checked = 0;  // n values examined
};

/// Whether the direction inequality holds strictly for every n <= limit.
ConstancyReport scan_constancy(const RaceSpec& spec, std::uint64_t limit, const RaceConfig& config = {},
                               const RowSink& rows = {});

struct RaceStats {
  std::uint64_t limit = 0;
  std::uint64_t count_lt = 0, count_eq = 0, count_gt = 0;
  std::optional<mpz_class> sum_left, sum_right;  // integer s >= 0 only
  ScalarValue harm_lt = mpq_class(0);
  ScalarValue harm_gt = mpq_class(0);
};

/// Harmonic sums stay exact up to this limit and become balls above it.
inline constexpr std::uint64_t kExactHarmonicLimit = 10'000;

RaceStats race_stats(const RaceSpec& spec, std::uint64_t limit, const RaceConfig& config = {},
                     const RowSink& rows = {});

struct TableEntry {
  std::string key;  // "k=2" or "s=13"
  Exponent s;
  std::optional<std::uint64_t> n;
};

/// g(k): first crossing of sigma_s(6n+1) > sigma_s(6n) with s = (k-1)/k.
std::vector<TableEntry> table_g(int k_lo, int k_hi, std::uint64_t limit, const RaceConfig& config = {});

/// h(s): first crossing of sigma_s(5n+1) > sigma_s(2n+29999).
std::vector<TableEntry> table_h(const std::vector<Exponent>& s_list, std::uint64_t limit,
                                const RaceConfig& config = {});

}  // namespace sigrace
