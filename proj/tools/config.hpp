#pragma once

#include <cstdint>
#include <string>

#include "sigrace/numerics.hpp"
#include "sigrace/race.hpp"

namespace sigrace::cli {

enum class Format { csv, json, human };

Format parse_format(const std::string& text);

struct RunConfig {
  unsigned prec = 128;
  unsigned prec_cap = 4096;
  std::size_t segment = 1u << 16;
  unsigned parallel = 1;
  std::uint64_t budget = 1'000'000;  // prime-search candidates
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  Format format = Format::human;
  std::string output;  // empty: stdout

  PrecisionPolicy policy() const { return {prec, prec_cap}; }
  RaceConfig race() const { return {segment, parallel, policy()}; }
  void validate() const;
};

/// Env var naming a JSON file with default settings.
inline constexpr const char* kConfigEnv = "SIGRACE_CONFIG";

/// Reads the keys prec, prec_cap, segment, parallel, budget, seed, format and
/// output; unknown keys are rejected so typos do not pass silently.
RunConfig load_config_file(const std::string& path, RunConfig base = {});

}  // namespace sigrace::cli
