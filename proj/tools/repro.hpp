#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "json.hpp"

namespace sigrace::cli {

struct Cell {
  std::string table;
  std::string key;
  std::string expected;
  std::string got;
  bool pass = false;
};

/// Table ids in the order `repro all` runs them.
const std::vector<std::string>& repro_tables();

/// The expected values compiled into the binary.
const nlohmann::json& expected_tables();

std::vector<Cell> run_repro(const std::string& table, const RunConfig& config);

}  // namespace sigrace::cli
