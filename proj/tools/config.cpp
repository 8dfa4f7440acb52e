#include "config.hpp"

#include <fstream>

#include "json.hpp"
#include "sigrace/errors.hpp"

namespace sigrace::cli {

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::csv;
  if (text == "json") return Format::json;
  if (text == "human") return Format::human;
  throw DomainError("unknown format '" + text + "' (csv, json, human)");
}

void RunConfig::validate() const {
  if (prec < 16) throw DomainError("prec must be at least 16 bits");
  if (prec_cap < prec) throw DomainError("prec-cap must be at least prec");
  if (segment == 0 || parallel == 0 || budget == 0) throw DomainError("segment, parallel and budget must be positive");
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("config file " + path + ": " + e.what());
  }
  if (!j.is_object()) throw DomainError("config file " + path + " must hold a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "prec") base.prec = value.get<unsigned>();
      else if (key == "prec_cap") base.prec_cap = value.get<unsigned>();
      else if (key == "segment") base.segment = value.get<std::size_t>();
      else if (key == "parallel") base.parallel = value.get<unsigned>();
      else if (key == "budget") base.budget = value.get<std::uint64_t>();
      else if (key == "seed") base.seed = value.get<std::uint64_t>();
      else if (key == "format") base.format = parse_format(value.get<std::string>());
      else if (key == "output") base.output = value.get<std::string>();
      else throw DomainError("config file " + path + ": unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("config file " + path + ": " + e.what());
  }
  return base;
}

}  // namespace sigrace::cli
