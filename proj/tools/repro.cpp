#include "repro.hpp"

#include <algorithm>

#include "expected_tables.inc"
#include "sigrace/errors.hpp"
#include "sigrace/race.hpp"
#include "sigrace/witness.hpp"

namespace sigrace::cli {

namespace {

using nlohmann::json;

RaceSpec spec_of(const json& j, const Exponent& s, Direction dir) {
  RaceSpec spec;
  spec.a = j.at("a").get<std::uint64_t>();
  spec.b = j.at("b").get<std::uint64_t>();
  spec.c = j.at("c").get<std::uint64_t>();
  spec.d = j.at("d").get<std::uint64_t>();
  spec.s = s;
  spec.dir = dir;
  return spec;
}

Cell cell(const std::string& table, const std::string& key, const std::string& expected, const std::string& got) {
  return {table, key, expected, got, expected == got};
}

std::string found(const std::optional<std::uint64_t>& n) { return n ? std::to_string(*n) : "none"; }

std::string constancy(const ConstancyReport& r) {
  return r.holds ? "holds" : "violated at n=" + std::to_string(*r.first_violation);
}

// Numeric keys ("2", "10") in numeric order.
std::vector<std::pair<long, std::uint64_t>> numeric_cells(const json& cells) {
  std::vector<std::pair<long, std::uint64_t>> out;
  for (const auto& [key, value] : cells.items()) out.emplace_back(std::stol(key), value.get<std::uint64_t>());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Cell> g_table(const json& t, const RunConfig& cfg) {
  auto cells = numeric_cells(t.at("cells"));
  auto rows = table_g(static_cast<int>(cells.front().first), static_cast<int>(cells.back().first),
                      t.at("limit").get<std::uint64_t>(), cfg.race());
  std::vector<Cell> out;
  for (std::size_t i = 0; i < cells.size(); ++i)
    out.push_back(cell("g-table", "g(" + std::to_string(cells[i].first) + ")", std::to_string(cells[i].second),
                       found(rows.at(i).n)));
  return out;
}

std::vector<Cell> h_table(const json& t, const RunConfig& cfg) {
  auto cells = numeric_cells(t.at("cells"));
  std::vector<Exponent> s_list;
  for (const auto& c : cells) s_list.emplace_back(c.first);
  auto rows = table_h(s_list, t.at("limit").get<std::uint64_t>(), cfg.race());
  std::vector<Cell> out;
  for (std::size_t i = 0; i < cells.size(); ++i)
    out.push_back(cell("h-table", "h(" + std::to_string(cells[i].first) + ")", std::to_string(cells[i].second),
                       found(rows.at(i).n)));
  return out;
}

std::vector<Cell> m_sigma_half(const json& t, const RunConfig& cfg) {
  const json& sp = t.at("spec");
  RaceSpec spec = spec_of(sp, Exponent::parse(sp.at("s").get<std::string>()), parse_direction(sp.at("dir").get<std::string>()));
  auto hit = first_crossing(spec, t.at("limit").get<std::uint64_t>(), cfg.race());
  return {cell("m-sigma-half", "m", std::to_string(t.at("expected").get<std::uint64_t>()),
               found(hit ? std::optional<std::uint64_t>(hit->n) : std::nullopt))};
}

std::vector<Cell> scan_30n(const json& t, const RunConfig& cfg) {
  std::vector<Cell> out;
  const auto limit = t.at("limit").get<std::uint64_t>();
  for (const auto& text : t.at("exponents")) {
    Exponent s = Exponent::parse(text.get<std::string>());
    RaceSpec spec = spec_of(t.at("spec"), s, Direction::lt);
    std::string got = constancy(scan_constancy(spec, limit, cfg.race()));
    if (got != "holds") {
      // Say whether the first failure is a tie and where the race actually reverses.
      RaceSpec rev = spec;
      rev.dir = Direction::gt;
      auto hit = first_crossing(rev, limit, cfg.race());
      got += hit ? "; first reversal n=" + std::to_string(hit->n) : "; ties only, no reversal";
    }
    out.push_back(cell("scan-30n", "s=" + s.to_string() + " n<=" + std::to_string(limit), "holds", got));
  }
  return out;
}

std::vector<Cell> example_2n5(const json& t, const RunConfig& cfg) {
  const auto limit = t.at("limit").get<std::uint64_t>();
  const Exponent flip_s = Exponent::parse(t.at("flip_s").get<std::string>());
  const auto flip_n = t.at("flip_n").get<std::uint64_t>();
  std::vector<Cell> out;
  RaceSpec sigma = spec_of(t.at("spec"), Exponent(1), Direction::lt);
  out.push_back(cell("example-2n5", "s=1 lt n<=" + std::to_string(limit), "holds",
                     constancy(scan_constancy(sigma, limit, cfg.race()))));
  RaceSpec half = spec_of(t.at("spec"), flip_s, Direction::lt);
  out.push_back(cell("example-2n5", "s=" + flip_s.to_string() + " lt n<=" + std::to_string(flip_n - 1), "holds",
                     constancy(scan_constancy(half, flip_n - 1, cfg.race()))));
  half.dir = Direction::gt;
  auto hit = first_crossing(half, limit, cfg.race());
  out.push_back(cell("example-2n5", "s=" + flip_s.to_string() + " first gt", std::to_string(flip_n),
                     found(hit ? std::optional<std::uint64_t>(hit->n) : std::nullopt)));
  return out;
}

std::vector<Cell> martin_digits(const json& t) {
  MartinNumber m = martin_number();
  return {cell("martin-digits", "digit_count", std::to_string(t.at("digit_count").get<std::size_t>()),
               std::to_string(m.digit_count)),
          cell("martin-digits", "z mod 30", std::to_string(t.at("z_mod_30").get<unsigned long>()),
               std::to_string(m.z_mod_30))};
}

}  // namespace

const std::vector<std::string>& repro_tables() {
  static const std::vector<std::string> ids = {"g-table",  "h-table",     "m-sigma-half",
                                               "scan-30n", "example-2n5", "martin-digits"};
  return ids;
}

const nlohmann::json& expected_tables() {
  static const nlohmann::json data = nlohmann::json::parse(kExpectedTablesJson);
  return data;
}

std::vector<Cell> run_repro(const std::string& table, const RunConfig& config) {
  const json& data = expected_tables();
  if (!data.contains(table)) throw DomainError("unknown table '" + table + "'");
  const json& t = data.at(table);
  if (table == "g-table") return g_table(t, config);
  if (table == "h-table") return h_table(t, config);
  if (table == "m-sigma-half") return m_sigma_half(t, config);
  if (table == "scan-30n") return scan_30n(t, config);
  if (table == "example-2n5") return example_2n5(t, config);
  return martin_digits(t);
}

}  // namespace sigrace::cli
