#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "config.hpp"
#include "repro.hpp"
#include "sigrace/errors.hpp"
#include "sigrace/factor.hpp"
#include "sigrace/race.hpp"
#include "sigrace/serialize.hpp"
#include "sigrace/sigma.hpp"

namespace sigrace::cli {

namespace {

using nlohmann::json;

// Flags shared by several subcommands. Unset optionals mean "not given".
struct Flags {
  std::uint64_t a = 0, b = 0, c = 0, d = 0;
  std::string s = "1";
  std::string dir = "gt";
  std::uint64_t limit = 0;
  bool rows = false;
};

std::string scalar_approx(const ScalarValue& v) {
  if (v.is_exact()) {
    const mpq_class& q = v.exact();
    return q.get_den() == 1 ? q.get_num().get_str() : io::approx(q);
  }
  return v.ball().mid().to_string(15);
}

std::string scalar_exact(const ScalarValue& v) {
  return v.is_exact() ? rational_to_string(v.exact()) : v.to_string(30);
}

void flatten(const json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) flatten(value, prefix.empty() ? key : prefix + "." + key, os);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
  } else {
    os << prefix << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit_json_or_human(const json& doc, Format format, std::ostream& os) {
  if (format == Format::human)
    flatten(doc, "", os);
  else
    os << doc.dump(2) << "\n";
}

RaceSpec race_spec(const Flags& f) {
  RaceSpec spec;
  spec.a = f.a, spec.b = f.b, spec.c = f.c, spec.d = f.d;
  spec.s = Exponent::parse(f.s);
  spec.dir = parse_direction(f.dir);
  spec.validate();
  return spec;
}

json spec_json(const RaceSpec& spec) {
  return {{"a", spec.a}, {"b", spec.b}, {"c", spec.c}, {"d", spec.d},
          {"s", io::q_str(spec.s.value())}, {"dir", direction_name(spec.dir)}};
}

void add_spec_flags(CLI::App* sub, Flags& f, bool with_dir) {
  sub->add_option("--a", f.a, "coefficient a of a*n + b")->required();
  sub->add_option("--b", f.b, "offset b");
  sub->add_option("--c", f.c, "coefficient c of c*n + d")->required();
  sub->add_option("--d", f.d, "offset d");
  sub->add_option("--s", f.s, "exponent: integer, p/q or decimal")->capture_default_str();
  if (with_dir) sub->add_option("--dir", f.dir, "gt (left > right) or lt")->capture_default_str();
}

// ---------------------------------------------------------------- eval

struct EvalFlags {
  std::string n;
  std::string s = "1";
  std::string mod, residue;
};

void cmd_eval(const EvalFlags& f, const RunConfig& cfg, std::ostream& os) {
  mpz_class n;
  if (n.set_str(f.n, 10) != 0) throw DomainError("n must be a decimal integer, got '" + f.n + "'");
  if (n < 1) throw DomainError("n must be positive");
  Exponent s = Exponent::parse(f.s);
  FactorBudget budget;
  budget.seed = cfg.seed;
  Factorization fac = factorize(n, nullptr, budget);
  ScalarValue value = sigma_s(fac, s, cfg.prec);
  SmallFunctions sf = small_functions(fac);
  json doc = {{"n", n.get_str()},
              {"s", io::q_str(s.value())},
              {"factorization", fac.to_string()},
              {"sigma_s", scalar_exact(value)},
              {"sigma_s_approx", scalar_approx(value)},
              {"tau", sf.tau.get_str()},
              {"sigma", sf.sigma.get_str()},
              {"phi", sf.phi.get_str()},
              {"omega", sf.omega},
              {"Omega", sf.big_omega}};
  if (!f.mod.empty() || !f.residue.empty()) {
    if (f.mod.empty() || f.residue.empty()) throw DomainError("--mod and --residue go together");
    ScalarValue r = sigma_restricted(fac, mpz_class(f.mod), mpz_class(f.residue), s, cfg.prec);
    doc["mod"] = f.mod;
    doc["residue"] = f.residue;
    doc["sigma_s_restricted"] = scalar_exact(r);
  }
  if (cfg.format == Format::csv) {
    std::string header, row;
    for (const auto& [key, value] : doc.items()) {
      header += (header.empty() ? "" : ",") + key;
      row += (row.empty() ? "" : ",") + (value.is_string() ? value.get<std::string>() : value.dump());
    }
    os << header << "\n" << row << "\n";
  } else {
    emit_json_or_human(doc, cfg.format, os);
  }
}

// ---------------------------------------------------------------- race

void cmd_race(const std::string& mode, const Flags& f, const RunConfig& cfg, std::ostream& os) {
  RaceSpec spec = race_spec(f);
  if (f.limit < 1) throw DomainError("--limit must be at least 1");
  json rows = json::array();
  RowSink sink;
  if (f.rows) {
    if (cfg.format == Format::json) {
      sink = [&](const RaceRow& r) { rows.push_back({r.n, r.left, r.right, r.sign}); };
    } else {
      os << "n,left,right,sign\n";
      sink = [&](const RaceRow& r) { os << r.n << ',' << r.left << ',' << r.right << ',' << r.sign << '\n'; };
    }
  }
  json result;
  std::string summary;
  if (mode == "cross") {
    auto hit = first_crossing(spec, f.limit, cfg.race(), sink);
    if (hit) {
      result = {{"found", true},
                {"n", hit->n},
                {"left", scalar_exact(hit->left)},
                {"right", scalar_exact(hit->right)},
                {"precision_bits", hit->precision_used},
                {"ties_before", hit->ties_before}};
      summary = "cross: result=found n=" + std::to_string(hit->n) +
                " precision_bits=" + std::to_string(hit->precision_used) +
                " ties_before=" + std::to_string(hit->ties_before);
    } else {
      result = {{"found", false}};
      summary = "cross: result=none limit=" + std::to_string(f.limit);
    }
  } else if (mode == "scan") {
    ConstancyReport rep = scan_constancy(spec, f.limit, cfg.race(), sink);
    result = {{"holds", rep.holds},
              {"checked", rep.checked},
              {"first_violation", rep.first_violation ? json(*rep.first_violation) : json(nullptr)}};
    summary = std::string("scan: result=") + (rep.holds ? "holds" : "violated") +
              " checked=" + std::to_string(rep.checked) +
              (rep.first_violation ? " first_violation=" + std::to_string(*rep.first_violation) : "");
  } else {
    RaceStats st = race_stats(spec, f.limit, cfg.race(), sink);
    result = {{"count_lt", st.count_lt},
              {"count_eq", st.count_eq},
              {"count_gt", st.count_gt},
              {"sum_left", st.sum_left ? json(st.sum_left->get_str()) : json(nullptr)},
              {"sum_right", st.sum_right ? json(st.sum_right->get_str()) : json(nullptr)},
              {"harm_lt", scalar_exact(st.harm_lt)},
              {"harm_gt", scalar_exact(st.harm_gt)},
              {"harm_lt_approx", scalar_approx(st.harm_lt)},
              {"harm_gt_approx", scalar_approx(st.harm_gt)}};
    summary = "stats: limit=" + std::to_string(f.limit) + " count_lt=" + std::to_string(st.count_lt) +
              " count_eq=" + std::to_string(st.count_eq) + " count_gt=" + std::to_string(st.count_gt);
    if (st.sum_left) summary += " sum_left=" + st.sum_left->get_str() + " sum_right=" + st.sum_right->get_str();
    summary += " harm_lt=" + scalar_approx(st.harm_lt) + " harm_gt=" + scalar_approx(st.harm_gt);
  }
  if (cfg.format == Format::json) {
    json doc = {{"schema", io::kSchema}, {"kind", "race-" + mode}, {"spec", spec_json(spec)},
                {"limit", f.limit},      {"result", result}};
    if (f.rows) doc["rows"] = rows;
    os << doc.dump(2) << "\n";
  } else {
    // In CSV the summary is a comment line so the rows stay a clean table.
    os << (cfg.format == Format::csv ? "# " : "") << summary << "\n";
  }
}

// ---------------------------------------------------------------- witness

struct WitnessFlags {
  Flags spec;
  std::size_t k = 17;
  unsigned cert_prec = 256;
  std::size_t count = 3;
  std::uint64_t q = 0;
  std::string file;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DomainError(path + ": " + e.what());
  }
}

void cmd_witness(const std::string& mode, const WitnessFlags& f, const RunConfig& cfg, std::ostream& os) {
  const Flags& sp = f.spec;
  if (mode == "newman") {
    Exponent s = Exponent::parse(sp.s);
    NewmanWitness w = construct_newman_witness(sp.a, sp.b, sp.c, sp.d, f.k, cfg.budget);
    os << io::newman_document(w, certify_ratio(w, s, f.cert_prec), certify_omega(w)).dump(2) << "\n";
  } else if (mode == "triple") {
    Exponent s = Exponent::parse(sp.s);
    os << io::triple_document(s, prime_triple_witness(s, f.count, cfg.budget, cfg.policy())).dump(2) << "\n";
  } else if (mode == "crt") {
    Exponent s = Exponent::parse(sp.s);
    os << io::crt_document(crt_witness(sp.a, sp.b, sp.d, s, f.q, cfg.budget, cfg.policy())).dump(2) << "\n";
  } else if (mode == "martin") {
    os << io::martin_document(martin_number()).dump(2) << "\n";
  } else {
    io::VerifyReport rep = io::verify(read_json_file(f.file), cfg.policy());
    if (cfg.format == Format::json) {
      os << json{{"schema", io::kSchema}, {"kind", "verify-report"}, {"document", rep.kind},
                 {"checks", rep.checks},  {"verdict", rep.verdict}}
                .dump(2)
         << "\n";
    } else {
      os << "verify: kind=" << rep.kind << " verdict=" << rep.verdict << " status=reproduced\n";
      for (const auto& c : rep.checks) os << "  checked: " << c << "\n";
    }
  }
}

// ---------------------------------------------------------------- params

struct ParamsFlags {
  std::optional<std::uint64_t> a, b, c, d;
  std::optional<std::string> s, s0, M, check_d, q, x, radius;
};

void cmd_params(const std::string& calc, const ParamsFlags& f, const RunConfig& cfg, std::ostream& os) {
  json inputs = json::object();
  auto put = [&](const char* key, const auto& v) {
    if (v) inputs[key] = *v;
  };
  put("a", f.a), put("b", f.b), put("c", f.c), put("d", f.d);
  put("s", f.s), put("s0", f.s0), put("M", f.M), put("check_d", f.check_d), put("q", f.q), put("x", f.x),
      put("radius", f.radius);
  // Offsets default to zero like everywhere else in the CLI.
  for (const char* key : {"b", "d"})
    if (!inputs.contains(key)) inputs[key] = 0;
  emit_json_or_human(io::evaluate_params(calc, inputs), cfg.format, os);
}

// ---------------------------------------------------------------- repro

int cmd_repro(const std::string& table, const RunConfig& cfg, std::ostream& os) {
  std::vector<std::string> ids = table == "all" ? repro_tables() : std::vector<std::string>{table};
  json doc = json::array();
  std::size_t total = 0, passed = 0;
  for (const auto& id : ids) {
    auto cells = run_repro(id, cfg);
    std::size_t ok = 0;
    for (const auto& c : cells) {
      ok += c.pass;
      if (cfg.format == Format::json) {
        doc.push_back({{"table", c.table}, {"cell", c.key}, {"expected", c.expected}, {"got", c.got}, {"pass", c.pass}});
      } else if (cfg.format == Format::csv) {
        if (total == 0 && &c == &cells.front()) os << "table,cell,expected,got,status\n";
        os << c.table << ',' << c.key << ',' << c.expected << ',' << c.got << ',' << (c.pass ? "PASS" : "FAIL") << '\n';
      } else {
        os << (c.pass ? "PASS " : "FAIL ") << c.table << ' ' << c.key << " expected=" << c.expected
           << " got=" << c.got << '\n';
      }
    }
    total += cells.size();
    passed += ok;
    if (cfg.format == Format::human)
      os << id << ": " << ok << "/" << cells.size() << " cells pass\n";
  }
  if (cfg.format == Format::json)
    os << json{{"schema", io::kSchema}, {"kind", "repro"}, {"cells", doc}, {"passed", passed}, {"total", total}}.dump(2)
       << "\n";
  else if (cfg.format == Format::human && ids.size() > 1)
    os << "all: " << passed << "/" << total << " cells pass\n";
  return passed == total ? 0 : 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Divisor-sum races: evaluation, crossing search, witnesses, criteria, table reproduction"};
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig flagged;
  std::string config_path, format = "human";
  app.add_option("--config", config_path, "JSON config file (default from $SIGRACE_CONFIG)");
  auto* o_prec = app.add_option("--prec", flagged.prec, "working precision in bits");
  auto* o_cap = app.add_option("--prec-cap", flagged.prec_cap, "precision escalation cap in bits");
  auto* o_seg = app.add_option("--segment", flagged.segment, "sieve segment size");
  auto* o_par = app.add_option("--parallel", flagged.parallel, "worker threads");
  auto* o_bud = app.add_option("--budget", flagged.budget, "prime-search candidate budget");
  auto* o_seed = app.add_option("--seed", flagged.seed, "factorization seed");
  auto* o_fmt = app.add_option("--format", format, "csv, json or human");
  auto* o_out = app.add_option("--output,-o", flagged.output, "write output to this file");

  EvalFlags ef;
  auto* eval = app.add_subcommand("eval", "sigma_s(n) and the small arithmetic functions");
  eval->add_option("n", ef.n, "positive integer")->required();
  eval->add_option("--s", ef.s, "exponent")->capture_default_str();
  eval->add_option("--mod", ef.mod, "restrict to divisors d = residue (mod q)");
  eval->add_option("--residue", ef.residue, "residue for --mod");

  Flags rf;
  auto* race = app.add_subcommand("race", "sigma_s(an+b) against sigma_s(cn+d)");
  race->require_subcommand(1);
  for (const char* name : {"cross", "scan", "stats"}) {
    auto* sub = race->add_subcommand(name, std::string(name) == "cross" ? "first n where the direction holds"
                                           : std::string(name) == "scan" ? "does the direction hold for every n"
                                                                          : "counts and sums over n <= limit");
    add_spec_flags(sub, rf, true);
    sub->add_option("--limit", rf.limit, "largest n examined")->required();
    sub->add_flag("--rows", rf.rows, "emit n,left,right,sign rows");
  }

  WitnessFlags wf;
  auto* witness = app.add_subcommand("witness", "explicit witnesses and certificate checking");
  witness->require_subcommand(1);
  auto* w_newman = witness->add_subcommand("newman", "an+b = delta q against cn+d = m_k y");
  wf.spec.s = "1/2";
  add_spec_flags(w_newman, wf.spec, false);
  w_newman->add_option("--k", wf.k, "use primes up to p_k")->capture_default_str();
  w_newman->add_option("--cert-prec", wf.cert_prec, "certificate precision in bits")->capture_default_str();
  auto* w_triple = witness->add_subcommand("triple", "primes p with sigma_s(p-1) > sigma_s(p) < sigma_s(p+1)");
  w_triple->add_option("--s", wf.spec.s, "exponent")->required();
  w_triple->add_option("--count", wf.count, "number of primes")->capture_default_str();
  auto* w_crt = witness->add_subcommand("crt", "sign changes of sigma_s(an+b) - sigma_s(an+d)");
  w_crt->add_option("--a", wf.spec.a)->required();
  w_crt->add_option("--b", wf.spec.b)->required();
  w_crt->add_option("--d", wf.spec.d)->required();
  w_crt->add_option("--s", wf.spec.s, "exponent")->required();
  w_crt->add_option("--q", wf.q, "auxiliary prime (default: smallest admissible)");
  witness->add_subcommand("martin", "the explicit number z and (z-1)/30");
  auto* w_verify = witness->add_subcommand("verify", "re-derive a serialized document from scratch");
  w_verify->add_option("file", wf.file, "JSON document")->required()->check(CLI::ExistingFile);

  ParamsFlags pf;
  auto* params = app.add_subcommand("params", "theorem calculators");
  params->require_subcommand(1);
  static const std::map<std::string, std::string> about = {
      {"bounds", "ratio bounds for ad = bc"},
      {"global", "ratio bounds over all n"},
      {"dominance", "s0 past which a larger a, b wins for every n"},
      {"eventual", "eps, s0 and N for eventual dominance when a != c"},
      {"always-less", "check left < right for all n at s0, ad > bc"},
      {"always-less-sum", "the same check for ad < bc via a+b, c+d"},
      {"thma-min-d", "smallest valid d for s0, M, a, b, c"},
      {"thma2", "d, x1, x2 and s0 for a ratio q"},
      {"zeta", "rigorous enclosure of zeta(s)"},
      {"zeta-threshold", "smallest s with zeta(s) < x"},
  };
  for (const auto& name : io::params_calculators()) {
    auto* sub = params->add_subcommand(name, about.count(name) ? about.at(name) : "");
    sub->add_option("--a", pf.a);
    sub->add_option("--b", pf.b);
    sub->add_option("--c", pf.c);
    sub->add_option("--d", pf.d);
    sub->add_option("--s", pf.s, "exponent");
    sub->add_option("--s0", pf.s0, "threshold exponent");
    sub->add_option("--M", pf.M);
    sub->add_option("--check-d", pf.check_d, "validate this d");
    sub->add_option("--q", pf.q, "q1/q2");
    sub->add_option("--x", pf.x, "threshold for zeta(s) < x");
    sub->add_option("--radius", pf.radius, "enclosure width");
  }

  std::string table;
  auto* repro = app.add_subcommand("repro", "re-run a table and compare with the expected values");
  std::vector<std::string> choices = repro_tables();
  choices.push_back("all");
  repro->add_option("table", table, "table id")->required()->check(CLI::IsMember(choices));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    // Subcommand help requests arrive here too.
    if (e.get_exit_code() == 0) {
      out << e.what() << "\n";
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return static_cast<int>(ExitCode::domain);
  }

  std::ostringstream body;
  std::string output_path;
  try {
    RunConfig cfg;
    if (config_path.empty())
      if (const char* env = std::getenv(kConfigEnv); env && *env) config_path = env;
    if (!config_path.empty()) cfg = load_config_file(config_path, cfg);
    if (o_prec->count()) cfg.prec = flagged.prec;
    if (o_cap->count()) cfg.prec_cap = flagged.prec_cap;
    if (o_seg->count()) cfg.segment = flagged.segment;
    if (o_par->count()) cfg.parallel = flagged.parallel;
    if (o_bud->count()) cfg.budget = flagged.budget;
    if (o_seed->count()) cfg.seed = flagged.seed;
    if (o_fmt->count()) cfg.format = parse_format(format);
    if (o_out->count()) cfg.output = flagged.output;
    cfg.validate();
    output_path = cfg.output;

    int code = 0;
    if (eval->parsed()) {
      cmd_eval(ef, cfg, body);
    } else if (race->parsed()) {
      cmd_race(race->get_subcommands().front()->get_name(), rf, cfg, body);
    } else if (witness->parsed()) {
      cmd_witness(witness->get_subcommands().front()->get_name(), wf, cfg, body);
    } else if (params->parsed()) {
      cmd_params(params->get_subcommands().front()->get_name(), pf, cfg, body);
    } else if (repro->parsed()) {
      code = cmd_repro(table, cfg, body);
    }

    if (output_path.empty()) {
      out << body.str();
    } else {
      std::ofstream file(output_path, std::ios::binary);
      if (!file) throw DomainError("cannot write " + output_path);
      file << body.str();
    }
    return code;
  } catch (const UndecidedError& e) {
    out << body.str();
    err << "undecided at n=" << e.n() << " (precision cap " << e.precision_bits() << " bits): " << e.what() << "\n";
    return static_cast<int>(ExitCode::undecided);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sigrace::cli
