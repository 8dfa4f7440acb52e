// End-to-end acceptance run: one PASS/FAIL line per criterion, details on
// stderr. Exit status is nonzero when any criterion fails.

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "sigrace/sigma.hpp"
#include "sigrace/witness.hpp"

using namespace sigrace;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sigrace");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

bool contains(const std::string& text, const std::string& needle) { return text.find(needle) != std::string::npos; }

// Collects failure notes for one criterion.
struct Notes {
  std::vector<std::string> items;
  void require(bool ok, const std::string& what) {
    if (!ok) items.push_back(what);
  }
};

// Repro table fully passing, judged by its summary line "id: k/k cells pass".
void repro_table(Notes& notes, const std::string& id) {
  Run r = cli({"repro", id});
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);)
    if (line.rfind("FAIL", 0) == 0) notes.items.push_back(line);
  notes.require(r.code == 0, "repro " + id + " exit " + std::to_string(r.code));
}

const std::vector<std::string> kCrossing = {"race", "cross", "--a", "30", "--b", "1", "--c", "30", "--d", "0",
                                            "--s", "1/2", "--dir", "gt", "--limit", "3000000"};

void criterion1(Notes& n) {
  Run r = cli(kCrossing);
  n.require(r.code == 0, "exit " + std::to_string(r.code));
  n.require(contains(r.out, "result=found n=2338703 "), "output: " + r.out);
}

void criterion2(Notes& n) { repro_table(n, "g-table"); }
void criterion3(Notes& n) { repro_table(n, "h-table"); }

void criterion4(Notes& n) {
  repro_table(n, "scan-30n");
  repro_table(n, "example-2n5");
}

void criterion5(Notes& n) {
  Run md = cli({"--format", "json", "params", "thma-min-d", "--s0", "2", "--M", "999999", "--a", "5", "--b", "1",
                "--c", "2", "--check-d", "6224673"});
  n.require(md.code == 0, "thma-min-d exit " + std::to_string(md.code));
  if (md.code == 0) {
    auto j = nlohmann::json::parse(md.out);
    n.require(j["result"]["check"] == "valid", "d = 6224673 not validated");
    std::cerr << "  minimal d = " << j["result"]["min_d"].get<std::string>() << "\n";
  }
  Run t2 = cli({"--format", "json", "params", "thma2", "--M", "9999", "--a", "5", "--b", "1", "--c", "2", "--q",
                "1/3"});
  n.require(t2.code == 0, "thma2 exit " + std::to_string(t2.code));
  if (t2.code == 0) {
    auto r = nlohmann::json::parse(t2.out)["result"];
    n.require(r["d"] == "29999", "d = " + r["d"].dump());
    n.require(r["x1"] == "49997/49996", "x1 = " + r["x1"].dump());
    n.require(r["x2"] == "50001/49999", "x2 = " + r["x2"].dump());
    n.require(r["s0"] == "16", "s0 = " + r["s0"].dump());
  }
}

void criterion6(Notes& n) {
  Run r = cli({"witness", "martin"});
  n.require(r.code == 0, "exit " + std::to_string(r.code));
  if (r.code != 0) return;
  auto j = nlohmann::json::parse(r.out);
  n.require(j["digit_count"] == 1116, "digit_count " + j["digit_count"].dump());
  n.require(j["z_mod_30"] == 1, "z mod 30 = " + j["z_mod_30"].dump());
  mpz_class z(j["z"].get<std::string>()), q(j["n"].get<std::string>());
  n.require(30 * q + 1 == z, "z != 30 n + 1");
  n.require(q.get_str().size() == 1116, "independent digit count differs");
}

void criterion7(Notes& n) {
  fs::path dir = fs::temp_directory_path() / ("sigrace_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::string file = (dir / "newman.json").string();
  Run w = cli({"witness", "newman", "--a", "30", "--b", "0", "--c", "30", "--d", "1", "--k", "17", "--s", "1/2", "-o",
               file});
  n.require(w.code == 0, "newman exit " + std::to_string(w.code) + " " + w.err);
  if (w.code == 0) {
    std::ifstream in(file);
    auto j = nlohmann::json::parse(in);
    n.require(j["certificate"]["verdict"] == "CertifiedLess", "verdict " + j["certificate"]["verdict"].dump());
    n.require(j["witness"]["m_k_primes"].front() == 7 && j["witness"]["m_k_primes"].back() == 59,
              "m_k primes do not span 7..59");
    Run v = cli({"witness", "verify", file});
    n.require(v.code == 0 && contains(v.out, "verdict=CertifiedLess"), "verify: " + v.out + v.err);
  }
  fs::remove_all(dir);
}

void criterion8(Notes& n) {
  auto g = oracle::rng(8);
  int done = 0;
  while (done < 25) {
    std::uint64_t a = oracle::uniform(g, 1, 7), b = oracle::uniform(g, 0, 7), c = oracle::uniform(g, 1, 7),
                  d = oracle::uniform(g, 0, 7);
    if (a * d == b * c) continue;
    std::size_t k = oracle::uniform(g, 1, 6);
    NewmanWitness w = construct_newman_witness(a, b, c, d, k);
    ++done;
    std::string tag = std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," +
                      std::to_string(d) + " k=" + std::to_string(k);
    Factorization fl = factorize(mpz_class(a * w.n + b)), fr = factorize(mpz_class(c * w.n + d));
    for (const char* text : {"1/3", "1/2", "1"}) {
      Exponent s = Exponent::parse(text);
      Certificate cert = certify_ratio(w, s);
      if (cert.verdict != Verdict::certified_less) continue;
      auto kind = compare(sigma_s(fl, s), sigma_s(fr, s)).kind;
      n.require(kind == Comparison::Kind::less, "certificate contradicted at " + tag + " s=" + text);
    }
    SmallFunctions sl = small_functions(fl), sr = small_functions(fr);
    OmegaCertificate o = certify_omega(w);
    n.require(o.omega.upper_left >= sl.omega && o.omega.lower_right <= sr.omega, "omega bounds wrong at " + tag);
    n.require(o.big_omega.upper_left >= sl.big_omega && o.big_omega.lower_right <= sr.big_omega,
              "Omega bounds wrong at " + tag);
    n.require(!o.omega.certified || sl.omega < sr.omega, "omega certificate contradicted at " + tag);
    n.require(!o.big_omega.certified || sl.big_omega < sr.big_omega, "Omega certificate contradicted at " + tag);
  }
}

bool overlap(const ScalarValue& x, const ScalarValue& y) { return x.to_ball(256).overlaps(y.to_ball(256)); }

void criterion9(Notes& n) {
  auto g = oracle::rng(9);
  const Exponent half = Exponent::rational(1, 2);
  const char* exps[] = {"-1", "0", "1/2", "1", "2"};

  for (int done = 0; done < 200;) {
    std::uint64_t x = oracle::uniform(g, 1, 1000000), y = oracle::uniform(g, 1, 1000000);
    if (std::gcd(x, y) != 1) continue;
    ++done;
    Factorization fx = factorize(x), fy = factorize(y), fxy = factorize(mpz_class(x) * y);
    for (const char* t : exps) {
      Exponent s = Exponent::parse(t);
      ScalarValue p = sigma_s(fx, s) * sigma_s(fy, s), q = sigma_s(fxy, s);
      bool ok = s.is_integer() ? p.exact() == q.exact() : overlap(p, q);
      n.require(ok, "multiplicativity at " + std::to_string(x) + "*" + std::to_string(y) + " s=" + t);
    }
  }

  for (int i = 0; i < 200; ++i) {
    std::uint64_t x = oracle::uniform(g, 1, 3000), y = oracle::uniform(g, 1, 3000);
    Factorization fx = factorize(x), fy = factorize(y), fxy = factorize(mpz_class(x) * y);
    for (const char* t : {"0", "1/2", "1", "2"}) {
      Exponent s = Exponent::parse(t);
      ScalarValue prod = sigma_s(fx, s) * sigma_s(fy, s), mid = sigma_s(fxy, s);
      ScalarValue low = pow_scalar(mpz_class(x), s) * sigma_s(fy, s);
      auto upper = compare(prod, mid).kind, lower = compare(mid, low).kind;
      bool coprime_ball = std::gcd(x, y) == 1 && !s.is_integer();
      bool up_ok = upper == Comparison::Kind::greater || upper == Comparison::Kind::equal ||
                   (coprime_ball && overlap(prod, mid));
      bool lo_ok = lower == Comparison::Kind::greater || lower == Comparison::Kind::equal;
      n.require(up_ok && lo_ok, "sandwich at " + std::to_string(x) + "," + std::to_string(y) + " s=" + t);
    }
  }

  for (int i = 0; i < 200; ++i) {
    std::uint64_t m = oracle::uniform(g, 1, 1000000);
    for (long r : {1, 2, 3}) {
      auto [l, rr] = sigma_reflect_check(factorize(m), r);
      n.require(l.exact() == rr.exact(), "reflection at m=" + std::to_string(m));
    }
    auto [l, rr] = sigma_reflect_check(factorize(m), half);
    n.require(overlap(l, rr), "reflection at m=" + std::to_string(m) + " r=1/2");
  }

  for (std::uint64_t m = 1; m <= 1000; ++m) {
    Factorization f = factorize(m);
    for (long q : {2, 3, 4}) {
      for (long s : {-1, 0, 1, 2}) {
        mpq_class total = 0;
        for (long r = 0; r < q; ++r) total += sigma_restricted(f, q, r, s).exact();
        n.require(total == sigma_s(f, s).exact(), "residue sum at n=" + std::to_string(m));
      }
    }
  }

  for (const char* rad : {"1/1000", "1/1000000000", "1/1000000000000"}) {
    ZetaEnclosure z2 = zeta_enclosure(2, mpq_class(rad));
    Real pi2(512);
    mpfr_const_pi(pi2.get(), MPFR_RNDN);
    mpfr_sqr(pi2.get(), pi2.get(), MPFR_RNDN);
    mpfr_div_ui(pi2.get(), pi2.get(), 6, MPFR_RNDN);
    n.require(mpfr_cmp_q(pi2.get(), z2.lo.get_mpq_t()) > 0 && mpfr_cmp_q(pi2.get(), z2.hi.get_mpq_t()) < 0,
              std::string("zeta(2) enclosure misses pi^2/6 at radius ") + rad);
  }
  for (const char* t : {"3/2", "2", "3", "16"}) {
    Exponent s = Exponent::parse(t);
    ZetaEnclosure z = zeta_enclosure(s, mpq_class(1, 1000000));
    n.require(z.hi <= s.value() / (s.value() - 1), std::string("zeta hi above s/(s-1) at s=") + t);
  }
}

void criterion10(Notes& n) {
  std::vector<std::vector<std::string>> cmds = {
      kCrossing,
      {"repro", "g-table"},
      {"repro", "h-table"},
      {"repro", "scan-30n"},
      {"repro", "example-2n5"},
      {"params", "thma-min-d", "--s0", "2", "--M", "999999", "--a", "5", "--b", "1", "--c", "2", "--check-d",
       "6224673"},
      {"params", "thma2", "--M", "9999", "--a", "5", "--b", "1", "--c", "2", "--q", "1/3"},
      {"race", "cross", "--a", "30", "--b", "1", "--c", "30", "--d", "0", "--s", "1/2", "--limit", "200000",
       "--rows"},
  };
  for (const auto& cmd : cmds) {
    for (const char* fmt : {"human", "json", "csv"}) {
      std::vector<std::string> one = {"--format", fmt, "--parallel", "1"};
      std::vector<std::string> eight = {"--format", fmt, "--parallel", "8"};
      one.insert(one.end(), cmd.begin(), cmd.end());
      eight.insert(eight.end(), cmd.begin(), cmd.end());
      Run a = cli(one), b = cli(eight);
      n.require(a.code == b.code && a.out == b.out, "outputs differ for " + cmd[0] + " " + cmd[1] + " " + fmt);
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Notes&)> run;
  };
  const std::vector<Criterion> all = {
      {1, "crossing m = 2338703", criterion1},
      {2, "g-table", criterion2},
      {3, "h-table", criterion3},
      {4, "constancy scans", criterion4},
      {5, "theorem parameters", criterion5},
      {6, "Martin number", criterion6},
      {7, "witness certification", criterion7},
      {8, "certificate soundness", criterion8},
      {9, "invariant suites", criterion9},
      {10, "determinism", criterion10},
  };
  int failed = 0;
  for (const auto& c : all) {
    Notes notes;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(notes);
    } catch (const std::exception& e) {
      notes.items.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = notes.items.empty();
    failed += !ok;
    std::printf("%s %d %s (%.1fs)\n", ok ? "PASS" : "FAIL", c.id, c.name, secs);
    std::fflush(stdout);
    for (const auto& item : notes.items) std::cerr << "  " << item << "\n";
    std::cerr.flush();
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(all.size()) - failed, all.size());
  return failed ? 1 : 0;
}
