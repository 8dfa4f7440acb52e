#include "sigrace/serialize.hpp"

#include "sigrace/errors.hpp"
#include "sigrace/sigma.hpp"

namespace sigrace::io {

namespace {

json z_str(const mpz_class& z) { return z.get_str(); }

json comparison_json(const Comparison& c) {
  std::string kind = c.to_string();
  if (c.kind == Comparison::Kind::undecided) kind = "undecided";
  return {{"result", kind}, {"precision_bits", c.precision_bits}};
}

json zeta_json(const ZetaEnclosure& z) {
  return {{"s", q_str(z.s.value())}, {"lo", q_str(z.lo)},        {"hi", q_str(z.hi)},
          {"terms", z.terms_used},    {"lo_approx", approx(z.lo)}, {"hi_approx", approx(z.hi)}};
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json opt_q(const std::optional<mpq_class>& v) { return v ? json(q_str(*v)) : json(nullptr); }
json opt_z(const std::optional<mpz_class>& v) { return v ? z_str(*v) : json(nullptr); }
json opt_e(const std::optional<Exponent>& v) { return v ? json(q_str(v->value())) : json(nullptr); }

void differs(const std::string& field, const std::string& stored, const std::string& derived) {
  throw VerificationError(field + " differs: serialized " + stored + ", re-derived " + derived);
}

void same(const json& stored, const json& derived, const std::string& what) {
  if (stored != derived) differs(what, stored.dump(), derived.dump());
}

std::uint64_t u64_of(const json& inputs, const char* key) {
  if (!inputs.contains(key)) throw DomainError(std::string("missing input '") + key + "'");
  const json& v = inputs.at(key);
  mpz_class z = z_from(v);
  if (z < 0 || !z.fits_ulong_p()) throw DomainError(std::string("input '") + key + "' must be a nonnegative 64-bit integer");
  return z.get_ui();
}

Exponent exp_of(const json& inputs, const char* key) {
  if (!inputs.contains(key)) throw DomainError(std::string("missing input '") + key + "'");
  const json& v = inputs.at(key);
  return v.is_string() ? Exponent::parse(v.get<std::string>()) : Exponent(v.get<long>());
}

json comparison_kind(const Comparison& c) { return comparison_json(c).at("result"); }

json dominance_json(const DominanceCriterion& dc) {
  json clauses = json::array();
  for (const auto& cl : dc.clauses)
    clauses.push_back({{"name", cl.name}, {"status", clause_status_name(cl.status)}, {"detail", cl.detail}});
  return {{"claim", dc.claim},
          {"certified", dc.certified()},
          {"fired", opt(dc.fired)},
          {"clauses", clauses},
          {"s0", opt_e(dc.s0)},
          {"s0_real", opt_e(dc.s0_real)},
          {"epsilon", opt_q(dc.epsilon)},
          {"N", opt_z(dc.N)},
          {"zeta", dc.zeta ? zeta_json(*dc.zeta) : json(nullptr)}};
}

json bounds_json(const RatioBounds& b) {
  const mpq_class& lo = b.lo.exact();
  const mpq_class& hi = b.hi.exact();
  return {{"lo", q_str(lo)}, {"hi", q_str(hi)}, {"lo_approx", approx(lo)}, {"hi_approx", approx(hi)},
          {"provenance", b.provenance}};
}

}  // namespace

std::string q_str(const mpq_class& q) { return rational_to_string(q); }

mpq_class q_from(const json& j) {
  if (j.is_number_integer()) return mpq_class(j.get<long long>() >= 0 ? mpz_class(j.get<unsigned long>()) : mpz_class(j.get<long>()));
  if (!j.is_string()) throw DomainError("expected a rational as a string, got " + j.dump());
  return parse_rational(j.get<std::string>());
}

mpz_class z_from(const json& j) {
  if (j.is_number_unsigned()) return mpz_class(j.get<unsigned long>());
  if (j.is_number_integer()) return mpz_class(j.get<long>());
  if (!j.is_string()) throw DomainError("expected an integer as a decimal string, got " + j.dump());
  mpz_class z;
  if (z.set_str(j.get<std::string>(), 10) != 0) throw DomainError("not a decimal integer: " + j.get<std::string>());
  return z;
}

std::string approx(const mpq_class& q, int digits) { return Real::from_q(q, 256, MPFR_RNDN).to_string(digits); }

// ------------------------------------------------------------ witnesses

json newman_document(const NewmanWitness& w, const Certificate& cert, const OmegaCertificate& omega) {
  json witness = {{"a", w.a},
                  {"b", w.b},
                  {"c", w.c},
                  {"d", w.d},
                  {"k", w.k},
                  {"m_k", z_str(w.modulus.m)},
                  {"m_k_primes", w.modulus.primes},
                  {"n0", z_str(w.n0)},
                  {"n", z_str(w.n)},
                  {"y", z_str(w.y)},
                  {"delta", z_str(w.delta)},
                  {"A", z_str(w.A)},
                  {"B", z_str(w.B)},
                  {"t", z_str(w.t)},
                  {"q", z_str(w.q)},
                  {"q_status", primality_name(w.q_status)},
                  {"det_abs", z_str(w.det_abs)},
                  {"D", z_str(w.D)}};
  json certificate = {{"s", q_str(cert.s.value())},
                      {"upper_left", q_str(cert.upper_left)},
                      {"lower_right", q_str(cert.lower_right)},
                      {"ratio_bound", q_str(cert.ratio_bound)},
                      {"ratio_bound_approx", approx(cert.ratio_bound)},
                      {"verdict", verdict_name(cert.verdict)},
                      {"prec", cert.prec}};
  auto count = [](const CountCertificate& c) {
    return json{{"upper_left", c.upper_left}, {"lower_right", c.lower_right}, {"certified", c.certified}};
  };
  return {{"schema", kSchema},
          {"kind", "newman"},
          {"witness", witness},
          {"certificate", certificate},
          {"omega", {{"omega", count(omega.omega)}, {"big_omega", count(omega.big_omega)}}}};
}

NewmanWitness newman_from_json(const json& j) {
  NewmanWitness w;
  w.a = u64_of(j, "a");
  w.b = u64_of(j, "b");
  w.c = u64_of(j, "c");
  w.d = u64_of(j, "d");
  w.k = u64_of(j, "k");
  w.modulus.m = z_from(j.at("m_k"));
  w.modulus.primes = j.at("m_k_primes").get<std::vector<std::uint64_t>>();
  w.n0 = z_from(j.at("n0"));
  w.n = z_from(j.at("n"));
  w.y = z_from(j.at("y"));
  w.delta = z_from(j.at("delta"));
  w.A = z_from(j.at("A"));
  w.B = z_from(j.at("B"));
  w.t = z_from(j.at("t"));
  w.q = z_from(j.at("q"));
  w.q_status = parse_primality(j.at("q_status").get<std::string>());
  w.det_abs = z_from(j.at("det_abs"));
  w.D = z_from(j.at("D"));
  return w;
}

Certificate certificate_from_json(const json& j) {
  Certificate c;
  c.s = Exponent::from_q(q_from(j.at("s")));
  c.upper_left = q_from(j.at("upper_left"));
  c.lower_right = q_from(j.at("lower_right"));
  c.ratio_bound = q_from(j.at("ratio_bound"));
  c.verdict = parse_verdict(j.at("verdict").get<std::string>());
  c.prec = j.at("prec").get<unsigned>();
  return c;
}

json triple_document(const Exponent& s, const std::vector<PrimeTripleWitness>& triples) {
  json list = json::array();
  for (const auto& t : triples)
    list.push_back({{"p", z_str(t.p)},
                    {"status", primality_name(t.status)},
                    {"before", comparison_json(t.before)},
                    {"after", comparison_json(t.after)}});
  long n = triples.empty() ? 0 : triples.front().n_exp;
  json bound = triples.empty() ? json(nullptr) : z_str(triples.front().bound);
  return {{"schema", kSchema}, {"kind", "triple"}, {"s", q_str(s.value())}, {"n", n},
          {"bound", bound},    {"count", triples.size()}, {"triples", list}};
}

json crt_document(const CrtWitness& w) {
  return {{"schema", kSchema},
          {"kind", "crt"},
          {"a", w.a},
          {"b", w.b},
          {"d", w.d},
          {"swapped", w.swapped},
          {"s", q_str(w.s.value())},
          {"ell", w.ell},
          {"k", w.k},
          {"q", w.q},
          {"threshold", z_str(w.threshold)},
          {"p", z_str(w.p)},
          {"p_status", primality_name(w.p_status)},
          {"n", z_str(w.n)},
          {"at_n", comparison_json(w.at_n)},
          {"m", z_str(w.m)},
          {"m_status", primality_name(w.m_status)},
          {"at_m", comparison_json(w.at_m)}};
}

json martin_document(const MartinNumber& m) {
  return {{"schema", kSchema},          {"kind", "martin"},       {"z", z_str(m.z)},
          {"n", z_str(m.n)},            {"digit_count", m.digit_count}, {"z_mod_30", m.z_mod_30}};
}

// ------------------------------------------------------------ calculators

const std::vector<std::string>& params_calculators() {
  static const std::vector<std::string> names = {"bounds",          "global",     "dominance", "eventual",
                                                 "always-less",     "always-less-sum", "thma-min-d", "thma2",
                                                 "zeta",            "zeta-threshold"};
  return names;
}

json evaluate_params(const std::string& calculator, const json& inputs) {
  json in, result;
  auto spec4 = [&] {
    for (const char* key : {"a", "b", "c", "d"}) in[key] = u64_of(inputs, key);
  };
  auto A = [&](const char* key) { return in.at(key).get<std::uint64_t>(); };
  if (calculator == "bounds" || calculator == "global") {
    spec4();
    Exponent s = exp_of(inputs, "s");
    in["s"] = q_str(s.value());
    if (calculator == "bounds") {
      AdEqBcBounds b = bounds_ad_eq_bc(A("a"), A("b"), A("c"), A("d"), s);
      result = bounds_json(b.bounds);
      result["r1"] = z_str(b.r1);
      result["r2"] = z_str(b.r2);
    } else {
      GlobalBounds g = global_bounds_large_s(A("a"), A("b"), A("c"), A("d"), s);
      result = bounds_json(g.bounds);
      result["R"] = q_str(g.R);
      result["M"] = q_str(g.M);
      result["zeta"] = zeta_json(g.zeta);
    }
  } else if (calculator == "dominance" || calculator == "eventual") {
    spec4();
    result = dominance_json(calculator == "dominance" ? dominance_s0(A("a"), A("b"), A("c"), A("d"))
                                                      : eventual_dominance(A("a"), A("b"), A("c"), A("d")));
  } else if (calculator == "always-less" || calculator == "always-less-sum") {
    spec4();
    Exponent s0 = exp_of(inputs, "s0");
    in["s0"] = q_str(s0.value());
    result = dominance_json(calculator == "always-less"
                                ? always_less_check(A("a"), A("b"), A("c"), A("d"), s0)
                                : always_less_check_sumform(A("a"), A("b"), A("c"), A("d"), s0));
  } else if (calculator == "thma-min-d") {
    Exponent s0 = exp_of(inputs, "s0");
    in["s0"] = q_str(s0.value());
    mpz_class M = z_from(inputs.at("M"));
    in["M"] = z_str(M);
    for (const char* key : {"a", "b", "c"}) in[key] = u64_of(inputs, key);
    std::optional<mpz_class> check;
    if (inputs.contains("check_d") && !inputs.at("check_d").is_null()) check = z_from(inputs.at("check_d"));
    in["check_d"] = opt_z(check);
    MinDResult r = thmA_min_d(s0, M, A("a"), A("b"), A("c"), check);
    result = {{"zeta", zeta_json(r.zeta)},
              {"bound_lo", q_str(r.bound_lo)},
              {"bound_hi", q_str(r.bound_hi)},
              {"bound_approx", approx(r.bound_hi, 20)},
              {"min_d", z_str(r.min_d)},
              {"checked_d", opt_z(r.checked_d)},
              {"check", r.check ? json(validation_name(*r.check)) : json(nullptr)},
              {"eventual_N", z_str(r.eventual_N)}};
  } else if (calculator == "thma2") {
    mpz_class M = z_from(inputs.at("M"));
    in["M"] = z_str(M);
    for (const char* key : {"a", "b", "c"}) in[key] = u64_of(inputs, key);
    mpq_class q = q_from(inputs.at("q"));
    in["q"] = q_str(q);
    if (q.get_num() <= 0 || !q.get_num().fits_ulong_p() || !q.get_den().fits_ulong_p())
      throw DomainError("precondition: 0 < q < 1");
    ThmA2Params p = thmA_part2_params(M, A("a"), A("b"), A("c"), q.get_num().get_ui(), q.get_den().get_ui());
    result = {{"d", z_str(p.d)},
              {"x1", q_str(p.x1)},
              {"x2", q_str(p.x2)},
              {"alpha", q_str(p.alpha)},
              {"threshold", q_str(p.threshold)},
              {"s0", q_str(p.s0.value())},
              {"s0_real", opt_e(p.s0_real)},
              {"zeta", zeta_json(p.zeta)},
              {"claim", "sigma_s(an+b) < sigma_s(cn+d) for n <= M and > for n = M+1, every s >= s0"}};
  } else if (calculator == "zeta") {
    Exponent s = exp_of(inputs, "s");
    in["s"] = q_str(s.value());
    mpq_class radius = inputs.contains("radius") ? q_from(inputs.at("radius")) : mpq_class(1, 1000000000);
    in["radius"] = q_str(radius);
    result = zeta_json(zeta_enclosure(s, radius));
  } else if (calculator == "zeta-threshold") {
    mpq_class x = q_from(inputs.at("x"));
    in["x"] = q_str(x);
    ZetaThreshold t = solve_zeta_threshold(x, true);
    result = {{"s0", q_str(t.s.value())},
              {"s0_real", q_str(solve_zeta_threshold(x, false).s.value())},
              {"zeta", zeta_json(t.enclosure)}};
  } else {
    throw DomainError("unknown calculator '" + calculator + "'");
  }
  return {{"schema", kSchema}, {"kind", "params"}, {"calculator", calculator}, {"inputs", in}, {"result", result}};
}

// ------------------------------------------------------------ verify

namespace {

VerifyReport verify_newman(const json& doc) {
  VerifyReport rep{"newman", {}, ""};
  NewmanWitness w = newman_from_json(doc.at("witness"));
  check_newman_witness(w);
  rep.checks.push_back("witness identities (c n - m_k y = -d, a n + b = delta q, gcds, primality of q)");
  Certificate stored = certificate_from_json(doc.at("certificate"));
  Certificate fresh = certify_ratio(w, stored.s, stored.prec);
  if (stored.upper_left != fresh.upper_left) differs("upper_left", q_str(stored.upper_left), q_str(fresh.upper_left));
  if (stored.lower_right != fresh.lower_right)
    differs("lower_right", q_str(stored.lower_right), q_str(fresh.lower_right));
  if (stored.ratio_bound != fresh.ratio_bound)
    differs("ratio_bound", q_str(stored.ratio_bound), q_str(fresh.ratio_bound));
  if (stored.verdict != fresh.verdict) differs("verdict", verdict_name(stored.verdict), verdict_name(fresh.verdict));
  // The bound logic itself, independent of how certify_ratio got there.
  if (fresh.upper_left > mpq_class(w.D)) differs("upper_left <= D", q_str(fresh.upper_left), w.D.get_str());
  if ((fresh.ratio_bound < 1) != (fresh.verdict == Verdict::certified_less))
    differs("verdict vs ratio_bound", verdict_name(fresh.verdict), q_str(fresh.ratio_bound));
  rep.checks.push_back("certificate bounds re-derived at " + std::to_string(stored.prec) + " bits");
  if (doc.contains("omega")) {
    OmegaCertificate om = certify_omega(w);
    auto count = [](const CountCertificate& c) {
      return json{{"upper_left", c.upper_left}, {"lower_right", c.lower_right}, {"certified", c.certified}};
    };
    same(doc.at("omega"), json{{"omega", count(om.omega)}, {"big_omega", count(om.big_omega)}}, "omega certificate");
    rep.checks.push_back("omega/Omega counts");
  }
  rep.verdict = verdict_name(fresh.verdict);
  return rep;
}

VerifyReport verify_triple(const json& doc, const PrecisionPolicy& policy) {
  VerifyReport rep{"triple", {}, ""};
  Exponent s = Exponent::from_q(q_from(doc.at("s")));
  const json& list = doc.at("triples");
  long n = static_cast<long>(ceil_q(s.value()).get_si());
  mpz_class bound;
  mpz_ui_pow_ui(bound.get_mpz_t(), 2, static_cast<unsigned long>(n + 1));
  bound = 1 + bound * n;
  if (!list.empty() && z_from(doc.at("bound")) != bound) differs("bound", doc.at("bound").dump(), bound.get_str());
  for (const auto& t : list) {
    mpz_class p = z_from(t.at("p"));
    if (p <= bound) differs("p > 1 + n 2^(n+1)", p.get_str(), bound.get_str());
    Primality st = classify_prime(p);
    same(t.at("status"), primality_name(st), "primality of " + p.get_str());
    if (st == Primality::composite) throw VerificationError(p.get_str() + " is composite");
    json before = comparison_kind(compare_sigma(p - 1, p, s, policy));
    json after = comparison_kind(compare_sigma(p, p + 1, s, policy));
    same(t.at("before").at("result"), before, "sigma_s(p-1) vs sigma_s(p) at " + p.get_str());
    same(t.at("after").at("result"), after, "sigma_s(p) vs sigma_s(p+1) at " + p.get_str());
    if (before != "greater" || after != "less") throw VerificationError("no dip at p = " + p.get_str());
  }
  rep.checks.push_back("bound, primality and both comparisons for " + std::to_string(list.size()) + " primes");
  same(doc, triple_document(s, prime_triple_witness(s, list.size(), kDefaultPrimeBudget, policy)),
       "triple document");
  rep.checks.push_back("primes are the first above the bound");
  rep.verdict = "reproduced";
  return rep;
}

VerifyReport verify_crt(const json& doc, const PrecisionPolicy& policy) {
  VerifyReport rep{"crt", {}, ""};
  Exponent s = Exponent::from_q(q_from(doc.at("s")));
  const mpz_class a = z_from(doc.at("a")), b = z_from(doc.at("b")), d = z_from(doc.at("d"));
  const mpz_class q = z_from(doc.at("q")), p = z_from(doc.at("p")), n = z_from(doc.at("n")), m = z_from(doc.at("m"));
  const mpz_class ell = d - b;
  if (p % q != ell % q || p % a != d % a) throw VerificationError("p fails p = d - b (mod q), p = d (mod a)");
  if (p <= z_from(doc.at("threshold"))) throw VerificationError("p not above the threshold");
  if (a * n + d != p) throw VerificationError("a n + d != p");
  if (classify_prime(p) == Primality::composite || classify_prime(a * m + b) == Primality::composite)
    throw VerificationError("a claimed prime is composite");
  same(doc.at("at_n").at("result"), comparison_kind(compare_sigma(a * n + b, a * n + d, s, policy)), "comparison at n");
  same(doc.at("at_m").at("result"), comparison_kind(compare_sigma(a * m + b, a * m + d, s, policy)), "comparison at m");
  rep.checks.push_back("congruences, threshold, primality and both comparisons");
  const bool swapped = doc.at("swapped").get<bool>();
  std::uint64_t ua = a.get_ui(), ub = b.get_ui(), ud = d.get_ui();
  same(doc, crt_document(crt_witness(ua, swapped ? ud : ub, swapped ? ub : ud, s, q.get_ui(), kDefaultPrimeBudget, policy)),
       "crt document");
  rep.checks.push_back("p is the first admissible prime");
  rep.verdict = "reproduced";
  return rep;
}

}  // namespace

VerifyReport verify(const json& doc, const PrecisionPolicy& policy) {
  try {
    if (!doc.is_object() || !doc.contains("schema")) throw DomainError("not a sigma-race document");
    if (doc.at("schema") != kSchema) throw DomainError("unsupported schema " + doc.at("schema").dump());
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "newman") return verify_newman(doc);
    if (kind == "triple") return verify_triple(doc, policy);
    if (kind == "crt") return verify_crt(doc, policy);
    if (kind == "martin") {
      MartinNumber m = martin_number();
      same(doc, martin_document(m), "martin document");
      return {"martin", {"z rebuilt from the prime list", "z = 1 (mod 30)", "digit count"}, "reproduced"};
    }
    if (kind == "params") {
      json fresh = evaluate_params(doc.at("calculator").get<std::string>(), doc.at("inputs"));
      same(doc, fresh, "params record");
      std::string verdict = "reproduced";
      const json& r = fresh.at("result");
      if (r.contains("certified")) verdict = r.at("certified").get<bool>() ? "certified" : "inconclusive";
      return {"params", {"calculator re-run from inputs"}, verdict};
    }
    throw DomainError("unknown document kind '" + kind + "'");
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed document: ") + e.what());
  }
}

}  // namespace sigrace::io
