#pragma once

// JSON documents for witnesses, certificates and calculator records, schema
// "sigma-race/1". Big integers and rationals travel as decimal strings.

#include <string>
#include <vector>

#include "json.hpp"
#include "sigrace/theorem.hpp"
#include "sigrace/witness.hpp"

namespace sigrace::io {

using nlohmann::json;

inline constexpr const char* kSchema = "sigma-race/1";

json newman_document(const NewmanWitness& w, const Certificate& cert, const OmegaCertificate& omega);
json triple_document(const Exponent& s, const std::vector<PrimeTripleWitness>& triples);
json crt_document(const CrtWitness& w);
json martin_document(const MartinNumber& m);

NewmanWitness newman_from_json(const json& j);
Certificate certificate_from_json(const json& j);

/// Runs a theorem calculator from its serialized inputs and returns the full
/// record (inputs included). Names: bounds, global, dominance, eventual,
/// always-less, always-less-sum, thma-min-d, thma2, zeta, zeta-threshold.
json evaluate_params(const std::string& calculator, const json& inputs);
const std::vector<std::string>& params_calculators();

struct VerifyReport {
  std::string kind;
  std::vector<std::string> checks;  // what was re-derived
  std::string verdict;
};

/// Re-derives everything in the document from its inputs alone. Throws
/// VerificationError on any disagreement, DomainError on malformed input.
VerifyReport verify(const json& doc, const PrecisionPolicy& policy = {});

// Field helpers shared with the CLI.
std::string q_str(const mpq_class& q);
mpq_class q_from(const json& j);
mpz_class z_from(const json& j);
std::string approx(const mpq_class& q, int digits = 15);

}  // namespace sigrace::io
