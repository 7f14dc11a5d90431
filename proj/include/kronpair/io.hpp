#pragma once

// JSON documents: run configs, certificates, construction results and
// witness reports. Objects keep their keys sorted and rationals are always
// "num/den" strings, so serialize -> parse -> serialize is byte-identical.
// Floating-point fields end in "_approx" and are never read back.

#include <json.hpp>

#include <optional>
#include <string>

#include "kronpair/constructions.hpp"
#include "kronpair/error.hpp"
#include "kronpair/kronecker.hpp"

namespace kronpair {

using Json = nlohmann::json;

std::string dump_canonical(const Json& j);
/// Throws ParseError on malformed text.
Json parse_json_text(const std::string& text);

Json rational_to_json(const BigRational& x);
BigRational rational_from_json(const Json& j);
Json integer_to_json(const BigInt& x);
BigInt integer_from_json(const Json& j);

std::string factor_to_text(const FactorSignature& f);
FactorSignature factor_from_text(const std::string& text);

Json ambient_to_json(const AmbientGroup& a);
AmbientPtr ambient_from_json(const Json& j);

Json element_to_json(const GroupElement& x);
GroupElement element_from_json(const AmbientPtr& ambient, const Json& j);

Json witness_to_json(const Witness& w);
Witness witness_from_json(const Json& j);
Json product_to_json(const ProductCharacter& g);
ProductCharacter product_from_json(const Json& j);

/// `ambient` may be null when every point is rational.
Json certificate_to_json(const KroneckerCertificate& c);
KroneckerCertificate certificate_from_json(const AmbientPtr& ambient, const Json& j);

Json spec_to_json(const PrecisionSpec& s);
PrecisionSpec spec_from_json(const Json& j);

Json pair_to_json(const PairRecord& p);
PairRecord pair_from_json(const AmbientPtr& ambient, const Json& j);

/// A parsed run config. `echo` is the canonical form with every default
/// filled in; it is embedded in results so they can be rebuilt.
struct RunConfig {
  AmbientPtr ambient;
  ElementStream stream;
  ConstructionConfig construction;
  std::optional<std::string> output;
  Json echo;
};

/// Throws InvalidConfig (or ParseError for malformed rationals).
RunConfig parse_run_config(const Json& j);
ElementStream stream_from_json(const AmbientPtr& ambient, const Json& j);

Json result_to_json(const ConstructionResult& r, const Json& config_echo);
ConstructionResult result_from_json(const Json& j);

Json report_to_json(const WitnessReport& r);

Json error_to_json(const Error& e);

}  // namespace kronpair
