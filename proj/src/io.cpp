#include "kronpair/io.hpp"

#include <algorithm>
#include <initializer_list>
#include <regex>
#include <set>
#include <sstream>

namespace kronpair {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, what); }
[[noreturn]] void bad_config(const std::string& what) { throw Error(ErrorCode::InvalidConfig, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

bool has(const Json& j, const char* key) { return j.is_object() && j.contains(key) && !j.at(key).is_null(); }

void only_keys(const Json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) bad_config(where + " must be an object");
  for (const auto& [k, v] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* s) { return k == s; })) {
      bad_config("unknown key '" + k + "' in " + where);
    }
  }
}

std::uint64_t get_u64(const Json& j, const std::string& what) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  bad(what + " must be a non-negative integer");
}

bool get_bool(const Json& j, const std::string& what) {
  if (!j.is_boolean()) bad(what + " must be true or false");
  return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& what) {
  if (!j.is_string()) bad(what + " must be a string");
  return j.get<std::string>();
}

std::optional<FactorIndex> optional_index(const Json& j, const char* key) {
  if (!has(j, key)) return std::nullopt;
  return get_u64(j.at(key), key);
}

Json optional_index_json(const std::optional<FactorIndex>& i) { return i ? Json(*i) : Json(nullptr); }

Json rungs_to_json(const LadderCharacter& g) {
  Json out = Json::array();
  for (const auto& r : g.rungs()) out.push_back(Json::array({integer_to_json(r.level), r.value.to_string()}));
  return out;
}

std::vector<Rung> rungs_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) bad("rungs must be a non-empty array");
  std::vector<Rung> out;
  for (const auto& r : j) {
    if (!r.is_array() || r.size() != 2) bad("a rung is [level, value]");
    out.push_back(Rung{integer_from_json(r[0]), UnitAngle(rational_from_json(r[1]))});
  }
  return out;
}

Json factor_character_to_json(const FactorCharacter& c) {
  return std::visit([](const auto& g) { return witness_to_json(Witness(g)); }, c);
}

Json point_to_json(const Point& p) {
  Json out = Json::object();
  if (const auto* r = std::get_if<BigRational>(&p)) {
    out["rational"] = rational_to_json(*r);
  } else {
    out["element"] = element_to_json(std::get<GroupElement>(p));
  }
  return out;
}

Point point_from_json(const AmbientPtr& ambient, const Json& j) {
  if (has(j, "rational")) return rational_from_json(j.at("rational"));
  if (has(j, "element")) {
    if (!ambient) bad("element points need an ambient group");
    return element_from_json(ambient, j.at("element"));
  }
  bad("a point is {\"rational\": ...} or {\"element\": ...}");
}

Json angles_to_json(const std::vector<UnitAngle>& v) {
  Json out = Json::array();
  for (const auto& a : v) out.push_back(a.to_string());
  return out;
}

std::vector<UnitAngle> angles_from_json(const Json& j) {
  if (!j.is_array()) bad("expected an array of angles");
  std::vector<UnitAngle> out;
  for (const auto& a : j) out.emplace_back(rational_from_json(a));
  return out;
}

Json independence_to_json(const std::optional<IndependenceResult>& r) {
  if (!r) return nullptr;
  Json ce = Json::array();
  for (const auto& [pos, c] : r->counterexample) ce.push_back(Json::array({pos, integer_to_json(c)}));
  return Json{{"independent", r->independent}, {"combinations", r->combinations}, {"counterexample", ce}};
}

std::optional<IndependenceResult> independence_from_json(const Json& j) {
  if (j.is_null()) return std::nullopt;
  IndependenceResult r;
  r.independent = get_bool(field(j, "independent"), "independent");
  r.combinations = get_u64(field(j, "combinations"), "combinations");
  for (const auto& e : field(j, "counterexample")) {
    if (!e.is_array() || e.size() != 2) bad("a counterexample term is [position, coefficient]");
    r.counterexample.emplace_back(get_u64(e[0], "position"), integer_from_json(e[1]));
  }
  return r;
}

std::string chord_text(const BigRational& turns) {
  std::ostringstream os;
  os.precision(6);
  os << chord_approx(turns);
  return os.str();
}

}  // namespace

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

Json rational_to_json(const BigRational& x) { return x.to_string(); }

BigRational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return BigRational(BigInt(j.dump()));
  if (!j.is_string()) bad("a rational is a \"num/den\" string");
  try {
    return BigRational::parse(j.get<std::string>());
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    bad("malformed rational '" + j.get<std::string>() + "'");
  }
}

Json integer_to_json(const BigInt& x) { return to_string(x); }

BigInt integer_from_json(const Json& j) {
  if (j.is_number_integer()) return BigInt(j.dump());
  if (!j.is_string()) bad("an integer is a decimal string");
  static const std::regex digits("-?[0-9]+");
  const auto s = j.get<std::string>();
  if (!std::regex_match(s, digits)) bad("malformed integer '" + s + "'");
  return BigInt(s);
}

std::string factor_to_text(const FactorSignature& f) { return f.describe(); }

FactorSignature factor_from_text(const std::string& text) {
  static const std::regex prufer(R"(C\(([0-9]+)\^inf\))");
  static const std::regex cyclic(R"(Z\(([0-9]+)\))");
  std::smatch m;
  if (text == "Q") return FactorSignature::rationals();
  if (std::regex_match(text, m, prufer)) return FactorSignature::prufer(BigInt(m[1].str()));
  if (std::regex_match(text, m, cyclic)) return FactorSignature::cyclic(BigInt(m[1].str()));
  bad("unknown factor '" + text + "' (expected Q, C(p^inf) or Z(n))");
}

Json ambient_to_json(const AmbientGroup& a) {
  Json factors = Json::array();
  for (const auto& [idx, sig] : a.listed_factors()) factors.push_back(Json::array({idx, factor_to_text(sig)}));
  return Json{{"factors", factors},
              {"default", a.default_factor() ? Json(factor_to_text(*a.default_factor())) : Json(nullptr)}};
}

AmbientPtr ambient_from_json(const Json& j) {
  only_keys(j, {"factors", "default"}, "ambient");
  std::map<FactorIndex, FactorSignature> factors;
  if (has(j, "factors")) {
    const Json& list = j.at("factors");
    if (!list.is_array()) bad("ambient factors must be an array");
    for (const auto& f : list) {
      if (!f.is_array() || f.size() != 2) bad("a factor is [index, \"Q\" | \"C(p^inf)\" | \"Z(n)\"]");
      const FactorIndex idx = get_u64(f[0], "factor index");
      if (!factors.emplace(idx, factor_from_text(get_string(f[1], "factor"))).second) {
        bad("factor " + std::to_string(idx) + " listed twice");
      }
    }
  }
  std::optional<FactorSignature> def;
  if (has(j, "default")) def = factor_from_text(get_string(j.at("default"), "default factor"));
  if (factors.empty() && !def) bad_config("the ambient group has no factors");
  return make_ambient(std::move(factors), std::move(def));
}

Json element_to_json(const GroupElement& x) {
  Json out = Json::array();
  for (const auto& [idx, c] : x.support()) out.push_back(Json::array({idx, c.to_string()}));
  return out;
}

GroupElement element_from_json(const AmbientPtr& ambient, const Json& j) {
  if (!j.is_array()) bad("an element is an array of [index, coordinate]");
  std::vector<Coordinate> coords;
  for (const auto& c : j) {
    if (!c.is_array() || c.size() != 2) bad("a coordinate is [index, \"num/den\"]");
    coords.emplace_back(get_u64(c[0], "index"), rational_from_json(c[1]));
  }
  return GroupElement(ambient, std::move(coords));
}

Json witness_to_json(const Witness& w) {
  struct V {
    Json operator()(const TorusPoint& t) const {
      return Json{{"kind", "torus"}, {"x", t.x.to_string()}, {"scale", integer_to_json(t.scale)}};
    }
    Json operator()(const LadderCharacter& g) const {
      return Json{{"kind", "ladder"}, {"unit", rational_to_json(g.unit())}, {"rungs", rungs_to_json(g)}};
    }
    Json operator()(const LevelCharacter& g) const {
      return Json{{"kind", "level"}, {"prime", integer_to_json(g.prime())}, {"rungs", rungs_to_json(g.ladder())}};
    }
    Json operator()(const ProductCharacter& g) const { return product_to_json(g); }
  };
  return std::visit(V{}, w);
}

Witness witness_from_json(const Json& j) {
  const std::string kind = get_string(field(j, "kind"), "witness kind");
  if (kind == "torus") {
    return TorusPoint{UnitAngle(rational_from_json(field(j, "x"))), integer_from_json(field(j, "scale"))};
  }
  if (kind == "ladder") {
    return LadderCharacter::from_rungs(rational_from_json(field(j, "unit")), rungs_from_json(field(j, "rungs")));
  }
  if (kind == "level") {
    return LevelCharacter(integer_from_json(field(j, "prime")),
                          LadderCharacter::from_rungs(BigRational(1), rungs_from_json(field(j, "rungs"))));
  }
  if (kind == "product") return product_from_json(j);
  bad("unknown witness kind '" + kind + "'");
}

Json product_to_json(const ProductCharacter& g) {
  Json comps = Json::array();
  for (const auto& [idx, c] : g.components()) comps.push_back(Json::array({idx, factor_character_to_json(c)}));
  return Json{{"kind", "product"}, {"components", comps}};
}

ProductCharacter product_from_json(const Json& j) {
  const Json& comps = field(j, "components");
  if (!comps.is_array()) bad("product components must be an array");
  std::map<FactorIndex, FactorCharacter> out;
  for (const auto& c : comps) {
    if (!c.is_array() || c.size() != 2) bad("a component is [index, character]");
    Witness w = witness_from_json(c[1]);
    FactorCharacter fc = [&]() -> FactorCharacter {
      if (auto* l = std::get_if<LadderCharacter>(&w)) return *l;
      if (auto* l = std::get_if<LevelCharacter>(&w)) return *l;
      bad("a product component must be a ladder or level character");
    }();
    if (!out.emplace(get_u64(c[0], "index"), std::move(fc)).second) bad("repeated product component");
  }
  return ProductCharacter(std::move(out));
}

Json certificate_to_json(const KroneckerCertificate& c) {
  Json entries = Json::array();
  for (const auto& e : c.entries) {
    entries.push_back(Json{{"point", point_to_json(e.point)},
                           {"target", e.target.to_string()},
                           {"value", e.value.to_string()},
                           {"distance", rational_to_json(e.distance)},
                           {"chord_approx", chord_approx(e.distance)}});
  }
  return Json{{"witness", witness_to_json(c.witness)},
              {"via", optional_index_json(c.via_factor)},
              {"bound_turns", rational_to_json(c.bound_turns)},
              {"bound_chord_approx", chord_approx(c.bound_turns)},
              {"strict", c.strict},
              {"entries", entries}};
}

KroneckerCertificate certificate_from_json(const AmbientPtr& ambient, const Json& j) {
  KroneckerCertificate c;
  c.witness = witness_from_json(field(j, "witness"));
  c.via_factor = optional_index(j, "via");
  c.bound_turns = rational_from_json(field(j, "bound_turns"));
  c.strict = get_bool(field(j, "strict"), "strict");
  const Json& entries = field(j, "entries");
  if (!entries.is_array()) bad("certificate entries must be an array");
  for (const auto& e : entries) {
    c.entries.push_back(CertificateEntry{point_from_json(ambient, field(e, "point")),
                                         UnitAngle(rational_from_json(field(e, "target"))),
                                         UnitAngle(rational_from_json(field(e, "value"))),
                                         rational_from_json(field(e, "distance"))});
  }
  return c;
}

Json spec_to_json(const PrecisionSpec& s) {
  Json pts = Json::array();
  for (const auto& p : s.points) pts.push_back(product_to_json(p));
  return Json{{"m", s.m}, {"points", pts}};
}

PrecisionSpec spec_from_json(const Json& j) {
  PrecisionSpec s;
  s.m = get_u64(field(j, "m"), "m");
  const Json& pts = field(j, "points");
  if (!pts.is_array()) bad("spec points must be an array");
  for (const auto& p : pts) s.points.push_back(product_from_json(p));
  s.validate();
  return s;
}

Json pair_to_json(const PairRecord& p) {
  return Json{{"gamma_index", p.gamma_index},
              {"plus_index", p.plus_index},
              {"minus_index", p.minus_index},
              {"gamma", element_to_json(p.gamma)},
              {"chi", element_to_json(p.chi)},
              {"gamma_prime", element_to_json(p.gamma_prime)},
              {"beta", optional_index_json(p.beta)}};
}

PairRecord pair_from_json(const AmbientPtr& ambient, const Json& j) {
  return PairRecord{get_u64(field(j, "gamma_index"), "gamma_index"),
                    get_u64(field(j, "plus_index"), "plus_index"),
                    get_u64(field(j, "minus_index"), "minus_index"),
                    element_from_json(ambient, field(j, "gamma")),
                    element_from_json(ambient, field(j, "chi")),
                    element_from_json(ambient, field(j, "gamma_prime")),
                    optional_index(j, "beta")};
}

ElementStream stream_from_json(const AmbientPtr& ambient, const Json& j) {
  const std::string rule = get_string(field(j, "rule"), "stream rule");
  auto index = [&] { return has(j, "index") ? get_u64(j.at("index"), "stream index") : FactorIndex{0}; };
  auto check_index = [&](FactorIndex i) {
    if (!ambient->has_factor(i)) bad_config("stream index " + std::to_string(i) + " is not a factor");
  };
  if (rule == "geometric") {
    only_keys(j, {"rule", "index", "base", "start"}, "stream");
    const BigInt base = integer_from_json(field(j, "base"));
    if (base < 2) bad_config("geometric base must be at least 2");
    check_index(index());
    const std::size_t start = has(j, "start") ? get_u64(j.at("start"), "start") : 1;
    return geometric_stream(ambient, index(), base, start);
  }
  if (rule == "naturals") {
    only_keys(j, {"rule", "index", "start"}, "stream");
    check_index(index());
    const std::size_t start = has(j, "start") ? get_u64(j.at("start"), "start") : 0;
    return naturals_stream(ambient, index(), start);
  }
  if (rule == "unit-generators") {
    only_keys(j, {"rule", "start"}, "stream");
    const FactorIndex start = has(j, "start") ? get_u64(j.at("start"), "start") : 0;
    if (!ambient->default_factor()) bad_config("unit-generators needs a default factor");
    return unit_generator_stream(ambient, start);
  }
  if (rule == "prime-reciprocals") {
    only_keys(j, {"rule", "index"}, "stream");
    check_index(index());
    return prime_reciprocal_stream(ambient, index());
  }
  if (rule == "prime-power-reciprocals") {
    only_keys(j, {"rule", "index", "prime"}, "stream");
    check_index(index());
    return prime_power_reciprocal_stream(ambient, index(), integer_from_json(field(j, "prime")));
  }
  if (rule == "list") {
    only_keys(j, {"rule", "elements"}, "stream");
    const Json& els = field(j, "elements");
    if (!els.is_array() || els.empty()) bad_config("a list stream needs at least one element");
    std::vector<GroupElement> out;
    for (const auto& e : els) out.push_back(element_from_json(ambient, e));
    return ElementStream::from_list(ambient, std::move(out), "list of " + std::to_string(out.size()));
  }
  bad_config("unknown stream rule '" + rule + "'");
}

namespace {

Json canonical_stream(const Json& j, const ElementStream& parsed) {
  Json out = j;
  const std::string rule = j.at("rule").get<std::string>();
  auto fill = [&](const char* key, Json v) {
    if (!has(out, key)) out[key] = std::move(v);
  };
  if (rule == "geometric") {
    fill("index", 0);
    fill("start", 1);
    out["base"] = integer_to_json(integer_from_json(out["base"]));
  } else if (rule == "naturals") {
    fill("index", 0);
    fill("start", 0);
  } else if (rule == "unit-generators") {
    fill("start", 0);
  } else if (rule == "prime-reciprocals") {
    fill("index", 0);
  } else if (rule == "prime-power-reciprocals") {
    fill("index", 0);
    out["prime"] = integer_to_json(integer_from_json(out["prime"]));
  } else if (rule == "list") {
    Json els = Json::array();
    for (const auto& e : parsed.prefix(*parsed.finite_size())) els.push_back(element_to_json(e));
    out["elements"] = els;
  }
  return out;
}

std::string case_text(CaseChoice c) {
  switch (c) {
    case CaseChoice::Case1: return "case1";
    case CaseChoice::Case2: return "case2";
    case CaseChoice::Auto: break;
  }
  return "auto";
}

std::string branch_text(BranchChoice c) {
  switch (c) {
    case BranchChoice::Bounded: return "bounded";
    case BranchChoice::Unbounded: return "unbounded";
    case BranchChoice::Auto: break;
  }
  return "auto";
}

}  // namespace

RunConfig parse_run_config(const Json& j) {
  only_keys(j, {"ambient", "stream", "q", "rounds", "seed", "budgets", "case", "alpha", "branch", "assert_infinite",
                "output"},
            "config");
  try {
    AmbientPtr ambient = ambient_from_json(field(j, "ambient"));
    const Json& stream = field(j, "stream");
    RunConfig rc{ambient, stream_from_json(ambient, stream), {}, std::nullopt, Json()};

    ConstructionConfig& c = rc.construction;
    if (has(j, "q")) c.q = integer_from_json(j.at("q"));
    if (has(j, "rounds")) c.rounds = get_u64(j.at("rounds"), "rounds");
    if (has(j, "seed")) c.seed = get_u64(j.at("seed"), "seed");
    if (has(j, "budgets")) {
      const Json& b = j.at("budgets");
      only_keys(b, {"stream", "probe", "threshold", "cluster", "window", "grid", "oracle_cap", "independence"},
                "budgets");
      Budgets& d = c.budgets;
      if (has(b, "stream")) d.stream = get_u64(b.at("stream"), "budgets.stream");
      if (has(b, "probe")) d.probe = get_u64(b.at("probe"), "budgets.probe");
      if (has(b, "threshold")) d.threshold = get_u64(b.at("threshold"), "budgets.threshold");
      if (has(b, "cluster")) d.cluster = get_u64(b.at("cluster"), "budgets.cluster");
      if (has(b, "window")) d.window = get_u64(b.at("window"), "budgets.window");
      if (has(b, "grid")) d.grid = get_u64(b.at("grid"), "budgets.grid");
      if (has(b, "oracle_cap")) d.oracle_cap = get_u64(b.at("oracle_cap"), "budgets.oracle_cap");
      if (has(b, "independence")) d.independence = get_u64(b.at("independence"), "budgets.independence");
    }
    if (has(j, "case")) {
      const std::string s = get_string(j.at("case"), "case");
      if (s == "auto") c.case_choice = CaseChoice::Auto;
      else if (s == "case1") c.case_choice = CaseChoice::Case1;
      else if (s == "case2") c.case_choice = CaseChoice::Case2;
      else bad_config("case must be auto, case1 or case2");
    }
    c.alpha = optional_index(j, "alpha");
    if (c.alpha && !rc.ambient->has_factor(*c.alpha)) bad_config("alpha is not a factor index");
    if (has(j, "branch")) {
      const std::string s = get_string(j.at("branch"), "branch");
      if (s == "auto") c.branch = BranchChoice::Auto;
      else if (s == "bounded") c.branch = BranchChoice::Bounded;
      else if (s == "unbounded") c.branch = BranchChoice::Unbounded;
      else bad_config("branch must be auto, bounded or unbounded");
    }
    if (has(j, "assert_infinite")) c.assert_infinite = get_bool(j.at("assert_infinite"), "assert_infinite");
    if (has(j, "output")) rc.output = get_string(j.at("output"), "output");
    c.validate();

    const Budgets& b = c.budgets;
    rc.echo = Json{{"ambient", ambient_to_json(*rc.ambient)},
                   {"stream", canonical_stream(stream, rc.stream)},
                   {"q", integer_to_json(c.q)},
                   {"rounds", c.rounds},
                   {"seed", c.seed},
                   {"budgets", Json{{"stream", b.stream},
                                    {"probe", b.probe},
                                    {"threshold", b.threshold},
                                    {"cluster", b.cluster},
                                    {"window", b.window},
                                    {"grid", b.grid},
                                    {"oracle_cap", b.oracle_cap},
                                    {"independence", b.independence}}},
                   {"case", case_text(c.case_choice)},
                   {"alpha", optional_index_json(c.alpha)},
                   {"branch", branch_text(c.branch)},
                   {"assert_infinite", c.assert_infinite}};
    return rc;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    bad_config(e.what());
  }
}

Json result_to_json(const ConstructionResult& r, const Json& config_echo) {
  Json pairs = Json::array(), e = Json::array(), ep = Json::array(), excluded = Json::array();
  for (const auto& p : r.pairs) {
    pairs.push_back(pair_to_json(p));
    e.push_back(element_to_json(p.gamma));
    ep.push_back(element_to_json(p.gamma_prime));
  }
  for (auto i : r.excluded) excluded.push_back(i);
  Json prov = Json::object();
  for (const auto& [k, v] : r.provenance) prov[k] = v;

  const auto v1 = verify_certificate(r.certificate);
  const auto v2 = verify_certificate(r.certificate_prime);
  std::string summary = to_string(r.branch) + ": " + std::to_string(r.pairs.size()) + " pairs, " +
                        (r.strict ? "strict" : "weak") + " bound " + r.bound_turns.to_string() + " turn (chord " +
                        chord_text(r.bound_turns) + "), certificates " +
                        (v1.empty() && v2.empty() ? "verified" : "FAILED");

  return Json{{"format", "kronpair-result-1"},
              {"config", config_echo},
              {"ambient", ambient_to_json(*r.ambient)},
              {"stream", r.stream_description},
              {"branch", to_string(r.branch)},
              {"alpha", optional_index_json(r.alpha)},
              {"q", integer_to_json(r.q)},
              {"bound_turns", rational_to_json(r.bound_turns)},
              {"bound_chord_approx", chord_approx(r.bound_turns)},
              {"strict", r.strict},
              {"scale", r.scale ? integer_to_json(*r.scale) : Json(nullptr)},
              {"excluded", excluded},
              {"pairs", pairs},
              {"E", e},
              {"E_prime", ep},
              {"targets", angles_to_json(r.targets)},
              {"targets_prime", angles_to_json(r.targets_prime)},
              {"certificate", certificate_to_json(r.certificate)},
              {"certificate_prime", certificate_to_json(r.certificate_prime)},
              {"independence", independence_to_json(r.independence)},
              {"independence_prime", independence_to_json(r.independence_prime)},
              {"provenance", prov},
              {"summary", summary}};
}

ConstructionResult result_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("format") || j.at("format") != "kronpair-result-1") {
    bad("not a construction result document");
  }
  ConstructionResult r;
  r.ambient = ambient_from_json(field(j, "ambient"));
  r.stream_description = get_string(field(j, "stream"), "stream");
  r.branch = parse_branch(get_string(field(j, "branch"), "branch"));
  r.alpha = optional_index(j, "alpha");
  r.q = integer_from_json(field(j, "q"));
  r.bound_turns = rational_from_json(field(j, "bound_turns"));
  r.strict = get_bool(field(j, "strict"), "strict");
  if (has(j, "scale")) r.scale = integer_from_json(j.at("scale"));
  for (const auto& i : field(j, "excluded")) r.excluded.push_back(get_u64(i, "excluded index"));
  for (const auto& p : field(j, "pairs")) r.pairs.push_back(pair_from_json(r.ambient, p));
  r.targets = angles_from_json(field(j, "targets"));
  r.targets_prime = angles_from_json(field(j, "targets_prime"));
  r.certificate = certificate_from_json(r.ambient, field(j, "certificate"));
  r.certificate_prime = certificate_from_json(r.ambient, field(j, "certificate_prime"));
  r.independence = independence_from_json(field(j, "independence"));
  r.independence_prime = independence_from_json(field(j, "independence_prime"));
  const Json& prov = field(j, "provenance");
  if (!prov.is_object()) bad("provenance must be an object");
  for (const auto& [k, v] : prov.items()) r.provenance[k] = get_string(v, "provenance value");
  return r;
}

Json report_to_json(const WitnessReport& r) {
  Json dist = Json::array(), chords = Json::array();
  for (const auto& d : r.distances) {
    dist.push_back(rational_to_json(d));
    chords.push_back(chord_approx(d));
  }
  return Json{{"spec", spec_to_json(r.spec)},
              {"chord_bound", rational_to_json(r.chord_bound)},
              {"index", r.index},
              {"values", angles_to_json(r.values)},
              {"values_prime", angles_to_json(r.values_prime)},
              {"distances", dist},
              {"chords_approx", chords},
              {"within", r.within},
              {"extended", r.extended},
              {"inconclusive", false},
              {"pair", r.pair ? pair_to_json(*r.pair) : Json(nullptr)},
              {"pairs_scanned", r.pairs_scanned}};
}

Json error_to_json(const Error& e) {
  return Json{{"error", Json{{"code", std::string(to_string(e.code()))},
                             {"message", e.what()},
                             {"stage", e.stage() ? Json(*e.stage()) : Json(nullptr)}}}};
}

}  // namespace kronpair
