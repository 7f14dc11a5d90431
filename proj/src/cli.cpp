#include "kronpair/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace kronpair {

namespace {

constexpr std::uint64_t kWitnessTag = 3;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::ParseError:
      return 2;
    default:
      return 1;
  }
}

CommandOutcome failure(const Error& e) { return {exit_code_for(e), error_to_json(e)}; }

RunConfig config_of(const Json& result) {
  if (!result.is_object() || !result.contains("config")) {
    throw Error(ErrorCode::ParseError, "the result has no embedded config");
  }
  return parse_run_config(result.at("config"));
}

Json violations_json(const KroneckerCertificate& c, const std::string& name) {
  Json out = Json::array();
  for (const auto& v : verify_certificate(c)) {
    Json item{{"certificate", name}, {"entry", v.entry}, {"reason", v.reason}};
    if (v.entry < c.entries.size()) item["point"] = describe(c.entries[v.entry].point);
    out.push_back(item);
  }
  return out;
}

}  // namespace

Construction construction_from_config(const RunConfig& config) {
  return Construction::dispatch(config.stream, config.construction);
}

CommandOutcome cmd_construct(const Json& config, std::optional<std::uint64_t> seed) {
  std::optional<RunConfig> parsed;
  try {
    Json cfg = config;
    if (seed) {
      if (!cfg.is_object()) throw Error(ErrorCode::InvalidConfig, "config must be an object");
      cfg["seed"] = *seed;
    }
    parsed = parse_run_config(cfg);
  } catch (const Error& e) {
    return {2, error_to_json(e)};
  }
  const RunConfig& rc = *parsed;
  try {
    const ConstructionResult r = construction_from_config(rc).result();
    Json doc = result_to_json(r, rc.echo);
    const bool ok = verify_certificate(r.certificate).empty() && verify_certificate(r.certificate_prime).empty() &&
                    check_structure(r, rc.stream).empty();
    return {ok ? 0 : 1, doc};
  } catch (const Error& e) {
    return failure(e);
  }
}

CommandOutcome cmd_verify(const Json& document) {
  try {
    if (document.is_object() && document.contains("witness")) {
      AmbientPtr ambient;
      if (document.contains("ambient")) ambient = ambient_from_json(document.at("ambient"));
      const KroneckerCertificate c = certificate_from_json(ambient, document);
      Json v = violations_json(c, "certificate");
      return {v.empty() ? 0 : 1, Json{{"ok", v.empty()}, {"violations", v}, {"structure", Json::array()}}};
    }
    const ConstructionResult r = result_from_json(document);
    const RunConfig rc = config_of(document);
    Json v = violations_json(r.certificate, "E");
    for (auto& item : violations_json(r.certificate_prime, "E_prime")) v.push_back(item);
    Json structure = Json::array();
    for (const auto& s : check_structure(r, rc.stream)) structure.push_back(s);
    const bool ok = v.empty() && structure.empty();
    return {ok ? 0 : 1, Json{{"ok", ok}, {"violations", v}, {"structure", structure}}};
  } catch (const Error& e) {
    // Anything that stops the document from being read is a parse failure.
    switch (e.code()) {
      case ErrorCode::ParseError:
      case ErrorCode::InvalidConfig:
      case ErrorCode::InvalidCoordinate:
      case ErrorCode::InvalidArgument:
      case ErrorCode::AmbientMismatch:
        return {2, error_to_json(e)};
      default:
        return failure(e);
    }
  }
}

CommandOutcome cmd_witness(const Json& result, const WitnessOptions& options) {
  std::optional<RunConfig> parsed;
  Json recorded;
  try {
    result_from_json(result);
    parsed = config_of(result);
    recorded = result.at("pairs");
    if (options.m < 1) throw Error(ErrorCode::InvalidConfig, "m must be at least 1");
  } catch (const Error& e) {
    return {2, error_to_json(e)};
  }
  const RunConfig& rc = *parsed;
  try {
    const Construction c = construction_from_config(rc);
    Json rebuilt = Json::array();
    for (const auto& p : c.pairs()) rebuilt.push_back(pair_to_json(p));
    if (rebuilt != recorded) {
      throw Error(ErrorCode::InvalidArgument, "the recorded pairs do not match a rebuild from the embedded config");
    }
    PrecisionSpec spec;
    spec.m = options.m;
    if (options.trivial) {
      spec.points.emplace_back();
    } else {
      SeededRng rng{options.seed, kWitnessTag, options.m};
      spec = random_precision_spec(rc.ambient, c.sample_window(), options.m, rng);
    }
    const std::size_t budget = options.budget.value_or(rc.construction.budgets.cluster);
    const WitnessReport rep = non_i0_witness(c, spec, budget, options.allow_extend);
    Json doc = report_to_json(rep);
    doc["seed"] = options.seed;
    doc["budget"] = budget;
    return {0, doc};
  } catch (const Error& e) {
    Json doc = error_to_json(e);
    doc["inconclusive"] = e.code() == ErrorCode::BudgetExhausted || e.code() == ErrorCode::SearchBudget;
    doc["seed"] = options.seed;
    return {exit_code_for(e), doc};
  }
}

namespace {

Json oracle_side(const ConstructionResult& r, const KroneckerCertificate& cert, const std::vector<UnitAngle>& targets,
                 std::uint64_t grid, std::uint64_t cap, bool& contradiction, bool& inconclusive) {
  const BigRational certified = cert.max_distance();
  Json out{{"certified_max", rational_to_json(certified)}, {"certified_max_chord_approx", chord_approx(certified)}};
  MinimaxOptions opts;
  opts.cap = cap;
  opts.certified = certified;
  std::vector<GroupElement> elements;
  for (const auto& e : cert.entries) elements.push_back(std::get<GroupElement>(e.point));
  try {
    if (const auto* t = std::get_if<TorusPoint>(&cert.witness)) {
      std::vector<BigInt> freq;
      for (const auto& e : elements) freq.push_back((project(e, *cert.via_factor) * BigRational(t->scale)).numerator());
      const MinimaxResult m = minimax_torus_grid(freq, targets, grid, opts);
      const BigRational slack = torus_grid_slack(freq, grid);
      out["method"] = "torus grid";
      out["grid"] = grid;
      out["grid_min"] = rational_to_json(m.max_error);
      out["grid_min_chord_approx"] = chord_approx(m.max_error);
      out["slack"] = rational_to_json(slack);
      out["candidates"] = m.candidates;
      const bool bad = m.max_error - slack > certified;
      out["contradiction"] = bad;
      contradiction = contradiction || bad;
      return out;
    }
    const LadderCharacter* ladder = std::get_if<LadderCharacter>(&cert.witness);
    if (const auto* lv = std::get_if<LevelCharacter>(&cert.witness)) ladder = &lv->ladder();
    if (ladder != nullptr) {
      std::vector<BigRational> pts;
      for (const auto& e : elements) pts.push_back(project(e, *cert.via_factor) / ladder->unit());
      std::vector<BigInt> levels;
      for (const auto& rung : ladder->rungs()) levels.push_back(rung.level);
      const MinimaxResult m = minimax_ladder_cosets(pts, targets, levels, opts);
      out["method"] = "ladder cosets";
      out["optimum"] = rational_to_json(m.max_error);
      out["candidates"] = m.candidates;
      const bool bad = m.max_error > certified;
      out["contradiction"] = bad;
      out["certificate_optimal"] = m.max_error == certified;
      contradiction = contradiction || bad;
      return out;
    }
    const MinimaxResult m = minimax_product_cosets(elements, targets, opts);
    out["method"] = "product cosets";
    out["optimum"] = rational_to_json(m.max_error);
    out["candidates"] = m.candidates;
    const bool bad = m.max_error > certified;
    out["contradiction"] = bad;
    out["certificate_optimal"] = m.max_error == certified;
    contradiction = contradiction || bad;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SearchBudget && e.code() != ErrorCode::InvalidArgument) throw;
    out["inconclusive"] = e.what();
    inconclusive = true;
  }
  (void)r;
  return out;
}

}  // namespace

CommandOutcome cmd_oracle(const Json& result, const OracleOptions& options) {
  ConstructionResult r;
  std::optional<RunConfig> parsed;
  try {
    r = result_from_json(result);
    parsed = config_of(result);
  } catch (const Error& e) {
    return {2, error_to_json(e)};
  }
  const RunConfig& rc = *parsed;
  try {
    const std::uint64_t grid = options.grid.value_or(rc.construction.budgets.grid);
    const std::uint64_t cap = options.cap.value_or(rc.construction.budgets.oracle_cap);
    bool contradiction = false, inconclusive = false;
    Json doc{{"E", oracle_side(r, r.certificate, r.targets, grid, cap, contradiction, inconclusive)},
             {"E_prime", oracle_side(r, r.certificate_prime, r.targets_prime, grid, cap, contradiction, inconclusive)},
             {"contradiction", contradiction},
             {"inconclusive", inconclusive}};
    return {contradiction || inconclusive ? 1 : 0, doc};
  } catch (const Error& e) {
    return failure(e);
  }
}

namespace {

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int emit(const CommandOutcome& o, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const std::string text = dump_canonical(o.document);
  if (o.document.contains("error")) err << o.document.at("error").at("message").get<std::string>() << "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      err << "cannot write " << out_path << "\n";
      return 2;
    }
    f << text;
  }
  return o.exit_code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constructs and checks pairs of Kronecker sets whose union is not I0", "kronpair"};
  app.require_subcommand(1);

  std::string config_path, out_path, input_path;
  std::optional<std::uint64_t> seed;
  auto* construct = app.add_subcommand("construct", "run a construction from a JSON config");
  construct->add_option("--config", config_path, "config file")->required();
  construct->add_option("--out", out_path, "output file (default: config output or stdout)");
  construct->add_option("--seed", seed, "override the config seed");

  auto* verify = app.add_subcommand("verify", "re-check a result or certificate exactly");
  verify->add_option("file", input_path)->required();

  WitnessOptions wopt;
  std::uint64_t wseed = 1;
  bool no_extend = false;
  std::optional<std::size_t> wbudget;
  auto* witness = app.add_subcommand("witness", "find a finite-scale non-I0 witness");
  witness->add_option("file", input_path)->required();
  witness->add_option("--m", wopt.m, "precision m (chord bound 1/m)");
  witness->add_option("--seed", wseed, "seed of the sample points");
  witness->add_option("--budget", wbudget, "elements of F used by the cluster search");
  witness->add_option("--out", out_path, "output file");
  witness->add_flag("--trivial", wopt.trivial, "use one trivial sample point");
  witness->add_flag("--no-extend", no_extend, "only scan the recorded pairs");

  OracleOptions oopt;
  auto* oracle = app.add_subcommand("oracle", "brute-force minimax check of the certificates");
  oracle->add_option("file", input_path)->required();
  oracle->add_option("--grid", oopt.grid, "torus grid resolution");
  oracle->add_option("--cap", oopt.cap, "maximum number of candidates");
  oracle->add_option("--out", out_path, "output file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 2;
  }

  auto load = [&](const std::string& path) -> std::optional<Json> {
    const auto text = read_file(path);
    if (!text) {
      err << "cannot read " << path << "\n";
      return std::nullopt;
    }
    try {
      return parse_json_text(*text);
    } catch (const Error& e) {
      out << dump_canonical(error_to_json(e));
      err << e.what() << "\n";
      return std::nullopt;
    }
  };

  if (construct->parsed()) {
    auto cfg = load(config_path);
    if (!cfg) return 2;
    if (out_path.empty() && cfg->is_object() && cfg->contains("output") && cfg->at("output").is_string()) {
      out_path = cfg->at("output").get<std::string>();
    }
    return emit(cmd_construct(*cfg, seed), out_path, out, err);
  }
  auto doc = load(input_path);
  if (!doc) return 2;
  if (verify->parsed()) {
    const CommandOutcome o = cmd_verify(*doc);
    if (o.document.contains("violations")) {
      for (const auto& v : o.document.at("violations")) {
        err << "violation in " << v.at("certificate").get<std::string>() << " entry " << v.at("entry").get<std::size_t>()
            << (v.contains("point") ? " at " + v.at("point").get<std::string>() : std::string()) << ": "
            << v.at("reason").get<std::string>() << "\n";
      }
      for (const auto& s : o.document.at("structure")) err << "structure: " << s.get<std::string>() << "\n";
    }
    return emit(o, "", out, err);
  }
  if (witness->parsed()) {
    wopt.seed = wseed;
    wopt.budget = wbudget;
    wopt.allow_extend = !no_extend;
    return emit(cmd_witness(*doc, wopt), out_path, out, err);
  }
  return emit(cmd_oracle(*doc, oopt), out_path, out, err);
}

}  // namespace kronpair
