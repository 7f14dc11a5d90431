#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "kronpair/cli.hpp"
#include "kronpair/io.hpp"
#include "support.hpp"

using namespace kronpair;
using namespace kptest;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = KRONPAIR_GOLDEN_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "kronpair_tests";
  fs::create_directories(dir);
  return dir / name;
}

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Json construct_golden(const std::string& stem) {
  const auto o = cmd_construct(parse_json_text(slurp(kGolden / (stem + ".config.json"))));
  REQUIRE(o.exit_code == 0);
  return o.document;
}

}  // namespace

TEST_CASE("rationals and factors in JSON") {
  CHECK(rational_to_json(R("-6/4")) == Json("-3/2"));
  CHECK(rational_from_json(Json("5")) == BigRational(5));
  CHECK(rational_from_json(Json(7)) == BigRational(7));
  CHECK_THROWS_AS(rational_from_json(Json(0.5)), Error);
  CHECK(integer_from_json(Json("123456789012345678901234567890")) == BigInt("123456789012345678901234567890"));
  CHECK_THROWS_AS(integer_from_json(Json("12a")), Error);
  for (const char* f : {"Q", "C(3^inf)", "Z(12)"}) CHECK(factor_to_text(factor_from_text(f)) == f);
  CHECK_THROWS_AS(factor_from_text("R"), Error);
}

TEST_CASE("witness JSON round trip") {
  std::vector<Witness> ws;
  ws.push_back(TorusPoint{A("3/7"), I(4)});
  ws.push_back(LadderCharacter::generated_by(R("1/3"), A("1/5")).extended(I(6), I(5)));
  ws.push_back(LevelCharacter(I(2)).extended(I(8), I(3)));
  ProductCharacter p;
  p.set_component(3, LadderCharacter::pinned().extended(I(5), I(2)));
  p.set_component(9, LevelCharacter(I(3)).extended(I(9), I(4)));
  ws.push_back(p);
  for (const auto& w : ws) {
    const Json j = witness_to_json(w);
    CHECK(witness_from_json(j) == w);
    CHECK(dump_canonical(witness_to_json(witness_from_json(j))) == dump_canonical(j));
  }
}

TEST_CASE("run configs: defaults are echoed") {
  const RunConfig rc = parse_run_config(parse_json_text(slurp(kGolden / "z_geometric3.config.json")));
  CHECK(rc.echo.at("seed") == 7);
  CHECK(rc.echo.at("q") == "3");
  CHECK(rc.echo.at("budgets").at("stream") == 65536);
  CHECK(rc.echo.at("stream").at("start") == 1);
  CHECK(parse_run_config(rc.echo).echo == rc.echo);
  Json no_seed = parse_json_text(slurp(kGolden / "z_geometric3.config.json"));
  no_seed.erase("seed");
  CHECK(parse_run_config(no_seed).echo.at("seed") == 1);
}

TEST_CASE("run configs: strict validation") {
  const Json base = parse_json_text(slurp(kGolden / "z_geometric3.config.json"));
  auto expect_invalid = [](const Json& j) {
    try {
      parse_run_config(j);
      FAIL("expected InvalidConfig");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidConfig);
    }
  };
  Json j = base;
  j["rounds"] = 0;
  expect_invalid(j);
  j = base;
  j["colour"] = "blue";
  expect_invalid(j);
  j = base;
  j["budgets"] = Json{{"probe", 0}};
  expect_invalid(j);
  j = base;
  j["budgets"] = Json{{"stram", 3}};
  expect_invalid(j);
  j = base;
  j["stream"] = Json{{"rule", "fibonacci"}};
  expect_invalid(j);
  j = base;
  j["ambient"] = Json{{"factors", Json::array({Json::array({0, "Q"}), Json::array({0, "Q"})})}};
  expect_invalid(j);
  j = base;
  j["stream"] = Json{{"rule", "list"}, {"elements", Json::array({Json::array({Json::array({0, "1/2"})})})}};
  CHECK(parse_run_config(j).echo.at("stream").at("elements").size() == 1);
}

TEST_CASE("construct: golden output for Z with powers of 3") {
  const Json doc = construct_golden("z_geometric3");
  CHECK(doc.at("pairs").size() == 4);
  CHECK(doc.at("branch") == "case1-q-bounded");
  CHECK(dump_canonical(doc) == slurp(kGolden / "z_geometric3.result.json"));
}

TEST_CASE("construct: golden output for the order-2 branch") {
  const Json doc = construct_golden("z2_generators");
  CHECK(doc.at("branch") == "case2-order2");
  CHECK(doc.at("independence").at("independent") == true);
  CHECK(dump_canonical(doc) == slurp(kGolden / "z2_generators.result.json"));
}

TEST_CASE("construct: golden output for Z(3) generators") {
  const Json doc = construct_golden("z3_generators");
  CHECK(doc.at("branch") == "case2");
  CHECK(dump_canonical(doc) == slurp(kGolden / "z3_generators.result.json"));
}

TEST_CASE("results round-trip byte for byte") {
  for (const char* stem : {"z_geometric3", "z2_generators", "z3_generators"}) {
    const std::string text = slurp(kGolden / (std::string(stem) + ".result.json"));
    const Json j = parse_json_text(text);
    CHECK(dump_canonical(result_to_json(result_from_json(j), j.at("config"))) == text);
  }
}

TEST_CASE("construct is deterministic") {
  const fs::path a = scratch("det_a.json"), b = scratch("det_b.json");
  const std::string cfg = (kGolden / "z3_generators.config.json").string();
  CHECK(cli({"construct", "--config", cfg, "--out", a.string()}).code == 0);
  CHECK(cli({"construct", "--config", cfg, "--out", b.string()}).code == 0);
  CHECK(slurp(a) == slurp(b));
  const Run other = cli({"construct", "--config", cfg, "--seed", "8"});
  CHECK(other.code == 0);
  CHECK(other.out != slurp(a));
}

TEST_CASE("construct: zero rounds is a config error") {
  const Run r = cli({"construct", "--config", (kGolden / "bad_rounds.config.json").string()});
  CHECK(r.code == 2);
  CHECK(parse_json_text(r.out).at("error").at("code") == "InvalidConfig");
}

TEST_CASE("usage errors exit with 2") {
  CHECK(cli({}).code == 2);
  CHECK(cli({"construct"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"verify", scratch("does_not_exist.json").string()}).code == 2);
}

TEST_CASE("verify: emitted results pass") {
  for (const char* stem : {"z_geometric3", "z2_generators", "z3_generators"}) {
    const Run r = cli({"verify", (kGolden / (std::string(stem) + ".result.json")).string()});
    CHECK(r.code == 0);
    CHECK(parse_json_text(r.out).at("ok") == true);
  }
}

TEST_CASE("verify: a perturbed angle is caught and named") {
  Json j = parse_json_text(slurp(kGolden / "z_geometric3.result.json"));
  j["certificate"]["entries"][2]["value"] = "1/2";
  const fs::path p = scratch("tampered.json");
  write(p, dump_canonical(j));
  const Run r = cli({"verify", p.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("entry 2") != std::string::npos);
  CHECK(r.err.find("243/1") != std::string::npos);

  Json t = parse_json_text(slurp(kGolden / "z_geometric3.result.json"));
  t["certificate_prime"]["entries"][0]["target"] = "1/2";
  t["targets_prime"][0] = "1/2";
  write(p, dump_canonical(t));
  CHECK(cli({"verify", p.string()}).code == 1);
}

TEST_CASE("verify: a bare certificate") {
  Json j = parse_json_text(slurp(kGolden / "z_geometric3.result.json"));
  Json c = j.at("certificate");
  c["ambient"] = j.at("ambient");
  CHECK(cmd_verify(c).exit_code == 0);
  c["bound_turns"] = "1/100";
  CHECK(cmd_verify(c).exit_code == 1);
}

TEST_CASE("verify: truncated or malformed files exit with 2") {
  const std::string text = slurp(kGolden / "z_geometric3.result.json");
  const fs::path p = scratch("truncated.json");
  write(p, text.substr(0, text.size() / 2));
  CHECK(cli({"verify", p.string()}).code == 2);
  Json j = parse_json_text(text);
  j["pairs"][0]["gamma"][0][1] = "x/y";
  write(p, dump_canonical(j));
  CHECK(cli({"verify", p.string()}).code == 2);
}

TEST_CASE("witness: seeded run on Z") {
  const Run r = cli({"witness", (kGolden / "z_geometric3.result.json").string(), "--m", "2", "--seed", "7"});
  CHECK(r.code == 0);
  const Json j = parse_json_text(r.out);
  CHECK(j.at("within") == true);
  // frozen from the first verified run
  CHECK(j.at("index") == 4);
  for (const auto& d : j.at("distances")) CHECK(rational_from_json(d) < R("1/12"));
  CHECK(r.out == slurp(kGolden / "z_geometric3.witness_m2_seed7.json"));
}

TEST_CASE("witness: trivial point gives n = 1") {
  const Run r = cli({"witness", (kGolden / "z_geometric3.result.json").string(), "--m", "1", "--trivial"});
  CHECK(r.code == 0);
  const Json j = parse_json_text(r.out);
  CHECK(j.at("index") == 1);
  CHECK(j.at("distances") == Json::array({"0/1"}));
}

TEST_CASE("witness: tiny budget is inconclusive") {
  const Run r = cli({"witness", (kGolden / "z_geometric3.result.json").string(), "--m", "6", "--seed", "3",
                     "--budget", "2", "--no-extend"});
  const Run s = cli({"witness", (kGolden / "z_geometric3.result.json").string(), "--m", "6", "--seed", "3",
                     "--budget", "2"});
  CHECK(s.code == 1);
  CHECK(parse_json_text(s.out).at("inconclusive") == true);
  CHECK(r.code == 1);
  CHECK(parse_json_text(r.out).at("inconclusive") == true);
}

TEST_CASE("oracle: no contradictions on the golden results") {
  for (const char* stem : {"z_geometric3", "z2_generators", "z3_generators"}) {
    const Run r = cli({"oracle", (kGolden / (std::string(stem) + ".result.json")).string(), "--grid", "65536"});
    CHECK(r.code == 0);
    CHECK(parse_json_text(r.out).at("contradiction") == false);
  }
}
