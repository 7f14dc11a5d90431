#pragma once

// The four commands behind the `kronpair` executable. Each returns the JSON
// document it would print and the exit code: 0 pass, 1 mathematical failure
// or inconclusive search, 2 usage, parse or config error.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kronpair/constructions.hpp"
#include "kronpair/io.hpp"

namespace kronpair {

struct CommandOutcome {
  int exit_code = 0;
  Json document;
};

/// Rebuilds the construction a config describes (same dispatch as construct).
Construction construction_from_config(const RunConfig& config);

CommandOutcome cmd_construct(const Json& config, std::optional<std::uint64_t> seed = std::nullopt);
/// Accepts a construction result or a bare certificate (optionally with an
/// "ambient" field next to it).
CommandOutcome cmd_verify(const Json& document);

struct WitnessOptions {
  std::size_t m = 2;
  std::uint64_t seed = 1;
  std::optional<std::size_t> budget;  // defaults to the config's cluster budget
  bool trivial = false;               // one trivial sample point instead of m random ones
  bool allow_extend = true;
};
CommandOutcome cmd_witness(const Json& result, const WitnessOptions& options);

struct OracleOptions {
  std::optional<std::uint64_t> grid;  // defaults to the config's grid budget
  std::optional<std::uint64_t> cap;   // defaults to the config's oracle cap
};
CommandOutcome cmd_oracle(const Json& result, const OracleOptions& options);

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kronpair
