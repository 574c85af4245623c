#pragma once

#include "qfock/config.hpp"
#include "qfock/ito.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qfock {

/// Result of one command run: exit code, a human summary for stdout and the
/// report files to be written under the output directory.  Identical
/// (config, seed) inputs produce byte-identical file contents.
struct CommandResult {
  int exit_code = 0;
  std::string human;
  std::vector<std::pair<std::string, std::string>> files;  // name -> content
};

/// Exit codes: 0 pass, 1 invalid input/config, 2 verdict failure or violated
/// hypothesis.
CommandResult run_relations(const ConfigTable& cfg,
                            std::optional<std::uint64_t> seed_override,
                            const std::string& corrupt_relation = {});

CommandResult run_normal_order(const ConfigTable& cfg, const std::string& expr,
                               std::optional<std::uint64_t> seed_override);

CommandResult run_norm_sweep(const ConfigTable& cfg,
                             std::optional<std::uint64_t> seed_override);

CommandResult run_ito(const ConfigTable& spec_table,
                      std::optional<std::uint64_t> seed_override);

CommandResult run_moments(const ConfigTable& cfg,
                          std::optional<std::uint64_t> seed_override);

void write_outputs(const CommandResult& result, const std::string& out_dir);

/// Parses an ito spec table (see configs/ for the schema) into an ItoSpec.
ItoSpec parse_ito_spec(const ConfigTable& table);

}  // namespace qfock
