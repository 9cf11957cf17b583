// Subcommand dispatch for the ksdk executable.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ksdk/cli/config.hpp"

namespace ksdk {

struct CommandInfo {
  std::string name;
  std::string summary;
  /// Files written and their CSV columns.
  std::string outputs;
};

const std::vector<CommandInfo>& command_table();

std::string version_string();

/// Runs `name` with a resolved config, writing into cfg.output_dir (created if
/// needed) along with resolved_config.toml and VERSION. Returns 0, or 2 when
/// a verdict failed. Library errors propagate.
int dispatch(const std::string& name, const RunConfig& cfg, std::ostream& log);

struct SelfCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double tolerance = 0.0;
};

/// Quick oracle suite (closed forms and exact identities), a few seconds.
std::vector<SelfCheck> run_selftest(std::uint64_t seed);

}  // namespace ksdk
