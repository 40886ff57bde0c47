#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chariot/errors.hpp"

namespace chariot {

/// Parse or validation failure; the message names the line/column or the offending field.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// Command-line adjustments applied on top of the config text.
struct RunOptions {
  std::optional<std::filesystem::path> out_dir;
  std::optional<std::uint64_t> seed;
  bool degrees = false;
  bool svg = false;
  /// Forces [command].name (the CLI subcommand).
  std::optional<std::string> command;
  /// "kind:p1,p2,..." replacing the [surface] table.
  std::optional<std::string> surface;
  /// TOML snippets such as "command.grid = 16", merged over the config in order.
  std::vector<std::string> overrides;
};

struct ScenarioResult {
  /// Headline numbers in output order; also written to summary.txt.
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::filesystem::path> files;
};

/// The commands run_scenario understands.
const std::vector<std::string>& scenario_commands();

/// Parses, validates and executes one scenario, writing its files under the output directory.
ScenarioResult run_scenario(std::string_view config_text, const RunOptions& options = {},
                            std::string_view source_name = "config");

/// Formats a number the way every output file does (9 significant digits).
std::string format_number(double x);

}  // namespace chariot
