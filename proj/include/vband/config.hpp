#ifndef VBAND_CONFIG_HPP_
#define VBAND_CONFIG_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vband/scenario.hpp"

namespace vband {

// Config files are flat `key = value` lines with optional [scenario]
// sections; `#` and `;` start comments. Resolution order, later wins:
//   scenario defaults < top-level keys < the [<scenario>] section < flags.
// Sections naming other scenarios are checked but not applied.

using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Every key the parser accepts.
const std::vector<std::string>& config_keys();

/// Parses text (source names it in error messages) and applies overrides.
/// Throws ConfigError with line numbers for syntax errors, a suggestion for
/// unknown keys and the field name for invalid values.
ScenarioConfig parse_config_text(std::string_view text, const Overrides& overrides,
                                 std::string_view source = "<config>");

/// Reads file (if given) then delegates to parse_config_text.
ScenarioConfig parse_config(const std::optional<std::filesystem::path>& file,
                            const Overrides& overrides);

/// Resolved values of every key, in config_keys() order, formatted so that
/// parsing them back reproduces the config.
std::vector<std::pair<std::string, std::string>> config_entries(const ScenarioConfig& config);

/// Shortest round-trip representation of a double.
std::string format_double(double value);

}  // namespace vband

#endif  // VBAND_CONFIG_HPP_
