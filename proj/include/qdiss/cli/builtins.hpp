#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "qdiss/cli/config.hpp"

namespace qdiss::cli {

struct BuiltinScenario {
  std::string_view name;
  std::string_view summary;
  std::string_view text;  // scenario file contents
};

const std::vector<BuiltinScenario>& builtin_scenarios();
const BuiltinScenario* find_builtin(std::string_view name);

/// Parses a built-in; throws ConfigError for an unknown name.
ConfigDocument load_builtin(std::string_view name);

}  // namespace qdiss::cli
