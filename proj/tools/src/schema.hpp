#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace lab {

const std::vector<std::string>& commands();

// Self-contained draft-04 schema for one subcommand: the common properties
// merged with the command's own, plus the shared definitions.
nlohmann::json command_schema(const std::string& command);

// Parses `text` and validates it; ConfigError with a JSON pointer on failure.
nlohmann::json parse_and_validate(const std::string& command, const std::string& text);

}  // namespace lab
