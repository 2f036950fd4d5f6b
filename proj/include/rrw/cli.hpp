#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

namespace rrw::cli {

inline constexpr const char* kVersion = "0.1.0";

enum class ParamType { Int, Real, Text, Flag, RealList };

struct Param {
  std::string name;
  ParamType type;
  nlohmann::json def;
  std::string help;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<Param> params;
};

/// Subcommands with their parameter tables (defaults included).
const std::vector<Command>& commands();

/// Reads a JSON object from `path`; an empty file is an empty object.
/// Throws SchemaError on malformed input.
nlohmann::json load_config(const std::string& path);

/// defaults <- file <- flags. File keys must name parameters of the command
/// and carry the declared type; flags arrive as raw strings. Throws
/// SchemaError / UsageError.
nlohmann::json merge_config(const Command& cmd, const nlohmann::json& file,
                            const std::vector<std::pair<std::string, std::string>>& flags);

/// Exit codes: 0 ok, 2 usage or schema, 3 precondition or hypothesis,
/// 4 budget cap. Errors go to `err` as one JSON line {error, detail}.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rrw::cli
