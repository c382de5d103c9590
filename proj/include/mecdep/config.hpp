#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "mecdep/params.hpp"

namespace mecdep {

/// Parses a flat JSON config object. Unknown keys, missing required keys, type errors and
/// malformed JSON (reported with its byte offset) all raise ConfigError. The result is
/// validated.
SystemParams params_from_json(const nlohmann::json& j);
SystemParams params_from_string(std::string_view text);
SystemParams load_params(const std::string& path);

nlohmann::json params_to_json(const SystemParams& p);

/// Applies a single `key=value` override (value parsed as JSON, bare words as strings) and
/// revalidates. Setting one side of an exclusive pair clears the other.
SystemParams apply_override(const SystemParams& p, std::string_view assignment);

}  // namespace mecdep
