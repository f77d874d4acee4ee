#pragma once

// Canonical JSON emission: sorted keys, 17-significant-digit floats, no
// timing data, so reruns with the same seed are byte-identical.

#include <string>

#include "json.hpp"

namespace gl3d {

using json = nlohmann::json;

// Serializes with sorted keys and %.17g number formatting.
std::string canonical_dump(const json& j, int indent = 1);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace gl3d
