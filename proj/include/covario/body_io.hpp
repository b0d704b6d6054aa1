#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "covario/geometry.hpp"

namespace covario {

/// Parses one body specification:
///   {"kind":"polygon","vertices":[[x,y],...]}
///   {"kind":"support2d","a0":a0,"coeffs":[[a1,b1],...]}
///   {"kind":"disk","center":[x,y],"radius":r}
///   {"kind":"zonogon","center":[x,y],"generators":[[[px,py],[qx,qy]],...]}
/// Every kind accepts an optional "offset":[x,y]. Unknown keys are rejected.
/// Malformed JSON raises ParseError with the line and column.
Body parse_body(std::string_view text);
Body load_body(const std::filesystem::path& path);

Body body_from_json(const nlohmann::json& j);
nlohmann::json body_to_json(const Body& body);

/// FNV-1a hash of the canonical JSON dump, rendered as 16 hex digits.
std::string body_hash(const Body& body);

}  // namespace covario
