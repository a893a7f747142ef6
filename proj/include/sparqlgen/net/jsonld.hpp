#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace sparqlgen::net {

// Parsed content of the first <script type="application/ld+json"> block of an
// HTML page, if any parses.
std::optional<nlohmann::json> first_jsonld_block(std::string_view html);

}  // namespace sparqlgen::net
