#include "sparqlgen/net/jsonld.hpp"

#include <algorithm>
#include <cctype>

namespace sparqlgen::net {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::optional<nlohmann::json> first_jsonld_block(std::string_view html) {
  const std::string lowered = lower(html);
  std::size_t pos = 0;
  while ((pos = lowered.find("<script", pos)) != std::string::npos) {
    const std::size_t tag_end = lowered.find('>', pos);
    if (tag_end == std::string::npos) return std::nullopt;
    const std::string_view tag(lowered.data() + pos, tag_end - pos);
    const std::size_t body_start = tag_end + 1;
    const std::size_t close = lowered.find("</script", body_start);
    if (close == std::string::npos) return std::nullopt;
    pos = close;
    if (tag.find("application/ld+json") == std::string_view::npos) continue;
    auto parsed = nlohmann::json::parse(html.substr(body_start, close - body_start), nullptr, false);
    if (parsed.is_discarded()) continue;
    return parsed;
  }
  return std::nullopt;
}

}  // namespace sparqlgen::net
