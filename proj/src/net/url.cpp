#include "sparqlgen/net/url.hpp"

#include <cctype>
#include <charconv>

namespace sparqlgen::net {

std::string Url::origin() const { return scheme + "://" + host + ":" + std::to_string(port); }

std::optional<Url> parse_url(std::string_view text) {
  Url url;
  if (text.rfind("http://", 0) == 0) {
    url.scheme = "http";
    url.port = 80;
    text.remove_prefix(7);
  } else if (text.rfind("https://", 0) == 0) {
    url.scheme = "https";
    url.port = 443;
    text.remove_prefix(8);
  } else {
    return std::nullopt;
  }
  const auto slash = text.find_first_of("/?#");
  std::string_view authority = text.substr(0, slash);
  url.path = slash == std::string_view::npos ? "/" : std::string(text.substr(slash));
  if (!url.path.empty() && url.path.front() != '/') url.path.insert(url.path.begin(), '/');
  if (const auto hash = url.path.find('#'); hash != std::string::npos) url.path.erase(hash);
  if (authority.find('@') != std::string_view::npos) return std::nullopt;
  if (const auto colon = authority.rfind(':'); colon != std::string_view::npos && authority.front() != '[') {
    std::string_view port = authority.substr(colon + 1);
    int value = 0;
    auto [ptr, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
    if (ec != std::errc() || ptr != port.data() + port.size() || value <= 0 || value > 65535) return std::nullopt;
    url.port = value;
    authority = authority.substr(0, colon);
  }
  if (authority.empty()) return std::nullopt;
  for (char c : authority) {
    const auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || c == '.' || c == '-' || c == '_' || c == '[' || c == ']' || c == ':')) return std::nullopt;
  }
  url.host = std::string(authority);
  return url;
}

bool is_http_url(std::string_view text) { return parse_url(text).has_value(); }

}  // namespace sparqlgen::net
