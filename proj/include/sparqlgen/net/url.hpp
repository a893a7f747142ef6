#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace sparqlgen::net {

struct Url {
  std::string scheme;  // "http" or "https"
  std::string host;
  int port = 0;
  std::string path;  // includes query string, at least "/"

  // "scheme://host:port"
  std::string origin() const;
};

// Accepts only absolute http(s) URLs with a non-empty host.
std::optional<Url> parse_url(std::string_view text);

bool is_http_url(std::string_view text);

}  // namespace sparqlgen::net
