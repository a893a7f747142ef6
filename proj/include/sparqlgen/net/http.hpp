#pragma once

#include <chrono>
#include <map>
#include <stdexcept>
#include <string>

namespace sparqlgen::net {

using Headers = std::multimap<std::string, std::string>;

struct HttpResponse {
  int status = 0;
  std::string body;
  std::string content_type;
};

// The request never produced an HTTP response (DNS, connect, TLS, timeout).
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HttpOptions {
  std::chrono::milliseconds timeout{std::chrono::seconds(60)};
};

HttpResponse http_get(const std::string& url, const Headers& headers = {}, const HttpOptions& options = {});

HttpResponse http_post(const std::string& url, const std::string& body, const std::string& content_type,
                       const Headers& headers = {}, const HttpOptions& options = {});

std::string url_encode(const std::string& text);

}  // namespace sparqlgen::net
