#include "sparqlgen/net/http.hpp"

#include <httplib.h>

#include "sparqlgen/net/url.hpp"

namespace sparqlgen::net {
namespace {

httplib::Client make_client(const Url& url, const HttpOptions& options) {
  httplib::Client client(url.origin());
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());
  client.set_follow_location(true);
  return client;
}

Url require_url(const std::string& text) {
  auto url = parse_url(text);
  if (!url) throw TransportError("invalid URL: " + text);
  return *url;
}

HttpResponse convert(const httplib::Result& res, const std::string& url) {
  if (!res) throw TransportError("request to " + url + " failed: " + httplib::to_string(res.error()));
  HttpResponse out;
  out.status = res->status;
  out.body = res->body;
  out.content_type = res->get_header_value("Content-Type");
  return out;
}

httplib::Headers to_httplib(const Headers& headers) { return httplib::Headers(headers.begin(), headers.end()); }

}  // namespace

HttpResponse http_get(const std::string& url, const Headers& headers, const HttpOptions& options) {
  const Url u = require_url(url);
  auto client = make_client(u, options);
  return convert(client.Get(u.path, to_httplib(headers)), url);
}

HttpResponse http_post(const std::string& url, const std::string& body, const std::string& content_type,
                       const Headers& headers, const HttpOptions& options) {
  const Url u = require_url(url);
  auto client = make_client(u, options);
  return convert(client.Post(u.path, to_httplib(headers), body, content_type), url);
}

std::string url_encode(const std::string& text) { return httplib::detail::encode_query_param(text); }

}  // namespace sparqlgen::net
