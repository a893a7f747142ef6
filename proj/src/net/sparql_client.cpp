#include "sparqlgen/net/sparql_client.hpp"

#include <fstream>
#include <sstream>

#include "sparqlgen/net/url.hpp"

namespace sparqlgen::net {

EndpointUnreachable::EndpointUnreachable(std::string endpoint, int status, const std::string& detail)
    : std::runtime_error("endpoint " + endpoint + " unreachable" +
                         (status != 0 ? " (HTTP " + std::to_string(status) + ")" : std::string()) + ": " + detail),
      endpoint_(std::move(endpoint)),
      status_(status) {}

ResultSet sparql_select(const std::string& endpoint_url, const std::string& query, const HttpOptions& options) {
  HttpResponse res;
  try {
    res = http_post(endpoint_url, "query=" + url_encode(query), "application/x-www-form-urlencoded",
                    {{"Accept", "application/sparql-results+json"}}, options);
  } catch (const TransportError& e) {
    throw EndpointUnreachable(endpoint_url, 0, e.what());
  }
  if (res.status < 200 || res.status >= 300) throw EndpointUnreachable(endpoint_url, res.status, res.body.substr(0, 200));
  return parse_results_json(res.body);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ResultSet select_from(const std::string& source, const std::string& query, const HttpOptions& options) {
  if (is_http_url(source)) return sparql_select(source, query, options);
  std::string text;
  try {
    text = read_file(source);
  } catch (const std::runtime_error& e) {
    throw EndpointUnreachable(source, 0, e.what());
  }
  return parse_results_json(text);
}

}  // namespace sparqlgen::net
