#pragma once

#include <stdexcept>
#include <string>

#include "sparqlgen/net/http.hpp"
#include "sparqlgen/net/sparql_results.hpp"

namespace sparqlgen::net {

class EndpointUnreachable : public std::runtime_error {
 public:
  EndpointUnreachable(std::string endpoint, int status, const std::string& detail);
  const std::string& endpoint() const { return endpoint_; }
  int status() const { return status_; }  // 0 for transport failures

 private:
  std::string endpoint_;
  int status_;
};

// SPARQL protocol query via POST (form-encoded), requesting
// application/sparql-results+json.
ResultSet sparql_select(const std::string& endpoint_url, const std::string& query, const HttpOptions& options = {});

// `source` is either an http(s) endpoint URL, queried with `query`, or a path
// to a SPARQL-JSON results file whose content is returned as is.
ResultSet select_from(const std::string& source, const std::string& query, const HttpOptions& options = {});

std::string read_file(const std::string& path);

}  // namespace sparqlgen::net
