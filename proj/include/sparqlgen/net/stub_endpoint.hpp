#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

namespace sparqlgen::net {

// Canned SPARQL endpoint for offline runs. Fixture layout:
//
//   {"endpoints": {"/uniprot": {
//       "homepage": "<html>...</html>",            (optional, served on GET without query)
//       "routes": [{"query": "...",                 (whitespace-normalized equality)
//                   "contains": "...",              (or normalized substring match)
//                   "status": 200,
//                   "results": {SPARQL-JSON}, "body": "raw text"}],
//       "default": {"status": 400, "body": "..."}}}}
//
// The first matching route wins.
struct StubRoute {
  std::optional<std::string> query;
  std::optional<std::string> contains;
  int status = 200;
  std::string body;
  std::string content_type = "application/sparql-results+json";
};

struct StubEndpointSpec {
  std::string path;
  std::optional<std::string> homepage;
  std::vector<StubRoute> routes;
  StubRoute fallback{std::nullopt, std::nullopt, 400, "no canned response for query", "text/plain"};
};

std::vector<StubEndpointSpec> parse_stub_fixture(const nlohmann::json& doc);

// Collapses whitespace runs to one space and trims.
std::string normalize_query_text(const std::string& query);

class StubEndpointServer {
 public:
  explicit StubEndpointServer(std::vector<StubEndpointSpec> endpoints);
  ~StubEndpointServer();
  StubEndpointServer(const StubEndpointServer&) = delete;
  StubEndpointServer& operator=(const StubEndpointServer&) = delete;

  // Binds to 127.0.0.1 (port 0 = any free port) and serves in a background
  // thread. Returns the bound port.
  int start(int port = 0);
  // Serves on the calling thread until stop().
  void listen(const std::string& host, int port);
  void stop();

  int port() const { return port_; }
  std::string url(const std::string& path) const;
  std::vector<std::string> received_queries() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace sparqlgen::net
