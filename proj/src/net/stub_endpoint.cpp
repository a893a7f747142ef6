#include "sparqlgen/net/stub_endpoint.hpp"

#include <httplib.h>

#include <cctype>

namespace sparqlgen::net {

using nlohmann::json;

std::string normalize_query_text(const std::string& query) {
  std::string out;
  bool space = false;
  for (char c : query) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
    } else {
      if (space) out.push_back(' ');
      space = false;
      out.push_back(c);
    }
  }
  return out;
}

namespace {

StubRoute parse_route(const json& r) {
  StubRoute route;
  if (r.contains("query")) route.query = normalize_query_text(r.at("query").get<std::string>());
  if (r.contains("contains")) route.contains = normalize_query_text(r.at("contains").get<std::string>());
  route.status = r.value("status", 200);
  if (r.contains("results")) {
    route.body = r.at("results").dump();
  } else {
    route.body = r.value("body", std::string());
    route.content_type = r.value("content_type", std::string("text/plain"));
  }
  return route;
}

}  // namespace

std::vector<StubEndpointSpec> parse_stub_fixture(const json& doc) {
  std::vector<StubEndpointSpec> out;
  for (const auto& [path, spec] : doc.at("endpoints").items()) {
    StubEndpointSpec ep;
    ep.path = path;
    if (spec.contains("homepage")) ep.homepage = spec.at("homepage").get<std::string>();
    for (const auto& r : spec.value("routes", json::array())) ep.routes.push_back(parse_route(r));
    if (spec.contains("default")) ep.fallback = parse_route(spec.at("default"));
    out.push_back(std::move(ep));
  }
  return out;
}

struct StubEndpointServer::Impl {
  std::vector<StubEndpointSpec> endpoints;
  httplib::Server server;
  std::thread thread;
  mutable std::mutex mutex;
  std::vector<std::string> queries;

  void install() {
    for (const auto& ep : endpoints) {
      auto handler = [this, &ep](const httplib::Request& req, httplib::Response& res) { handle(ep, req, res); };
      server.Get(ep.path, handler);
      server.Post(ep.path, handler);
    }
  }

  void handle(const StubEndpointSpec& ep, const httplib::Request& req, httplib::Response& res) {
    std::string query;
    if (req.has_param("query")) {
      query = req.get_param_value("query");
    } else if (req.get_header_value("Content-Type").rfind("application/sparql-query", 0) == 0) {
      query = req.body;
    }
    if (query.empty()) {
      if (ep.homepage) {
        res.set_content(*ep.homepage, "text/html");
      } else {
        res.status = 400;
        res.set_content("missing query parameter", "text/plain");
      }
      return;
    }
    {
      std::lock_guard lock(mutex);
      queries.push_back(query);
    }
    const std::string normalized = normalize_query_text(query);
    const StubRoute* chosen = &ep.fallback;
    for (const auto& route : ep.routes) {
      if ((route.query && *route.query == normalized) ||
          (route.contains && normalized.find(*route.contains) != std::string::npos)) {
        chosen = &route;
        break;
      }
    }
    res.status = chosen->status;
    res.set_content(chosen->body, chosen->content_type);
  }
};

StubEndpointServer::StubEndpointServer(std::vector<StubEndpointSpec> endpoints) : impl_(std::make_unique<Impl>()) {
  impl_->endpoints = std::move(endpoints);
  impl_->install();
}

StubEndpointServer::~StubEndpointServer() { stop(); }

int StubEndpointServer::start(int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port("127.0.0.1");
  } else {
    if (!impl_->server.bind_to_port("127.0.0.1", port)) port_ = -1;
    else port_ = port;
  }
  if (port_ <= 0) throw std::runtime_error("stub endpoint: cannot bind port");
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port_;
}

void StubEndpointServer::listen(const std::string& host, int port) {
  port_ = port;
  impl_->server.listen(host, port);
}

void StubEndpointServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

std::string StubEndpointServer::url(const std::string& path) const {
  return "http://127.0.0.1:" + std::to_string(port_) + path;
}

std::vector<std::string> StubEndpointServer::received_queries() const {
  std::lock_guard lock(impl_->mutex);
  return impl_->queries;
}

}  // namespace sparqlgen::net
