#include "sparqlgen/index/embedder.hpp"

#include <cmath>

#include <json.hpp>

#include "sparqlgen/index/kernels.hpp"

namespace sparqlgen::index {

using nlohmann::json;

namespace {
constexpr std::string_view kHashPrefix = "hash-v1/d=";
constexpr std::string_view kRemotePrefix = "openai/";
}  // namespace

void normalize(Embedding& v) {
  double norm = 0.0;
  for (float x : v) norm += static_cast<double>(x) * x;
  if (norm == 0.0) {
    if (!v.empty()) v[0] = 1.0f;
    return;
  }
  norm = std::sqrt(norm);
  for (float& x : v) x = static_cast<float>(x / norm);
}

HashEmbedder::HashEmbedder(std::size_t dimension) : dim_(dimension) {
  if (dim_ == 0) throw std::invalid_argument("embedding dimension must be positive");
}

std::vector<Embedding> HashEmbedder::embed(const std::vector<std::string>& texts) {
  return kernels::hash_embed(texts, dim_);
}

std::string HashEmbedder::fingerprint() const { return std::string(kHashPrefix) + std::to_string(dim_); }

RemoteEmbedder::RemoteEmbedder(std::string base_url, std::string model, std::size_t dimension, std::string api_key,
                               net::HttpOptions options)
    : base_url_(std::move(base_url)),
      model_(std::move(model)),
      dim_(dimension),
      api_key_(std::move(api_key)),
      options_(options) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

std::vector<Embedding> RemoteEmbedder::embed(const std::vector<std::string>& texts) {
  if (texts.empty()) return {};
  json body = {{"model", model_}, {"input", texts}};
  net::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);
  net::HttpResponse res;
  try {
    res = net::http_post(base_url_ + "/embeddings", body.dump(), "application/json", headers, options_);
  } catch (const net::TransportError& e) {
    throw RemoteEmbedderError(0, e.what());
  }
  if (res.status != 200) throw RemoteEmbedderError(res.status, res.body.substr(0, 200));
  auto doc = json::parse(res.body, nullptr, false);
  if (doc.is_discarded() || !doc.contains("data") || !doc["data"].is_array())
    throw RemoteEmbedderError(res.status, "malformed embeddings response");
  std::vector<Embedding> out(texts.size());
  std::size_t filled = 0;
  for (std::size_t i = 0; i < doc["data"].size(); ++i) {
    const auto& item = doc["data"][i];
    const std::size_t idx = item.value("index", i);
    if (idx >= out.size() || !item.contains("embedding")) throw RemoteEmbedderError(res.status, "bad embedding item");
    Embedding v = item["embedding"].get<Embedding>();
    if (v.size() != dim_) throw DimensionMismatch(dim_, v.size());
    normalize(v);
    out[idx] = std::move(v);
    ++filled;
  }
  if (filled != texts.size()) throw RemoteEmbedderError(res.status, "embedding count does not match input count");
  return out;
}

std::string RemoteEmbedder::fingerprint() const {
  return std::string(kRemotePrefix) + model_ + "/d=" + std::to_string(dim_);
}

std::unique_ptr<Embedder> embedder_for_fingerprint(const std::string& fingerprint, const std::string& remote_url,
                                                   const std::string& api_key) {
  if (fingerprint.rfind(kHashPrefix, 0) == 0) {
    return std::make_unique<HashEmbedder>(std::stoul(fingerprint.substr(kHashPrefix.size())));
  }
  if (fingerprint.rfind(kRemotePrefix, 0) == 0) {
    const auto dpos = fingerprint.rfind("/d=");
    if (dpos == std::string::npos || dpos <= kRemotePrefix.size())
      throw std::invalid_argument("bad embedder fingerprint: " + fingerprint);
    if (remote_url.empty()) throw std::invalid_argument("index uses a remote embedder; an embedding URL is required");
    const std::string model = fingerprint.substr(kRemotePrefix.size(), dpos - kRemotePrefix.size());
    return std::make_unique<RemoteEmbedder>(remote_url, model, std::stoul(fingerprint.substr(dpos + 3)), api_key);
  }
  throw std::invalid_argument("unknown embedder fingerprint: " + fingerprint);
}

}  // namespace sparqlgen::index
