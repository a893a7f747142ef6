#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparqlgen/net/http.hpp"

namespace sparqlgen::index {

using Embedding = std::vector<float>;

class DimensionMismatch : public std::runtime_error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t actual)
      : std::runtime_error("embedding dimension mismatch: expected " + std::to_string(expected) + ", got " +
                           std::to_string(actual)) {}
};

class RemoteEmbedderError : public std::runtime_error {
 public:
  RemoteEmbedderError(int status, const std::string& body_excerpt)
      : std::runtime_error("embedding request failed (HTTP " + std::to_string(status) + "): " + body_excerpt),
        status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  // One unit-norm vector per text.
  virtual std::vector<Embedding> embed(const std::vector<std::string>& texts) = 0;
  virtual std::size_t dimension() const = 0;
  // Identifies the provider and dimension; stored in index files.
  virtual std::string fingerprint() const = 0;
};

// Deterministic offline embedder (feature hashing).
class HashEmbedder final : public Embedder {
 public:
  explicit HashEmbedder(std::size_t dimension = 1024);
  std::vector<Embedding> embed(const std::vector<std::string>& texts) override;
  std::size_t dimension() const override { return dim_; }
  std::string fingerprint() const override;

 private:
  std::size_t dim_;
};

// OpenAI-compatible embeddings API: POST {base}/embeddings with
// {"model", "input": [...]}, reading data[i].embedding.
class RemoteEmbedder final : public Embedder {
 public:
  RemoteEmbedder(std::string base_url, std::string model, std::size_t dimension, std::string api_key = {},
                 net::HttpOptions options = {});
  std::vector<Embedding> embed(const std::vector<std::string>& texts) override;
  std::size_t dimension() const override { return dim_; }
  std::string fingerprint() const override;

 private:
  std::string base_url_;
  std::string model_;
  std::size_t dim_;
  std::string api_key_;
  net::HttpOptions options_;
};

// Rebuilds the embedder described by an index fingerprint. Remote
// fingerprints need the base URL of the embedding service.
std::unique_ptr<Embedder> embedder_for_fingerprint(const std::string& fingerprint, const std::string& remote_url = {},
                                                   const std::string& api_key = {});

// In-place L2 normalization; an all-zero vector becomes e1.
void normalize(Embedding& v);

}  // namespace sparqlgen::index
