#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sparqlgen/index/doc.hpp"
#include "sparqlgen/index/embedder.hpp"

namespace sparqlgen::index {

class CorruptIndex : public std::runtime_error {
 public:
  explicit CorruptIndex(const std::string& reason) : std::runtime_error("corrupt index: " + reason) {}
};

class ProviderMismatch : public std::runtime_error {
 public:
  ProviderMismatch(const std::string& expected, const std::string& actual)
      : std::runtime_error("embedding provider mismatch: index built with '" + actual + "', expected '" + expected +
                           "'") {}
};

struct ScoredDoc {
  IndexedDoc doc;
  float score = 0.0f;
};

// Flat exact cosine index over unit vectors. Immutable after construction.
class VectorIndex {
 public:
  VectorIndex() = default;
  // Throws DimensionMismatch when a vector has the wrong size and
  // std::invalid_argument when docs and vectors differ in count. Vectors are
  // re-normalized; documents with duplicate ids keep the first occurrence.
  VectorIndex(std::size_t dimension, std::string fingerprint, std::vector<IndexedDoc> docs,
              std::vector<Embedding> vectors);

  std::size_t dimension() const { return dim_; }
  const std::string& fingerprint() const { return fingerprint_; }
  std::size_t size() const { return docs_.size(); }
  const std::vector<IndexedDoc>& docs() const { return docs_; }
  std::span<const float> vector(std::size_t i) const;
  std::size_t count(DocKind kind) const;

  // The min(k, matching) best documents by dot product, descending, ties by
  // ascending id. No similarity threshold. Scores clamped to [-1, 1].
  std::vector<ScoredDoc> search(std::span<const float> query, std::size_t k,
                                std::optional<DocKind> kind = std::nullopt) const;
  // Serial reference path with the same contract.
  std::vector<ScoredDoc> search_serial(std::span<const float> query, std::size_t k,
                                       std::optional<DocKind> kind = std::nullopt) const;

  // Layout documented in docs/index-format.md.
  void save(const std::string& path) const;
  std::string serialize() const;
  static VectorIndex load(const std::string& path, const std::optional<std::string>& expected_fingerprint = {});
  static VectorIndex deserialize(std::string_view bytes, const std::optional<std::string>& expected_fingerprint = {});

 private:
  std::vector<std::uint8_t> eligibility(std::optional<DocKind> kind) const;
  void check_query(std::span<const float> query, std::size_t k) const;

  std::size_t dim_ = 0;
  std::string fingerprint_;
  std::vector<IndexedDoc> docs_;
  std::vector<float> matrix_;
  std::vector<std::uint32_t> id_rank_;
};

}  // namespace sparqlgen::index
