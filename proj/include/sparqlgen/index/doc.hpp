#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sparqlgen::index {

enum class DocKind : std::uint8_t { ExampleQuery = 0, ClassShape = 1, EndpointInfo = 2 };

std::string_view to_string(DocKind kind);
// Accepts the names produced by to_string; throws std::invalid_argument.
DocKind doc_kind_from_string(std::string_view name);

// A retrievable unit. embed_text is what gets embedded (question, class
// label + description, endpoint description); payload is what goes into the
// prompt (query text, ShEx shape, endpoint description).
struct IndexedDoc {
  std::string id;
  DocKind kind = DocKind::ExampleQuery;
  std::string embed_text;
  std::string payload;
  std::string endpoint;
  std::optional<std::string> source_iri;
  bool operator==(const IndexedDoc&) const = default;
};

std::uint64_t fnv1a64(std::string_view data, std::uint64_t basis = 0xcbf29ce484222325ULL);

// 16 hex digits of FNV-1a over endpoint, kind and source IRI (or the embed
// text when there is no source IRI).
std::string make_doc_id(std::string_view endpoint, DocKind kind, std::string_view source_key);

// Fills in the id. Throws std::invalid_argument when embed_text is empty.
IndexedDoc make_doc(DocKind kind, std::string embed_text, std::string payload, std::string endpoint,
                    std::optional<std::string> source_iri = std::nullopt);

}  // namespace sparqlgen::index
