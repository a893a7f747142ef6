#include "sparqlgen/index/doc.hpp"

#include <cstdio>
#include <stdexcept>

namespace sparqlgen::index {

std::string_view to_string(DocKind kind) {
  switch (kind) {
    case DocKind::ExampleQuery: return "example_query";
    case DocKind::ClassShape: return "class_shape";
    case DocKind::EndpointInfo: return "endpoint_info";
  }
  return "unknown";
}

DocKind doc_kind_from_string(std::string_view name) {
  if (name == "example_query") return DocKind::ExampleQuery;
  if (name == "class_shape") return DocKind::ClassShape;
  if (name == "endpoint_info") return DocKind::EndpointInfo;
  throw std::invalid_argument("unknown document kind: " + std::string(name));
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t basis) {
  std::uint64_t h = basis;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string make_doc_id(std::string_view endpoint, DocKind kind, std::string_view source_key) {
  std::string key;
  key.reserve(endpoint.size() + source_key.size() + 16);
  key.append(endpoint).push_back('\x1f');
  key.append(to_string(kind)).push_back('\x1f');
  key.append(source_key);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(key)));
  return buf;
}

IndexedDoc make_doc(DocKind kind, std::string embed_text, std::string payload, std::string endpoint,
                    std::optional<std::string> source_iri) {
  if (embed_text.empty()) throw std::invalid_argument("document embed text must not be empty");
  IndexedDoc doc;
  doc.kind = kind;
  doc.id = make_doc_id(endpoint, kind, source_iri ? *source_iri : embed_text);
  doc.embed_text = std::move(embed_text);
  doc.payload = std::move(payload);
  doc.endpoint = std::move(endpoint);
  doc.source_iri = std::move(source_iri);
  return doc;
}

}  // namespace sparqlgen::index
