#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparqlgen/config_error.hpp"
#include "sparqlgen/index/doc.hpp"
#include "sparqlgen/index/embedder.hpp"
#include "sparqlgen/index/vector_index.hpp"
#include "sparqlgen/net/http.hpp"
#include "sparqlgen/net/sparql_results.hpp"
#include "sparqlgen/schema/catalog.hpp"

namespace sparqlgen::index {

struct HarvestResult {
  std::vector<IndexedDoc> docs;
  std::size_t skipped = 0;  // examples without a comment or query
};

// One ExampleQuery doc per row of queries/examples.rq results that binds both
// ?comment and ?query. Rows with the same ?example keep the first comment.
HarvestResult examples_from_results(const net::ResultSet& results, const std::string& endpoint);

// `source` is the endpoint URL or a SPARQL-JSON file. Throws
// net::EndpointUnreachable / net::MalformedResults.
HarvestResult harvest_examples(const std::string& source, const std::string& endpoint,
                               const net::HttpOptions& options = {});

// EndpointInfo doc from the first JSON-LD block of a homepage, using its
// name and description fields.
std::optional<IndexedDoc> endpoint_info_from_html(std::string_view html, const std::string& endpoint,
                                                  const std::optional<std::string>& homepage = std::nullopt);

// `source` is a homepage URL or an HTML file. Failures are logged and give
// nullopt.
std::optional<IndexedDoc> harvest_endpoint_info(const std::string& source, const std::string& endpoint,
                                                const net::HttpOptions& options = {});

// One ClassShape doc per class. embed_text is the label, followed by the
// description on a new line when there is one; payload is the rendered shape.
std::vector<IndexedDoc> class_shape_docs(const schema::ClassMap& classes, const std::string& endpoint,
                                         const schema::PrefixMap& prefixes);

// Where to read each kind of metadata for one endpoint. Each source is an
// http(s) URL or a local file; all default to the endpoint IRI itself.
struct EndpointSources {
  std::string iri;
  std::string examples;
  std::string void_source;
  std::string labels;
  std::string homepage;
};

struct KbConfig {
  schema::PrefixMap prefixes;
  std::vector<EndpointSources> endpoints;
};

// {"prefixes": {...}, "endpoints": [{"iri", "examples", "void", "labels",
// "homepage"}]}. Throws ConfigError. Relative file paths resolve against the config directory.
// The built-in prefixes are always present; declared ones override them.
KbConfig parse_kb_config(const nlohmann::json& doc, const std::string& base_dir = ".");
KbConfig load_kb_config(const std::string& path);

struct KnowledgeBase {
  schema::SchemaCatalog catalog;
  VectorIndex index;
  std::size_t skipped_examples = 0;
};

// Harvests every endpoint, builds the catalog and embeds all documents.
// Missing labels or homepage metadata only produce warnings; VoID and example
// failures propagate.
KnowledgeBase build_knowledge_base(const KbConfig& config, Embedder& embedder, const net::HttpOptions& options = {});

// Embeds in batches and builds an index over `docs`.
VectorIndex build_index(std::vector<IndexedDoc> docs, Embedder& embedder, std::size_t batch_size = 64);

}  // namespace sparqlgen::index
