#include "sparqlgen/index/harvest.hpp"

#include <filesystem>
#include <set>

#include "sparqlgen/log.hpp"
#include "sparqlgen/net/jsonld.hpp"
#include "sparqlgen/net/sparql_client.hpp"
#include "sparqlgen/net/url.hpp"
#include "sparqlgen/resources.hpp"
#include "sparqlgen/schema/void.hpp"

namespace sparqlgen::index {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::optional<std::string> text_field(const nlohmann::json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) return std::nullopt;
  const auto& v = obj.at(key);
  if (v.is_string()) return trim(v.get<std::string>());
  // {"@value": ...} or a list of language variants
  if (v.is_object() && v.contains("@value") && v.at("@value").is_string()) return trim(v.at("@value").get<std::string>());
  if (v.is_array()) {
    for (const auto& item : v) {
      if (item.is_string()) return trim(item.get<std::string>());
      if (item.is_object() && item.contains("@value") && item.at("@value").is_string())
        return trim(item.at("@value").get<std::string>());
    }
  }
  return std::nullopt;
}

const nlohmann::json* described_node(const nlohmann::json& doc) {
  if (doc.is_object()) {
    if (doc.contains("name") || doc.contains("description")) return &doc;
    if (doc.contains("@graph")) return described_node(doc.at("@graph"));
  }
  if (doc.is_array()) {
    for (const auto& item : doc)
      if (const auto* node = described_node(item)) return node;
  }
  return nullptr;
}

std::string resolve(const std::string& source, const std::filesystem::path& base) {
  if (source.empty() || net::is_http_url(source)) return source;
  std::filesystem::path p(source);
  if (p.is_absolute()) return source;
  return (base / p).lexically_normal().string();
}

}  // namespace

HarvestResult examples_from_results(const net::ResultSet& results, const std::string& endpoint) {
  HarvestResult out;
  std::set<std::string> seen;
  for (const auto& row : results.rows) {
    const auto* example = net::binding(row, "example");
    const auto* comment = net::binding(row, "comment");
    const auto* query = net::binding(row, "query");
    std::optional<std::string> source;
    if (example != nullptr) source = example->value;
    if (source && seen.count(*source) != 0) continue;
    const std::string question = comment != nullptr ? trim(comment->value) : std::string();
    if (query == nullptr || question.empty() || trim(query->value).empty()) {
      ++out.skipped;
      if (source) seen.insert(*source);
      continue;
    }
    if (source) seen.insert(*source);
    out.docs.push_back(make_doc(DocKind::ExampleQuery, question, query->value, endpoint, source));
  }
  if (out.skipped > 0)
    log_warn("skipped " + std::to_string(out.skipped) + " example(s) without a comment or query at " + endpoint);
  if (out.docs.empty()) log_warn("no example queries found at " + endpoint);
  return out;
}

HarvestResult harvest_examples(const std::string& source, const std::string& endpoint,
                               const net::HttpOptions& options) {
  return examples_from_results(net::select_from(source, std::string(resources::examples_query()), options), endpoint);
}

std::optional<IndexedDoc> endpoint_info_from_html(std::string_view html, const std::string& endpoint,
                                                  const std::optional<std::string>& homepage) {
  const auto block = net::first_jsonld_block(html);
  if (!block) return std::nullopt;
  const auto* node = described_node(*block);
  if (node == nullptr) return std::nullopt;
  const auto name = text_field(*node, "name");
  const auto description = text_field(*node, "description");
  std::string text;
  if (name && !name->empty()) text = *name;
  if (description && !description->empty()) {
    if (!text.empty()) text += "\n";
    text += *description;
  }
  if (text.empty()) return std::nullopt;
  std::string payload = "Endpoint: " + endpoint + "\n" + text;
  return make_doc(DocKind::EndpointInfo, text, std::move(payload), endpoint, homepage);
}

std::optional<IndexedDoc> harvest_endpoint_info(const std::string& source, const std::string& endpoint,
                                                const net::HttpOptions& options) {
  std::string html;
  try {
    if (net::is_http_url(source)) {
      auto res = net::http_get(source, {{"Accept", "text/html"}}, options);
      if (res.status != 200) {
        log_warn("homepage " + source + " returned HTTP " + std::to_string(res.status));
        return std::nullopt;
      }
      html = std::move(res.body);
    } else {
      html = net::read_file(source);
    }
  } catch (const std::exception& e) {
    log_warn("cannot read homepage " + source + ": " + e.what());
    return std::nullopt;
  }
  auto doc = endpoint_info_from_html(html, endpoint, net::is_http_url(source) ? std::optional(source) : std::nullopt);
  if (!doc) log_warn("no schema.org description on homepage " + source);
  return doc;
}

std::vector<IndexedDoc> class_shape_docs(const schema::ClassMap& classes, const std::string& endpoint,
                                         const schema::PrefixMap& prefixes) {
  std::vector<IndexedDoc> docs;
  for (const auto& [iri, shape] : classes) {
    std::string text = shape.label;
    if (shape.description && !shape.description->empty()) text += "\n" + *shape.description;
    docs.push_back(make_doc(DocKind::ClassShape, std::move(text), schema::render_shex(shape, prefixes), endpoint, iri));
  }
  return docs;
}

KbConfig parse_kb_config(const nlohmann::json& doc, const std::string& base_dir) {
  if (!doc.is_object()) throw ConfigError("knowledge base config must be a JSON object");
  KbConfig cfg;
  try {
    cfg.prefixes = sparql::builtin_prefixes();
    if (doc.contains("prefixes"))
      for (const auto& [k, v] : doc.at("prefixes").get<schema::PrefixMap>()) cfg.prefixes[k] = v;
    if (!doc.contains("endpoints") || !doc.at("endpoints").is_array())
      throw ConfigError("knowledge base config needs an \"endpoints\" array");
    const std::filesystem::path base(base_dir);
    for (const auto& e : doc.at("endpoints")) {
      EndpointSources src;
      src.iri = e.at("iri").get<std::string>();
      if (!net::is_http_url(src.iri)) throw ConfigError("endpoint IRI is not an http(s) URL: " + src.iri);
      auto pick = [&](const char* key) {
        return e.contains(key) ? resolve(e.at(key).get<std::string>(), base) : src.iri;
      };
      src.examples = pick("examples");
      src.void_source = pick("void");
      src.labels = pick("labels");
      src.homepage = pick("homepage");
      cfg.endpoints.push_back(std::move(src));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("invalid knowledge base config: ") + ex.what());
  }
  return cfg;
}

KbConfig load_kb_config(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(net::read_file(path));
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("cannot parse " + path + ": " + ex.what());
  } catch (const std::runtime_error& ex) {
    throw ConfigError(ex.what());
  }
  return parse_kb_config(doc, std::filesystem::path(path).parent_path().string());
}

VectorIndex build_index(std::vector<IndexedDoc> docs, Embedder& embedder, std::size_t batch_size) {
  std::vector<Embedding> vectors;
  vectors.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); i += batch_size) {
    std::vector<std::string> texts;
    for (std::size_t j = i; j < std::min(docs.size(), i + batch_size); ++j) texts.push_back(docs[j].embed_text);
    for (auto& v : embedder.embed(texts)) vectors.push_back(std::move(v));
  }
  return VectorIndex(embedder.dimension(), embedder.fingerprint(), std::move(docs), std::move(vectors));
}

KnowledgeBase build_knowledge_base(const KbConfig& config, Embedder& embedder, const net::HttpOptions& options) {
  KnowledgeBase kb;
  kb.catalog = schema::SchemaCatalog(config.prefixes, {});
  std::vector<IndexedDoc> docs;
  for (const auto& ep : config.endpoints) {
    log_info("harvesting " + ep.iri);
    if (auto info = harvest_endpoint_info(ep.homepage, ep.iri, options)) docs.push_back(std::move(*info));

    auto examples = harvest_examples(ep.examples, ep.iri, options);
    kb.skipped_examples += examples.skipped;
    for (auto& d : examples.docs) docs.push_back(std::move(d));

    const auto rows = schema::fetch_void_rows(ep.void_source, options);
    schema::LabelMap labels;
    try {
      labels = schema::fetch_class_labels(ep.labels, options);
    } catch (const std::exception& e) {
      log_warn("no class labels for " + ep.iri + ": " + e.what());
    }
    auto classes = schema::build_class_shapes(rows, labels);
    for (auto& d : class_shape_docs(classes, ep.iri, config.prefixes)) docs.push_back(std::move(d));
    kb.catalog = kb.catalog.with_endpoint(ep.iri, std::move(classes));
  }
  kb.index = build_index(std::move(docs), embedder);
  return kb;
}

}  // namespace sparqlgen::index
