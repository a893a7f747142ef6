#include "sparqlgen/schema/void.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <tuple>

#include "sparqlgen/net/jsonld.hpp"
#include "sparqlgen/net/sparql_client.hpp"
#include "sparqlgen/resources.hpp"

namespace sparqlgen::schema {

namespace {

constexpr std::string_view kRdfsLiteral = "http://www.w3.org/2000/01/rdf-schema#Literal";

std::uint64_t parse_count(const net::RdfValue* v) {
  if (v == nullptr) return 0;
  std::uint64_t n = 0;
  const auto& s = v->value;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  return ec == std::errc() ? n : 0;
}

int language_rank(const std::string& lang) {
  std::string l = lang;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (l == "en" || l.rfind("en-", 0) == 0) return 0;
  if (l.empty()) return 1;
  return 2;
}

// Keeps the preferred (rank, language, value) candidate.
void offer(std::optional<std::tuple<int, std::string, std::string>>& best, const net::RdfValue* v) {
  if (v == nullptr || v->value.empty()) return;
  auto cand = std::make_tuple(language_rank(v->language), v->language, v->value);
  if (!best || cand < *best) best = std::move(cand);
}

}  // namespace

std::vector<VoidRow> void_rows_from_results(const net::ResultSet& results) {
  std::vector<VoidRow> rows;
  for (const auto& b : results.rows) {
    const auto* cls = net::binding(b, "subjectClass");
    const auto* prop = net::binding(b, "prop");
    if (cls == nullptr || prop == nullptr) continue;
    const auto* obj_class = net::binding(b, "objectClass");
    const auto* obj_dt = net::binding(b, "objectDatatype");
    VoidRow base;
    base.subject_class = cls->value;
    base.predicate = prop->value;
    base.triples = parse_count(net::binding(b, "triples"));
    if (obj_class != nullptr) {
      VoidRow r = base;
      r.object_class = obj_class->value;
      rows.push_back(std::move(r));
    }
    if (obj_dt != nullptr) {
      VoidRow r = base;
      if (obj_dt->value == kRdfsLiteral) {
        r.object_is_literal = true;
      } else {
        r.object_datatype = obj_dt->value;
      }
      rows.push_back(std::move(r));
    }
    if (obj_class == nullptr && obj_dt == nullptr) {
      VoidRow r = base;
      r.object_is_iri = true;
      rows.push_back(std::move(r));
    }
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

std::vector<VoidRow> fetch_void_rows(const std::string& source, const net::HttpOptions& options) {
  auto rows = void_rows_from_results(net::select_from(source, std::string(resources::void_query()), options));
  if (rows.empty()) throw EmptyVoid(source);
  return rows;
}

LabelMap labels_from_results(const net::ResultSet& results) {
  struct Best {
    std::optional<std::tuple<int, std::string, std::string>> label, comment;
  };
  std::map<std::string, Best> best;
  for (const auto& b : results.rows) {
    const auto* cls = net::binding(b, "class");
    if (cls == nullptr) continue;
    auto& entry = best[cls->value];
    offer(entry.label, net::binding(b, "label"));
    offer(entry.comment, net::binding(b, "comment"));
  }
  LabelMap out;
  for (auto& [cls, entry] : best) {
    if (!entry.label && !entry.comment) continue;
    LabelInfo info;
    info.label = entry.label ? std::get<2>(*entry.label) : cls;
    if (entry.comment) info.description = std::get<2>(*entry.comment);
    out.emplace(cls, std::move(info));
  }
  return out;
}

LabelMap fetch_class_labels(const std::string& source, const net::HttpOptions& options) {
  return labels_from_results(net::select_from(source, std::string(resources::labels_query()), options));
}

nlohmann::json MetadataReport::to_json() const {
  auto probe = [](const MetadataProbe& p, bool with_count) {
    nlohmann::json j = {{"ok", p.ok}};
    if (with_count) j["count"] = p.count;
    if (!p.reason.empty()) j["reason"] = p.reason;
    return j;
  };
  return {{"endpoint", endpoint},
          {"has_examples", probe(examples, true)},
          {"has_void", probe(void_description, true)},
          {"has_homepage_info", probe(homepage, false)}};
}

MetadataReport check_endpoint_metadata(const std::string& endpoint_url, const net::HttpOptions& options) {
  MetadataReport report;
  report.endpoint = endpoint_url;

  try {
    auto results = net::sparql_select(endpoint_url, std::string(resources::examples_query()), options);
    std::size_t n = 0;
    for (const auto& row : results.rows)
      if (net::binding(row, "query") != nullptr) ++n;
    report.examples.count = n;
    report.examples.ok = n > 0;
    if (n == 0) report.examples.reason = "endpoint returned no example queries";
  } catch (const std::exception& e) {
    report.examples.reason = e.what();
  }

  try {
    auto rows = void_rows_from_results(net::sparql_select(endpoint_url, std::string(resources::void_query()), options));
    report.void_description.count = rows.size();
    report.void_description.ok = !rows.empty();
    if (rows.empty()) report.void_description.reason = "endpoint returned no VoID class/property partitions";
  } catch (const std::exception& e) {
    report.void_description.reason = e.what();
  }

  try {
    auto res = net::http_get(endpoint_url, {{"Accept", "text/html"}}, options);
    if (res.status != 200) {
      report.homepage.reason = "homepage returned HTTP " + std::to_string(res.status);
    } else if (auto block = net::first_jsonld_block(res.body)) {
      report.homepage.ok = true;
      report.homepage.count = 1;
    } else {
      report.homepage.reason = "no schema.org JSON-LD block on homepage";
    }
  } catch (const std::exception& e) {
    report.homepage.reason = e.what();
  }
  return report;
}

}  // namespace sparqlgen::schema
