#include "sparqlgen/schema/catalog.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "sparqlgen/net/sparql_client.hpp"
#include "sparqlgen/sparql/ast.hpp"

namespace sparqlgen::schema {

using nlohmann::json;

const PredicateShape* ClassShape::find(const std::string& predicate) const {
  for (const auto& p : predicates)
    if (p.predicate == predicate) return &p;
  return nullptr;
}

ClassMap build_class_shapes(const std::vector<VoidRow>& rows, const LabelMap& labels) {
  struct Acc {
    std::set<std::string> classes, datatypes;
    bool iri = false, literal = false;
    std::uint64_t triples = 0;
  };
  std::map<std::string, std::map<std::string, Acc>> grouped;
  for (const auto& row : rows) {
    auto& per_class = grouped[row.subject_class];
    if (row.predicate == sparql::kRdfType) continue;
    auto& acc = per_class[row.predicate];
    if (row.object_class) acc.classes.insert(*row.object_class);
    if (row.object_datatype) acc.datatypes.insert(*row.object_datatype);
    acc.iri = acc.iri || row.object_is_iri;
    acc.literal = acc.literal || row.object_is_literal;
    acc.triples = std::max(acc.triples, row.triples);
  }

  ClassMap out;
  for (auto& [class_iri, preds] : grouped) {
    ClassShape shape;
    shape.class_iri = class_iri;
    shape.label = class_iri;
    if (auto it = labels.find(class_iri); it != labels.end()) {
      if (!it->second.label.empty()) shape.label = it->second.label;
      shape.description = it->second.description;
    }
    for (auto& [pred, acc] : preds) {
      PredicateShape p;
      p.predicate = pred;
      p.object_classes.assign(acc.classes.begin(), acc.classes.end());
      p.object_datatypes.assign(acc.datatypes.begin(), acc.datatypes.end());
      p.has_untyped_iri_objects = acc.iri;
      p.has_plain_literal_objects = acc.literal;
      p.triples = acc.triples;
      shape.predicates.push_back(std::move(p));
    }
    std::stable_sort(shape.predicates.begin(), shape.predicates.end(),
                     [](const PredicateShape& a, const PredicateShape& b) { return a.triples > b.triples; });
    out.emplace(class_iri, std::move(shape));
  }
  return out;
}

std::string render_shex(const ClassShape& shape, const PrefixMap& prefixes) {
  const std::string cls = sparql::compact_iri(shape.class_iri, prefixes);
  std::string out = cls + " {\n  a [ " + cls + " ]";
  for (const auto& p : shape.predicates) {
    std::string objects;
    auto add = [&](const std::string& part) {
      if (!objects.empty()) objects.push_back(' ');
      objects += part;
    };
    if (!p.object_classes.empty()) {
      std::string list = "[";
      for (const auto& c : p.object_classes) list += " " + sparql::compact_iri(c, prefixes);
      add(list + " ]");
    }
    for (const auto& d : p.object_datatypes) add(sparql::compact_iri(d, prefixes));
    if (p.has_untyped_iri_objects) add("IRI");
    if (p.has_plain_literal_objects) add("Literal");
    out += " ;\n  " + sparql::compact_iri(p.predicate, prefixes) + " " + objects;
  }
  out += "\n}";
  return out;
}

SchemaCatalog::SchemaCatalog(PrefixMap prefixes, std::map<std::string, ClassMap> endpoints)
    : prefixes_(std::move(prefixes)), endpoints_(std::move(endpoints)) {}

const ClassMap* SchemaCatalog::endpoint(const std::string& endpoint_iri) const {
  auto it = endpoints_.find(endpoint_iri);
  return it == endpoints_.end() ? nullptr : &it->second;
}

const ClassShape* SchemaCatalog::lookup(const std::string& endpoint_iri, const std::string& class_iri) const {
  const ClassMap* classes = endpoint(endpoint_iri);
  if (classes == nullptr) return nullptr;
  auto it = classes->find(class_iri);
  return it == classes->end() ? nullptr : &it->second;
}

std::size_t SchemaCatalog::class_count() const {
  std::size_t n = 0;
  for (const auto& [_, classes] : endpoints_) n += classes.size();
  return n;
}

SchemaCatalog SchemaCatalog::with_endpoint(const std::string& endpoint_iri, ClassMap classes) const {
  SchemaCatalog copy = *this;
  copy.endpoints_[endpoint_iri] = std::move(classes);
  return copy;
}

std::string SchemaCatalog::compact(const std::string& iri) const { return sparql::compact_iri(iri, prefixes_); }

json SchemaCatalog::to_json() const {
  json doc;
  doc["format"] = "sparqlgen-catalog/1";
  doc["prefixes"] = prefixes_;
  json endpoints = json::object();
  for (const auto& [ep, classes] : endpoints_) {
    json list = json::array();
    for (const auto& [_, shape] : classes) {
      json c;
      c["iri"] = shape.class_iri;
      c["label"] = shape.label;
      if (shape.description) c["description"] = *shape.description;
      json preds = json::array();
      for (const auto& p : shape.predicates) {
        preds.push_back({{"predicate", p.predicate},
                         {"object_classes", p.object_classes},
                         {"object_datatypes", p.object_datatypes},
                         {"iri", p.has_untyped_iri_objects},
                         {"literal", p.has_plain_literal_objects},
                         {"triples", p.triples}});
      }
      c["predicates"] = std::move(preds);
      list.push_back(std::move(c));
    }
    endpoints[ep] = {{"classes", std::move(list)}};
  }
  doc["endpoints"] = std::move(endpoints);
  return doc;
}

SchemaCatalog SchemaCatalog::from_json(const json& doc) {
  PrefixMap prefixes = doc.value("prefixes", PrefixMap{});
  std::map<std::string, ClassMap> endpoints;
  for (const auto& [ep, body] : doc.at("endpoints").items()) {
    ClassMap classes;
    for (const auto& c : body.at("classes")) {
      ClassShape shape;
      shape.class_iri = c.at("iri").get<std::string>();
      shape.label = c.value("label", shape.class_iri);
      if (c.contains("description")) shape.description = c.at("description").get<std::string>();
      for (const auto& p : c.value("predicates", json::array())) {
        PredicateShape ps;
        ps.predicate = p.at("predicate").get<std::string>();
        ps.object_classes = p.value("object_classes", std::vector<std::string>{});
        ps.object_datatypes = p.value("object_datatypes", std::vector<std::string>{});
        ps.has_untyped_iri_objects = p.value("iri", false);
        ps.has_plain_literal_objects = p.value("literal", false);
        ps.triples = p.value("triples", std::uint64_t{0});
        shape.predicates.push_back(std::move(ps));
      }
      classes.emplace(shape.class_iri, std::move(shape));
    }
    endpoints.emplace(ep, std::move(classes));
  }
  return SchemaCatalog(std::move(prefixes), std::move(endpoints));
}

void SchemaCatalog::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write catalog to " + path);
  out << to_json().dump(2) << '\n';
}

SchemaCatalog SchemaCatalog::load(const std::string& path) {
  return from_json(json::parse(net::read_file(path)));
}

SchemaCatalog build_catalog(const std::string& endpoint_iri, const std::vector<VoidRow>& rows, const LabelMap& labels,
                            const PrefixMap& prefixes) {
  return SchemaCatalog(prefixes, {{endpoint_iri, build_class_shapes(rows, labels)}});
}

}  // namespace sparqlgen::schema
