#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparqlgen/sparql/prefixes.hpp"

namespace sparqlgen::schema {

using sparql::PrefixMap;

// One (subject class, predicate, object descriptor) combination from VoID.
// Exactly one of object_class / object_datatype / object_is_iri /
// object_is_literal is populated.
struct VoidRow {
  std::string subject_class;
  std::string predicate;
  std::optional<std::string> object_class;
  std::optional<std::string> object_datatype;
  bool object_is_iri = false;
  bool object_is_literal = false;
  std::uint64_t triples = 0;  // void:triples of the property partition, 0 if unknown

  auto operator<=>(const VoidRow&) const = default;
};

struct PredicateShape {
  std::string predicate;
  std::vector<std::string> object_classes;    // sorted, unique
  std::vector<std::string> object_datatypes;  // sorted, unique
  bool has_untyped_iri_objects = false;
  bool has_plain_literal_objects = false;
  std::uint64_t triples = 0;
  bool operator==(const PredicateShape&) const = default;
};

struct ClassShape {
  std::string class_iri;
  std::string label;  // falls back to class_iri
  std::optional<std::string> description;
  // Ordered by descending triple count, then predicate IRI. rdf:type is not
  // listed; it is implied by the shape's "a" line.
  std::vector<PredicateShape> predicates;

  const PredicateShape* find(const std::string& predicate) const;
  bool operator==(const ClassShape&) const = default;
};

using ClassMap = std::map<std::string, ClassShape>;

struct LabelInfo {
  std::string label;
  std::optional<std::string> description;
  bool operator==(const LabelInfo&) const = default;
};

using LabelMap = std::map<std::string, LabelInfo>;

// Groups rows by subject class then predicate. Pure: any permutation or
// duplication of `rows` gives the same result.
ClassMap build_class_shapes(const std::vector<VoidRow>& rows, const LabelMap& labels);

// ShEx-like text for one class:
//
//   up:Disease_Annotation {
//     a [ up:Disease_Annotation ] ;
//     up:sequence [ up:Chain_Annotation up:Modified_Sequence ] ;
//     rdfs:comment xsd:string ;
//     up:disease IRI
//   }
//
// Object classes are bracketed, datatypes bare, untyped IRIs `IRI`, plain
// literals `Literal`. No trailing newline.
std::string render_shex(const ClassShape& shape, const PrefixMap& prefixes);

// Per-endpoint class shapes plus the prefixes used for rendering. Immutable
// once constructed.
class SchemaCatalog {
 public:
  SchemaCatalog() = default;
  SchemaCatalog(PrefixMap prefixes, std::map<std::string, ClassMap> endpoints);

  const PrefixMap& prefixes() const { return prefixes_; }
  const std::map<std::string, ClassMap>& endpoints() const { return endpoints_; }
  const ClassMap* endpoint(const std::string& endpoint_iri) const;
  const ClassShape* lookup(const std::string& endpoint_iri, const std::string& class_iri) const;
  std::size_t class_count() const;

  // Copy of this catalog with `classes` installed for `endpoint_iri`.
  SchemaCatalog with_endpoint(const std::string& endpoint_iri, ClassMap classes) const;

  // Compact form of an IRI using this catalog's prefixes.
  std::string compact(const std::string& iri) const;

  nlohmann::json to_json() const;
  static SchemaCatalog from_json(const nlohmann::json& doc);
  void save(const std::string& path) const;
  static SchemaCatalog load(const std::string& path);

  bool operator==(const SchemaCatalog&) const = default;

 private:
  PrefixMap prefixes_;
  std::map<std::string, ClassMap> endpoints_;
};

// One endpoint's slice.
SchemaCatalog build_catalog(const std::string& endpoint_iri, const std::vector<VoidRow>& rows, const LabelMap& labels,
                            const PrefixMap& prefixes);

}  // namespace sparqlgen::schema
