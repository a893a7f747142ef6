#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparqlgen/schema/catalog.hpp"
#include "sparqlgen/sparql/ast.hpp"

namespace sparqlgen::validate {

// Candidate classes of one subject or object node.
struct NodeClasses {
  std::set<std::string> declared;  // objects of rdf:type triples
  std::set<std::string> inferred;  // reached through object-class links
  // Declared classes when there are any, otherwise the inferred ones.
  const std::set<std::string>& candidates() const { return declared.empty() ? inferred : declared; }
  bool operator==(const NodeClasses&) const = default;
};

// Keyed by the node's term rendering ("?x", "_:b0", "<iri>").
using ClassAssignment = std::map<std::string, NodeClasses>;

// rdf:type triples with an IRI object declare classes. Then, to a fixed
// point: for a triple (S, p, O) with O a variable or blank node, every
// catalogued candidate class C of S whose shape links p to object classes
// adds those classes to O's inferred set. Declared sets never change.
ClassAssignment infer_classes(const std::vector<sparql::TriplePattern>& triples, const schema::ClassMap& classes);

struct ValidationIssue {
  std::string endpoint;
  std::string subject;        // "?disease", "_:b0" or a compacted IRI
  std::string subject_class;  // compacted
  std::string predicate;      // compacted
  std::vector<std::string> allowed_predicates;  // compacted, in shape order
  std::string message;
  bool operator==(const ValidationIssue&) const = default;
};

// "Subject {s} with type {class} in endpoint {endpoint} does not support the
// predicate {p}. It can have the following predicates: {allowed}" where
// allowed is comma-separated or "(none)".
std::string format_issue(const ValidationIssue& issue);

// Flags triples whose IRI predicate is missing from the shape of every
// candidate class of their subject. Subjects without candidates, or with a
// candidate class missing from the catalog, are not checked. Endpoints
// absent from the catalog, SERVICE ?var blocks, variable predicates and
// property paths are skipped. Issues are unique per (endpoint, subject,
// class, predicate) and ordered by endpoint, subject, then predicate.
//
// Prefixed names in `query` are expanded first (may throw UndeclaredPrefix).
std::vector<ValidationIssue> validate(const sparql::Query& query, const std::string& primary_endpoint,
                                      const schema::SchemaCatalog& catalog);

nlohmann::json to_json(const ValidationIssue& issue);
ValidationIssue issue_from_json(const nlohmann::json& doc);

}  // namespace sparqlgen::validate
