#include "sparqlgen/validate/validator.hpp"

#include <algorithm>
#include <tuple>

#include "sparqlgen/sparql/endpoints.hpp"
#include "sparqlgen/sparql/prefixes.hpp"
#include "sparqlgen/sparql/serialize.hpp"

namespace sparqlgen::validate {
namespace {

using sparql::BlankNode;
using sparql::Iri;
using sparql::Variable;

bool is_rdf_type(const sparql::Predicate& p) {
  const auto* iri = std::get_if<Iri>(&p);
  return iri != nullptr && iri->value == sparql::kRdfType;
}

bool is_node(const sparql::Term& t) {
  return std::holds_alternative<Variable>(t) || std::holds_alternative<BlankNode>(t);
}

std::string subject_label(const sparql::Term& t, const schema::SchemaCatalog& catalog) {
  if (const auto* iri = std::get_if<Iri>(&t)) return catalog.compact(iri->value);
  return sparql::render_term(t);
}

}  // namespace

ClassAssignment infer_classes(const std::vector<sparql::TriplePattern>& triples, const schema::ClassMap& classes) {
  ClassAssignment out;
  for (const auto& t : triples) {
    if (!is_rdf_type(t.predicate)) continue;
    if (const auto* cls = std::get_if<Iri>(&t.object)) out[sparql::render_term(t.subject)].declared.insert(cls->value);
  }

  struct Link {
    std::string subject;
    std::string predicate;
    std::string object;
  };
  std::vector<Link> links;
  for (const auto& t : triples) {
    const auto* p = std::get_if<Iri>(&t.predicate);
    if (p == nullptr || p->value == sparql::kRdfType || !is_node(t.object)) continue;
    links.push_back({sparql::render_term(t.subject), p->value, sparql::render_term(t.object)});
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& link : links) {
      const auto it = out.find(link.subject);
      if (it == out.end()) continue;
      // Copy: the target may be the subject itself.
      const std::set<std::string> sources = it->second.candidates();
      for (const auto& cls : sources) {
        const auto shape = classes.find(cls);
        if (shape == classes.end()) continue;
        const auto* pred = shape->second.find(link.predicate);
        if (pred == nullptr) continue;
        auto& target = out[link.object];
        for (const auto& oc : pred->object_classes) changed |= target.inferred.insert(oc).second;
      }
    }
  }
  return out;
}

std::string format_issue(const ValidationIssue& issue) {
  std::string allowed;
  for (const auto& p : issue.allowed_predicates) {
    if (!allowed.empty()) allowed += ", ";
    allowed += p;
  }
  if (allowed.empty()) allowed = "(none)";
  return "Subject " + issue.subject + " with type " + issue.subject_class + " in endpoint " + issue.endpoint +
         " does not support the predicate " + issue.predicate + ". It can have the following predicates: " + allowed;
}

std::vector<ValidationIssue> validate(const sparql::Query& query, const std::string& primary_endpoint,
                                      const schema::SchemaCatalog& catalog) {
  const auto expanded = sparql::expand_prefixes(query);
  std::vector<ValidationIssue> issues;
  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  std::set<Key> seen;

  for (const auto& [endpoint, triples] : sparql::extract_triples_by_endpoint(expanded, primary_endpoint)) {
    if (endpoint == sparql::kUnknownEndpoint) continue;
    const auto* classes = catalog.endpoint(endpoint);
    if (classes == nullptr) continue;
    const auto assignment = infer_classes(triples, *classes);

    for (const auto& t : triples) {
      const auto* pred = std::get_if<Iri>(&t.predicate);
      if (pred == nullptr || pred->value == sparql::kRdfType) continue;
      const auto node = assignment.find(sparql::render_term(t.subject));
      if (node == assignment.end()) continue;
      const auto& candidates = node->second.candidates();
      if (candidates.empty()) continue;

      bool unknown = false;
      bool allowed = false;
      for (const auto& cls : candidates) {
        const auto shape = classes->find(cls);
        if (shape == classes->end()) {
          unknown = true;
          break;
        }
        if (shape->second.find(pred->value) != nullptr) allowed = true;
      }
      if (unknown || allowed) continue;

      const auto& shape = classes->at(*candidates.begin());
      const std::string subject = subject_label(t.subject, catalog);
      Key key{endpoint, subject, shape.class_iri, pred->value};
      if (!seen.insert(key).second) continue;

      ValidationIssue issue;
      issue.endpoint = endpoint;
      issue.subject = subject;
      issue.subject_class = catalog.compact(shape.class_iri);
      issue.predicate = catalog.compact(pred->value);
      for (const auto& p : shape.predicates) issue.allowed_predicates.push_back(catalog.compact(p.predicate));
      issue.message = format_issue(issue);
      issues.push_back(std::move(issue));
    }
  }

  std::stable_sort(issues.begin(), issues.end(), [](const ValidationIssue& a, const ValidationIssue& b) {
    return std::tie(a.endpoint, a.subject, a.predicate, a.subject_class) <
           std::tie(b.endpoint, b.subject, b.predicate, b.subject_class);
  });
  return issues;
}

nlohmann::json to_json(const ValidationIssue& issue) {
  return {{"endpoint", issue.endpoint},
          {"subject", issue.subject},
          {"subject_class", issue.subject_class},
          {"predicate", issue.predicate},
          {"allowed_predicates", issue.allowed_predicates},
          {"message", issue.message}};
}

ValidationIssue issue_from_json(const nlohmann::json& doc) {
  ValidationIssue issue;
  issue.endpoint = doc.at("endpoint").get<std::string>();
  issue.subject = doc.at("subject").get<std::string>();
  issue.subject_class = doc.at("subject_class").get<std::string>();
  issue.predicate = doc.at("predicate").get<std::string>();
  issue.allowed_predicates = doc.at("allowed_predicates").get<std::vector<std::string>>();
  issue.message = doc.at("message").get<std::string>();
  return issue;
}

}  // namespace sparqlgen::validate
