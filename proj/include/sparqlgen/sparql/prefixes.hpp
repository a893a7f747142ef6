#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "sparqlgen/sparql/ast.hpp"
#include "sparqlgen/sparql/lexer.hpp"

namespace sparqlgen::sparql {

class UndeclaredPrefix : public SparqlError {
 public:
  explicit UndeclaredPrefix(std::string prefix)
      : SparqlError("undeclared prefix: " + prefix), prefix_(std::move(prefix)) {}
  const std::string& prefix() const { return prefix_; }

 private:
  std::string prefix_;
};

using PrefixMap = std::map<std::string, std::string>;

// rdf, rdfs, xsd, owl, skos.
const PrefixMap& builtin_prefixes();

// Replaces every PrefixedName (terms, literal datatypes, SERVICE endpoints,
// sub-selects) by an absolute IRI. Declared prefixes win over built-ins.
// Property paths and opaque expressions are left untouched; the prefix map is
// retained so the query still serializes to valid SPARQL.
Query expand_prefixes(Query query);

// Shortest "prefix:local" form of `iri` using `prefixes`, or "<iri>" when no
// namespace matches with a safe local name. Longest namespace wins; ties go
// to the lexicographically smallest prefix.
std::string compact_iri(std::string_view iri, const PrefixMap& prefixes);

// Inverse of compact_iri for "prefix:local" / "<iri>" strings.
std::string expand_compact(std::string_view text, const PrefixMap& prefixes);

}  // namespace sparqlgen::sparql
