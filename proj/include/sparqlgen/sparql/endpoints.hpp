#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "sparqlgen/sparql/ast.hpp"

namespace sparqlgen::sparql {

// Bucket for triples inside SERVICE ?var; excluded from validation.
inline constexpr std::string_view kUnknownEndpoint = "unknown";

using TriplesByEndpoint = std::map<std::string, std::vector<TriplePattern>>;

// Attributes every triple pattern to the endpoint that executes it: the
// innermost enclosing SERVICE <iri>, or `primary_endpoint` outside any
// SERVICE. Expects a prefix-expanded query.
TriplesByEndpoint extract_triples_by_endpoint(const Query& query, const std::string& primary_endpoint);

}  // namespace sparqlgen::sparql
