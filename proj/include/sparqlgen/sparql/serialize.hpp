#pragma once

#include <string>

#include "sparqlgen/sparql/ast.hpp"

namespace sparqlgen::sparql {

// Canonical layout: sorted PREFIX lines, one triple per line terminated by
// " .", two spaces of indentation per nesting level, a newline after the
// closing brace of the WHERE clause. See docs/serialization.md.
std::string serialize(const Query& query);

std::string render_term(const Term& term);
std::string render_predicate(const Predicate& predicate);
std::string render_triple(const TriplePattern& triple);

}  // namespace sparqlgen::sparql
