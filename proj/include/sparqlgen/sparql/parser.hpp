#pragma once

#include <string_view>

#include "sparqlgen/sparql/ast.hpp"
#include "sparqlgen/sparql/lexer.hpp"

namespace sparqlgen::sparql {

// Parses the supported SPARQL 1.1 subset: PREFIX/BASE, SELECT/ASK, basic
// graph patterns with ';' and ',' lists, OPTIONAL, UNION, FILTER, BIND,
// VALUES, SERVICE [SILENT], sub-selects and property paths (kept opaque).
// Blank-node property lists are desugared into fresh blank nodes.
//
// Throws SyntaxError (1-based line/column) or UnsupportedFeature.
Query parse(std::string_view text);

}  // namespace sparqlgen::sparql
