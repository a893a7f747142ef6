#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sparqlgen::sparql {

// Base class for every error raised by the SPARQL front end.
class SparqlError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public SparqlError {
 public:
  SyntaxError(std::size_t line, std::size_t column, std::string reason);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string reason_;
};

class UnsupportedFeature : public SparqlError {
 public:
  explicit UnsupportedFeature(std::string construct);
  const std::string& construct() const { return construct_; }

 private:
  std::string construct_;
};

enum class TokenKind {
  Iri,          // text = IRI without brackets
  PrefixedName, // text = prefix, value = local
  Variable,     // text = name without sigil
  String,       // value = unescaped lexical form
  LangTag,      // text = tag without '@'
  Number,       // text = lexical form
  BlankLabel,   // text = label without "_:"
  Word,         // keywords, function names, `a`, true/false
  Punct,        // { } ( ) [ ] . ; , ^^ ^ / | * + ? ! = != < > <= >= && || - Anon
  End,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  std::string value;
  std::size_t line = 1;
  std::size_t column = 1;

  bool is_punct(std::string_view p) const { return kind == TokenKind::Punct && text == p; }
  // Case-insensitive keyword match.
  bool is_keyword(std::string_view kw) const;
};

// Splits SPARQL source into tokens. Comments are dropped. Throws SyntaxError
// on malformed input (unterminated strings, stray characters).
std::vector<Token> tokenize(std::string_view source);

// Canonical text for one token, such that tokenize(render_token(t)) yields t.
std::string render_token(const Token& token);

// Joins tokens into canonical opaque text used for FILTER/BIND/VALUES bodies,
// property paths and solution modifiers.
std::string render_tokens(const std::vector<Token>& tokens, std::size_t begin, std::size_t end);

// Quoted, escaped rendering of a lexical form.
std::string quote_string(std::string_view lexical);

}  // namespace sparqlgen::sparql
