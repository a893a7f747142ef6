#include "sparqlgen/sparql/lexer.hpp"

#include <cctype>
#include <cstdint>

namespace sparqlgen::sparql {

SyntaxError::SyntaxError(std::size_t line, std::size_t column, std::string reason)
    : SparqlError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) +
                  ": " + reason),
      line_(line),
      column_(column),
      reason_(std::move(reason)) {}

UnsupportedFeature::UnsupportedFeature(std::string construct)
    : SparqlError("unsupported SPARQL feature: " + construct), construct_(std::move(construct)) {}

bool Token::is_keyword(std::string_view kw) const {
  if (kind != TokenKind::Word || text.size() != kw.size()) return false;
  for (std::size_t i = 0; i < kw.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(text[i])) != std::toupper(static_cast<unsigned char>(kw[i])))
      return false;
  }
  return true;
}

namespace {

bool is_alpha(unsigned char c) { return std::isalpha(c) != 0; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_high(unsigned char c) { return c >= 0x80; }
bool is_name_start(unsigned char c) { return is_alpha(c) || c == '_' || is_high(c); }
bool is_name_char(unsigned char c) { return is_name_start(c) || is_digit(c); }
bool is_prefix_char(unsigned char c) { return is_name_char(c) || c == '-' || c == '.'; }
bool is_local_char(unsigned char c) { return is_prefix_char(c) || c == ':' || c == '%'; }
bool is_hex(unsigned char c) { return std::isxdigit(c) != 0; }

bool iri_forbidden(unsigned char c) {
  return c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
         c == '`' || c == '\\';
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | ((cp >> 18) & 0x07)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      if (at_end()) break;
      out.push_back(next(out.empty() ? nullptr : &out.back()));
    }
    Token end;
    end.kind = TokenKind::End;
    end.line = line_;
    end.column = col_;
    out.push_back(end);
    return out;
  }

 private:
  bool at_end() const { return pos_ >= src_.size(); }
  unsigned char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? static_cast<unsigned char>(src_[pos_ + ahead]) : 0;
  }
  bool has(std::size_t ahead) const { return pos_ + ahead < src_.size(); }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < src_.size(); ++i) {
      if (src_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  [[noreturn]] void fail(const std::string& reason) const { throw SyntaxError(line_, col_, reason); }

  void skip_space_and_comments() {
    while (!at_end()) {
      unsigned char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token make(TokenKind kind, std::size_t line, std::size_t col) const {
    Token t;
    t.kind = kind;
    t.line = line;
    t.column = col;
    return t;
  }

  Token next(const Token* prev) {
    const std::size_t line = line_, col = col_;
    const unsigned char c = peek();

    if (c == '<') {
      std::size_t i = 1;
      while (has(i) && !iri_forbidden(peek(i))) ++i;
      if (has(i) && peek(i) == '>') {
        Token t = make(TokenKind::Iri, line, col);
        t.text = std::string(src_.substr(pos_ + 1, i - 1));
        advance(i + 1);
        return t;
      }
      Token t = make(TokenKind::Punct, line, col);
      if (peek(1) == '=') {
        t.text = "<=";
        advance(2);
      } else {
        t.text = "<";
        advance();
      }
      return t;
    }

    if (c == '?' || c == '$') {
      if (is_name_char(peek(1))) {
        advance();
        Token t = make(TokenKind::Variable, line, col);
        while (!at_end() && is_name_char(peek())) {
          t.text.push_back(static_cast<char>(peek()));
          advance();
        }
        return t;
      }
      if (c == '$') fail("expected variable name after '$'");
      Token t = make(TokenKind::Punct, line, col);
      t.text = "?";
      advance();
      return t;
    }

    if (c == '"' || c == '\'') return lex_string(line, col);

    if (c == '@') {
      if (prev == nullptr || prev->kind != TokenKind::String || !is_alpha(peek(1)))
        fail("unexpected '@'");
      advance();
      Token t = make(TokenKind::LangTag, line, col);
      while (!at_end() && (is_alpha(peek()) || is_digit(peek()) || peek() == '-')) {
        t.text.push_back(static_cast<char>(peek()));
        advance();
      }
      return t;
    }

    if (is_digit(c) || (c == '.' && is_digit(peek(1)))) return lex_number(line, col);

    if (c == '_' && peek(1) == ':') {
      advance(2);
      Token t = make(TokenKind::BlankLabel, line, col);
      std::size_t i = 0;
      while (has(i) && (is_name_char(peek(i)) || peek(i) == '-' || peek(i) == '.')) ++i;
      while (i > 0 && peek(i - 1) == '.') --i;
      if (i == 0) fail("empty blank node label");
      t.text = std::string(src_.substr(pos_, i));
      advance(i);
      return t;
    }

    if (is_name_start(c) || c == ':') return lex_name(line, col);

    return lex_punct(line, col);
  }

  Token lex_string(std::size_t line, std::size_t col) {
    const char quote = static_cast<char>(peek());
    const bool long_form = peek(1) == static_cast<unsigned char>(quote) && peek(2) == static_cast<unsigned char>(quote);
    advance(long_form ? 3 : 1);
    Token t = make(TokenKind::String, line, col);
    for (;;) {
      if (at_end()) throw SyntaxError(line, col, "unterminated string literal");
      const unsigned char c = peek();
      if (long_form) {
        if (c == static_cast<unsigned char>(quote) && peek(1) == c && peek(2) == c) {
          // """a"""" ends after the last three quotes
          std::size_t run = 3;
          while (peek(run) == c) ++run;
          for (std::size_t k = 0; k + 3 < run; ++k) t.value.push_back(quote);
          advance(run);
          break;
        }
      } else {
        if (c == static_cast<unsigned char>(quote)) {
          advance();
          break;
        }
        if (c == '\n' || c == '\r') fail("newline in string literal");
      }
      if (c == '\\') {
        unescape_into(t.value);
        continue;
      }
      t.value.push_back(static_cast<char>(c));
      advance();
    }
    t.text = t.value;
    return t;
  }

  void unescape_into(std::string& out) {
    const unsigned char e = peek(1);
    switch (e) {
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      case 'b': out.push_back('\b'); break;
      case 'f': out.push_back('\f'); break;
      case '"': out.push_back('"'); break;
      case '\'': out.push_back('\''); break;
      case '\\': out.push_back('\\'); break;
      case 'u':
      case 'U': {
        const std::size_t digits = e == 'u' ? 4 : 8;
        std::uint32_t cp = 0;
        for (std::size_t k = 0; k < digits; ++k) {
          const unsigned char h = peek(2 + k);
          if (!is_hex(h)) fail("bad unicode escape");
          cp = cp * 16 + static_cast<std::uint32_t>(std::isdigit(h) ? h - '0' : std::tolower(h) - 'a' + 10);
        }
        if (cp > 0x10FFFF) fail("unicode escape out of range");
        append_utf8(out, cp);
        advance(2 + digits);
        return;
      }
      default:
        fail("invalid escape sequence in string");
    }
    advance(2);
  }

  Token lex_number(std::size_t line, std::size_t col) {
    Token t = make(TokenKind::Number, line, col);
    std::size_t i = 0;
    while (is_digit(peek(i))) ++i;
    if (peek(i) == '.' && is_digit(peek(i + 1))) {
      ++i;
      while (is_digit(peek(i))) ++i;
    }
    if (peek(i) == 'e' || peek(i) == 'E') {
      std::size_t j = i + 1;
      if (peek(j) == '+' || peek(j) == '-') ++j;
      if (is_digit(peek(j))) {
        while (is_digit(peek(j))) ++j;
        i = j;
      }
    }
    t.text = std::string(src_.substr(pos_, i));
    advance(i);
    return t;
  }

  Token lex_name(std::size_t line, std::size_t col) {
    std::size_t i = 0;
    while (has(i) && is_prefix_char(peek(i))) ++i;
    if (peek(i) == ':') {
      std::size_t p = i;
      while (p > 0 && peek(p - 1) == '.') --p;
      if (p != i) fail("prefix name may not end with '.'");
      Token t = make(TokenKind::PrefixedName, line, col);
      t.text = std::string(src_.substr(pos_, i));
      std::size_t j = i + 1;
      while (has(j)) {
        const unsigned char c = peek(j);
        if (c == '\\' && has(j + 1)) {
          j += 2;
        } else if (c == '%' && is_hex(peek(j + 1)) && is_hex(peek(j + 2))) {
          j += 3;
        } else if (is_local_char(c) && c != '%') {
          ++j;
        } else {
          break;
        }
      }
      while (j > i + 1 && peek(j - 1) == '.' && !(j >= i + 3 && peek(j - 2) == '\\')) --j;
      t.value = std::string(src_.substr(pos_ + i + 1, j - i - 1));
      advance(j);
      return t;
    }
    std::size_t w = 0;
    while (has(w) && is_name_char(peek(w))) ++w;
    if (w == 0) fail("unexpected character");
    Token t = make(TokenKind::Word, line, col);
    t.text = std::string(src_.substr(pos_, w));
    advance(w);
    return t;
  }

  Token lex_punct(std::size_t line, std::size_t col) {
    static constexpr std::string_view two[] = {"^^", "!=", ">=", "&&", "||"};
    Token t = make(TokenKind::Punct, line, col);
    for (auto p : two) {
      if (peek() == static_cast<unsigned char>(p[0]) && peek(1) == static_cast<unsigned char>(p[1])) {
        t.text = std::string(p);
        advance(2);
        return t;
      }
    }
    static constexpr std::string_view one = "{}()[].;,^/|*+!=>-";
    const unsigned char c = peek();
    if (c != 0 && one.find(static_cast<char>(c)) != std::string_view::npos) {
      t.text = std::string(1, static_cast<char>(c));
      advance();
      return t;
    }
    fail(c >= 0x20 && c < 0x7f ? std::string("unexpected character '") + static_cast<char>(c) + "'"
                               : std::string("unexpected byte"));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

std::string quote_string(std::string_view lexical) {
  std::string out = "\"";
  for (char c : lexical) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
  return out;
}

std::string render_token(const Token& t) {
  switch (t.kind) {
    case TokenKind::Iri: return "<" + t.text + ">";
    case TokenKind::PrefixedName: return t.text + ":" + t.value;
    case TokenKind::Variable: return "?" + t.text;
    case TokenKind::String: return quote_string(t.value);
    case TokenKind::LangTag: return "@" + t.text;
    case TokenKind::BlankLabel: return "_:" + t.text;
    case TokenKind::Number:
    case TokenKind::Word:
    case TokenKind::Punct: return t.text;
    case TokenKind::End: return "";
  }
  return "";
}

std::string render_tokens(const std::vector<Token>& tokens, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end && i < tokens.size(); ++i) {
    const Token& t = tokens[i];
    if (i > begin) {
      const Token& p = tokens[i - 1];
      const bool glue = p.is_punct("(") || t.is_punct(")") || t.is_punct(",") || t.kind == TokenKind::LangTag ||
                        t.is_punct("^^") || p.is_punct("^^") || (p.kind == TokenKind::Word && t.is_punct("("));
      if (!glue) out.push_back(' ');
    }
    out += render_token(t);
  }
  return out;
}

}  // namespace sparqlgen::sparql
