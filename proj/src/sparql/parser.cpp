#include "sparqlgen/sparql/parser.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace sparqlgen::sparql {
namespace {

constexpr std::size_t kMaxDepth = 128;
constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {
    for (const auto& t : toks_)
      if (t.kind == TokenKind::BlankLabel) used_labels_.insert(t.text);
  }

  Query parse_query() {
    Query q;
    parse_prologue(q);
    reject_unsupported_form();
    if (cur().is_keyword("SELECT")) {
      parse_select(q, /*nested=*/false);
    } else if (cur().is_keyword("ASK")) {
      advance();
      q.form = QueryForm::Ask;
      reject_dataset_clause();
      if (cur().is_keyword("WHERE")) advance();
      q.where = collapse(parse_group());
      q.solution_modifiers = parse_modifiers(/*nested=*/false);
    } else {
      fail("expected SELECT or ASK");
    }
    if (cur().kind != TokenKind::End) fail("unexpected trailing content");
    return q;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(std::size_t n = 1) const { return toks_[std::min(pos_ + n, toks_.size() - 1)]; }
  void advance() {
    if (pos_ + 1 < toks_.size()) ++pos_;
  }
  [[noreturn]] void fail(const std::string& reason) const {
    const Token& t = cur();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + render_token(t) + "'";
    throw SyntaxError(t.line, t.column, reason + ", found " + found);
  }
  void expect_punct(std::string_view p) {
    if (!cur().is_punct(p)) fail("expected '" + std::string(p) + "'");
    advance();
  }

  void parse_prologue(Query& q) {
    for (;;) {
      if (cur().is_keyword("PREFIX")) {
        advance();
        if (cur().kind != TokenKind::PrefixedName || !cur().value.empty()) fail("expected prefix declaration");
        std::string name = cur().text;
        advance();
        if (cur().kind != TokenKind::Iri) fail("expected IRI in PREFIX declaration");
        q.prefixes[name] = cur().text;
        advance();
      } else if (cur().is_keyword("BASE")) {
        advance();
        if (cur().kind != TokenKind::Iri) fail("expected IRI after BASE");
        q.base = cur().text;
        advance();
      } else {
        return;
      }
    }
  }

  void reject_unsupported_form() {
    static constexpr std::string_view forms[] = {"CONSTRUCT", "DESCRIBE", "INSERT", "DELETE", "LOAD", "CLEAR",
                                                 "DROP",      "CREATE",   "ADD",    "MOVE",   "COPY", "WITH"};
    for (auto f : forms)
      if (cur().is_keyword(f)) throw UnsupportedFeature(std::string(f));
  }

  void reject_dataset_clause() {
    if (cur().is_keyword("FROM")) throw UnsupportedFeature("FROM");
  }

  void parse_select(Query& q, bool nested) {
    advance();  // SELECT
    q.form = QueryForm::Select;
    if (cur().is_keyword("DISTINCT") || cur().is_keyword("REDUCED")) {
      q.projection.modifier = upper(cur().text);
      advance();
    }
    if (cur().is_punct("*")) {
      q.projection.star = true;
      advance();
    } else {
      while (cur().kind == TokenKind::Variable || cur().is_punct("(")) {
        if (cur().kind == TokenKind::Variable) {
          q.projection.items.emplace_back(Variable{cur().text});
          advance();
        } else {
          const std::size_t begin = pos_;
          skip_balanced();
          q.projection.items.emplace_back(ProjectionExpr{render_tokens(toks_, begin, pos_)});
        }
      }
      if (q.projection.items.empty()) fail("expected projection");
    }
    reject_dataset_clause();
    if (cur().is_keyword("WHERE")) advance();
    q.where = collapse(parse_group());
    q.solution_modifiers = parse_modifiers(nested);
  }

  // Captures GROUP BY / HAVING / ORDER BY / LIMIT / OFFSET (and a trailing
  // VALUES block) as opaque text. Stops at end of input or, for sub-selects,
  // at the closing brace of the enclosing group.
  std::string parse_modifiers(bool nested) {
    const std::size_t begin = pos_;
    int depth = 0;
    bool clause_start = true;
    while (cur().kind != TokenKind::End) {
      const Token& t = cur();
      if (depth == 0 && t.is_punct("}")) {
        if (nested) break;
        fail("unbalanced '}'");
      }
      if (depth == 0 && clause_start) {
        if (!(t.is_keyword("GROUP") || t.is_keyword("HAVING") || t.is_keyword("ORDER") || t.is_keyword("LIMIT") ||
              t.is_keyword("OFFSET") || t.is_keyword("VALUES")))
          fail("expected solution modifier");
      }
      clause_start = false;
      if (t.is_punct("(") || t.is_punct("{")) ++depth;
      if (t.is_punct(")") || t.is_punct("}")) {
        if (--depth < 0) fail("unbalanced bracket");
      }
      advance();
      if (depth == 0) {
        const Token& n = cur();
        clause_start = n.is_keyword("GROUP") || n.is_keyword("HAVING") || n.is_keyword("ORDER") ||
                       n.is_keyword("LIMIT") || n.is_keyword("OFFSET") || n.is_keyword("VALUES");
      }
    }
    if (depth != 0) fail("unbalanced bracket in solution modifiers");
    return render_tokens(toks_, begin, pos_);
  }

  // Skips a balanced ( ... ) or { ... } run starting at the current token.
  void skip_balanced() {
    std::vector<char> stack;
    do {
      const Token& t = cur();
      if (t.kind == TokenKind::End) fail("unbalanced brackets");
      if (t.is_punct("(")) stack.push_back(')');
      else if (t.is_punct("{")) stack.push_back('}');
      else if (t.is_punct("[")) stack.push_back(']');
      else if (t.is_punct(")") || t.is_punct("}") || t.is_punct("]")) {
        if (stack.empty() || t.text[0] != stack.back()) fail("mismatched bracket");
        stack.pop_back();
      }
      if (stack.size() > 4 * kMaxDepth) fail("nesting too deep");
      advance();
    } while (!stack.empty());
  }

  static GraphPattern collapse(GraphPattern raw) {
    if (auto* g = std::get_if<Group>(&raw.node)) {
      if (g->members.empty()) return GraphPattern{Bgp{}};
      if (g->members.size() == 1 && std::holds_alternative<Bgp>(g->members.front().node))
        return std::move(g->members.front());
    }
    return raw;
  }

  struct DepthGuard {
    explicit DepthGuard(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxDepth) p_.fail("nesting too deep");
    }
    ~DepthGuard() { --p_.depth_; }
    Parser& p_;
  };

  // Returns an uncollapsed Group, or a SubSelect.
  GraphPattern parse_group() {
    DepthGuard guard(*this);
    expect_punct("{");
    if (cur().is_keyword("SELECT")) {
      Query sub;
      parse_select(sub, /*nested=*/true);
      expect_punct("}");
      return GraphPattern{SubSelect{Box<Query>(std::move(sub))}};
    }
    Group group;
    bool bgp_open = false;
    for (;;) {
      const Token& t = cur();
      if (t.is_punct("}")) {
        advance();
        break;
      }
      if (t.kind == TokenKind::End) fail("expected '}'");
      if (t.is_punct(".")) {
        advance();
        continue;
      }
      if (t.is_keyword("OPTIONAL")) {
        advance();
        group.members.push_back(GraphPattern{OptionalPattern{Box<GraphPattern>(collapse(parse_group()))}});
        bgp_open = false;
      } else if (t.is_keyword("MINUS") || t.is_keyword("GRAPH")) {
        throw UnsupportedFeature(upper(t.text));
      } else if (t.is_keyword("FILTER")) {
        group.members.push_back(parse_filter());
        bgp_open = false;
      } else if (t.is_keyword("BIND")) {
        group.members.push_back(parse_bind());
        bgp_open = false;
      } else if (t.is_keyword("VALUES")) {
        advance();
        const std::size_t begin = pos_;
        if (cur().kind == TokenKind::Variable) {
          advance();
        } else if (cur().is_punct("(")) {
          skip_balanced();
        } else {
          fail("expected variable list after VALUES");
        }
        if (!cur().is_punct("{")) fail("expected '{' in VALUES block");
        skip_balanced();
        group.members.push_back(GraphPattern{Values{render_tokens(toks_, begin, pos_)}});
        bgp_open = false;
      } else if (t.is_keyword("SERVICE")) {
        group.members.push_back(parse_service());
        bgp_open = false;
      } else if (t.is_punct("{")) {
        GraphPattern first = parse_group();
        if (cur().is_keyword("UNION")) {
          GraphPattern acc = collapse(std::move(first));
          while (cur().is_keyword("UNION")) {
            advance();
            GraphPattern rhs = collapse(parse_group());
            acc = GraphPattern{Union{Box<GraphPattern>(std::move(acc)), Box<GraphPattern>(std::move(rhs))}};
          }
          group.members.push_back(std::move(acc));
        } else {
          group.members.push_back(std::move(first));
        }
        bgp_open = false;
      } else if (starts_term(t)) {
        if (!bgp_open) {
          group.members.push_back(GraphPattern{Bgp{}});
          bgp_open = true;
        }
        auto& bgp = std::get<Bgp>(group.members.back().node);
        parse_triples_same_subject(bgp.triples);
        if (cur().is_punct(".")) {
          advance();
        } else if (starts_term(cur())) {
          fail("expected '.' between triple patterns");
        }
      } else {
        fail("unexpected token in group pattern");
      }
    }
    return GraphPattern{std::move(group)};
  }

  static bool starts_term(const Token& t) {
    switch (t.kind) {
      case TokenKind::Variable:
      case TokenKind::Iri:
      case TokenKind::PrefixedName:
      case TokenKind::String:
      case TokenKind::Number:
      case TokenKind::BlankLabel:
        return true;
      case TokenKind::Word:
        return t.text == "true" || t.text == "false";
      case TokenKind::Punct:
        return t.is_punct("[") || t.is_punct("(") || t.is_punct("-") || t.is_punct("+");
      default:
        return false;
    }
  }

  GraphPattern parse_filter() {
    advance();  // FILTER
    if (cur().is_keyword("NOT") && peek().is_keyword("EXISTS")) {
      advance();
      advance();
      return GraphPattern{Filter{"NOT EXISTS", Box<GraphPattern>(collapse(parse_group()))}};
    }
    if (cur().is_keyword("EXISTS")) {
      advance();
      return GraphPattern{Filter{"EXISTS", Box<GraphPattern>(collapse(parse_group()))}};
    }
    const std::size_t begin = pos_;
    if (cur().is_punct("(")) {
      skip_balanced();
    } else if ((cur().kind == TokenKind::Word || cur().kind == TokenKind::Iri ||
                cur().kind == TokenKind::PrefixedName) &&
               peek().is_punct("(")) {
      advance();
      skip_balanced();
    } else {
      fail("expected constraint after FILTER");
    }
    return GraphPattern{Filter{render_tokens(toks_, begin, pos_), std::nullopt}};
  }

  GraphPattern parse_bind() {
    advance();  // BIND
    expect_punct("(");
    const std::size_t begin = pos_;
    int depth = 0;
    while (!(depth == 0 && cur().is_keyword("AS"))) {
      const Token& t = cur();
      if (t.kind == TokenKind::End) fail("expected AS in BIND");
      if (t.is_punct("(") || t.is_punct("{")) ++depth;
      if (t.is_punct(")") || t.is_punct("}")) {
        if (--depth < 0) fail("expected AS in BIND");
      }
      if (static_cast<std::size_t>(depth) > 4 * kMaxDepth) fail("nesting too deep");
      advance();
    }
    if (pos_ == begin) fail("empty BIND expression");
    std::string expr = render_tokens(toks_, begin, pos_);
    advance();  // AS
    if (cur().kind != TokenKind::Variable) fail("expected variable after AS");
    Variable v{cur().text};
    advance();
    expect_punct(")");
    return GraphPattern{Bind{std::move(expr), std::move(v)}};
  }

  GraphPattern parse_service() {
    advance();  // SERVICE
    Service s;
    if (cur().is_keyword("SILENT")) {
      s.silent = true;
      advance();
    }
    const Token& t = cur();
    if (t.kind == TokenKind::Iri) {
      s.endpoint = Iri{t.text};
    } else if (t.kind == TokenKind::PrefixedName) {
      s.endpoint = PrefixedName{t.text, t.value};
    } else if (t.kind == TokenKind::Variable) {
      s.endpoint = Variable{t.text};
    } else {
      fail("expected endpoint IRI or variable after SERVICE");
    }
    advance();
    s.inner = collapse(parse_group());
    return GraphPattern{std::move(s)};
  }

  BlankNode fresh_blank() {
    for (;;) {
      std::string label = "b" + std::to_string(next_blank_++);
      if (used_labels_.insert(label).second) return BlankNode{label};
    }
  }

  void parse_triples_same_subject(std::vector<TriplePattern>& out) {
    DepthGuard guard(*this);
    if (cur().is_punct("(")) throw UnsupportedFeature("RDF collection");
    if (cur().is_punct("[")) {
      advance();
      Term subject = fresh_blank();
      if (cur().is_punct("]")) {
        advance();
        parse_property_list(subject, out, /*required=*/true);
      } else {
        parse_property_list(subject, out, /*required=*/true);
        expect_punct("]");
        parse_property_list(subject, out, /*required=*/false);
      }
      return;
    }
    Term subject = parse_term();
    parse_property_list(subject, out, /*required=*/true);
  }

  bool starts_verb(const Token& t) const {
    return t.kind == TokenKind::Variable || t.kind == TokenKind::Iri || t.kind == TokenKind::PrefixedName ||
           (t.kind == TokenKind::Word && t.text == "a") || t.is_punct("^") || t.is_punct("!") || t.is_punct("(");
  }

  void parse_property_list(const Term& subject, std::vector<TriplePattern>& out, bool required) {
    if (!starts_verb(cur())) {
      if (required) fail("expected predicate");
      return;
    }
    for (;;) {
      Predicate verb = parse_verb();
      for (;;) {
        std::vector<TriplePattern> nested;
        Term object = parse_object(nested);
        out.push_back(TriplePattern{subject, verb, std::move(object)});
        for (auto& n : nested) out.push_back(std::move(n));
        if (!cur().is_punct(",")) break;
        advance();
      }
      if (!cur().is_punct(";")) return;
      while (cur().is_punct(";")) advance();
      if (!starts_verb(cur())) return;
    }
  }

  Predicate parse_verb() {
    const Token& t = cur();
    if (t.kind == TokenKind::Variable) {
      advance();
      return Variable{t.text};
    }
    const std::size_t begin = pos_;
    parse_path_alternative(0);
    if (pos_ - begin == 1) {
      const Token& only = toks_[begin];
      if (only.kind == TokenKind::Iri) return Iri{only.text};
      if (only.kind == TokenKind::PrefixedName) return PrefixedName{only.text, only.value};
      if (only.kind == TokenKind::Word && only.text == "a") return Iri{std::string(kRdfType)};
    }
    std::string text;
    for (std::size_t i = begin; i < pos_; ++i) text += render_token(toks_[i]);
    return PathExpr{std::move(text)};
  }

  void parse_path_alternative(std::size_t depth) {
    if (depth > kMaxDepth) fail("nesting too deep");
    parse_path_sequence(depth);
    while (cur().is_punct("|")) {
      advance();
      parse_path_sequence(depth);
    }
  }

  void parse_path_sequence(std::size_t depth) {
    parse_path_element(depth);
    while (cur().is_punct("/")) {
      advance();
      parse_path_element(depth);
    }
  }

  bool is_path_iri(const Token& t) const {
    return t.kind == TokenKind::Iri || t.kind == TokenKind::PrefixedName || (t.kind == TokenKind::Word && t.text == "a");
  }

  void parse_path_element(std::size_t depth) {
    if (cur().is_punct("^")) advance();
    if (is_path_iri(cur())) {
      advance();
    } else if (cur().is_punct("(")) {
      advance();
      parse_path_alternative(depth + 1);
      expect_punct(")");
    } else if (cur().is_punct("!")) {
      advance();
      if (cur().is_punct("(")) {
        advance();
        if (!cur().is_punct(")")) {
          parse_negated_one();
          while (cur().is_punct("|")) {
            advance();
            parse_negated_one();
          }
        }
        expect_punct(")");
      } else {
        parse_negated_one();
      }
    } else {
      fail("expected predicate or property path");
    }
    if (cur().is_punct("*") || cur().is_punct("+") || cur().is_punct("?")) advance();
  }

  void parse_negated_one() {
    if (cur().is_punct("^")) advance();
    if (!is_path_iri(cur())) fail("expected IRI in negated property set");
    advance();
  }

  Term parse_object(std::vector<TriplePattern>& nested) {
    if (cur().is_punct("(")) throw UnsupportedFeature("RDF collection");
    if (cur().is_punct("[")) {
      DepthGuard guard(*this);
      advance();
      Term node = fresh_blank();
      if (!cur().is_punct("]")) parse_property_list(node, nested, /*required=*/true);
      expect_punct("]");
      return node;
    }
    return parse_term();
  }

  Term parse_term() {
    const Token& t = cur();
    switch (t.kind) {
      case TokenKind::Variable:
        advance();
        return Variable{t.text};
      case TokenKind::Iri:
        advance();
        return Iri{t.text};
      case TokenKind::PrefixedName:
        advance();
        return PrefixedName{t.text, t.value};
      case TokenKind::BlankLabel:
        advance();
        return BlankNode{t.text};
      case TokenKind::String: {
        Literal lit{t.value, std::nullopt, std::nullopt};
        advance();
        if (cur().kind == TokenKind::LangTag) {
          lit.language = cur().text;
          advance();
        } else if (cur().is_punct("^^")) {
          advance();
          if (cur().kind == TokenKind::Iri) {
            lit.datatype = Iri{cur().text};
          } else if (cur().kind == TokenKind::PrefixedName) {
            lit.datatype = PrefixedName{cur().text, cur().value};
          } else {
            fail("expected datatype IRI after '^^'");
          }
          advance();
        }
        return lit;
      }
      case TokenKind::Number:
        return parse_number("");
      case TokenKind::Word:
        if (t.text == "true" || t.text == "false") {
          advance();
          return Literal{t.text, Iri{std::string(kXsd) + "boolean"}, std::nullopt};
        }
        break;
      case TokenKind::Punct:
        if ((t.is_punct("-") || t.is_punct("+")) && peek().kind == TokenKind::Number) {
          std::string sign = t.text == "-" ? "-" : "+";
          advance();
          return parse_number(sign);
        }
        break;
      default:
        break;
    }
    fail("expected RDF term");
  }

  Term parse_number(const std::string& sign) {
    const std::string lex = cur().text;
    advance();
    std::string type = "integer";
    if (lex.find_first_of("eE") != std::string::npos) {
      type = "double";
    } else if (lex.find('.') != std::string::npos) {
      type = "decimal";
    }
    return Literal{sign + lex, Iri{std::string(kXsd) + type}, std::nullopt};
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
  std::set<std::string> used_labels_;
  std::size_t next_blank_ = 0;
};

}  // namespace

Query parse(std::string_view text) { return Parser(tokenize(text)).parse_query(); }

}  // namespace sparqlgen::sparql
