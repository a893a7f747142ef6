#include "sparqlgen/sparql/serialize.hpp"

#include "sparqlgen/sparql/lexer.hpp"

namespace sparqlgen::sparql {
namespace {

constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

std::string render_iri_ref(const IriRef& ref) {
  if (const auto* iri = std::get_if<Iri>(&ref)) return "<" + iri->value + ">";
  const auto& pn = std::get<PrefixedName>(ref);
  return pn.prefix + ":" + pn.local;
}

// True when the literal can be written without quotes and still parse back
// to the same datatype.
bool renders_bare(const Literal& lit) {
  if (!lit.datatype || lit.language) return false;
  const auto* dt = std::get_if<Iri>(&*lit.datatype);
  if (dt == nullptr || dt->value.rfind(kXsd, 0) != 0) return false;
  const std::string type = dt->value.substr(kXsd.size());
  if (type == "boolean") return lit.lexical == "true" || lit.lexical == "false";
  if (type != "integer" && type != "decimal" && type != "double") return false;
  std::string_view body = lit.lexical;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (body.empty()) return false;
  try {
    auto toks = tokenize(body);
    if (toks.size() != 2 || toks[0].kind != TokenKind::Number || toks[0].text != body) return false;
  } catch (const SparqlError&) {
    return false;
  }
  const bool has_exp = body.find_first_of("eE") != std::string_view::npos;
  const bool has_dot = body.find('.') != std::string_view::npos;
  if (type == "double") return has_exp;
  if (type == "decimal") return has_dot && !has_exp;
  return !has_dot && !has_exp;
}

class Writer {
 public:
  std::string out;

  void line(std::size_t indent, const std::string& text) {
    out.append(indent * 2, ' ');
    out += text;
    out += '\n';
  }

  void query(const Query& q, std::size_t indent) {
    std::string head = q.form == QueryForm::Ask ? "ASK" : "SELECT";
    if (q.form == QueryForm::Select) {
      if (!q.projection.modifier.empty()) head += " " + q.projection.modifier;
      if (q.projection.star) {
        head += " *";
      } else {
        for (const auto& item : q.projection.items) {
          if (const auto* v = std::get_if<Variable>(&item)) {
            head += " ?" + v->name;
          } else {
            head += " " + std::get<ProjectionExpr>(item).text;
          }
        }
      }
    }
    line(indent, head + " WHERE {");
    body(q.where, indent + 1);
    line(indent, "}");
    if (!q.solution_modifiers.empty()) line(indent, q.solution_modifiers);
  }

  // Contents of a brace block holding `p`.
  void body(const GraphPattern& p, std::size_t indent) {
    if (const auto* g = std::get_if<Group>(&p.node)) {
      for (const auto& m : g->members) member(m, indent);
    } else if (const auto* s = std::get_if<SubSelect>(&p.node)) {
      query(*s->query, indent);
    } else {
      member(p, indent);
    }
  }

  void block(const std::string& head, const GraphPattern& p, std::size_t indent) {
    line(indent, head.empty() ? "{" : head + " {");
    body(p, indent + 1);
    line(indent, "}");
  }

  void union_operand(const GraphPattern& p, std::size_t indent, bool first) {
    if (const auto* u = std::get_if<Union>(&p.node)) {
      union_operand(*u->left, indent, first);
      union_operand(*u->right, indent, false);
      return;
    }
    if (!first) line(indent, "UNION");
    block("", p, indent);
  }

  void member(const GraphPattern& p, std::size_t indent) {
    std::visit(
        [&](const auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Bgp>) {
            for (const auto& t : node.triples) line(indent, render_triple(t));
          } else if constexpr (std::is_same_v<T, Group> || std::is_same_v<T, SubSelect>) {
            block("", p, indent);
          } else if constexpr (std::is_same_v<T, OptionalPattern>) {
            block("OPTIONAL", *node.inner, indent);
          } else if constexpr (std::is_same_v<T, Union>) {
            union_operand(p, indent, true);
          } else if constexpr (std::is_same_v<T, Filter>) {
            if (node.inner) {
              block("FILTER " + node.expression, **node.inner, indent);
            } else {
              line(indent, "FILTER " + node.expression);
            }
          } else if constexpr (std::is_same_v<T, Bind>) {
            line(indent, "BIND(" + node.expression + " AS ?" + node.target.name + ")");
          } else if constexpr (std::is_same_v<T, Values>) {
            line(indent, "VALUES " + node.text);
          } else if constexpr (std::is_same_v<T, Service>) {
            block(std::string("SERVICE ") + (node.silent ? "SILENT " : "") + render_term(node.endpoint), *node.inner,
                  indent);
          }
        },
        p.node);
  }
};

}  // namespace

std::string render_term(const Term& term) {
  return std::visit(
      [](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, Variable>) {
          return "?" + t.name;
        } else if constexpr (std::is_same_v<T, Iri>) {
          return "<" + t.value + ">";
        } else if constexpr (std::is_same_v<T, PrefixedName>) {
          return t.prefix + ":" + t.local;
        } else if constexpr (std::is_same_v<T, BlankNode>) {
          return "_:" + t.label;
        } else {
          if (renders_bare(t)) return t.lexical;
          std::string out = quote_string(t.lexical);
          if (t.language) {
            out += "@" + *t.language;
          } else if (t.datatype) {
            out += "^^" + render_iri_ref(*t.datatype);
          }
          return out;
        }
      },
      term);
}

std::string render_predicate(const Predicate& predicate) {
  return std::visit(
      [](const auto& p) -> std::string {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Iri>) {
          return p.value == kRdfType ? "a" : "<" + p.value + ">";
        } else if constexpr (std::is_same_v<T, PrefixedName>) {
          return p.prefix + ":" + p.local;
        } else if constexpr (std::is_same_v<T, Variable>) {
          return "?" + p.name;
        } else {
          return p.text;
        }
      },
      predicate);
}

std::string render_triple(const TriplePattern& triple) {
  return render_term(triple.subject) + " " + render_predicate(triple.predicate) + " " + render_term(triple.object) +
         " .";
}

std::string serialize(const Query& query) {
  Writer w;
  if (query.base) w.line(0, "BASE <" + *query.base + ">");
  for (const auto& [prefix, iri] : query.prefixes) w.line(0, "PREFIX " + prefix + ": <" + iri + ">");
  w.query(query, 0);
  return w.out;
}

}  // namespace sparqlgen::sparql
