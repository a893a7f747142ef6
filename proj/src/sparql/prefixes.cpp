#include "sparqlgen/sparql/prefixes.hpp"

#include <cctype>

namespace sparqlgen::sparql {
namespace {

std::string unescape_local(std::string_view local) {
  std::string out;
  out.reserve(local.size());
  for (std::size_t i = 0; i < local.size(); ++i) {
    if (local[i] == '\\' && i + 1 < local.size()) ++i;
    out.push_back(local[i]);
  }
  return out;
}

class Expander {
 public:
  explicit Expander(const PrefixMap& declared) : declared_(declared) {}

  std::string resolve(const PrefixedName& pn) const {
    if (auto it = declared_.find(pn.prefix); it != declared_.end()) return it->second + unescape_local(pn.local);
    const auto& builtin = builtin_prefixes();
    if (auto it = builtin.find(pn.prefix); it != builtin.end()) return it->second + unescape_local(pn.local);
    throw UndeclaredPrefix(pn.prefix);
  }

  void term(Term& t) const {
    if (const auto* pn = std::get_if<PrefixedName>(&t)) {
      t = Iri{resolve(*pn)};
    } else if (auto* lit = std::get_if<Literal>(&t)) {
      if (lit->datatype) {
        if (const auto* dpn = std::get_if<PrefixedName>(&*lit->datatype)) lit->datatype = Iri{resolve(*dpn)};
      }
    }
  }

  void pattern(GraphPattern& p) const {
    std::visit(
        [&](auto& node) {
          using T = std::decay_t<decltype(node)>;
          if constexpr (std::is_same_v<T, Bgp>) {
            for (auto& tp : node.triples) {
              term(tp.subject);
              term(tp.object);
              if (const auto* pn = std::get_if<PrefixedName>(&tp.predicate)) tp.predicate = Iri{resolve(*pn)};
            }
          } else if constexpr (std::is_same_v<T, Group>) {
            for (auto& m : node.members) pattern(m);
          } else if constexpr (std::is_same_v<T, OptionalPattern>) {
            pattern(*node.inner);
          } else if constexpr (std::is_same_v<T, Union>) {
            pattern(*node.left);
            pattern(*node.right);
          } else if constexpr (std::is_same_v<T, Filter>) {
            if (node.inner) pattern(**node.inner);
          } else if constexpr (std::is_same_v<T, Service>) {
            term(node.endpoint);
            pattern(*node.inner);
          } else if constexpr (std::is_same_v<T, SubSelect>) {
            pattern(node.query->where);
          }
        },
        p.node);
  }

 private:
  const PrefixMap& declared_;
};

bool safe_local(std::string_view local) {
  for (std::size_t i = 0; i < local.size(); ++i) {
    const auto c = static_cast<unsigned char>(local[i]);
    const bool ok = std::isalnum(c) || c == '_' || ((c == '-' || c == '.') && i > 0);
    if (!ok) return false;
  }
  return local.empty() || local.back() != '.';
}

}  // namespace

const PrefixMap& builtin_prefixes() {
  static const PrefixMap kBuiltins = {
      {"owl", "http://www.w3.org/2002/07/owl#"},
      {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
      {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
      {"skos", "http://www.w3.org/2004/02/skos/core#"},
      {"xsd", "http://www.w3.org/2001/XMLSchema#"},
  };
  return kBuiltins;
}

Query expand_prefixes(Query query) {
  Expander(query.prefixes).pattern(query.where);
  return query;
}

std::string compact_iri(std::string_view iri, const PrefixMap& prefixes) {
  const std::string* best_prefix = nullptr;
  std::size_t best_len = 0;
  for (const auto& [prefix, ns] : prefixes) {
    if (ns.empty() || iri.size() < ns.size() || iri.compare(0, ns.size(), ns) != 0) continue;
    if (!safe_local(iri.substr(ns.size()))) continue;
    if (best_prefix == nullptr || ns.size() > best_len) {
      best_prefix = &prefix;
      best_len = ns.size();
    }
  }
  if (best_prefix == nullptr) return "<" + std::string(iri) + ">";
  return *best_prefix + ":" + std::string(iri.substr(best_len));
}

std::string expand_compact(std::string_view text, const PrefixMap& prefixes) {
  if (text.size() >= 2 && text.front() == '<' && text.back() == '>') return std::string(text.substr(1, text.size() - 2));
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return std::string(text);
  auto it = prefixes.find(std::string(text.substr(0, colon)));
  if (it == prefixes.end()) return std::string(text);
  return it->second + std::string(text.substr(colon + 1));
}

}  // namespace sparqlgen::sparql
