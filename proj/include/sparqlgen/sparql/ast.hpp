#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sparqlgen::sparql {

// Heap-allocated value with deep-copy semantics, used to break the
// recursion between GraphPattern alternatives.
template <typename T>
class Box {
 public:
  Box() : ptr_(std::make_unique<T>()) {}
  Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT
  Box(const Box& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Box& a, const Box& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

struct Variable {
  std::string name;  // without the leading '?' or '$'
  bool operator==(const Variable&) const = default;
};

struct Iri {
  std::string value;  // absolute (or base-relative) IRI, no angle brackets
  bool operator==(const Iri&) const = default;
};

// Only present before expand_prefixes().
struct PrefixedName {
  std::string prefix;
  std::string local;  // raw local part, escapes preserved
  bool operator==(const PrefixedName&) const = default;
};

using IriRef = std::variant<Iri, PrefixedName>;

struct Literal {
  std::string lexical;  // unescaped lexical form
  std::optional<IriRef> datatype;
  std::optional<std::string> language;
  bool operator==(const Literal&) const = default;
};

struct BlankNode {
  std::string label;
  bool operator==(const BlankNode&) const = default;
};

using Term = std::variant<Variable, Iri, PrefixedName, Literal, BlankNode>;

// Any predicate that is not a single IRI or variable. The text is the
// canonical token rendering of the path and is never validated.
struct PathExpr {
  std::string text;
  bool operator==(const PathExpr&) const = default;
};

using Predicate = std::variant<Iri, PrefixedName, Variable, PathExpr>;

struct TriplePattern {
  Term subject;
  Predicate predicate;
  Term object;
  bool operator==(const TriplePattern&) const = default;
};

struct GraphPattern;
struct Query;

struct Bgp {
  std::vector<TriplePattern> triples;
  bool operator==(const Bgp&) const = default;
};

struct Group {
  std::vector<GraphPattern> members;
  bool operator==(const Group&) const;
};

struct OptionalPattern {
  Box<GraphPattern> inner;
  bool operator==(const OptionalPattern&) const = default;
};

struct Union {
  Box<GraphPattern> left;
  Box<GraphPattern> right;
  bool operator==(const Union&) const = default;
};

// FILTER with an opaque constraint. For FILTER [NOT] EXISTS the expression is
// the keyword text ("EXISTS" / "NOT EXISTS") and `inner` holds the pattern.
struct Filter {
  std::string expression;
  std::optional<Box<GraphPattern>> inner;
  bool operator==(const Filter&) const = default;
};

struct Bind {
  std::string expression;
  Variable target;
  bool operator==(const Bind&) const = default;
};

// Inline data block; `text` covers everything after the VALUES keyword.
struct Values {
  std::string text;
  bool operator==(const Values&) const = default;
};

struct Service {
  Term endpoint;  // Iri, PrefixedName (pre-expansion) or Variable
  bool silent = false;
  Box<GraphPattern> inner;
  bool operator==(const Service&) const = default;
};

struct SubSelect {
  Box<Query> query;
  bool operator==(const SubSelect&) const = default;
};

struct GraphPattern {
  std::variant<Bgp, Group, OptionalPattern, Union, Filter, Bind, Values, Service, SubSelect> node;
  bool operator==(const GraphPattern&) const = default;
};

inline bool Group::operator==(const Group& other) const { return members == other.members; }

enum class QueryForm { Select, Ask };

// Projection item: a variable, or an opaque "( expr AS ?v )" text.
struct ProjectionExpr {
  std::string text;
  bool operator==(const ProjectionExpr&) const = default;
};

using ProjectionItem = std::variant<Variable, ProjectionExpr>;

struct Projection {
  bool star = false;
  std::string modifier;  // "", "DISTINCT" or "REDUCED"
  std::vector<ProjectionItem> items;
  bool operator==(const Projection&) const = default;
};

struct Query {
  std::optional<std::string> base;
  std::map<std::string, std::string> prefixes;
  QueryForm form = QueryForm::Select;
  Projection projection;
  GraphPattern where{Bgp{}};
  std::string solution_modifiers;  // opaque GROUP BY / HAVING / ORDER BY / LIMIT / OFFSET
  bool operator==(const Query&) const = default;
};

inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

// Visits every triple pattern in the tree, including sub-selects and
// FILTER [NOT] EXISTS patterns.
template <typename Fn>
void for_each_triple(const GraphPattern& pattern, Fn&& fn);

template <typename Fn>
void for_each_triple(const Query& query, Fn&& fn) {
  for_each_triple(query.where, fn);
}

template <typename Fn>
void for_each_triple(const GraphPattern& pattern, Fn&& fn) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Bgp>) {
          for (const auto& t : node.triples) fn(t);
        } else if constexpr (std::is_same_v<T, Group>) {
          for (const auto& m : node.members) for_each_triple(m, fn);
        } else if constexpr (std::is_same_v<T, OptionalPattern>) {
          for_each_triple(*node.inner, fn);
        } else if constexpr (std::is_same_v<T, Union>) {
          for_each_triple(*node.left, fn);
          for_each_triple(*node.right, fn);
        } else if constexpr (std::is_same_v<T, Filter>) {
          if (node.inner) for_each_triple(**node.inner, fn);
        } else if constexpr (std::is_same_v<T, Service>) {
          for_each_triple(*node.inner, fn);
        } else if constexpr (std::is_same_v<T, SubSelect>) {
          for_each_triple(node.query->where, fn);
        }
      },
      pattern.node);
}

}  // namespace sparqlgen::sparql
