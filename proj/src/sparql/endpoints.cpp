#include "sparqlgen/sparql/endpoints.hpp"

namespace sparqlgen::sparql {
namespace {

void collect(const GraphPattern& p, const std::string& endpoint, TriplesByEndpoint& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Bgp>) {
          auto& bucket = out[endpoint];
          bucket.insert(bucket.end(), node.triples.begin(), node.triples.end());
        } else if constexpr (std::is_same_v<T, Group>) {
          for (const auto& m : node.members) collect(m, endpoint, out);
        } else if constexpr (std::is_same_v<T, OptionalPattern>) {
          collect(*node.inner, endpoint, out);
        } else if constexpr (std::is_same_v<T, Union>) {
          collect(*node.left, endpoint, out);
          collect(*node.right, endpoint, out);
        } else if constexpr (std::is_same_v<T, Filter>) {
          if (node.inner) collect(**node.inner, endpoint, out);
        } else if constexpr (std::is_same_v<T, Service>) {
          const auto* iri = std::get_if<Iri>(&node.endpoint);
          collect(*node.inner, iri != nullptr ? iri->value : std::string(kUnknownEndpoint), out);
        } else if constexpr (std::is_same_v<T, SubSelect>) {
          collect(node.query->where, endpoint, out);
        }
      },
      p.node);
}

}  // namespace

TriplesByEndpoint extract_triples_by_endpoint(const Query& query, const std::string& primary_endpoint) {
  TriplesByEndpoint out;
  collect(query.where, primary_endpoint, out);
  // Empty BGPs may have created empty buckets.
  for (auto it = out.begin(); it != out.end();) {
    it = it->second.empty() ? out.erase(it) : std::next(it);
  }
  return out;
}

}  // namespace sparqlgen::sparql
