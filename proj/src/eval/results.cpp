#include "sparqlgen/eval/results.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "sparqlgen/net/sparql_client.hpp"

namespace sparqlgen::eval {
namespace {

constexpr std::size_t kMaxPermutations = 40320;  // 8!

using Rows = std::vector<std::vector<std::string>>;

Rows project(const Rows& raw, const std::vector<std::size_t>& order) {
  Rows out;
  out.reserve(raw.size());
  for (const auto& r : raw) {
    std::vector<std::string> row;
    row.reserve(order.size());
    for (auto c : order) row.push_back(r[c]);
    out.push_back(std::move(row));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string_view to_string(Category c) {
  switch (c) {
    case Category::Success: return "Success";
    case Category::DifferentResult: return "Different Result";
    case Category::NoResult: return "No Result";
    case Category::Error: return "Error";
  }
  return "Error";
}

Category category_from_string(std::string_view name) {
  for (auto c : {Category::Success, Category::DifferentResult, Category::NoResult, Category::Error})
    if (to_string(c) == name) return c;
  throw std::invalid_argument("unknown category: " + std::string(name));
}

net::ResultSet execute_select(const std::string& endpoint, const std::string& query, const net::HttpOptions& options) {
  try {
    return net::sparql_select(endpoint, query, options);
  } catch (const net::EndpointUnreachable& e) {
    throw ExecutionError(e.status(), e.what());
  } catch (const net::MalformedResults& e) {
    throw ExecutionError(0, e.what());
  } catch (const net::TransportError& e) {
    throw ExecutionError(0, e.what());
  }
}

std::string term_key(const net::RdfValue& value) {
  using T = net::RdfValue::Type;
  switch (value.type) {
    case T::Uri: return "<" + value.value + ">";
    case T::BNode: return "_:";
    case T::Literal:
      if (!value.language.empty()) return "\"" + value.value + "\"@" + value.language;
      if (!value.datatype.empty() && value.datatype != "http://www.w3.org/2001/XMLSchema#string")
        return "\"" + value.value + "\"^^<" + value.datatype + ">";
      return "\"" + value.value + "\"";
  }
  return {};
}

NormalizedResult normalize(const net::ResultSet& results) {
  NormalizedResult out;
  if (results.boolean) {
    out.columns = 1;
    out.rows.push_back({*results.boolean ? "true" : "false"});
    return out;
  }
  const std::size_t n = results.vars.size();
  out.columns = n;
  Rows raw;
  for (const auto& b : results.rows) {
    std::vector<std::string> row;
    for (const auto& v : results.vars) {
      const auto* value = net::binding(b, v);
      row.push_back(value != nullptr ? term_key(*value) : std::string());
    }
    raw.push_back(std::move(row));
  }

  std::vector<std::vector<std::string>> signature(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (const auto& r : raw) signature[c].push_back(r[c]);
    std::sort(signature[c].begin(), signature[c].end());
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return signature[a] < signature[b]; });

  // Groups of columns with identical signatures.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  std::size_t permutations = 1;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && signature[order[j]] == signature[order[i]]) ++j;
    if (j - i > 1) {
      groups.emplace_back(i, j);
      for (std::size_t k = 2; k <= j - i && permutations <= kMaxPermutations; ++k) permutations *= k;
    }
    i = j;
  }

  if (groups.empty() || permutations > kMaxPermutations) {
    out.rows = project(raw, order);
    return out;
  }
  for (auto [b, e] : groups) std::sort(order.begin() + b, order.begin() + e);
  Rows best = project(raw, order);
  // Odometer over the permutations of every tied group.
  while (true) {
    std::size_t g = 0;
    for (; g < groups.size(); ++g) {
      auto [b, e] = groups[g];
      if (std::next_permutation(order.begin() + b, order.begin() + e)) break;
    }
    if (g == groups.size()) break;
    Rows candidate = project(raw, order);
    if (candidate < best) best = std::move(candidate);
  }
  out.rows = std::move(best);
  return out;
}

double f1_score(const NormalizedResult& generated, const NormalizedResult& reference) {
  if (generated.rows.empty() || reference.rows.empty()) return 0.0;
  if (generated.columns != reference.columns) return 0.0;
  // Both row lists are sorted: count the multiset intersection by merging.
  std::size_t i = 0, j = 0, common = 0;
  while (i < generated.rows.size() && j < reference.rows.size()) {
    if (generated.rows[i] == reference.rows[j]) {
      ++common;
      ++i;
      ++j;
    } else if (generated.rows[i] < reference.rows[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / static_cast<double>(generated.rows.size());
  const double recall = static_cast<double>(common) / static_cast<double>(reference.rows.size());
  return 2.0 * precision * recall / (precision + recall);
}

Category categorize(const std::optional<NormalizedResult>& generated, const NormalizedResult& reference) {
  if (!generated) return Category::Error;
  if (generated->rows.empty()) return Category::NoResult;
  if (*generated == reference) return Category::Success;
  return Category::DifferentResult;
}

}  // namespace sparqlgen::eval
