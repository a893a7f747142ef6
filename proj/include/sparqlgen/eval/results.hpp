#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sparqlgen/net/http.hpp"
#include "sparqlgen/net/sparql_results.hpp"

namespace sparqlgen::eval {

enum class Category { Success, DifferentResult, NoResult, Error };

std::string_view to_string(Category c);  // "Success", "Different Result", ...
Category category_from_string(std::string_view name);

class ExecutionError : public std::runtime_error {
 public:
  ExecutionError(int status, const std::string& detail)
      : std::runtime_error(status > 0 ? "query execution failed (HTTP " + std::to_string(status) + "): " + detail
                                      : "query execution failed: " + detail),
        status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

// Throws ExecutionError for HTTP, transport or result-format failures.
net::ResultSet execute_select(const std::string& endpoint, const std::string& query,
                              const net::HttpOptions& options = {});

// Canonical string of one term. Blank node labels are dropped since they are
// local to one result document.
std::string term_key(const net::RdfValue& value);

// Variable-name-insensitive canonical form of a result set. Columns are
// ordered by their sorted multiset of values; columns with equal multisets
// take the permutation giving the smallest sorted row list. Rows are sorted.
// ASK results become one single-column row.
struct NormalizedResult {
  std::size_t columns = 0;
  std::vector<std::vector<std::string>> rows;
  bool operator==(const NormalizedResult&) const = default;
};

NormalizedResult normalize(const net::ResultSet& results);

// Row-multiset F1 of `generated` against `reference`.
double f1_score(const NormalizedResult& generated, const NormalizedResult& reference);

// nullopt for `generated` means generation, extraction, parsing or execution
// failed.
Category categorize(const std::optional<NormalizedResult>& generated, const NormalizedResult& reference);

}  // namespace sparqlgen::eval
