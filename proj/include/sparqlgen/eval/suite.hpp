#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparqlgen/config_error.hpp"
#include "sparqlgen/eval/results.hpp"
#include "sparqlgen/gen/generator.hpp"

namespace sparqlgen::eval {

struct EvalCase {
  std::string id;
  std::string question;
  std::string reference_query;
  std::string endpoint;
  bool operator==(const EvalCase&) const = default;
};

// {"cases": [{"id", "question", "reference_query", "endpoint"}]}. Each
// reference query must parse and each question be non-empty; otherwise
// ConfigError.
std::vector<EvalCase> parse_cases(const nlohmann::json& doc);
std::vector<EvalCase> load_cases(const std::string& path);

enum class Approach { NoRag, Rag, RagValidation };

std::string_view to_string(Approach a);     // "No RAG", "RAG w/o validation", "RAG w/ validation"
std::string_view short_name(Approach a);    // "norag", "rag", "ragval"
Approach approach_from_string(std::string_view name);  // accepts either form

// Unit prices in dollars per token.
struct ModelPrice {
  double prompt = 0.0;
  double completion = 0.0;
  bool operator==(const ModelPrice&) const = default;
};

// {"<model>": {"prompt": p, "completion": c}}
using PriceTable = std::map<std::string, ModelPrice>;
PriceTable parse_prices(const nlohmann::json& doc);
PriceTable load_prices(const std::string& path);

struct RunOutcome {
  std::string case_id;
  std::string model;
  Approach approach = Approach::RagValidation;
  int run = 1;  // 1-based
  Category category = Category::Error;
  std::optional<std::string> generated_query;
  std::string endpoint;
  std::string error;
  int rounds_used = 0;
  gen::TokenUsage tokens;
  std::size_t llm_calls = 0;
  double price = 0.0;
  double f1 = 0.0;
  std::optional<double> latency_ms;
  bool operator==(const RunOutcome&) const = default;
};

struct SummaryRow {
  std::string model;
  Approach approach = Approach::RagValidation;
  std::array<std::size_t, 4> counts{};  // indexed by Category
  std::size_t runs = 0;
  double mean_price = 0.0;   // per request
  double total_price = 0.0;
  double mean_f1 = 0.0;
};

struct Report {
  std::vector<RunOutcome> outcomes;  // ordered by (model, approach, case, run)

  // One row per (model, approach) in order of first appearance.
  std::vector<SummaryRow> summary() const;
  nlohmann::json to_json() const;
  static Report from_json(const nlohmann::json& doc);
  bool operator==(const Report&) const = default;
};

// Markdown table with columns Model | Approach | Success | Different Result |
// No Result | Error | Price ($) | F1.
std::string render_report(const Report& report);

// Merges reports, e.g. one per model.
Report merge(std::vector<Report> reports);

struct SuiteConfig {
  std::vector<Approach> approaches{Approach::NoRag, Approach::Rag, Approach::RagValidation};
  int runs = 3;
  std::string model;  // empty: client default
  PriceTable prices;
  gen::RetrievalConfig retrieval;
  int max_fix_rounds = 2;
  // Endpoint IRI -> URL actually queried (stub servers for offline runs).
  std::map<std::string, std::string> endpoint_overrides;
  int parallelism = 1;
  bool record_latency = false;
  net::HttpOptions http;
};

// Runs every case with every approach `runs` times. Reference queries are
// executed once; a failing reference throws ConfigError.
Report run_suite(const std::vector<EvalCase>& cases, const SuiteConfig& config, gen::LlmClient& llm,
                 const index::VectorIndex& index, index::Embedder& embedder, const schema::SchemaCatalog& catalog);

}  // namespace sparqlgen::eval
