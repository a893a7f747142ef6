#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparqlgen/gen/llm.hpp"
#include "sparqlgen/gen/prompt.hpp"
#include "sparqlgen/index/embedder.hpp"
#include "sparqlgen/index/vector_index.hpp"
#include "sparqlgen/schema/catalog.hpp"
#include "sparqlgen/validate/validator.hpp"

namespace sparqlgen::gen {

struct RetrievalConfig {
  std::size_t k_questions = 20;
  std::size_t k_classes = 15;
  bool endpoint_info = true;
};

// Top k_questions ExampleQuery and top k_classes ClassShape documents by
// cosine similarity, plus the best EndpointInfo document when enabled.
// Throws ProviderMismatch when the embedder does not match the index.
PromptContext retrieve_context(const std::string& question, const index::VectorIndex& index,
                               index::Embedder& embedder, const RetrievalConfig& config = {});

struct GenerationOptions {
  RetrievalConfig retrieval;
  bool use_retrieval = true;  // false: bare question prompt, no context
  bool validate = true;       // false: the first answer is returned as is
  int max_fix_rounds = 2;
  std::string model;          // empty: client default
  // Earlier conversation turns placed between the system message and the
  // new question.
  std::vector<ChatMessage> history;
};

struct GenerationResult {
  std::string answer_text;
  std::optional<std::string> query;
  std::string endpoint;  // endpoint the query was validated against
  // Messages of the issues found after each round; a round without a
  // parseable query reports that as its issue.
  std::vector<std::vector<std::string>> issues_per_round;
  std::vector<std::vector<validate::ValidationIssue>> validation_per_round;
  int rounds_used = 0;
  std::vector<TokenUsage> usage;  // one entry per LLM call
  PromptContext context;
  std::vector<ChatMessage> messages;  // full conversation including the last answer

  TokenUsage total_usage() const;
};

// Issue messages for one extracted query: parse and prefix errors become a
// single message, otherwise the validator's messages. `endpoint` is filled
// with the endpoint used for triples outside SERVICE blocks.
std::vector<validate::ValidationIssue> check_query(const std::optional<std::string>& query,
                                                   const schema::SchemaCatalog& catalog,
                                                   const std::string& fallback_endpoint, std::string& endpoint,
                                                   std::vector<std::string>& messages);

// Retrieve, prompt, call the LLM, extract and validate; while issues remain
// and fewer than max_fix_rounds corrections were made, send the issues back
// and retry. Throws LlmError; validation outcomes are data.
GenerationResult generate(const std::string& question, LlmClient& llm, const index::VectorIndex& index,
                          index::Embedder& embedder, const schema::SchemaCatalog& catalog,
                          const GenerationOptions& options = {});

}  // namespace sparqlgen::gen
