#include "sparqlgen/gen/generator.hpp"

#include "sparqlgen/sparql/parser.hpp"
#include "sparqlgen/sparql/prefixes.hpp"

namespace sparqlgen::gen {
namespace {

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

std::vector<float> embed_question(const std::string& question, const index::VectorIndex& index,
                                  index::Embedder& embedder) {
  if (embedder.fingerprint() != index.fingerprint())
    throw index::ProviderMismatch(embedder.fingerprint(), index.fingerprint());
  auto vectors = embedder.embed({question});
  return std::move(vectors.front());
}

}  // namespace

TokenUsage GenerationResult::total_usage() const {
  TokenUsage total;
  for (const auto& u : usage) total += u;
  return total;
}

PromptContext retrieve_context(const std::string& question, const index::VectorIndex& index,
                               index::Embedder& embedder, const RetrievalConfig& config) {
  if (config.k_questions == 0 || config.k_classes == 0) throw std::invalid_argument("retrieval limits must be >= 1");
  PromptContext ctx;
  if (index.size() == 0) return ctx;
  const auto q = embed_question(question, index, embedder);
  for (const auto& hit : index.search(q, config.k_questions, index::DocKind::ExampleQuery))
    ctx.examples.push_back(ExampleRef{hit.doc.embed_text, hit.doc.payload, hit.doc.endpoint, hit.score});
  for (const auto& hit : index.search(q, config.k_classes, index::DocKind::ClassShape))
    ctx.shapes.push_back(ShapeRef{first_line(hit.doc.embed_text), hit.doc.payload, hit.doc.endpoint, hit.score});
  if (config.endpoint_info) {
    const auto hits = index.search(q, 1, index::DocKind::EndpointInfo);
    if (!hits.empty())
      ctx.endpoint_info = EndpointRef{hits.front().doc.payload, hits.front().doc.endpoint, hits.front().score};
  }
  return ctx;
}

std::vector<validate::ValidationIssue> check_query(const std::optional<std::string>& query,
                                                   const schema::SchemaCatalog& catalog,
                                                   const std::string& fallback_endpoint, std::string& endpoint,
                                                   std::vector<std::string>& messages) {
  messages.clear();
  endpoint = fallback_endpoint;
  if (!query) {
    messages.push_back("The answer contains no SPARQL query. Answer with one fenced sparql code block.");
    return {};
  }
  if (auto target = endpoint_comment(*query)) endpoint = *target;
  try {
    auto issues = validate::validate(sparql::parse(*query), endpoint, catalog);
    for (const auto& i : issues) messages.push_back(i.message);
    return issues;
  } catch (const sparql::SparqlError& e) {
    messages.push_back(std::string("The query is not valid SPARQL: ") + e.what());
  }
  return {};
}

GenerationResult generate(const std::string& question, LlmClient& llm, const index::VectorIndex& index,
                          index::Embedder& embedder, const schema::SchemaCatalog& catalog,
                          const GenerationOptions& options) {
  GenerationResult result;
  std::vector<ChatMessage> prompt;
  if (options.use_retrieval) {
    result.context = retrieve_context(question, index, embedder, options.retrieval);
    prompt = build_prompt(question, result.context);
  } else {
    prompt = build_norag_prompt(question);
  }
  // History goes after the system message so the new question stays last.
  auto& messages = result.messages;
  std::size_t split = !prompt.empty() && prompt.front().role == "system" ? 1 : 0;
  messages.assign(prompt.begin(), prompt.begin() + static_cast<std::ptrdiff_t>(split));
  messages.insert(messages.end(), options.history.begin(), options.history.end());
  messages.insert(messages.end(), prompt.begin() + static_cast<std::ptrdiff_t>(split), prompt.end());

  std::string fallback;
  if (!result.context.examples.empty()) fallback = result.context.examples.front().endpoint;
  else if (!catalog.endpoints().empty()) fallback = catalog.endpoints().begin()->first;

  const int max_rounds = std::max(0, options.max_fix_rounds) + 1;
  for (int round = 0; round < max_rounds; ++round) {
    const auto completion = chat_completion(llm, messages, options.model);
    result.usage.push_back(completion.usage);
    result.answer_text = completion.content;
    messages.push_back(ChatMessage{"assistant", completion.content});
    result.query = extract_sparql(completion.content);
    result.rounds_used = round + 1;
    result.endpoint = fallback;
    if (result.query)
      if (auto target = endpoint_comment(*result.query)) result.endpoint = *target;

    if (!options.validate) {
      result.issues_per_round.push_back({});
      result.validation_per_round.push_back({});
      break;
    }
    std::vector<std::string> issue_messages;
    result.validation_per_round.push_back(
        check_query(result.query, catalog, fallback, result.endpoint, issue_messages));
    result.issues_per_round.push_back(issue_messages);
    if (issue_messages.empty() || round + 1 == max_rounds) break;
    messages.push_back(fix_message(issue_messages));
  }
  return result;
}

}  // namespace sparqlgen::gen
