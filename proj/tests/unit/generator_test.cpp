#include <gtest/gtest.h>

#include "sparqlgen/gen/generator.hpp"
#include "support.hpp"

using namespace sparqlgen::gen;
namespace st = sparqlgen::testing;

namespace {

const st::FixtureKb& kb25() {
  static const st::FixtureKb kb = st::load_fixture_kb("uniprot25.json");
  return kb;
}

const std::string kQuestion = "What are the names of diseases?";

}  // namespace

TEST(Retrieval, CountsFollowConfig) {
  const auto& f = kb25();
  const auto ctx = retrieve_context(kQuestion, f.kb.index, *f.embedder);
  EXPECT_EQ(ctx.examples.size(), 20u);
  EXPECT_EQ(ctx.shapes.size(), 15u);
  ASSERT_TRUE(ctx.endpoint_info);
  for (std::size_t i = 1; i < ctx.examples.size(); ++i) EXPECT_GE(ctx.examples[i - 1].score, ctx.examples[i].score);
  for (std::size_t i = 1; i < ctx.shapes.size(); ++i) EXPECT_GE(ctx.shapes[i - 1].score, ctx.shapes[i].score);

  RetrievalConfig small{3, 2, false};
  const auto c2 = retrieve_context(kQuestion, f.kb.index, *f.embedder, small);
  EXPECT_EQ(c2.examples.size(), 3u);
  EXPECT_EQ(c2.shapes.size(), 2u);
  EXPECT_FALSE(c2.endpoint_info);
  EXPECT_THROW(retrieve_context(kQuestion, f.kb.index, *f.embedder, RetrievalConfig{0, 1, true}),
               std::invalid_argument);
}

TEST(Retrieval, SmallIndexReturnsEverything) {
  const auto f = st::load_fixture_kb("uniprot3.json");
  const auto ctx = retrieve_context(kQuestion, f.kb.index, *f.embedder);
  EXPECT_EQ(ctx.examples.size(), 3u);
  EXPECT_EQ(ctx.shapes.size(), 15u);
}

TEST(Retrieval, DiseaseShapeRanksHigh) {
  const auto& f = kb25();
  const auto ctx = retrieve_context("disease", f.kb.index, *f.embedder);
  EXPECT_EQ(ctx.shapes.front().label, "Disease");
}

TEST(Retrieval, ProviderMismatch) {
  const auto& f = kb25();
  sparqlgen::index::HashEmbedder other(128);
  EXPECT_THROW(retrieve_context(kQuestion, f.kb.index, other), sparqlgen::index::ProviderMismatch);
}

TEST(Generate, CorrectionLoopFixesWrongPredicate) {
  const auto& f = kb25();
  const auto llm = MockLlm::from_file(st::fixture("llm/wrong_then_fixed.json"));
  const auto r = generate(kQuestion, *llm, f.kb.index, *f.embedder, f.kb.catalog);
  EXPECT_EQ(r.rounds_used, 2);
  ASSERT_EQ(r.issues_per_round.size(), 2u);
  ASSERT_EQ(r.issues_per_round[0].size(), 1u);
  EXPECT_EQ(r.issues_per_round[0][0], st::read_text(st::fixture("golden/disease_message.txt")));
  EXPECT_TRUE(r.issues_per_round[1].empty());
  ASSERT_TRUE(r.query);
  EXPECT_NE(r.query->find("skos:prefLabel"), std::string::npos);
  EXPECT_EQ(r.endpoint, st::kUniprot);
  EXPECT_EQ(r.usage.size(), 2u);
  EXPECT_EQ(llm->calls(), 2u);

  // system, user, assistant, fix, assistant
  ASSERT_EQ(r.messages.size(), 5u);
  EXPECT_EQ(r.messages[3].role, "user");
  EXPECT_EQ(r.messages[3].content, fix_message(r.issues_per_round[0]).content);
}

TEST(Generate, WithoutValidationFirstAnswerIsKept) {
  const auto& f = kb25();
  const auto llm = MockLlm::from_file(st::fixture("llm/wrong_then_fixed.json"));
  GenerationOptions opts;
  opts.validate = false;
  const auto r = generate(kQuestion, *llm, f.kb.index, *f.embedder, f.kb.catalog, opts);
  EXPECT_EQ(r.rounds_used, 1);
  ASSERT_TRUE(r.query);
  EXPECT_NE(r.query->find("rdfs:label"), std::string::npos);
  EXPECT_EQ(r.issues_per_round, (std::vector<std::vector<std::string>>{{}}));
}

TEST(Generate, RoundBudgetIsRespected) {
  const auto& f = kb25();
  for (int budget : {0, 1, 2, 4}) {
    const auto llm = MockLlm::from_file(st::fixture("llm/always_wrong.json"));
    GenerationOptions opts;
    opts.max_fix_rounds = budget;
    const auto r = generate(kQuestion, *llm, f.kb.index, *f.embedder, f.kb.catalog, opts);
    EXPECT_EQ(r.rounds_used, budget + 1);
    EXPECT_EQ(r.issues_per_round.back().size(), 1u);
    EXPECT_EQ(llm->calls(), static_cast<std::size_t>(budget + 1));
  }
}

TEST(Generate, ValidFirstAnswerStopsImmediately) {
  const auto& f = kb25();
  const auto llm = MockLlm::from_file(st::fixture("llm/always_valid.json"));
  const auto r = generate(kQuestion, *llm, f.kb.index, *f.embedder, f.kb.catalog);
  EXPECT_EQ(r.rounds_used, 1);
  EXPECT_TRUE(r.issues_per_round[0].empty());
}

TEST(Generate, NoQueryTriggersAFixRound) {
  const auto& f = kb25();
  MockLlm llm(nlohmann::json{{"responses", {"I do not know.", "```sparql\nSELECT * WHERE { ?s ?p ?o }\n```"}}});
  const auto r = generate(kQuestion, llm, f.kb.index, *f.embedder, f.kb.catalog);
  EXPECT_EQ(r.rounds_used, 2);
  EXPECT_EQ(r.issues_per_round[0],
            std::vector<std::string>{"The answer contains no SPARQL query. Answer with one fenced sparql code block."});
  EXPECT_TRUE(r.issues_per_round[1].empty());
}

TEST(Generate, SyntaxErrorsAreIssues) {
  const auto& f = kb25();
  std::string endpoint;
  std::vector<std::string> messages;
  check_query(std::string("SELECT * WHERE { ?s ?p }"), f.kb.catalog, st::kUniprot, endpoint, messages);
  ASSERT_EQ(messages.size(), 1u);
  EXPECT_EQ(messages[0].rfind("The query is not valid SPARQL: syntax error", 0), 0u);
  check_query(std::string("#+ endpoint: http://x/sparql\nASK { ?s ?p ?o }"), f.kb.catalog, st::kUniprot, endpoint,
              messages);
  EXPECT_EQ(endpoint, "http://x/sparql");
  EXPECT_TRUE(messages.empty());
}

TEST(Generate, NoRagUsesBarePrompt) {
  const auto& f = kb25();
  const auto llm = MockLlm::from_file(st::fixture("llm/echo.json"));
  GenerationOptions opts;
  opts.use_retrieval = false;
  opts.validate = false;
  const auto r = generate(kQuestion, *llm, f.kb.index, *f.embedder, f.kb.catalog, opts);
  EXPECT_TRUE(r.context.examples.empty());
  EXPECT_EQ(r.answer_text.find("Example queries"), std::string::npos);
  EXPECT_NE(r.answer_text.find(kQuestion), std::string::npos);
}

TEST(Generate, HistoryGoesBetweenSystemAndQuestion) {
  const auto& f = kb25();
  const auto llm = MockLlm::from_file(st::fixture("llm/always_valid.json"));
  GenerationOptions opts;
  opts.history = {{"user", "earlier question"}, {"assistant", "earlier answer"}};
  const auto r = generate(kQuestion, *llm, f.kb.index, *f.embedder, f.kb.catalog, opts);
  ASSERT_GE(r.messages.size(), 5u);
  EXPECT_EQ(r.messages[0].role, "system");
  EXPECT_EQ(r.messages[1].content, "earlier question");
  EXPECT_EQ(r.messages[2].content, "earlier answer");
  EXPECT_NE(r.messages[3].content.find(kQuestion), std::string::npos);
}

TEST(Generate, LlmErrorsPropagate) {
  const auto& f = kb25();
  const auto llm = MockLlm::from_file(st::fixture("llm/failing.json"));
  EXPECT_THROW(generate(kQuestion, *llm, f.kb.index, *f.embedder, f.kb.catalog), LlmError);
}
