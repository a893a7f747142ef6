#include <gtest/gtest.h>

#include "sparqlgen/gen/prompt.hpp"
#include "sparqlgen/resources.hpp"
#include "support.hpp"

using namespace sparqlgen::gen;
namespace st = sparqlgen::testing;

namespace {

std::string transcript(const std::vector<ChatMessage>& messages) {
  std::string out;
  for (const auto& m : messages) out += "[" + m.role + "]\n" + m.content + "\n";
  return out;
}

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(Prompt, MatchesGolden) {
  const auto doc = nlohmann::json::parse(st::read_text(st::fixture("golden/prompt_context.json")));
  PromptContext ctx;
  for (const auto& e : doc["examples"])
    ctx.examples.push_back({e["question"], e["query"], e["endpoint"], e["score"].get<float>()});
  for (const auto& s : doc["shapes"]) ctx.shapes.push_back({s["label"], s["shex"], s["endpoint"], s["score"].get<float>()});
  const auto& info = doc["endpoint_info"];
  ctx.endpoint_info = EndpointRef{info["text"], info["endpoint"], info["score"].get<float>()};
  EXPECT_EQ(transcript(build_prompt(doc["question"], ctx)), st::read_text(st::fixture("golden/prompt.txt")));
}

TEST(Prompt, EmptySectionsReadNone) {
  const auto messages = build_prompt("Q?", PromptContext{});
  ASSERT_EQ(messages.size(), 2u);
  EXPECT_EQ(messages[0].role, "system");
  EXPECT_NE(messages[0].content.find("Endpoint information:\n(none)"), std::string::npos);
  EXPECT_EQ(count(messages[1].content, "(none)"), 2u);
  EXPECT_NE(messages[1].content.find("Question: Q?"), std::string::npos);
}

TEST(Prompt, TemplateDoesNotContainFences) {
  EXPECT_EQ(sparqlgen::resources::generate_prompt().find("```"), std::string::npos);
}

TEST(Prompt, OneFencePerRetrievedDocument) {
  PromptContext ctx;
  for (int i = 0; i < 4; ++i) ctx.examples.push_back({"q" + std::to_string(i), "SELECT * WHERE {}", "http://e", 0.5f});
  for (int i = 0; i < 3; ++i) ctx.shapes.push_back({"C", "ex:C {\n  a [ ex:C ]\n}", "http://e", 0.5f});
  const auto text = transcript(build_prompt("Q", ctx));
  EXPECT_EQ(count(text, "```sparql\n"), 4u);
  EXPECT_EQ(count(text, "```shex\n"), 3u);
}

TEST(Prompt, ExampleGetsEndpointCommentOnce) {
  EXPECT_EQ(render_example({"Q", "SELECT * WHERE {}", "http://e/sparql", 1}),
            "Q\n```sparql\n#+ endpoint: http://e/sparql\nSELECT * WHERE {}\n```");
  EXPECT_EQ(render_example({"Q", "#+ endpoint: http://x/sparql\nASK {}", "http://e/sparql", 1}),
            "Q\n```sparql\n#+ endpoint: http://x/sparql\nASK {}\n```");
}

TEST(Prompt, NoRagPromptHasQuestionOnly) {
  const auto m = build_norag_prompt("Which proteins?");
  ASSERT_EQ(m.size(), 2u);
  EXPECT_NE(m[1].content.find("Question: Which proteins?"), std::string::npos);
  EXPECT_EQ(m[1].content.find("Example queries"), std::string::npos);
}

TEST(Prompt, FixMessageListsIssues) {
  const auto m = fix_message({"first issue", "second issue"});
  EXPECT_EQ(m.role, "user");
  EXPECT_EQ(m.content, "Fix the query. Validation errors:\n- first issue\n- second issue");
}

TEST(Template, SplitsRolesAndSubstitutesOnce) {
  const auto m = render_template("[system]\nS {{a}}\n[user]\n{{b}} and {{unknown}}\n[assistant]\nok\n",
                                 {{"a", "{{b}}"}, {"b", "B"}});
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(m[0], (ChatMessage{"system", "S {{b}}"}));
  EXPECT_EQ(m[1], (ChatMessage{"user", "B and {{unknown}}"}));
  EXPECT_EQ(m[2], (ChatMessage{"assistant", "ok"}));
}

TEST(Template, NoMarkersMeansOneUserMessage) {
  const auto m = render_template("\nhello {{x}}\n\n", {{"x", "there"}});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0], (ChatMessage{"user", "hello there"}));
}

TEST(Extract, LastSparqlFenceWins) {
  const std::string answer =
      "First try:\n```sparql\nSELECT ?a WHERE { ?a ?b ?c }\n```\nBetter:\n```sparql\nASK { ?s ?p ?o }\n```\nDone.";
  EXPECT_EQ(extract_sparql(answer), "ASK { ?s ?p ?o }");
}

TEST(Extract, UntaggedFenceMustParse) {
  EXPECT_EQ(extract_sparql("```\nSELECT * WHERE { ?s ?p ?o }\n```\n```\nnot sparql at all\n```"),
            "SELECT * WHERE { ?s ?p ?o }");
  EXPECT_FALSE(extract_sparql("```python\nprint(1)\n```"));
  EXPECT_FALSE(extract_sparql("I cannot answer that."));
}

TEST(Extract, TaggedFenceBeatsUntagged) {
  EXPECT_EQ(extract_sparql("```sparql\nASK {}\n```\n```\nSELECT * WHERE {}\n```"), "ASK {}");
}

TEST(Extract, UnterminatedFinalFence) {
  EXPECT_EQ(extract_sparql("Here:\n```sparql\nSELECT * WHERE { ?s ?p ?o }\n"), "SELECT * WHERE { ?s ?p ?o }");
}

TEST(Extract, EndpointComment) {
  EXPECT_EQ(endpoint_comment("#+ endpoint: https://sparql.uniprot.org/sparql\nSELECT"),
            "https://sparql.uniprot.org/sparql");
  EXPECT_EQ(endpoint_comment("PREFIX a: <http://a/>\n  #+ endpoint: http://x/sparql  \nASK {}"), "http://x/sparql");
  EXPECT_FALSE(endpoint_comment("# endpoint: http://x/sparql\nASK {}"));
}
