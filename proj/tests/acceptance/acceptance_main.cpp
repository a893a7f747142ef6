// Acceptance checks. Prints one PASS/FAIL line per check and exits nonzero
// when any check fails or exceeds its time limit.

#include <httplib.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <regex>
#include <thread>

#include "oracles.hpp"
#include "sparqlgen/eval/suite.hpp"
#include "sparqlgen/gen/generator.hpp"
#include "sparqlgen/index/embedder.hpp"
#include "sparqlgen/net/stub_endpoint.hpp"
#include "sparqlgen/schema/void.hpp"
#include "sparqlgen/service/service.hpp"
#include "sparqlgen/sparql/parser.hpp"
#include "sparqlgen/sparql/serialize.hpp"
#include "sparqlgen/validate/validator.hpp"
#include "support.hpp"

namespace st = sparqlgen::testing;
namespace sp = sparqlgen::sparql;
namespace gen = sparqlgen::gen;
namespace idx = sparqlgen::index;
namespace ev = sparqlgen::eval;
namespace svc = sparqlgen::service;
using nlohmann::json;

namespace {

// Empty string on success, otherwise what went wrong.
using Check = std::function<std::string()>;

struct Criterion {
  std::string name;
  double limit_s;
  Check check;
};

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

std::string squash(const std::string& text) {
  std::string s = std::regex_replace(text, std::regex(R"(\s*;\s*)"), " ; ");
  return std::regex_replace(s, std::regex(R"(\s+)"), " ");
}

std::string shex_golden() {
  const auto rows = sparqlgen::schema::fetch_void_rows(st::fixture("void/disease_annotation.srj"));
  const auto catalog = sparqlgen::schema::build_catalog(st::kUniprot, rows, {}, st::fixture_prefixes());
  const auto* shape = catalog.lookup(st::kUniprot, std::string(st::kUp) + "Disease_Annotation");
  if (shape == nullptr) return "Disease_Annotation missing from catalog";
  const auto text = sparqlgen::schema::render_shex(*shape, catalog.prefixes());
  if (text != st::read_text(st::fixture("golden/disease_annotation.shex"))) return "differs from golden:\n" + text;
  const std::string compact =
      "up:Disease_Annotation {\n  a [ up:Disease_Annotation ] ;\n"
      "  up:sequence [ up:Chain_Annotation up:Modified_Sequence ];\n"
      "  rdfs:comment xsd:string ; up:disease IRI }";
  if (squash(text) != squash(compact)) return "differs from the compact block:\n" + text;
  return "";
}

std::string validator_message() {
  const std::string expected =
      "Subject ?disease with type up:Disease in endpoint https://sparql.uniprot.org/sparql does not support the "
      "predicate rdfs:label. It can have the following predicates: skos:altLabel, rdfs:comment, up:mnemonic, "
      "skos:prefLabel, rdfs:seeAlso";
  const auto issues = sparqlgen::validate::validate(
      sp::parse("PREFIX up: <http://purl.uniprot.org/core/>\n"
                "SELECT * WHERE { ?disease a up:Disease ; rdfs:label ?l }"),
      st::kUniprot, st::uniprot_catalog());
  if (issues.size() != 1) return std::to_string(issues.size()) + " issues";
  if (issues[0].message != expected) return "message: " + issues[0].message;
  return "";
}

std::string validator_oracle() {
  constexpr int kInstances = 250;
  std::mt19937_64 rng(20240501);
  for (int i = 0; i < kInstances; ++i) {
    const auto inst = st::random_validator_instance(rng);
    std::set<st::IssueKey> got;
    for (const auto& issue : sparqlgen::validate::validate(sp::parse(inst.query_text), st::kRandomEndpoint,
                                                           inst.catalog()))
      got.emplace(issue.subject, issue.subject_class, issue.predicate);
    if (got != st::oracle_issues(inst)) return "instance " + std::to_string(i) + " disagrees:\n" + inst.query_text;
  }
  return "";
}

std::string parser_round_trip() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(st::fixture("queries"))) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.size() < 20) return "corpus has only " + std::to_string(files.size()) + " queries";
  std::string all;
  for (const auto& f : files) {
    const auto text = st::read_text(f);
    all += text;
    const auto first = sp::parse(text);
    if (sp::parse(sp::serialize(first)) != first) return "round trip changed " + f.filename().string();
  }
  for (const auto* construct : {"SERVICE", "OPTIONAL", "UNION", "FILTER", "VALUES", "{ SELECT", "+", "|"})
    if (all.find(construct) == std::string::npos) return std::string("corpus lacks ") + construct;

  constexpr int kFuzz = 10000;
  constexpr std::size_t kMaxBytes = 4096;
  std::mt19937_64 rng(5);
  for (int i = 0; i < kFuzz; ++i) {
    const auto text = st::random_bytes(rng, kMaxBytes);
    try {
      (void)sp::parse(text);
    } catch (const sp::SparqlError&) {
    } catch (const std::exception& e) {
      return "fuzz input " + std::to_string(i) + " raised " + e.what();
    }
  }
  return "";
}

std::string retrieval_exactness() {
  constexpr std::size_t kRows = 1000, kDim = 256, kQueries = 100;
  constexpr double kTieTolerance = 1e-5;
  std::mt19937_64 rng(42);
  std::vector<idx::IndexedDoc> docs;
  std::vector<idx::Embedding> vectors;
  for (std::size_t i = 0; i < kRows; ++i) {
    docs.push_back(idx::make_doc(idx::DocKind::ExampleQuery, "doc " + std::to_string(i), "", "http://e/sparql"));
    vectors.push_back(st::random_unit_vector(rng, kDim));
  }
  const idx::VectorIndex index(kDim, "random", std::move(docs), std::move(vectors));
  for (std::size_t q = 0; q < kQueries; ++q) {
    const auto query = st::random_unit_vector(rng, kDim);
    for (std::size_t k : {1, 15, 20}) {
      std::string why;
      if (!st::same_top_k(index, index.search(query, k), st::brute_force_top_k(index, query, k), kTieTolerance, &why))
        return "query " + std::to_string(q) + " k=" + std::to_string(k) + ": " + why;
    }
  }
  return "";
}

std::string prompt_text(const std::vector<gen::ChatMessage>& messages) {
  std::string out;
  for (const auto& m : messages) out += m.content + "\n";
  return out;
}

std::string context_cardinality() {
  const std::string question = "Which proteins are associated with a disease?";
  const auto big = st::load_fixture_kb("uniprot25.json");
  const auto prompt = prompt_text(gen::build_prompt(question, gen::retrieve_context(question, big.kb.index,
                                                                                    *big.embedder)));
  if (count(prompt, "```sparql\n") != 20) return "25-example index: " + std::to_string(count(prompt, "```sparql\n"));
  if (count(prompt, "```shex\n") != 15) return "shapes: " + std::to_string(count(prompt, "```shex\n"));
  const auto small = st::load_fixture_kb("uniprot3.json");
  const auto p3 = prompt_text(gen::build_prompt(question, gen::retrieve_context(question, small.kb.index,
                                                                                *small.embedder)));
  if (count(p3, "```sparql\n") != 3) return "3-example index: " + std::to_string(count(p3, "```sparql\n"));
  return "";
}

std::string correction_loop() {
  const auto f = st::load_fixture_kb("uniprot25.json");
  const std::string question = "What are the names of diseases?";
  auto llm = gen::MockLlm::from_file(st::fixture("llm/wrong_then_fixed.json"));
  const auto fixed = gen::generate(question, *llm, f.kb.index, *f.embedder, f.kb.catalog);
  if (fixed.rounds_used != 2) return "with validation: rounds_used " + std::to_string(fixed.rounds_used);
  if (!fixed.issues_per_round.back().empty()) return "with validation: final issues not empty";
  if (!fixed.query || fixed.query->find("skos:prefLabel") == std::string::npos) return "corrected query missing";

  llm = gen::MockLlm::from_file(st::fixture("llm/wrong_then_fixed.json"));
  gen::GenerationOptions rag_only;
  rag_only.validate = false;
  const auto wrong = gen::generate(question, *llm, f.kb.index, *f.embedder, f.kb.catalog, rag_only);
  if (wrong.rounds_used != 1) return "without validation: rounds_used " + std::to_string(wrong.rounds_used);
  if (!wrong.query || wrong.query->find("rdfs:label") == std::string::npos) return "wrong query not returned";
  return "";
}

std::string eval_protocol() {
  const auto kb = st::load_fixture_kb("uniprot25.json");
  auto run = [&](const std::string& name, std::vector<ev::Approach> approaches, int runs) {
    sparqlgen::net::StubEndpointServer server(
        sparqlgen::net::parse_stub_fixture(json::parse(st::read_text(st::fixture("eval/stub" + name + ".json")))));
    server.start();
    auto llm = gen::MockLlm::from_file(st::fixture("eval/llm" + name + ".json"));
    ev::SuiteConfig cfg;
    cfg.approaches = std::move(approaches);
    cfg.runs = runs;
    cfg.prices = ev::load_prices(st::fixture("eval/prices.json"));
    cfg.endpoint_overrides[st::kUniprot] = server.url("/uniprot");
    return ev::run_suite(ev::load_cases(st::fixture("eval/cases" + name + ".json")), cfg, *llm, kb.kb.index,
                         *kb.embedder, kb.kb.catalog);
  };

  const auto first = run("13", {ev::Approach::RagValidation}, 3);
  if (first.outcomes.size() != 39) return "13x3 outcomes: " + std::to_string(first.outcomes.size());
  const auto row = first.summary().at(0);
  if (row.counts[0] + row.counts[1] + row.counts[2] + row.counts[3] != 39) return "category counts do not sum to 39";
  const auto second = run("13", {ev::Approach::RagValidation}, 3);
  if (first.to_json().dump(2) != second.to_json().dump(2)) return "consecutive reports differ";

  const auto four = run("4", {ev::Approach::RagValidation}, 1);
  const auto r4 = four.summary().at(0);
  for (std::size_t c = 0; c < 4; ++c)
    if (r4.counts[c] != 1) return "4-case fixture: category " + std::to_string(c) + " has " +
                                  std::to_string(r4.counts[c]);
  return "";
}

std::string service_integration() {
  st::TempDir dir;
  svc::ServiceConfig cfg;
  cfg.log_dir = dir.path() / "logs";
  cfg.generation.validate = false;
  svc::ChatService service(cfg, gen::MockLlm::from_file(st::fixture("llm/echo.json")));
  const int port = service.start();
  httplib::Client client("127.0.0.1", port);
  client.set_read_timeout(5, 0);

  auto health = client.Get("/health");
  if (!health || health->status != 503) return "/health before load is not 503";

  std::shared_ptr<svc::Snapshot> snapshot;
  std::thread loader([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
    auto kb = st::load_fixture_kb("uniprot25.json");
    snapshot = std::make_shared<svc::Snapshot>(svc::Snapshot{kb.kb.index, kb.kb.catalog, kb.embedder});
    service.install(snapshot);
  });
  int status = 503;
  for (int i = 0; i < 200 && status == 503; ++i) {
    auto r = client.Get("/health");
    status = r ? r->status : -1;
    if (status == 503) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  loader.join();
  if (status != 200) return "/health did not become 200, last " + std::to_string(status);

  const std::string question = "Which diseases are associated with the insulin gene?";
  const json request = {{"messages", {{{"role", "user"}, {"content", question}}}}};
  auto chat = client.Post("/chat", request.dump(), "application/json");
  if (!chat || chat->status != 200) return "/chat failed";
  const auto body = json::parse(chat->body);
  const auto expected = svc::references(gen::retrieve_context(question, snapshot->index, *snapshot->embedder));
  if (body["references"] != expected) return "references differ from the retrieved documents";
  const std::string prompt = body["answer"];
  for (const auto& ref : body["references"])
    if (prompt.find(ref["payload"].get<std::string>()) == std::string::npos)
      return "reference missing from prompt: " + ref["text"].get<std::string>();

  const json conversation = json::array({{{"role", "user"}, {"content", question}},
                                         {{"role", "assistant"}, {"content", prompt}}});
  auto fb = client.Post("/feedback", json{{"rating", "like"}, {"conversation", conversation}}.dump(),
                        "application/json");
  if (!fb || fb->status != 200) return "/feedback failed";
  const auto stored = json::parse(st::read_text(service.feedback_dir() / json::parse(fb->body)["stored"].get<std::string>()));
  if (stored["rating"] != "like" || stored["conversation"] != conversation) return "feedback file does not round-trip";
  service.stop();
  return "";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"shex-golden", 1.0, shex_golden},
      {"validator-message-golden", 1.0, validator_message},
      {"validator-oracle-equivalence", 30.0, validator_oracle},
      {"parser-round-trip-and-fuzz", 60.0, parser_round_trip},
      {"retrieval-exactness", 10.0, retrieval_exactness},
      {"context-cardinality", 5.0, context_cardinality},
      {"correction-loop", 5.0, correction_loop},
      {"eval-protocol", 60.0, eval_protocol},
      {"service-integration", 10.0, service_integration},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
      error = c.check();
    } catch (const std::exception& e) {
      error = std::string("exception: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (error.empty() && elapsed >= c.limit_s) error = "time limit exceeded";
    const bool ok = error.empty();
    failures += ok ? 0 : 1;
    std::printf("%s %s (%.3f s, limit %.0f s)%s%s\n", ok ? "PASS" : "FAIL", c.name.c_str(), elapsed, c.limit_s,
                ok ? "" : ": ", error.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
