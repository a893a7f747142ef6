// Command-line front end: building the knowledge base, asking questions,
// validating queries, serving the chat API and running evaluations.

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparqlgen/eval/suite.hpp"
#include "sparqlgen/gen/generator.hpp"
#include "sparqlgen/index/harvest.hpp"
#include "sparqlgen/log.hpp"
#include "sparqlgen/net/sparql_client.hpp"
#include "sparqlgen/net/stub_endpoint.hpp"
#include "sparqlgen/schema/void.hpp"
#include "sparqlgen/service/service.hpp"
#include "sparqlgen/sparql/parser.hpp"
#include "sparqlgen/sparql/prefixes.hpp"
#include "sparqlgen/sparql/serialize.hpp"
#include "sparqlgen/validate/validator.hpp"

namespace {

using namespace sparqlgen;

std::string env_or(const char* name, const std::string& fallback = {}) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

std::string api_key() { return env_or("SPARQLGEN_API_KEY", env_or("OPENAI_API_KEY")); }

struct LlmOptions {
  std::string mock_file;
  std::string url = env_or("SPARQLGEN_LLM_URL");
  std::string model = env_or("SPARQLGEN_MODEL");

  void add(CLI::App* app) {
    app->add_option("--mock-llm", mock_file, "Scripted mock LLM (JSON) instead of a live model");
    app->add_option("--llm-url", url, "Base URL of an OpenAI-compatible API (env SPARQLGEN_LLM_URL)");
    app->add_option("--model", model, "Model name (env SPARQLGEN_MODEL)");
  }

  std::shared_ptr<gen::LlmClient> make() const {
    if (!mock_file.empty()) return gen::MockLlm::from_file(mock_file);
    if (url.empty()) throw CLI::ValidationError("--llm-url", "an LLM URL or --mock-llm is required");
    if (model.empty()) throw CLI::ValidationError("--model", "a model name is required");
    return std::make_shared<gen::OpenAiChatClient>(url, model, api_key());
  }
};

struct KbFiles {
  std::string index_path;
  std::string catalog_path;
  std::string embed_url = env_or("SPARQLGEN_EMBED_URL");

  void add(CLI::App* app) {
    app->add_option("--index", index_path, "Index file written by `index`")->required()->check(CLI::ExistingFile);
    app->add_option("--catalog", catalog_path, "Catalog file written by `index`")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--embed-url", embed_url, "Embedding API base URL for remote indexes (env SPARQLGEN_EMBED_URL)");
  }

  std::shared_ptr<service::Snapshot> load() const {
    auto snap = std::make_shared<service::Snapshot>();
    snap->index = index::VectorIndex::load(index_path);
    snap->catalog = schema::SchemaCatalog::load(catalog_path);
    snap->embedder = index::embedder_for_fingerprint(snap->index.fingerprint(), embed_url, api_key());
    return snap;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

int cmd_parse(const std::string& file, bool expand) {
  auto q = sparql::parse(net::read_file(file));
  if (expand) q = sparql::expand_prefixes(std::move(q));
  std::cout << sparql::serialize(q);
  return 0;
}

int cmd_validate(const std::string& file, const std::string& endpoint, const std::string& catalog_path, bool json) {
  const auto catalog = schema::SchemaCatalog::load(catalog_path);
  const auto text = net::read_file(file);
  const auto issues = validate::validate(sparql::parse(text), endpoint, catalog);
  if (json) {
    auto out = nlohmann::json::array();
    for (const auto& i : issues) out.push_back(validate::to_json(i));
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto& i : issues) std::cout << i.message << "\n";
  }
  return issues.empty() ? 0 : 1;
}

int cmd_shex(const std::string& catalog_path, const std::string& endpoint, const std::string& cls) {
  const auto catalog = schema::SchemaCatalog::load(catalog_path);
  bool first = true;
  for (const auto& [ep, classes] : catalog.endpoints()) {
    if (!endpoint.empty() && ep != endpoint) continue;
    for (const auto& [iri, shape] : classes) {
      if (!cls.empty() && iri != cls && catalog.compact(iri) != cls) continue;
      if (!first) std::cout << "\n";
      first = false;
      std::cout << "# " << ep << "\n" << schema::render_shex(shape, catalog.prefixes()) << "\n";
    }
  }
  return 0;
}

struct IndexArgs {
  std::string config;
  std::string index_out = "index.bin";
  std::string catalog_out = "catalog.json";
  std::string embedder = "hash";
  std::size_t dim = 1024;
  std::string embed_url = env_or("SPARQLGEN_EMBED_URL");
  std::string embed_model = env_or("SPARQLGEN_EMBED_MODEL");
};

int cmd_index(const IndexArgs& a) {
  const auto cfg = index::load_kb_config(a.config);
  std::unique_ptr<index::Embedder> embedder;
  if (a.embedder == "hash") {
    embedder = std::make_unique<index::HashEmbedder>(a.dim);
  } else {
    if (a.embed_url.empty() || a.embed_model.empty())
      throw CLI::ValidationError("--embedder", "remote embedding needs --embed-url and --embed-model");
    embedder = std::make_unique<index::RemoteEmbedder>(a.embed_url, a.embed_model, a.dim, api_key());
  }
  const auto kb = index::build_knowledge_base(cfg, *embedder);
  kb.index.save(a.index_out);
  kb.catalog.save(a.catalog_out);
  std::cerr << "indexed " << kb.index.count(index::DocKind::ExampleQuery) << " examples, "
            << kb.index.count(index::DocKind::ClassShape) << " class shapes, "
            << kb.index.count(index::DocKind::EndpointInfo) << " endpoint descriptions ("
            << kb.skipped_examples << " examples skipped)\n";
  return 0;
}

struct AskArgs {
  std::string question;
  bool no_validate = false;
  bool no_rag = false;
  int max_fix_rounds = 2;
  std::size_t k_questions = 20;
  std::size_t k_classes = 15;
  bool json = false;
};

int cmd_ask(const AskArgs& a, const KbFiles& kb, const LlmOptions& llm_opts) {
  const auto snap = kb.load();
  auto llm = llm_opts.make();
  gen::GenerationOptions o;
  o.use_retrieval = !a.no_rag;
  o.validate = !a.no_validate && !a.no_rag;
  o.max_fix_rounds = a.max_fix_rounds;
  o.retrieval.k_questions = a.k_questions;
  o.retrieval.k_classes = a.k_classes;
  o.model = llm_opts.model;
  const auto result = gen::generate(a.question, *llm, snap->index, *snap->embedder, snap->catalog, o);
  if (a.json) {
    std::cout << service::chat_response(result).dump(2) << "\n";
    return 0;
  }
  std::cout << result.answer_text << "\n";
  for (std::size_t r = 0; r < result.issues_per_round.size(); ++r)
    for (const auto& m : result.issues_per_round[r]) std::cerr << "round " << r + 1 << ": " << m << "\n";
  return result.query ? 0 : 1;
}

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8000;
  std::string log_dir = "logs";
};

service::ChatService* g_service = nullptr;

int cmd_serve(const ServeArgs& a, const KbFiles& kb, const LlmOptions& llm_opts) {
  service::ServiceConfig cfg;
  cfg.log_dir = a.log_dir;
  cfg.generation.model = llm_opts.model;
  service::ChatService svc(cfg, llm_opts.make());
  g_service = &svc;
  std::signal(SIGINT, [](int) {
    if (g_service != nullptr) g_service->stop();
  });
  // /health answers 503 until the snapshot is installed.
  std::thread loader([&] {
    try {
      svc.install(kb.load());
      log_info("index and catalog loaded");
    } catch (const std::exception& e) {
      log_error(std::string("cannot load knowledge base: ") + e.what());
      svc.stop();
    }
  });
  svc.listen(a.host, a.port);
  loader.join();
  g_service = nullptr;
  return 0;
}

struct EvalArgs {
  std::string cases;
  std::string approaches = "norag,rag,ragval";
  int runs = 3;
  std::string prices;
  std::string out = "report.json";
  std::string markdown;
  std::vector<std::string> overrides;
  int parallel = 1;
  bool latency = false;
  int max_fix_rounds = 2;
};

int cmd_eval(const EvalArgs& a, const KbFiles& kb, const LlmOptions& llm_opts) {
  eval::SuiteConfig cfg;
  cfg.approaches.clear();
  std::stringstream list(a.approaches);
  for (std::string name; std::getline(list, name, ',');)
    if (!name.empty()) cfg.approaches.push_back(eval::approach_from_string(name));
  cfg.runs = a.runs;
  cfg.model = llm_opts.model;
  if (!a.prices.empty()) cfg.prices = eval::load_prices(a.prices);
  for (const auto& o : a.overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--endpoint-url", "expected IRI=URL, got " + o);
    cfg.endpoint_overrides[o.substr(0, eq)] = o.substr(eq + 1);
  }
  cfg.parallelism = a.parallel;
  cfg.record_latency = a.latency;
  cfg.max_fix_rounds = a.max_fix_rounds;

  const auto snap = kb.load();
  auto llm = llm_opts.make();
  const auto report = eval::run_suite(eval::load_cases(a.cases), cfg, *llm, snap->index, *snap->embedder,
                                      snap->catalog);
  write_text(a.out, report.to_json().dump(2) + "\n");
  const auto table = eval::render_report(report);
  if (!a.markdown.empty()) write_text(a.markdown, table);
  std::cout << table;
  return 0;
}

int cmd_eval_report(const std::string& report_path, const std::string& feedback_dir, const std::string& questions) {
  if (!report_path.empty()) {
    const auto report = eval::Report::from_json(nlohmann::json::parse(net::read_file(report_path)));
    std::cout << eval::render_report(report);
  }
  if (!feedback_dir.empty()) {
    std::size_t like = 0, dislike = 0;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(feedback_dir))
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    std::cout << "\n| Feedback file | Rating | Question |\n|---|---|---|\n";
    for (const auto& f : files) {
      const auto rec = nlohmann::json::parse(net::read_file(f.string()));
      const auto rating = rec.value("rating", std::string());
      (rating == "like" ? like : dislike) += 1;
      std::string question;
      for (const auto& m : rec.value("conversation", nlohmann::json::array()))
        if (m.is_object() && m.value("role", "") == "user") question = m.value("content", "");
      std::cout << "| " << f.filename().string() << " | " << rating << " | " << question << " |\n";
    }
    std::cout << "\nlikes: " << like << ", dislikes: " << dislike << "\n";
  }
  if (!questions.empty()) {
    std::ifstream in(questions);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) n += line.empty() ? 0 : 1;
    std::cout << "questions logged: " << n << "\n";
  }
  return 0;
}

int cmd_check(const std::string& endpoint) {
  std::cout << schema::check_endpoint_metadata(endpoint).to_json().dump(2) << "\n";
  return 0;
}

int cmd_stub(const std::string& fixture, const std::string& host, int port) {
  net::StubEndpointServer server(net::parse_stub_fixture(nlohmann::json::parse(net::read_file(fixture))));
  server.listen(host, port);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Natural-language questions to validated SPARQL over configured endpoints"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  std::string query_file, endpoint, catalog_path, cls;
  bool expand = false, json = false;
  auto* parse = app.add_subcommand("parse", "Parse a query and print its canonical form");
  parse->add_option("--query", query_file, "SPARQL file")->required()->check(CLI::ExistingFile);
  parse->add_flag("--expand", expand, "Expand prefixed names");

  auto* validate = app.add_subcommand("validate", "Check a query against the schema catalog");
  validate->add_option("--query", query_file, "SPARQL file")->required()->check(CLI::ExistingFile);
  validate->add_option("--endpoint", endpoint, "Endpoint for triples outside SERVICE")->required();
  validate->add_option("--catalog", catalog_path, "Catalog file")->required()->check(CLI::ExistingFile);
  validate->add_flag("--json", json, "One JSON object per issue");

  auto* shex = app.add_subcommand("shex", "Print class shapes from a catalog");
  shex->add_option("--catalog", catalog_path, "Catalog file")->required()->check(CLI::ExistingFile);
  shex->add_option("--endpoint", endpoint, "Only this endpoint");
  shex->add_option("--class", cls, "Only this class (IRI or prefixed name)");

  IndexArgs index_args;
  auto* index = app.add_subcommand("index", "Harvest endpoints and build the index and catalog");
  index->add_option("--config", index_args.config, "Knowledge base config (JSON)")->required()->check(
      CLI::ExistingFile);
  index->add_option("--index-out", index_args.index_out, "Index output file");
  index->add_option("--catalog-out", index_args.catalog_out, "Catalog output file");
  index->add_option("--embedder", index_args.embedder, "hash or remote")->check(CLI::IsMember({"hash", "remote"}));
  index->add_option("--dim", index_args.dim, "Embedding dimension")->check(CLI::PositiveNumber);
  index->add_option("--embed-url", index_args.embed_url, "Embedding API base URL");
  index->add_option("--embed-model", index_args.embed_model, "Embedding model name");

  AskArgs ask_args;
  KbFiles kb_files;
  LlmOptions llm_opts;
  auto* ask = app.add_subcommand("ask", "Generate a query for one question");
  ask->add_option("--question,-q", ask_args.question, "Question")->required();
  kb_files.add(ask);
  llm_opts.add(ask);
  ask->add_flag("--no-validate", ask_args.no_validate, "Skip validation and correction");
  ask->add_flag("--no-rag", ask_args.no_rag, "Prompt with the bare question");
  ask->add_option("--max-fix-rounds", ask_args.max_fix_rounds, "Correction rounds")->check(CLI::NonNegativeNumber);
  ask->add_option("--k-questions", ask_args.k_questions, "Example queries in the prompt")->check(CLI::PositiveNumber);
  ask->add_option("--k-classes", ask_args.k_classes, "Class shapes in the prompt")->check(CLI::PositiveNumber);
  ask->add_flag("--json", ask_args.json, "Print the /chat response body");

  ServeArgs serve_args;
  auto* serve = app.add_subcommand("serve", "Serve the chat API");
  kb_files.add(serve);
  llm_opts.add(serve);
  serve->add_option("--host", serve_args.host, "Bind address");
  serve->add_option("--port", serve_args.port, "Port");
  serve->add_option("--log-dir", serve_args.log_dir, "Directory for questions.jsonl and feedback/");

  EvalArgs eval_args;
  auto* evalc = app.add_subcommand("eval", "Run the evaluation suite");
  evalc->add_option("--cases", eval_args.cases, "Case file (JSON)")->check(CLI::ExistingFile);
  evalc->add_option("--approaches", eval_args.approaches, "Comma-separated: norag,rag,ragval");
  evalc->add_option("--runs", eval_args.runs, "Runs per case")->check(CLI::PositiveNumber);
  evalc->add_option("--prices", eval_args.prices, "Price table (JSON)")->check(CLI::ExistingFile);
  evalc->add_option("--out", eval_args.out, "Report JSON output");
  evalc->add_option("--markdown", eval_args.markdown, "Also write the markdown table here");
  evalc->add_option("--endpoint-url", eval_args.overrides, "IRI=URL: query URL instead of endpoint IRI");
  evalc->add_option("--parallel", eval_args.parallel, "Concurrent runs")->check(CLI::PositiveNumber);
  evalc->add_flag("--latency", eval_args.latency, "Record per-run latency");
  evalc->add_option("--max-fix-rounds", eval_args.max_fix_rounds, "Correction rounds")
      ->check(CLI::NonNegativeNumber);
  KbFiles eval_kb;
  LlmOptions eval_llm;
  evalc->add_option("--index", eval_kb.index_path, "Index file")->check(CLI::ExistingFile);
  evalc->add_option("--catalog", eval_kb.catalog_path, "Catalog file")->check(CLI::ExistingFile);
  evalc->add_option("--embed-url", eval_kb.embed_url, "Embedding API base URL");
  eval_llm.add(evalc);

  std::string report_path, feedback_dir, questions_path;
  auto* report = evalc->add_subcommand("report", "Render a saved report and collected feedback");
  report->add_option("--report", report_path, "Report JSON")->check(CLI::ExistingFile);
  report->add_option("--feedback", feedback_dir, "Feedback directory")->check(CLI::ExistingDirectory);
  report->add_option("--questions", questions_path, "Question log")->check(CLI::ExistingFile);

  auto* check = app.add_subcommand("check", "Probe an endpoint for examples, VoID and homepage metadata");
  check->add_option("--endpoint", endpoint, "Endpoint URL")->required();

  std::string fixture, host = "127.0.0.1";
  int port = 8890;
  auto* stub = app.add_subcommand("stub-endpoint", "Serve canned SPARQL results from a fixture");
  stub->add_option("--fixture", fixture, "Stub fixture (JSON)")->required()->check(CLI::ExistingFile);
  stub->add_option("--host", host, "Bind address");
  stub->add_option("--port", port, "Port");

  CLI11_PARSE(app, argc, argv);
  set_log_level(verbose ? LogLevel::Debug : LogLevel::Info);

  try {
    if (*parse) return cmd_parse(query_file, expand);
    if (*validate) return cmd_validate(query_file, endpoint, catalog_path, json);
    if (*shex) return cmd_shex(catalog_path, endpoint, cls);
    if (*index) return cmd_index(index_args);
    if (*ask) return cmd_ask(ask_args, kb_files, llm_opts);
    if (*serve) return cmd_serve(serve_args, kb_files, llm_opts);
    if (*report) return cmd_eval_report(report_path, feedback_dir, questions_path);
    if (*evalc) {
      if (eval_args.cases.empty() || eval_kb.index_path.empty() || eval_kb.catalog_path.empty())
        throw CLI::ValidationError("eval", "--cases, --index and --catalog are required");
      return cmd_eval(eval_args, eval_kb, eval_llm);
    }
    if (*check) return cmd_check(endpoint);
    if (*stub) return cmd_stub(fixture, host, port);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const sparql::SyntaxError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
