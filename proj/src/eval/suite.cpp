#include "sparqlgen/eval/suite.hpp"

#include <chrono>
#include <cstdio>
#include <set>

#include <omp.h>

#include "sparqlgen/log.hpp"
#include "sparqlgen/net/sparql_client.hpp"
#include "sparqlgen/sparql/parser.hpp"

namespace sparqlgen::eval {
namespace {

constexpr std::array<Approach, 3> kApproaches{Approach::NoRag, Approach::Rag, Approach::RagValidation};
constexpr std::array<Category, 4> kCategories{Category::Success, Category::DifferentResult, Category::NoResult,
                                              Category::Error};

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

nlohmann::json json_file(const std::string& path) {
  try {
    return nlohmann::json::parse(net::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw ConfigError(e.what());
  }
}

gen::GenerationOptions options_for(Approach approach, const SuiteConfig& config) {
  gen::GenerationOptions o;
  o.retrieval = config.retrieval;
  o.model = config.model;
  o.max_fix_rounds = config.max_fix_rounds;
  o.use_retrieval = approach != Approach::NoRag;
  o.validate = approach == Approach::RagValidation;
  return o;
}

std::string resolve_endpoint(const std::string& endpoint, const SuiteConfig& config) {
  const auto it = config.endpoint_overrides.find(endpoint);
  return it == config.endpoint_overrides.end() ? endpoint : it->second;
}

}  // namespace

std::vector<EvalCase> parse_cases(const nlohmann::json& doc) {
  std::vector<EvalCase> cases;
  std::set<std::string> ids;
  try {
    for (const auto& c : doc.at("cases")) {
      EvalCase ec{c.at("id").get<std::string>(), c.at("question").get<std::string>(),
                  c.at("reference_query").get<std::string>(), c.at("endpoint").get<std::string>()};
      if (ec.question.empty()) throw ConfigError("case " + ec.id + " has an empty question");
      if (!ids.insert(ec.id).second) throw ConfigError("duplicate case id " + ec.id);
      try {
        sparql::parse(ec.reference_query);
      } catch (const sparql::SparqlError& e) {
        throw ConfigError("reference query of case " + ec.id + " does not parse: " + e.what());
      }
      cases.push_back(std::move(ec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid case file: ") + e.what());
  }
  return cases;
}

std::vector<EvalCase> load_cases(const std::string& path) { return parse_cases(json_file(path)); }

std::string_view to_string(Approach a) {
  switch (a) {
    case Approach::NoRag: return "No RAG";
    case Approach::Rag: return "RAG w/o validation";
    case Approach::RagValidation: return "RAG w/ validation";
  }
  return "";
}

std::string_view short_name(Approach a) {
  switch (a) {
    case Approach::NoRag: return "norag";
    case Approach::Rag: return "rag";
    case Approach::RagValidation: return "ragval";
  }
  return "";
}

Approach approach_from_string(std::string_view name) {
  for (auto a : kApproaches)
    if (name == to_string(a) || name == short_name(a)) return a;
  throw std::invalid_argument("unknown approach: " + std::string(name));
}

PriceTable parse_prices(const nlohmann::json& doc) {
  PriceTable table;
  try {
    for (const auto& [model, p] : doc.items()) {
      ModelPrice price{p.at("prompt").get<double>(), p.at("completion").get<double>()};
      if (price.prompt < 0 || price.completion < 0) throw ConfigError("negative price for " + model);
      table.emplace(model, price);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid price table: ") + e.what());
  }
  return table;
}

PriceTable load_prices(const std::string& path) { return parse_prices(json_file(path)); }

std::vector<SummaryRow> Report::summary() const {
  std::vector<SummaryRow> rows;
  for (const auto& o : outcomes) {
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const SummaryRow& r) { return r.model == o.model && r.approach == o.approach; });
    if (it == rows.end()) {
      rows.push_back(SummaryRow{o.model, o.approach, {}, 0, 0.0, 0.0, 0.0});
      it = rows.end() - 1;
    }
    ++it->counts[static_cast<std::size_t>(o.category)];
    ++it->runs;
    it->total_price += o.price;
    it->mean_f1 += o.f1;
  }
  for (auto& r : rows) {
    r.mean_price = r.runs ? r.total_price / static_cast<double>(r.runs) : 0.0;
    r.mean_f1 = r.runs ? r.mean_f1 / static_cast<double>(r.runs) : 0.0;
  }
  return rows;
}

nlohmann::json Report::to_json() const {
  auto runs = nlohmann::json::array();
  for (const auto& o : outcomes) {
    nlohmann::json j = {{"case_id", o.case_id},
                        {"model", o.model},
                        {"approach", short_name(o.approach)},
                        {"run", o.run},
                        {"category", to_string(o.category)},
                        {"generated_query", o.generated_query ? nlohmann::json(*o.generated_query) : nlohmann::json()},
                        {"endpoint", o.endpoint},
                        {"error", o.error},
                        {"rounds_used", o.rounds_used},
                        {"prompt_tokens", o.tokens.prompt},
                        {"completion_tokens", o.tokens.completion},
                        {"llm_calls", o.llm_calls},
                        {"price", o.price},
                        {"f1", o.f1}};
    if (o.latency_ms) j["latency_ms"] = *o.latency_ms;
    runs.push_back(std::move(j));
  }
  auto summary_json = nlohmann::json::array();
  for (const auto& r : summary()) {
    nlohmann::json counts;
    for (auto c : kCategories) counts[std::string(to_string(c))] = r.counts[static_cast<std::size_t>(c)];
    summary_json.push_back({{"model", r.model},
                            {"approach", short_name(r.approach)},
                            {"counts", counts},
                            {"runs", r.runs},
                            {"mean_price", r.mean_price},
                            {"total_price", r.total_price},
                            {"mean_f1", r.mean_f1}});
  }
  return {{"format", "sparqlgen-eval/1"}, {"summary", summary_json}, {"outcomes", runs}};
}

Report Report::from_json(const nlohmann::json& doc) {
  Report report;
  try {
    for (const auto& j : doc.at("outcomes")) {
      RunOutcome o;
      o.case_id = j.at("case_id").get<std::string>();
      o.model = j.at("model").get<std::string>();
      o.approach = approach_from_string(j.at("approach").get<std::string>());
      o.run = j.at("run").get<int>();
      o.category = category_from_string(j.at("category").get<std::string>());
      if (!j.at("generated_query").is_null()) o.generated_query = j.at("generated_query").get<std::string>();
      o.endpoint = j.at("endpoint").get<std::string>();
      o.error = j.at("error").get<std::string>();
      o.rounds_used = j.at("rounds_used").get<int>();
      o.tokens.prompt = j.at("prompt_tokens").get<std::uint64_t>();
      o.tokens.completion = j.at("completion_tokens").get<std::uint64_t>();
      o.llm_calls = j.at("llm_calls").get<std::size_t>();
      o.price = j.at("price").get<double>();
      o.f1 = j.at("f1").get<double>();
      if (j.contains("latency_ms")) o.latency_ms = j.at("latency_ms").get<double>();
      report.outcomes.push_back(std::move(o));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid report: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid report: ") + e.what());
  }
  return report;
}

std::string render_report(const Report& report) {
  std::string out =
      "| Model | Approach | Success | Different Result | No Result | Error | Price ($) | F1 |\n"
      "|---|---|---:|---:|---:|---:|---:|---:|\n";
  for (const auto& r : report.summary()) {
    out += "| " + r.model + " | " + std::string(to_string(r.approach));
    for (auto c : r.counts) out += " | " + std::to_string(c);
    out += " | " + format("%.4g", r.mean_price) + " | " + format("%.2f", r.mean_f1) + " |\n";
  }
  return out;
}

Report merge(std::vector<Report> reports) {
  Report out;
  for (auto& r : reports)
    for (auto& o : r.outcomes) out.outcomes.push_back(std::move(o));
  return out;
}

Report run_suite(const std::vector<EvalCase>& cases, const SuiteConfig& config, gen::LlmClient& llm,
                 const index::VectorIndex& index, index::Embedder& embedder, const schema::SchemaCatalog& catalog) {
  if (config.runs < 1) throw ConfigError("runs per case must be at least 1");
  const std::string model = config.model.empty() ? llm.default_model() : config.model;
  ModelPrice price;
  if (const auto it = config.prices.find(model); it != config.prices.end()) price = it->second;
  else if (!config.prices.empty()) log_warn("no price entry for model " + model + "; pricing it at 0");

  std::vector<NormalizedResult> references;
  for (const auto& c : cases) {
    try {
      references.push_back(normalize(execute_select(resolve_endpoint(c.endpoint, config), c.reference_query, config.http)));
    } catch (const ExecutionError& e) {
      throw ConfigError("reference query of case " + c.id + " failed: " + e.what());
    }
  }

  struct Task {
    std::size_t case_index;
    Approach approach;
    int run;
  };
  std::vector<Task> tasks;
  for (auto a : config.approaches)
    for (std::size_t i = 0; i < cases.size(); ++i)
      for (int r = 1; r <= config.runs; ++r) tasks.push_back({i, a, r});

  std::vector<RunOutcome> outcomes(tasks.size());
  const int threads = std::max(1, config.parallelism);
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    const auto& task = tasks[t];
    const auto& c = cases[task.case_index];
    RunOutcome& o = outcomes[t];
    o.case_id = c.id;
    o.model = model;
    o.approach = task.approach;
    o.run = task.run;
    o.endpoint = c.endpoint;
    const auto start = std::chrono::steady_clock::now();
    std::optional<NormalizedResult> generated;
    try {
      const auto result = gen::generate(c.question, llm, index, embedder, catalog, options_for(task.approach, config));
      o.rounds_used = result.rounds_used;
      o.tokens = result.total_usage();
      o.llm_calls = result.usage.size();
      o.generated_query = result.query;
      if (!result.endpoint.empty()) o.endpoint = result.endpoint;
      if (!result.query) {
        o.error = "no SPARQL query in the answer";
      } else {
        const auto url = resolve_endpoint(o.endpoint, config);
        try {
          sparql::parse(*result.query);
          generated = normalize(execute_select(url, *result.query, config.http));
        } catch (const std::exception& e) {
          // Name the endpoint IRI, not the override URL.
          o.error = e.what();
          for (auto pos = o.error.find(url); url != o.endpoint && pos != std::string::npos;
               pos = o.error.find(url, pos + o.endpoint.size()))
            o.error.replace(pos, url.size(), o.endpoint);
        }
      }
    } catch (const std::exception& e) {
      o.error = e.what();
    }
    o.category = categorize(generated, references[task.case_index]);
    o.f1 = generated ? f1_score(*generated, references[task.case_index]) : 0.0;
    o.price = static_cast<double>(o.tokens.prompt) * price.prompt +
              static_cast<double>(o.tokens.completion) * price.completion;
    if (config.record_latency)
      o.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  }
  return Report{std::move(outcomes)};
}

}  // namespace sparqlgen::eval
