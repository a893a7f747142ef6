#include "sparqlgen/service/service.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <thread>

#include <httplib.h>

#include "sparqlgen/log.hpp"
#include "sparqlgen/net/url.hpp"
#include "sparqlgen/schema/void.hpp"

namespace sparqlgen::service {
namespace {

Reply error(int status, const std::string& message) { return Reply{status, {{"error", message}}}; }

nlohmann::json reference(std::string_view kind, const std::string& text, const std::string& payload,
                         const std::string& endpoint, float score) {
  return {{"kind", kind}, {"text", text}, {"payload", payload}, {"endpoint", endpoint}, {"score", score}};
}

std::string file_stamp(const std::string& iso) {
  std::string out;
  for (char c : iso)
    if (c != '-' && c != ':') out.push_back(c);
  return out;
}

}  // namespace

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[40];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

nlohmann::json references(const gen::PromptContext& context) {
  auto out = nlohmann::json::array();
  if (context.endpoint_info) {
    const auto& e = *context.endpoint_info;
    out.push_back(reference("endpoint_info", e.endpoint, e.text, e.endpoint, e.score));
  }
  for (const auto& e : context.examples) out.push_back(reference("example_query", e.question, e.query, e.endpoint, e.score));
  for (const auto& s : context.shapes) out.push_back(reference("class_shape", s.label, s.shex, s.endpoint, s.score));
  return out;
}

nlohmann::json chat_response(const gen::GenerationResult& result) {
  const auto usage = result.total_usage();
  return {{"answer", result.answer_text},
          {"query", result.query ? nlohmann::json(*result.query) : nlohmann::json(nullptr)},
          {"endpoint", result.endpoint},
          {"references", references(result.context)},
          {"validation", {{"issues", result.issues_per_round}, {"rounds_used", result.rounds_used}}},
          {"usage",
           {{"prompt_tokens", usage.prompt}, {"completion_tokens", usage.completion}, {"calls", result.usage.size()}}}};
}

struct ChatService::Server {
  httplib::Server http;
  std::thread thread;
  int port = 0;
};

ChatService::ChatService(ServiceConfig config, std::shared_ptr<gen::LlmClient> llm)
    : config_(std::move(config)), llm_(std::move(llm)), question_log_(config_.log_dir / "questions.jsonl") {}

ChatService::~ChatService() { stop(); }

void ChatService::install(std::shared_ptr<const Snapshot> snapshot) {
  std::lock_guard lock(snapshot_mutex_);
  snapshot_ = std::move(snapshot);
}

std::shared_ptr<const Snapshot> ChatService::snapshot() const {
  std::lock_guard lock(snapshot_mutex_);
  return snapshot_;
}

void ChatService::log_question(const std::string& question) {
  const std::string line = nlohmann::json{{"timestamp", utc_timestamp()}, {"question", question}}.dump() + "\n";
  std::lock_guard lock(question_mutex_);
  std::filesystem::create_directories(question_log_.parent_path());
  std::ofstream out(question_log_, std::ios::app | std::ios::binary);
  out.write(line.data(), static_cast<std::streamsize>(line.size()));
  out.flush();
  if (!out) log_error("cannot append to " + question_log_.string());
}

Reply ChatService::handle_chat(const std::string& body) {
  nlohmann::json request;
  std::vector<gen::ChatMessage> messages;
  gen::GenerationOptions options = config_.generation;
  try {
    request = nlohmann::json::parse(body);
    if (!request.is_object()) return error(400, "request body must be a JSON object");
    if (!request.contains("messages")) return error(400, "missing \"messages\"");
    messages = gen::messages_from_json(request.at("messages"));
    if (request.contains("model") && !request.at("model").is_null())
      options.model = request.at("model").get<std::string>();
    if (request.contains("validate")) options.validate = request.at("validate").get<bool>();
  } catch (const std::exception& e) {
    return error(400, e.what());
  }
  if (messages.empty()) return error(400, "\"messages\" is empty");
  if (messages.back().role != "user" || messages.back().content.empty())
    return error(400, "the last message must be a non-empty user message");

  const std::string question = messages.back().content;
  log_question(question);

  const auto snap = snapshot();
  if (!snap) return error(503, "index not loaded yet");

  // Earlier turns are forwarded verbatim; client-side system messages are dropped.
  for (std::size_t i = 0; i + 1 < messages.size(); ++i)
    if (messages[i].role != "system") options.history.push_back(messages[i]);
  try {
    const auto result = gen::generate(question, *llm_, snap->index, *snap->embedder, snap->catalog, options);
    return Reply{200, chat_response(result)};
  } catch (const gen::LlmError& e) {
    return error(502, e.what());
  } catch (const index::RemoteEmbedderError& e) {
    return error(502, e.what());
  } catch (const std::exception& e) {
    log_error(std::string("chat request failed: ") + e.what());
    return error(500, e.what());
  }
}

Reply ChatService::handle_feedback(const std::string& body) {
  nlohmann::json record;
  try {
    const auto request = nlohmann::json::parse(body);
    if (!request.is_object()) return error(400, "request body must be a JSON object");
    const auto rating = request.value("rating", std::string());
    if (rating != "like" && rating != "dislike") return error(400, "rating must be \"like\" or \"dislike\"");
    if (!request.contains("conversation") || !request.at("conversation").is_array())
      return error(400, "\"conversation\" must be an array");
    record = {{"timestamp", utc_timestamp()}, {"rating", rating}, {"conversation", request.at("conversation")}};
  } catch (const std::exception& e) {
    return error(400, e.what());
  }

  const auto dir = feedback_dir();
  const std::string base = file_stamp(record.at("timestamp").get<std::string>()) + "-" +
                           record.at("rating").get<std::string>();
  std::lock_guard lock(feedback_mutex_);
  try {
    std::filesystem::create_directories(dir);
    std::string name = base + ".json";
    for (int n = 2; std::filesystem::exists(dir / name); ++n) name = base + "-" + std::to_string(n) + ".json";
    const auto tmp = dir / ("." + name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << record.dump(2) << "\n";
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, dir / name);
    return Reply{200, {{"stored", name}}};
  } catch (const std::exception& e) {
    log_error(std::string("cannot store feedback: ") + e.what());
    return error(500, "cannot store feedback");
  }
}

Reply ChatService::handle_health() const {
  const auto snap = snapshot();
  if (!snap) return Reply{503, {{"status", "loading"}}};
  return Reply{200,
               {{"status", "ok"},
                {"index_docs", snap->index.size()},
                {"catalog_classes", snap->catalog.class_count()},
                {"examples", snap->index.count(index::DocKind::ExampleQuery)},
                {"shapes", snap->index.count(index::DocKind::ClassShape)}}};
}

Reply ChatService::handle_check(const std::string& endpoint) const {
  if (!net::is_http_url(endpoint)) return error(400, "endpoint must be an http(s) URL");
  return Reply{200, schema::check_endpoint_metadata(endpoint).to_json()};
}

namespace {

void send(httplib::Response& res, const Reply& reply) {
  res.status = reply.status;
  res.set_content(reply.body.dump(), "application/json");
}

void add_routes(httplib::Server& http, ChatService& svc) {
  http.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                            {"Access-Control-Allow-Headers", "Content-Type"},
                            {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  http.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  http.Post("/chat", [&svc](const httplib::Request& req, httplib::Response& res) { send(res, svc.handle_chat(req.body)); });
  http.Post("/feedback",
            [&svc](const httplib::Request& req, httplib::Response& res) { send(res, svc.handle_feedback(req.body)); });
  http.Get("/health", [&svc](const httplib::Request&, httplib::Response& res) { send(res, svc.handle_health()); });
  http.Get("/check", [&svc](const httplib::Request& req, httplib::Response& res) {
    send(res, svc.handle_check(req.get_param_value("endpoint")));
  });
}

}  // namespace

int ChatService::start(int port) {
  stop();
  server_ = std::make_unique<Server>();
  auto& http = server_->http;
  add_routes(http, *this);
  if (port == 0) {
    server_->port = http.bind_to_any_port("127.0.0.1");
  } else {
    if (!http.bind_to_port("127.0.0.1", port)) throw std::runtime_error("cannot bind port " + std::to_string(port));
    server_->port = port;
  }
  if (server_->port < 0) throw std::runtime_error("cannot bind a local port");
  server_->thread = std::thread([this] { server_->http.listen_after_bind(); });
  server_->http.wait_until_ready();
  return server_->port;
}

void ChatService::listen(const std::string& host, int port) {
  stop();
  server_ = std::make_unique<Server>();
  server_->port = port;
  auto& http = server_->http;
  add_routes(http, *this);
  log_info("serving on http://" + host + ":" + std::to_string(port));
  if (!http.listen(host, port)) throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
}

void ChatService::stop() {
  if (!server_) return;
  server_->http.stop();
  if (server_->thread.joinable()) server_->thread.join();
  server_.reset();
}

std::string ChatService::url(const std::string& path) const {
  return "http://127.0.0.1:" + std::to_string(server_ ? server_->port : 0) + path;
}

}  // namespace sparqlgen::service
