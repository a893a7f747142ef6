#pragma once

#include <filesystem>
#include <memory>
#include <mutex>
#include <string>

#include <json.hpp>

#include "sparqlgen/gen/generator.hpp"
#include "sparqlgen/index/embedder.hpp"
#include "sparqlgen/index/vector_index.hpp"
#include "sparqlgen/schema/catalog.hpp"

namespace sparqlgen::service {

// Everything /chat reads. Installed as a whole so requests never see a
// half-loaded index.
struct Snapshot {
  index::VectorIndex index;
  schema::SchemaCatalog catalog;
  std::shared_ptr<index::Embedder> embedder;
};

struct ServiceConfig {
  std::filesystem::path log_dir = "logs";
  gen::GenerationOptions generation;
};

struct Reply {
  int status = 200;
  nlohmann::json body;
};

// Response body of /chat for a generation result.
nlohmann::json chat_response(const gen::GenerationResult& result);
// References in prompt order: endpoint info, examples, shapes.
nlohmann::json references(const gen::PromptContext& context);

// UTC ISO-8601 with milliseconds, e.g. 2024-05-01T12:00:00.123Z.
std::string utc_timestamp();

// The HTTP facade. Handlers are usable without a socket for tests; start()
// or listen() serve them with cpp-httplib. Routes: POST /chat, POST
// /feedback, GET /health, GET /check?endpoint=IRI (see docs/api.md).
class ChatService {
 public:
  ChatService(ServiceConfig config, std::shared_ptr<gen::LlmClient> llm);
  ~ChatService();
  ChatService(const ChatService&) = delete;
  ChatService& operator=(const ChatService&) = delete;

  void install(std::shared_ptr<const Snapshot> snapshot);
  std::shared_ptr<const Snapshot> snapshot() const;

  Reply handle_chat(const std::string& body);
  Reply handle_feedback(const std::string& body);
  Reply handle_health() const;
  Reply handle_check(const std::string& endpoint) const;

  // Binds 127.0.0.1 (any free port when 0) and serves on a background
  // thread. Returns the port.
  int start(int port = 0);
  // Serves on the calling thread until stop().
  void listen(const std::string& host, int port);
  void stop();
  std::string url(const std::string& path = "") const;

  const std::filesystem::path& question_log() const { return question_log_; }
  std::filesystem::path feedback_dir() const { return config_.log_dir / "feedback"; }

 private:
  void log_question(const std::string& question);
  struct Server;

  ServiceConfig config_;
  std::shared_ptr<gen::LlmClient> llm_;
  mutable std::mutex snapshot_mutex_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::mutex question_mutex_;
  std::mutex feedback_mutex_;
  std::filesystem::path question_log_;
  std::unique_ptr<Server> server_;
};

}  // namespace sparqlgen::service
