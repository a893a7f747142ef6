#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparqlgen/net/http.hpp"

namespace sparqlgen::gen {

struct ChatMessage {
  std::string role;  // "system", "user" or "assistant"
  std::string content;
  bool operator==(const ChatMessage&) const = default;
};

nlohmann::json to_json(const std::vector<ChatMessage>& messages);
// Throws std::invalid_argument on a malformed message list.
std::vector<ChatMessage> messages_from_json(const nlohmann::json& doc);

struct TokenUsage {
  std::uint64_t prompt = 0;
  std::uint64_t completion = 0;
  TokenUsage& operator+=(const TokenUsage& o) {
    prompt += o.prompt;
    completion += o.completion;
    return *this;
  }
  bool operator==(const TokenUsage&) const = default;
};

struct Completion {
  std::string content;
  TokenUsage usage;
  int retries = 0;
};

class LlmError : public std::runtime_error {
 public:
  LlmError(int status, const std::string& detail)
      : std::runtime_error(status > 0 ? "LLM request failed (HTTP " + std::to_string(status) + "): " + detail
                                      : "LLM request failed: " + detail),
        status_(status) {}
  int status() const { return status_; }  // 0 for transport failures

 private:
  int status_;
};

class MalformedResponse : public LlmError {
 public:
  explicit MalformedResponse(const std::string& detail) : LlmError(200, "malformed response: " + detail) {}
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  // Thread-safe.
  virtual Completion complete(const std::vector<ChatMessage>& messages, const std::string& model) = 0;
  virtual std::string default_model() const = 0;
};

// OpenAI-compatible chat completions: POST {base}/chat/completions with
// {"model", "messages"}; reads choices[0].message.content and
// usage.{prompt_tokens, completion_tokens}. A 429, 5xx or transport failure
// is retried once after `backoff` (doubling per further retry).
class OpenAiChatClient final : public LlmClient {
 public:
  using Sleeper = std::function<void(std::chrono::milliseconds)>;

  OpenAiChatClient(std::string base_url, std::string model, std::string api_key = {}, net::HttpOptions options = {});

  Completion complete(const std::vector<ChatMessage>& messages, const std::string& model) override;
  std::string default_model() const override { return model_; }

  void set_retry_policy(int max_retries, std::chrono::milliseconds backoff);
  void set_sleeper(Sleeper sleeper) { sleeper_ = std::move(sleeper); }

 private:
  std::string base_url_;
  std::string model_;
  std::string api_key_;
  net::HttpOptions options_;
  int max_retries_ = 1;
  std::chrono::milliseconds backoff_{1000};
  Sleeper sleeper_;
};

// Scripted client for tests and offline runs. Script format:
//
//   {"model": "mock",
//    "responses": [R0, R1, ...],
//    "rules": [{"when_contains": "text", "responses": [...]}, ...]}
//
// The first rule whose text occurs in any user message selects its response
// list, otherwise the top-level list is used. When the conversation already
// holds n assistant messages, response n is returned (the last one once the
// list is exhausted), so each fix round gets the next response and
// independent conversations are reproducible. A response is a string or an
// object {"content", "prompt_tokens", "completion_tokens"},
// {"echo": true} (returns the whole prompt) or {"error": status, "message"}.
// Missing token counts are whitespace-separated word counts.
class MockLlm final : public LlmClient {
 public:
  explicit MockLlm(const nlohmann::json& script);
  static std::shared_ptr<MockLlm> from_file(const std::string& path);

  Completion complete(const std::vector<ChatMessage>& messages, const std::string& model) override;
  std::string default_model() const override { return model_; }

  // Number of complete() calls so far.
  std::size_t calls() const;

 private:
  struct Rule {
    std::string needle;
    std::vector<nlohmann::json> responses;
  };
  std::string model_;
  std::vector<nlohmann::json> responses_;
  std::vector<Rule> rules_;
  mutable std::mutex mutex_;
  std::size_t calls_ = 0;
};

// The completion of `messages` using `model` (client default when empty).
Completion chat_completion(LlmClient& client, const std::vector<ChatMessage>& messages, const std::string& model = {});

std::uint64_t count_words(const std::string& text);

}  // namespace sparqlgen::gen
