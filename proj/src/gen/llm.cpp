#include "sparqlgen/gen/llm.hpp"

#include <sstream>
#include <thread>

#include "sparqlgen/log.hpp"
#include "sparqlgen/net/sparql_client.hpp"

namespace sparqlgen::gen {
namespace {

bool retryable(int status) { return status == 429 || status >= 500; }

std::string excerpt(const std::string& body) {
  constexpr std::size_t kMax = 300;
  return body.size() <= kMax ? body : body.substr(0, kMax) + "...";
}

std::string transcript(const std::vector<ChatMessage>& messages) {
  std::string out;
  for (const auto& m : messages) out += "[" + m.role + "]\n" + m.content + "\n";
  return out;
}

}  // namespace

nlohmann::json to_json(const std::vector<ChatMessage>& messages) {
  auto out = nlohmann::json::array();
  for (const auto& m : messages) out.push_back({{"role", m.role}, {"content", m.content}});
  return out;
}

std::vector<ChatMessage> messages_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw std::invalid_argument("messages must be an array");
  std::vector<ChatMessage> out;
  for (const auto& m : doc) {
    if (!m.is_object() || !m.contains("role") || !m.contains("content") || !m.at("role").is_string() ||
        !m.at("content").is_string())
      throw std::invalid_argument("each message needs string \"role\" and \"content\" fields");
    ChatMessage msg{m.at("role").get<std::string>(), m.at("content").get<std::string>()};
    if (msg.role != "system" && msg.role != "user" && msg.role != "assistant")
      throw std::invalid_argument("unknown message role: " + msg.role);
    out.push_back(std::move(msg));
  }
  return out;
}

std::uint64_t count_words(const std::string& text) {
  std::istringstream in(text);
  std::uint64_t n = 0;
  std::string word;
  while (in >> word) ++n;
  return n;
}

OpenAiChatClient::OpenAiChatClient(std::string base_url, std::string model, std::string api_key,
                                   net::HttpOptions options)
    : base_url_(std::move(base_url)), model_(std::move(model)), api_key_(std::move(api_key)), options_(options) {
  while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
  sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

void OpenAiChatClient::set_retry_policy(int max_retries, std::chrono::milliseconds backoff) {
  max_retries_ = max_retries;
  backoff_ = backoff;
}

Completion OpenAiChatClient::complete(const std::vector<ChatMessage>& messages, const std::string& model) {
  const nlohmann::json request = {{"model", model.empty() ? model_ : model}, {"messages", to_json(messages)}};
  net::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  net::HttpResponse res;
  int attempt = 0;
  for (;; ++attempt) {
    int status = 0;
    std::string detail;
    try {
      res = net::http_post(base_url_ + "/chat/completions", request.dump(), "application/json", headers, options_);
      status = res.status;
      detail = excerpt(res.body);
    } catch (const net::TransportError& e) {
      detail = e.what();
    }
    if (status >= 200 && status < 300) break;
    if ((status != 0 && !retryable(status)) || attempt >= max_retries_) throw LlmError(status, detail);
    const auto wait = backoff_ * (1LL << attempt);
    log_warn("LLM request failed (" + (status ? "HTTP " + std::to_string(status) : detail) + "), retrying in " +
             std::to_string(wait.count()) + " ms");
    sleeper_(wait);
  }

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(res.body);
  } catch (const nlohmann::json::exception& e) {
    throw MalformedResponse(std::string("not JSON: ") + e.what());
  }
  Completion out;
  out.retries = attempt;
  try {
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    out.content = content.is_null() ? std::string() : content.get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw MalformedResponse("missing choices[0].message.content");
  }
  if (doc.contains("usage") && doc.at("usage").is_object()) {
    const auto& usage = doc.at("usage");
    out.usage.prompt = usage.value("prompt_tokens", std::uint64_t{0});
    out.usage.completion = usage.value("completion_tokens", std::uint64_t{0});
  }
  return out;
}

MockLlm::MockLlm(const nlohmann::json& script) {
  if (!script.is_object()) throw std::invalid_argument("mock LLM script must be a JSON object");
  model_ = script.value("model", std::string("mock"));
  auto list = [](const nlohmann::json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("mock LLM response list must be a non-empty array");
    return j.get<std::vector<nlohmann::json>>();
  };
  if (script.contains("responses")) responses_ = list(script.at("responses"));
  if (script.contains("rules")) {
    for (const auto& r : script.at("rules"))
      rules_.push_back(Rule{r.at("when_contains").get<std::string>(), list(r.at("responses"))});
  }
  if (responses_.empty() && rules_.empty()) throw std::invalid_argument("mock LLM script has no responses");
}

std::shared_ptr<MockLlm> MockLlm::from_file(const std::string& path) {
  return std::make_shared<MockLlm>(nlohmann::json::parse(net::read_file(path)));
}

std::size_t MockLlm::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

Completion MockLlm::complete(const std::vector<ChatMessage>& messages, const std::string&) {
  {
    std::lock_guard lock(mutex_);
    ++calls_;
  }
  const std::vector<nlohmann::json>* list = &responses_;
  for (const auto& rule : rules_) {
    bool hit = false;
    for (const auto& m : messages) hit |= m.role == "user" && m.content.find(rule.needle) != std::string::npos;
    if (hit) {
      list = &rule.responses;
      break;
    }
  }
  if (list->empty()) throw LlmError(500, "mock LLM has no response for this conversation");

  std::size_t assistant_turns = 0;
  for (const auto& m : messages) assistant_turns += m.role == "assistant" ? 1 : 0;
  const auto& r = (*list)[std::min(assistant_turns, list->size() - 1)];

  std::string prompt_text;
  for (const auto& m : messages) prompt_text += m.content + "\n";
  Completion out;
  if (r.is_string()) {
    out.content = r.get<std::string>();
  } else if (r.is_object()) {
    if (r.contains("error")) throw LlmError(r.at("error").get<int>(), r.value("message", std::string("scripted error")));
    out.content = r.value("echo", false) ? transcript(messages) : r.value("content", std::string());
    if (r.contains("prompt_tokens")) out.usage.prompt = r.at("prompt_tokens").get<std::uint64_t>();
    else out.usage.prompt = count_words(prompt_text);
    if (r.contains("completion_tokens")) out.usage.completion = r.at("completion_tokens").get<std::uint64_t>();
    else out.usage.completion = count_words(out.content);
    return out;
  } else {
    throw std::invalid_argument("mock LLM response must be a string or an object");
  }
  out.usage.prompt = count_words(prompt_text);
  out.usage.completion = count_words(out.content);
  return out;
}

Completion chat_completion(LlmClient& client, const std::vector<ChatMessage>& messages, const std::string& model) {
  return client.complete(messages, model.empty() ? client.default_model() : model);
}

}  // namespace sparqlgen::gen
