#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sparqlgen/gen/llm.hpp"

namespace sparqlgen::gen {

struct ExampleRef {
  std::string question;
  std::string query;
  std::string endpoint;
  float score = 0.0f;
  bool operator==(const ExampleRef&) const = default;
};

struct ShapeRef {
  std::string label;
  std::string shex;
  std::string endpoint;
  float score = 0.0f;
  bool operator==(const ShapeRef&) const = default;
};

struct EndpointRef {
  std::string text;  // payload of the EndpointInfo document
  std::string endpoint;
  float score = 0.0f;
  bool operator==(const EndpointRef&) const = default;
};

// Retrieved documents, each list in descending score order.
struct PromptContext {
  std::vector<ExampleRef> examples;
  std::vector<ShapeRef> shapes;
  std::optional<EndpointRef> endpoint_info;
  bool operator==(const PromptContext&) const = default;
};

// Splits a template into messages at lines reading "[system]", "[user]" or
// "[assistant]" and substitutes {{name}} placeholders in a single pass.
// Unknown placeholders are left as is.
std::vector<ChatMessage> render_template(std::string_view text, const std::map<std::string, std::string>& vars);

// The example block for the prompt: question, then the query fenced as
// sparql, preceded by an endpoint comment when the query has none.
std::string render_example(const ExampleRef& example);

// prompts/generate.txt filled with the context; empty sections read "(none)".
std::vector<ChatMessage> build_prompt(const std::string& question, const PromptContext& context);

// prompts/norag.txt: question and answer instructions only.
std::vector<ChatMessage> build_norag_prompt(const std::string& question);

// prompts/fix.txt with one issue message per line.
ChatMessage fix_message(const std::vector<std::string>& issues);

// Content of the last fenced block tagged sparql; failing that, of the last
// untagged block that parses as SPARQL.
std::optional<std::string> extract_sparql(std::string_view answer);

// Target endpoint from a "#+ endpoint: <url>" comment line.
std::optional<std::string> endpoint_comment(std::string_view query);

}  // namespace sparqlgen::gen
