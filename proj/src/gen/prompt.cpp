#include "sparqlgen/gen/prompt.hpp"

#include <regex>

#include "sparqlgen/resources.hpp"
#include "sparqlgen/sparql/parser.hpp"

namespace sparqlgen::gen {
namespace {

std::string trim_newlines(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  while (!s.empty() && (s.front() == '\n' || s.front() == '\r')) s.erase(s.begin());
  return s;
}

std::string substitute(std::string_view text, const std::map<std::string, std::string>& vars) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto open = text.find("{{", pos);
    if (open == std::string_view::npos) break;
    const auto close = text.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    out.append(text.substr(pos, open - pos));
    const auto it = vars.find(std::string(text.substr(open + 2, close - open - 2)));
    if (it != vars.end()) out += it->second;
    else out.append(text.substr(open, close + 2 - open));
    pos = close + 2;
  }
  out.append(text.substr(pos));
  return out;
}

struct Fence {
  std::string tag;
  std::string body;
};

std::vector<Fence> fences(std::string_view text) {
  std::vector<Fence> out;
  std::optional<Fence> open;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto first = line.find_first_not_of(" \t");
    const bool is_fence = first != std::string_view::npos && line.substr(first, 3) == "```";
    if (is_fence && !open) {
      std::string tag(line.substr(first + 3));
      while (!tag.empty() && (tag.back() == ' ' || tag.back() == '\t')) tag.pop_back();
      for (auto& c : tag) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      open = Fence{tag, {}};
    } else if (is_fence && line.substr(first).find_first_not_of('`') == std::string_view::npos) {
      out.push_back(std::move(*open));
      open.reset();
    } else if (open) {
      open->body.append(line);
      open->body.push_back('\n');
    }
    pos = eol + 1;
  }
  // An unterminated block at the end still counts.
  if (open) out.push_back(std::move(*open));
  for (auto& f : out)
    if (!f.body.empty()) f.body.pop_back();
  return out;
}

}  // namespace

std::vector<ChatMessage> render_template(std::string_view text, const std::map<std::string, std::string>& vars) {
  std::vector<ChatMessage> out;
  std::optional<ChatMessage> current;
  std::string preamble;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    const bool last = eol == std::string_view::npos;
    if (last) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    if (line == "[system]" || line == "[user]" || line == "[assistant]") {
      if (current) out.push_back(std::move(*current));
      current = ChatMessage{std::string(line.substr(1, line.size() - 2)), {}};
    } else {
      std::string& target = current ? current->content : preamble;
      target.append(line);
      if (!last) target.push_back('\n');
    }
    pos = eol + 1;
  }
  if (current) out.push_back(std::move(*current));
  if (out.empty()) out.push_back(ChatMessage{"user", preamble});
  for (auto& m : out) m.content = trim_newlines(substitute(m.content, vars));
  return out;
}

std::string render_example(const ExampleRef& example) {
  std::string query = trim_newlines(example.query);
  if (!endpoint_comment(query) && !example.endpoint.empty()) query = "#+ endpoint: " + example.endpoint + "\n" + query;
  return example.question + "\n```sparql\n" + query + "\n```";
}

std::vector<ChatMessage> build_prompt(const std::string& question, const PromptContext& context) {
  std::string examples;
  for (const auto& e : context.examples) {
    if (!examples.empty()) examples += "\n\n";
    examples += render_example(e);
  }
  std::string shapes;
  for (const auto& s : context.shapes) {
    if (!shapes.empty()) shapes += "\n\n";
    shapes += "```shex\n" + trim_newlines(s.shex) + "\n```";
  }
  std::map<std::string, std::string> vars{
      {"endpoint_info", context.endpoint_info ? trim_newlines(context.endpoint_info->text) : "(none)"},
      {"examples", examples.empty() ? "(none)" : examples},
      {"shapes", shapes.empty() ? "(none)" : shapes},
      {"question", question}};
  return render_template(resources::generate_prompt(), vars);
}

std::vector<ChatMessage> build_norag_prompt(const std::string& question) {
  return render_template(resources::norag_prompt(), {{"question", question}});
}

ChatMessage fix_message(const std::vector<std::string>& issues) {
  std::string list;
  for (const auto& i : issues) {
    if (!list.empty()) list += "\n";
    list += "- " + i;
  }
  auto messages = render_template(resources::fix_prompt(), {{"issues", list}});
  return ChatMessage{"user", messages.front().content};
}

std::optional<std::string> extract_sparql(std::string_view answer) {
  const auto blocks = fences(answer);
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it)
    if (it->tag == "sparql") return it->body;
  for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
    if (!it->tag.empty()) continue;
    try {
      sparql::parse(it->body);
      return it->body;
    } catch (const std::exception&) {
    }
  }
  return std::nullopt;
}

std::optional<std::string> endpoint_comment(std::string_view query) {
  static const std::regex kPattern(R"(^[ \t]*#\+[ \t]*endpoint[ \t]*:[ \t]*<?([^\s>]+)>?)", std::regex::icase);
  std::size_t pos = 0;
  while (pos < query.size()) {
    auto eol = query.find('\n', pos);
    if (eol == std::string_view::npos) eol = query.size();
    const std::string line(query.substr(pos, eol - pos));
    std::smatch m;
    if (std::regex_search(line, m, kPattern)) return m[1].str();
    pos = eol + 1;
  }
  return std::nullopt;
}

}  // namespace sparqlgen::gen
