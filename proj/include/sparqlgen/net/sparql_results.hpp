#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace sparqlgen::net {

// One RDF term from a SPARQL-JSON binding.
struct RdfValue {
  enum class Type { Uri, Literal, BNode };
  Type type = Type::Literal;
  std::string value;
  std::string datatype;  // empty for plain literals
  std::string language;  // empty unless a language-tagged literal
  bool operator==(const RdfValue&) const = default;
};

using Binding = std::map<std::string, RdfValue>;

// application/sparql-results+json
struct ResultSet {
  std::vector<std::string> vars;
  std::vector<Binding> rows;
  std::optional<bool> boolean;  // set for ASK results
  bool operator==(const ResultSet&) const = default;
};

class MalformedResults : public std::runtime_error {
 public:
  explicit MalformedResults(std::string position, const std::string& reason)
      : std::runtime_error("malformed SPARQL results at " + position + ": " + reason), position_(std::move(position)) {}
  const std::string& position() const { return position_; }

 private:
  std::string position_;
};

ResultSet parse_results_json(std::string_view text);
ResultSet results_from_json(const nlohmann::json& doc);
nlohmann::json results_to_json(const ResultSet& results);

// First binding value of `var` in `row`, if bound.
const RdfValue* binding(const Binding& row, const std::string& var);

}  // namespace sparqlgen::net
