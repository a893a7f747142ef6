#include "sparqlgen/net/sparql_results.hpp"

namespace sparqlgen::net {

using nlohmann::json;

namespace {

RdfValue parse_value(const json& node, const std::string& where) {
  if (!node.is_object()) throw MalformedResults(where, "binding is not an object");
  auto type = node.find("type");
  auto value = node.find("value");
  if (type == node.end() || !type->is_string()) throw MalformedResults(where, "missing 'type'");
  if (value == node.end() || !value->is_string()) throw MalformedResults(where, "missing 'value'");
  RdfValue out;
  const auto& t = type->get_ref<const std::string&>();
  if (t == "uri") {
    out.type = RdfValue::Type::Uri;
  } else if (t == "literal" || t == "typed-literal") {
    out.type = RdfValue::Type::Literal;
  } else if (t == "bnode") {
    out.type = RdfValue::Type::BNode;
  } else {
    throw MalformedResults(where, "unknown term type '" + t + "'");
  }
  out.value = value->get<std::string>();
  if (auto dt = node.find("datatype"); dt != node.end()) {
    if (!dt->is_string()) throw MalformedResults(where, "datatype is not a string");
    out.datatype = dt->get<std::string>();
  }
  if (auto lang = node.find("xml:lang"); lang != node.end()) {
    if (!lang->is_string()) throw MalformedResults(where, "xml:lang is not a string");
    out.language = lang->get<std::string>();
  }
  return out;
}

}  // namespace

ResultSet parse_results_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedResults("byte " + std::to_string(e.byte), "invalid JSON");
  }
  return results_from_json(doc);
}

ResultSet results_from_json(const json& doc) {
  if (!doc.is_object()) throw MalformedResults("$", "document is not an object");
  ResultSet out;
  auto head = doc.find("head");
  if (head == doc.end() || !head->is_object()) throw MalformedResults("$.head", "missing head");
  if (auto b = doc.find("boolean"); b != doc.end()) {
    if (!b->is_boolean()) throw MalformedResults("$.boolean", "not a boolean");
    out.boolean = b->get<bool>();
    return out;
  }
  if (auto vars = head->find("vars"); vars != head->end()) {
    if (!vars->is_array()) throw MalformedResults("$.head.vars", "not an array");
    for (std::size_t i = 0; i < vars->size(); ++i) {
      if (!(*vars)[i].is_string()) throw MalformedResults("$.head.vars[" + std::to_string(i) + "]", "not a string");
      out.vars.push_back((*vars)[i].get<std::string>());
    }
  }
  auto results = doc.find("results");
  if (results == doc.end() || !results->is_object()) throw MalformedResults("$.results", "missing results");
  auto bindings = results->find("bindings");
  if (bindings == results->end() || !bindings->is_array())
    throw MalformedResults("$.results.bindings", "missing bindings array");
  out.rows.reserve(bindings->size());
  for (std::size_t i = 0; i < bindings->size(); ++i) {
    const auto& row = (*bindings)[i];
    const std::string where = "$.results.bindings[" + std::to_string(i) + "]";
    if (!row.is_object()) throw MalformedResults(where, "row is not an object");
    Binding b;
    for (auto it = row.begin(); it != row.end(); ++it) b.emplace(it.key(), parse_value(it.value(), where + "." + it.key()));
    out.rows.push_back(std::move(b));
  }
  return out;
}

json results_to_json(const ResultSet& results) {
  json doc;
  doc["head"] = json::object();
  if (results.boolean) {
    doc["boolean"] = *results.boolean;
    return doc;
  }
  doc["head"]["vars"] = results.vars;
  json rows = json::array();
  for (const auto& row : results.rows) {
    json r = json::object();
    for (const auto& [var, v] : row) {
      json t;
      t["type"] = v.type == RdfValue::Type::Uri ? "uri" : v.type == RdfValue::Type::BNode ? "bnode" : "literal";
      t["value"] = v.value;
      if (!v.datatype.empty()) t["datatype"] = v.datatype;
      if (!v.language.empty()) t["xml:lang"] = v.language;
      r[var] = std::move(t);
    }
    rows.push_back(std::move(r));
  }
  doc["results"]["bindings"] = std::move(rows);
  return doc;
}

const RdfValue* binding(const Binding& row, const std::string& var) {
  auto it = row.find(var);
  return it == row.end() ? nullptr : &it->second;
}

}  // namespace sparqlgen::net
