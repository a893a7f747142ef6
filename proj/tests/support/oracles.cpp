#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "sparqlgen/sparql/prefixes.hpp"

namespace sparqlgen::testing {
namespace {

constexpr const char* kXsdString = "http://www.w3.org/2001/XMLSchema#string";

std::string abs_iri(const std::string& compact) { return kEx + compact.substr(3); }

std::string compact_ex(const std::string& iri) {
  const std::string ns = kEx;
  return iri.rfind(ns, 0) == 0 ? "ex:" + iri.substr(ns.size()) : "<" + iri + ">";
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

}  // namespace

schema::SchemaCatalog ValidatorInstance::catalog() const {
  auto prefixes = sparql::builtin_prefixes();
  prefixes["ex"] = kEx;
  return schema::SchemaCatalog(prefixes, {{kRandomEndpoint, classes}});
}

ValidatorInstance random_validator_instance(std::mt19937_64& rng) {
  ValidatorInstance inst;
  const std::size_t n_classes = 1 + pick(rng, 5);
  const std::size_t n_preds = 1 + pick(rng, 6);
  std::vector<std::string> class_names, pred_names;
  for (std::size_t i = 0; i < n_classes; ++i) class_names.push_back("ex:C" + std::to_string(i));
  for (std::size_t i = 0; i < n_preds; ++i) pred_names.push_back("ex:p" + std::to_string(i));

  for (const auto& c : class_names) {
    if (!chance(rng, 0.8)) continue;
    schema::ClassShape shape;
    shape.class_iri = abs_iri(c);
    shape.label = c;
    for (const auto& p : pred_names) {
      if (!chance(rng, 0.5)) continue;
      schema::PredicateShape ps;
      ps.predicate = abs_iri(p);
      if (chance(rng, 0.6)) {
        std::set<std::string> objects;
        for (const auto& o : class_names)
          if (chance(rng, 0.4)) objects.insert(abs_iri(o));
        if (objects.empty()) objects.insert(abs_iri(class_names[pick(rng, n_classes)]));
        ps.object_classes.assign(objects.begin(), objects.end());
      } else {
        ps.object_datatypes.push_back(kXsdString);
      }
      shape.predicates.push_back(std::move(ps));
    }
    inst.classes[shape.class_iri] = std::move(shape);
  }

  const std::vector<std::string> nodes = {"?v0", "?v1", "?v2", "?v3", "_:b0"};
  const std::size_t n_triples = 1 + pick(rng, 8);
  for (std::size_t i = 0; i < n_triples; ++i) {
    OracleTriple t;
    t.subject = chance(rng, 0.08) ? "ex:i0" : nodes[pick(rng, chance(rng, 0.9) ? 4 : 5)];
    if (chance(rng, 0.3)) {
      t.is_type = true;
      t.predicate = "a";
      t.object = class_names[pick(rng, n_classes)];
    } else {
      t.predicate = pred_names[pick(rng, n_preds)];
      const double r = std::uniform_real_distribution<double>(0, 1)(rng);
      if (r < 0.8) {
        t.object = nodes[pick(rng, chance(rng, 0.9) ? 4 : 5)];
        t.object_is_node = true;
      } else if (r < 0.9) {
        t.object = "\"x\"";
      } else {
        t.object = "ex:i0";
      }
    }
    inst.triples.push_back(t);
  }

  inst.query_text = "PREFIX ex: <" + std::string(kEx) + ">\nSELECT * WHERE {\n";
  for (const auto& t : inst.triples) inst.query_text += "  " + t.subject + " " + t.predicate + " " + t.object + " .\n";
  inst.query_text += "}\n";
  return inst;
}

std::map<std::string, std::set<std::string>> oracle_candidates(const ValidatorInstance& inst) {
  std::map<std::string, std::set<std::string>> declared;
  for (const auto& t : inst.triples)
    if (t.is_type) declared[t.subject].insert(abs_iri(t.object));

  std::map<std::string, std::set<std::string>> reached;
  using State = std::pair<std::string, std::string>;
  std::set<State> on_path;
  std::function<void(const std::string&, const std::string&)> walk = [&](const std::string& node,
                                                                          const std::string& cls) {
    const auto shape = inst.classes.find(cls);
    if (shape == inst.classes.end()) return;
    for (const auto& t : inst.triples) {
      if (t.is_type || !t.object_is_node || t.subject != node) continue;
      const auto* ps = shape->second.find(abs_iri(t.predicate));
      if (ps == nullptr) continue;
      for (const auto& next : ps->object_classes) {
        reached[t.object].insert(next);
        if (declared.count(t.object) != 0) continue;
        const State state{t.object, next};
        if (on_path.count(state) != 0) continue;
        on_path.insert(state);
        walk(t.object, next);
        on_path.erase(state);
      }
    }
  };
  for (const auto& [node, classes] : declared) {
    for (const auto& c : classes) {
      on_path = {{node, c}};
      walk(node, c);
    }
  }

  std::map<std::string, std::set<std::string>> out;
  for (const auto& t : inst.triples) {
    for (const auto& n : {t.subject, t.object}) {
      if (declared.count(n) != 0) {
        out[n] = declared[n];
      } else if (reached.count(n) != 0) {
        out[n] = reached[n];
      }
    }
  }
  return out;
}

std::set<IssueKey> oracle_issues(const ValidatorInstance& inst) {
  const auto candidates = oracle_candidates(inst);
  std::set<IssueKey> out;
  for (const auto& t : inst.triples) {
    if (t.is_type) continue;
    const auto it = candidates.find(t.subject);
    if (it == candidates.end() || it->second.empty()) continue;
    const auto& cands = it->second;
    const bool all_known = std::all_of(cands.begin(), cands.end(),
                                       [&](const std::string& c) { return inst.classes.count(c) != 0; });
    if (!all_known) continue;
    const bool supported = std::any_of(cands.begin(), cands.end(), [&](const std::string& c) {
      return inst.classes.at(c).find(abs_iri(t.predicate)) != nullptr;
    });
    if (supported) continue;
    const std::string smallest = *std::min_element(cands.begin(), cands.end());
    out.emplace(t.subject, compact_ex(smallest), t.predicate);
  }
  return out;
}

std::vector<float> random_unit_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<float> normal(0.0f, 1.0f);
  std::vector<float> v(dim);
  double norm = 0;
  for (auto& x : v) {
    x = normal(rng);
    norm += static_cast<double>(x) * x;
  }
  norm = std::sqrt(norm);
  for (auto& x : v) x = static_cast<float>(x / norm);
  return v;
}

std::vector<OracleHit> brute_force_top_k(const index::VectorIndex& idx, const std::vector<float>& query, std::size_t k,
                                         std::optional<index::DocKind> kind) {
  std::vector<OracleHit> all;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (kind && idx.docs()[i].kind != *kind) continue;
    const auto v = idx.vector(i);
    double s = 0;
    for (std::size_t j = 0; j < v.size(); ++j) s += static_cast<double>(v[j]) * query[j];
    all.push_back({i, s});
  }
  std::sort(all.begin(), all.end(), [&](const OracleHit& a, const OracleHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return idx.docs()[a.row].id < idx.docs()[b.row].id;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

bool same_top_k(const index::VectorIndex& idx, const std::vector<index::ScoredDoc>& got,
                const std::vector<OracleHit>& expected, double tol, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why != nullptr) *why = m;
    return false;
  };
  if (got.size() != expected.size())
    return fail("size " + std::to_string(got.size()) + " != " + std::to_string(expected.size()));
  std::map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < idx.size(); ++i) row_of[idx.docs()[i].id] = i;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < got.size(); ++i) {
    const auto& id = got[i].doc.id;
    if (!seen.insert(id).second) return fail("duplicate id " + id);
    const auto row = row_of.find(id);
    if (row == row_of.end()) return fail("unknown id " + id);
    if (row->second != expected[i].row) {
      // Only a near-tie swap is acceptable.
      const auto other = std::find_if(expected.begin(), expected.end(),
                                      [&](const OracleHit& h) { return h.row == row->second; });
      const double exact = other != expected.end() ? other->score : -2.0;
      if (std::abs(exact - expected[i].score) >= tol && i + 1 != expected.size())
        return fail("rank " + std::to_string(i) + ": got " + id + ", expected " + idx.docs()[expected[i].row].id);
    }
    if (std::abs(static_cast<double>(got[i].score) - expected[i].score) >= tol)
      return fail("score at " + std::to_string(i) + " differs");
  }
  return true;
}

bool results_equivalent(const net::ResultSet& a, const net::ResultSet& b) {
  if (a.boolean || b.boolean) return a.boolean == b.boolean && a.boolean.has_value();
  if (a.vars.size() != b.vars.size() || a.rows.size() != b.rows.size()) return false;
  auto key = [](const net::Binding& row, const std::string& var) -> std::string {
    const auto it = row.find(var);
    if (it == row.end()) return "unbound";
    const auto& v = it->second;
    switch (v.type) {
      case net::RdfValue::Type::Uri:
        return "U" + v.value;
      case net::RdfValue::Type::BNode:
        return "B";
      case net::RdfValue::Type::Literal:
        return "L" + v.value + "|" + (v.datatype == kXsdString ? std::string() : v.datatype) + "|" + v.language;
    }
    return {};
  };
  auto table = [&](const net::ResultSet& r, const std::vector<std::size_t>& perm) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& row : r.rows) {
      std::vector<std::string> out;
      for (auto c : perm) out.push_back(key(row, r.vars[c]));
      rows.push_back(std::move(out));
    }
    std::sort(rows.begin(), rows.end());
    return rows;
  };
  std::vector<std::size_t> identity(a.vars.size());
  std::iota(identity.begin(), identity.end(), 0);
  const auto left = table(a, identity);
  std::vector<std::size_t> perm = identity;
  do {
    if (table(b, perm) == left) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

net::ResultSet random_result_set(std::mt19937_64& rng, std::size_t max_columns, std::size_t max_rows) {
  using V = net::RdfValue;
  const std::vector<std::optional<V>> pool = {
      V{V::Type::Uri, "http://example.org/a", "", ""},
      V{V::Type::Uri, "http://example.org/b", "", ""},
      V{V::Type::Literal, "x", "", ""},
      V{V::Type::Literal, "x", kXsdString, ""},
      V{V::Type::Literal, "x", "", "en"},
      V{V::Type::Literal, "1", "http://www.w3.org/2001/XMLSchema#integer", ""},
      V{V::Type::BNode, "b1", "", ""},
      std::nullopt,
  };
  net::ResultSet r;
  const std::size_t cols = 1 + pick(rng, max_columns);
  const std::size_t rows = pick(rng, max_rows + 1);
  const std::size_t variety = 2 + pick(rng, pool.size() - 1);
  for (std::size_t c = 0; c < cols; ++c) r.vars.push_back("v" + std::to_string(c));
  for (std::size_t i = 0; i < rows; ++i) {
    net::Binding b;
    for (const auto& v : r.vars) {
      const auto& value = pool[pick(rng, variety)];
      if (value) b[v] = *value;
    }
    r.rows.push_back(std::move(b));
  }
  return r;
}

net::ResultSet scramble(const net::ResultSet& results, std::mt19937_64& rng) {
  net::ResultSet out;
  out.boolean = results.boolean;
  std::map<std::string, std::string> rename;
  for (std::size_t i = 0; i < results.vars.size(); ++i) rename[results.vars[i]] = "renamed_" + std::to_string(i * 7 % 11);
  out.vars = results.vars;
  std::shuffle(out.vars.begin(), out.vars.end(), rng);
  for (auto& v : out.vars) v = rename[v];
  int label = 0;
  for (const auto& row : results.rows) {
    net::Binding b;
    for (const auto& [var, value] : row) {
      auto copy = value;
      if (copy.type == net::RdfValue::Type::BNode) copy.value = "genid" + std::to_string(label++);
      b[rename[var]] = copy;
    }
    out.rows.push_back(std::move(b));
  }
  std::shuffle(out.rows.begin(), out.rows.end(), rng);
  return out;
}

std::string random_bytes(std::mt19937_64& rng, std::size_t max_len) {
  const std::size_t len = pick(rng, max_len + 1);
  std::string s(len, '\0');
  std::uniform_int_distribution<int> byte(0, 255);
  for (auto& c : s) c = static_cast<char>(byte(rng));
  return s;
}

std::string random_token_soup(std::mt19937_64& rng, std::size_t max_len) {
  static const std::vector<std::string> fragments = {
      "SELECT", "*", "WHERE", "{", "}", "?x", "?y", "$z", "<http://a.example/>", "ex:p", "PREFIX ex: <http://e/>",
      ".", ";", ",", "OPTIONAL", "UNION", "FILTER(", ")", "(", "SERVICE", "SILENT", "VALUES", "\"str\"", "'s'",
      "\"", "'", "#c", "\n", "a", "/", "|", "^", "+", "?", "!", "BIND(", "AS", "[", "]", "_:b", "@en", "^^",
      "1.5e3", "-2", "ASK", "GROUP BY", "ORDER BY", "LIMIT 5", "NOT EXISTS", "EXISTS", "\\", "\"\"\"", "BASE",
      "DISTINCT", "UNDEF", "true", "xsd:int", "{}", "()", "<", ">", "&&", "=", "COUNT(", "\xc3\xa9", "\xff"};
  const std::size_t target = pick(rng, max_len + 1);
  std::string s;
  while (s.size() < target) {
    s += fragments[pick(rng, fragments.size())];
    if (chance(rng, 0.7)) s += ' ';
  }
  return s;
}

}  // namespace sparqlgen::testing
