#include <gtest/gtest.h>

#include <random>
#include <regex>

#include "sparqlgen/schema/void.hpp"
#include "support.hpp"

using namespace sparqlgen::schema;
namespace st = sparqlgen::testing;

namespace {

const std::string kEx = "http://example.org/ns#";
const std::string kXsd = "http://www.w3.org/2001/XMLSchema#";

VoidRow row(const std::string& cls, const std::string& pred, std::uint64_t triples) {
  VoidRow r;
  r.subject_class = cls;
  r.predicate = pred;
  r.triples = triples;
  return r;
}

std::string squash(const std::string& text) {
  std::string s = std::regex_replace(text, std::regex(R"(\s*;\s*)"), " ; ");
  return std::regex_replace(s, std::regex(R"(\s+)"), " ");
}

}  // namespace

TEST(Catalog, DiseaseAnnotationShapeMatchesGolden) {
  const auto rows = fetch_void_rows(st::fixture("void/disease_annotation.srj"));
  const auto catalog = build_catalog(st::kUniprot, rows, {}, st::fixture_prefixes());
  const auto* shape = catalog.lookup(st::kUniprot, std::string(st::kUp) + "Disease_Annotation");
  ASSERT_NE(shape, nullptr);
  const auto text = render_shex(*shape, catalog.prefixes());
  EXPECT_EQ(text, st::read_text(st::fixture("golden/disease_annotation.shex")));
  EXPECT_EQ(squash(text), squash("up:Disease_Annotation {\n  a [ up:Disease_Annotation ] ;\n"
                                 "  up:sequence [ up:Chain_Annotation up:Modified_Sequence ];\n"
                                 "  rdfs:comment xsd:string ; up:disease IRI }"));
}

TEST(Catalog, EveryObjectKindRenders) {
  std::vector<VoidRow> rows;
  auto r = row(kEx + "Thing", "http://www.w3.org/1999/02/22-rdf-syntax-ns#type", 99);
  r.object_class = kEx + "Thing";
  rows.push_back(r);
  for (const auto* c : {"Thing", "Other"}) {
    auto l = row(kEx + "Thing", kEx + "linksTo", 50);
    l.object_class = kEx + c;
    rows.push_back(l);
  }
  auto count = row(kEx + "Thing", kEx + "count", 40);
  count.object_datatype = kXsd + "integer";
  rows.push_back(count);
  auto page = row(kEx + "Thing", kEx + "page", 30);
  page.object_is_iri = true;
  rows.push_back(page);
  auto note = row(kEx + "Thing", kEx + "note", 20);
  note.object_is_literal = true;
  rows.push_back(note);
  const std::string other = "http://other.example/x#";
  auto mixed = row(kEx + "Thing", other + "p", 10);
  mixed.object_class = other + "Unknown";
  rows.push_back(mixed);
  mixed.object_class.reset();
  mixed.object_datatype = kXsd + "string";
  rows.push_back(mixed);
  mixed.object_datatype.reset();
  mixed.object_is_iri = true;
  rows.push_back(mixed);
  mixed.object_is_iri = false;
  mixed.object_is_literal = true;
  rows.push_back(mixed);

  auto prefixes = st::fixture_prefixes();
  prefixes["ex"] = kEx;
  const auto classes = build_class_shapes(rows, {});
  EXPECT_EQ(render_shex(classes.at(kEx + "Thing"), prefixes), st::read_text(st::fixture("golden/all_kinds.shex")));
}

TEST(Catalog, PredicatesOrderedByTripleCountThenIri) {
  std::vector<VoidRow> rows;
  for (auto [p, n] : std::vector<std::pair<std::string, int>>{{"b", 5}, {"a", 5}, {"c", 9}, {"d", 0}}) {
    auto r = row(kEx + "C", kEx + p, n);
    r.object_is_iri = true;
    rows.push_back(r);
  }
  const auto shape = build_class_shapes(rows, {}).at(kEx + "C");
  std::vector<std::string> order;
  for (const auto& p : shape.predicates) order.push_back(p.predicate.substr(kEx.size()));
  EXPECT_EQ(order, (std::vector<std::string>{"c", "a", "b", "d"}));
}

TEST(Catalog, RdfTypeIsImpliedNotListed) {
  const auto catalog = st::uniprot_catalog();
  const auto* shape = catalog.lookup(st::kUniprot, std::string(st::kUp) + "Disease");
  ASSERT_NE(shape, nullptr);
  EXPECT_EQ(shape->find("http://www.w3.org/1999/02/22-rdf-syntax-ns#type"), nullptr);
  EXPECT_EQ(shape->predicates.size(), 5u);
}

TEST(Catalog, BuildIsInvariantUnderPermutationAndDuplication) {
  const auto rows = fetch_void_rows(st::fixture("void/uniprot.srj"));
  const auto reference = build_class_shapes(rows, {});
  std::mt19937_64 rng(5);
  for (int i = 0; i < 20; ++i) {
    auto shuffled = rows;
    for (int d = 0; d < 10; ++d) shuffled.push_back(rows[rng() % rows.size()]);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(build_class_shapes(shuffled, {}), reference);
  }
  EXPECT_EQ(fetch_void_rows(st::fixture("void/disease_annotation_shuffled.srj")),
            fetch_void_rows(st::fixture("void/disease_annotation.srj")));
}

TEST(Catalog, LabelsAndFallback) {
  const auto catalog = st::uniprot_catalog();
  const std::string up = st::kUp;
  EXPECT_EQ(catalog.lookup(st::kUniprot, up + "Disease")->label, "Disease");
  EXPECT_EQ(catalog.lookup(st::kUniprot, up + "Disease")->description, "The description of a disease.");
  EXPECT_EQ(catalog.lookup(st::kUniprot, up + "Cluster")->label, up + "Cluster");
  EXPECT_EQ(catalog.class_count(), 20u);
}

TEST(Catalog, LookupMisses) {
  const auto catalog = st::uniprot_catalog();
  EXPECT_EQ(catalog.lookup(st::kUniprot, "http://nope/C"), nullptr);
  EXPECT_EQ(catalog.lookup("http://other/sparql", std::string(st::kUp) + "Disease"), nullptr);
  EXPECT_EQ(catalog.endpoint("http://other/sparql"), nullptr);
}

TEST(Catalog, JsonAndFileRoundTrip) {
  const auto catalog = st::uniprot_catalog();
  EXPECT_EQ(SchemaCatalog::from_json(catalog.to_json()), catalog);
  st::TempDir dir;
  catalog.save((dir / "catalog.json").string());
  EXPECT_EQ(SchemaCatalog::load((dir / "catalog.json").string()), catalog);
}

TEST(Catalog, WithEndpointLeavesOriginalUntouched) {
  const auto catalog = st::uniprot_catalog();
  const auto extended =
      catalog.with_endpoint(st::kOma, build_class_shapes(fetch_void_rows(st::fixture("void/oma.srj")), {}));
  EXPECT_EQ(catalog.endpoints().size(), 1u);
  EXPECT_EQ(extended.endpoints().size(), 2u);
  EXPECT_EQ(extended.class_count(), 23u);
}
