#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "sparqlgen/index/vector_index.hpp"
#include "support.hpp"

using namespace sparqlgen::index;
namespace st = sparqlgen::testing;

namespace {

VectorIndex random_index(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::vector<IndexedDoc> docs;
  std::vector<Embedding> vectors;
  for (std::size_t i = 0; i < n; ++i) {
    const auto kind = static_cast<DocKind>(i % 3);
    docs.push_back(make_doc(kind, "doc " + std::to_string(i), "payload " + std::to_string(i), "http://e/sparql",
                            "http://e/doc/" + std::to_string(i)));
    vectors.push_back(st::random_unit_vector(rng, dim));
  }
  return VectorIndex(dim, "hash-v1/d=" + std::to_string(dim), std::move(docs), std::move(vectors));
}

}  // namespace

TEST(VectorIndex, SearchEqualsBruteForce) {
  std::mt19937_64 rng(42);
  const auto idx = random_index(rng, 400, 64);
  for (int q = 0; q < 30; ++q) {
    const auto query = st::random_unit_vector(rng, 64);
    for (std::size_t k : {1u, 7u, 20u}) {
      std::string why;
      EXPECT_TRUE(st::same_top_k(idx, idx.search(query, k), st::brute_force_top_k(idx, query, k), 1e-6, &why)) << why;
      const auto kind = DocKind::ClassShape;
      EXPECT_TRUE(st::same_top_k(idx, idx.search(query, k, kind), st::brute_force_top_k(idx, query, k, kind), 1e-6,
                                 &why))
          << why;
    }
  }
}

TEST(VectorIndex, SerialAndParallelAgreeExactly) {
  std::mt19937_64 rng(4);
  const auto idx = random_index(rng, 300, 32);
  const auto query = st::random_unit_vector(rng, 32);
  const auto a = idx.search(query, 25);
  const auto b = idx.search_serial(query, 25);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].doc, b[i].doc);
    EXPECT_EQ(a[i].score, b[i].score);
  }
}

TEST(VectorIndex, KLargerThanCorpusAndTiesById) {
  std::vector<IndexedDoc> docs;
  std::vector<Embedding> vectors;
  for (int i = 0; i < 5; ++i) {
    docs.push_back(make_doc(DocKind::ExampleQuery, "same", "p", "ep", "src" + std::to_string(i)));
    vectors.push_back({1.0f, 0.0f});
  }
  VectorIndex idx(2, "hash-v1/d=2", docs, vectors);
  const auto hits = idx.search(std::vector<float>{1.0f, 0.0f}, 50);
  ASSERT_EQ(hits.size(), 5u);
  for (std::size_t i = 1; i < hits.size(); ++i) EXPECT_LT(hits[i - 1].doc.id, hits[i].doc.id);
  EXPECT_FLOAT_EQ(hits[0].score, 1.0f);
  EXPECT_TRUE(idx.search(std::vector<float>{1.0f, 0.0f}, 3, DocKind::EndpointInfo).empty());
}

TEST(VectorIndex, InvalidQueries) {
  std::mt19937_64 rng(9);
  const auto idx = random_index(rng, 10, 8);
  EXPECT_THROW(idx.search(std::vector<float>(7, 0.1f), 3), DimensionMismatch);
  EXPECT_THROW(idx.search(st::random_unit_vector(rng, 8), 0), std::invalid_argument);
}

TEST(VectorIndex, ConstructionChecks) {
  std::vector<IndexedDoc> docs{make_doc(DocKind::ExampleQuery, "a", "p", "ep")};
  EXPECT_THROW(VectorIndex(2, "f", docs, {}), std::invalid_argument);
  EXPECT_THROW(VectorIndex(2, "f", docs, {{1.0f, 0.0f, 0.0f}}), DimensionMismatch);
  docs.push_back(docs[0]);
  VectorIndex dedup(2, "f", docs, {{1.0f, 0.0f}, {0.0f, 1.0f}});
  EXPECT_EQ(dedup.size(), 1u);
  VectorIndex renorm(2, "f", {docs[0]}, {{3.0f, 4.0f}});
  EXPECT_NEAR(renorm.vector(0)[0], 0.6f, 1e-6);
}

TEST(VectorIndex, CountsPerKind) {
  std::mt19937_64 rng(1);
  const auto idx = random_index(rng, 10, 4);
  EXPECT_EQ(idx.count(DocKind::ExampleQuery), 4u);
  EXPECT_EQ(idx.count(DocKind::ClassShape), 3u);
  EXPECT_EQ(idx.count(DocKind::EndpointInfo), 3u);
}

TEST(IndexFile, SaveLoadRoundTrip) {
  std::mt19937_64 rng(8);
  const auto idx = random_index(rng, 50, 16);
  st::TempDir dir;
  const auto path = (dir / "kb.idx").string();
  idx.save(path);
  const auto back = VectorIndex::load(path, idx.fingerprint());
  EXPECT_EQ(back.docs(), idx.docs());
  EXPECT_EQ(back.fingerprint(), idx.fingerprint());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const auto a = idx.vector(i), b = back.vector(i);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin()));
  }
  EXPECT_EQ(back.serialize(), idx.serialize());
}

TEST(IndexFile, FingerprintMismatch) {
  std::mt19937_64 rng(8);
  const auto bytes = random_index(rng, 3, 4).serialize();
  EXPECT_THROW(VectorIndex::deserialize(bytes, std::string("openai/x/d=4")), ProviderMismatch);
  EXPECT_NO_THROW(VectorIndex::deserialize(bytes));
}

TEST(IndexFile, CorruptionIsDetected) {
  std::mt19937_64 rng(8);
  const auto bytes = random_index(rng, 5, 4).serialize();
  EXPECT_THROW(VectorIndex::deserialize(bytes.substr(0, bytes.size() - 1)), CorruptIndex);
  EXPECT_THROW(VectorIndex::deserialize(bytes + "x"), CorruptIndex);
  EXPECT_THROW(VectorIndex::deserialize("NOTANIDX" + bytes.substr(8)), CorruptIndex);
  EXPECT_THROW(VectorIndex::deserialize(""), CorruptIndex);
  auto flipped = bytes;
  flipped[flipped.size() - 2] ^= 0x40;  // non-unit last vector
  EXPECT_THROW(VectorIndex::deserialize(flipped), CorruptIndex);
  EXPECT_THROW(VectorIndex::load("/nonexistent/kb.idx"), CorruptIndex);

  // Every truncation fails cleanly.
  for (std::size_t n = 0; n < bytes.size(); n += 7) EXPECT_THROW(VectorIndex::deserialize(bytes.substr(0, n)), CorruptIndex);
}

TEST(Docs, IdsAreStableAndKindSensitive) {
  const auto a = make_doc(DocKind::ExampleQuery, "q", "p", "ep", "http://x/1");
  const auto b = make_doc(DocKind::ExampleQuery, "other text", "p2", "ep", "http://x/1");
  const auto c = make_doc(DocKind::ClassShape, "q", "p", "ep", "http://x/1");
  EXPECT_EQ(a.id, b.id);
  EXPECT_NE(a.id, c.id);
  EXPECT_EQ(a.id.size(), 16u);
  EXPECT_THROW(make_doc(DocKind::ExampleQuery, "", "p", "ep"), std::invalid_argument);
  EXPECT_EQ(doc_kind_from_string(to_string(DocKind::EndpointInfo)), DocKind::EndpointInfo);
  EXPECT_THROW(doc_kind_from_string("nope"), std::invalid_argument);
}
