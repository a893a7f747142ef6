#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "oracles.hpp"
#include "sparqlgen/sparql/parser.hpp"
#include "sparqlgen/sparql/serialize.hpp"
#include "support.hpp"

using namespace sparqlgen::sparql;
namespace st = sparqlgen::testing;

namespace {

std::vector<std::filesystem::path> corpus() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(st::fixture("queries"))) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

TEST(RoundTrip, CorpusIsLargeAndCoversConstructs) {
  const auto files = corpus();
  ASSERT_GE(files.size(), 20u);
  std::string all;
  for (const auto& f : files) all += st::read_text(f);
  for (const auto* construct : {"SERVICE", "OPTIONAL", "UNION", "FILTER", "VALUES", "{ SELECT", "+", "|"})
    EXPECT_NE(all.find(construct), std::string::npos) << construct;
}

TEST(RoundTrip, ParseSerializeParseIsIdentity) {
  for (const auto& f : corpus()) {
    SCOPED_TRACE(f.filename().string());
    const Query first = parse(st::read_text(f));
    const std::string text = serialize(first);
    const Query second = parse(text);
    EXPECT_EQ(first, second) << text;
    EXPECT_EQ(serialize(second), text);
  }
}

TEST(RoundTrip, AnyParseableSoupRoundTrips) {
  std::mt19937_64 rng(7);
  int parsed = 0;
  for (int i = 0; i < 3000; ++i) {
    const std::string text = "SELECT * WHERE { " + st::random_token_soup(rng, 120) + " }";
    Query q;
    try {
      q = parse(text);
    } catch (const SparqlError&) {
      continue;
    }
    ++parsed;
    const std::string out = serialize(q);
    ASSERT_EQ(parse(out), q) << text << "\n---\n" << out;
  }
  EXPECT_GT(parsed, 0);
}

TEST(Fuzz, RandomBytesOnlyRaiseSparqlErrors) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const std::string text = (i % 2 == 0) ? st::random_bytes(rng, 4096) : st::random_token_soup(rng, 4096);
    try {
      (void)parse(text);
    } catch (const SparqlError&) {
    } catch (const std::exception& e) {
      FAIL() << "unexpected " << e.what() << " for input #" << i;
    }
  }
}

TEST(Fuzz, DeepNestingIsBounded) {
  std::string deep = "SELECT * WHERE ";
  for (int i = 0; i < 5000; ++i) deep += "{ ";
  EXPECT_THROW(parse(deep), SparqlError);
}
