#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "sparqlgen/index/embedder.hpp"
#include "sparqlgen/index/harvest.hpp"
#include "sparqlgen/schema/catalog.hpp"

namespace sparqlgen::testing {

inline constexpr const char* kUniprot = "https://sparql.uniprot.org/sparql";
inline constexpr const char* kOma = "https://sparql.omabrowser.org/sparql";
inline constexpr const char* kUp = "http://purl.uniprot.org/core/";

std::string fixture(const std::string& relative);
std::string read_text(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Prefixes of the fixture knowledge base configs.
schema::PrefixMap fixture_prefixes();

// Catalog for the UniProt fixture endpoint (VoID + labels files).
schema::SchemaCatalog uniprot_catalog();

// Knowledge base from one of fixtures/kb/*.json with a hash embedder.
struct FixtureKb {
  index::KnowledgeBase kb;
  std::shared_ptr<index::HashEmbedder> embedder;
};
FixtureKb load_fixture_kb(const std::string& config_name, std::size_t dim = 256);

}  // namespace sparqlgen::testing
