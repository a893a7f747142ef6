#include "support.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "sparqlgen/schema/void.hpp"
#include "sparqlgen/sparql/prefixes.hpp"

namespace sparqlgen::testing {

std::string fixture(const std::string& relative) { return std::string(SPARQLGEN_FIXTURE_DIR) + "/" + relative; }

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("sparqlgen-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

schema::PrefixMap fixture_prefixes() {
  schema::PrefixMap prefixes = sparql::builtin_prefixes();
  prefixes["up"] = kUp;
  prefixes["orth"] = "http://purl.org/net/orth#";
  prefixes["taxon"] = "http://purl.uniprot.org/taxonomy/";
  return prefixes;
}

schema::SchemaCatalog uniprot_catalog() {
  const auto rows = schema::fetch_void_rows(fixture("void/uniprot.srj"));
  const auto labels = schema::fetch_class_labels(fixture("labels/uniprot.srj"));
  return schema::build_catalog(kUniprot, rows, labels, fixture_prefixes());
}

FixtureKb load_fixture_kb(const std::string& config_name, std::size_t dim) {
  FixtureKb out{index::KnowledgeBase{}, std::make_shared<index::HashEmbedder>(dim)};
  const auto config = index::load_kb_config(fixture("kb/" + config_name));
  out.kb = index::build_knowledge_base(config, *out.embedder);
  return out;
}

}  // namespace sparqlgen::testing
