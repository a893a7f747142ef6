#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "sparqlgen/net/http.hpp"
#include "sparqlgen/net/sparql_results.hpp"
#include "sparqlgen/schema/catalog.hpp"

namespace sparqlgen::schema {

// The endpoint answered but publishes no VoID class/property partitions.
class EmptyVoid : public std::runtime_error {
 public:
  explicit EmptyVoid(const std::string& source) : std::runtime_error("no VoID rows found at " + source) {}
};

// Rows from a result set of queries/void.rq. A raw row binding both
// ?objectClass and ?objectDatatype yields two VoidRows; a row with neither
// yields an untyped-IRI row; ?objectDatatype = rdfs:Literal marks plain
// literals. Duplicates are removed; output is sorted.
std::vector<VoidRow> void_rows_from_results(const net::ResultSet& results);

// `source` is an endpoint URL or a SPARQL-JSON file. Throws
// net::EndpointUnreachable, net::MalformedResults or EmptyVoid.
std::vector<VoidRow> fetch_void_rows(const std::string& source, const net::HttpOptions& options = {});

// Label and comment per class from a result set of queries/labels.rq.
// Preference: language "en" (or en-*), then untagged, then any other
// (smallest tag, then smallest value).
LabelMap labels_from_results(const net::ResultSet& results);

LabelMap fetch_class_labels(const std::string& source, const net::HttpOptions& options = {});

struct MetadataProbe {
  bool ok = false;
  std::size_t count = 0;
  std::string reason;  // empty when ok
};

struct MetadataReport {
  std::string endpoint;
  MetadataProbe examples;
  MetadataProbe void_description;
  MetadataProbe homepage;

  nlohmann::json to_json() const;
};

// Runs the three probes independently. Never throws; failures are recorded
// in the report.
MetadataReport check_endpoint_metadata(const std::string& endpoint_url, const net::HttpOptions& options = {});

}  // namespace sparqlgen::schema
