#pragma once

#include <stdexcept>

namespace sparqlgen {

// Invalid configuration or input files (case files, knowledge base configs).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sparqlgen
