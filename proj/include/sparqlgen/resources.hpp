#pragma once

#include <string_view>

// Text shipped under prompts/ and queries/, embedded at build time.
namespace sparqlgen::resources {

std::string_view generate_prompt();
std::string_view fix_prompt();
std::string_view norag_prompt();
std::string_view void_query();
std::string_view labels_query();
std::string_view examples_query();

}  // namespace sparqlgen::resources
