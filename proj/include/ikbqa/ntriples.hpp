#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ikbqa/knowledge_base.hpp"
#include "ikbqa/term.hpp"

namespace ikbqa {

class LoadError : public std::runtime_error {
 public:
  LoadError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses N-Triples text. Blank lines and '#' comments are skipped; blank
/// nodes are kept as IRIs of the form "_:label".
std::vector<Triple> parse_ntriples(std::string_view text);

KnowledgeBase load_ntriples(const std::filesystem::path& path, const KbSchema& schema);
KnowledgeBase load_ntriples(const std::filesystem::path& path, SchemaProfile profile);

std::string write_ntriples(const std::vector<Triple>& triples);

}  // namespace ikbqa
