#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>

namespace ikbqa {

enum class TermKind : unsigned char { Iri, Literal, Variable };

/// An RDF term or a SPARQL variable.
///
/// `value()` holds the IRI for Iri terms, the lexical form for literals and
/// the bare name (no leading '?') for variables. A literal carries either a
/// language tag or a datatype IRI, never both.
class Term {
 public:
  Term() = default;

  static Term iri(std::string iri);
  static Term literal(std::string lexical, std::string lang = {}, std::string datatype = {});
  static Term variable(std::string name);

  TermKind kind() const { return kind_; }
  bool is_iri() const { return kind_ == TermKind::Iri; }
  bool is_literal() const { return kind_ == TermKind::Literal; }
  bool is_variable() const { return kind_ == TermKind::Variable; }

  const std::string& value() const { return value_; }
  const std::string& lang() const { return lang_; }
  const std::string& datatype() const { return datatype_; }

  /// N-Triples form: <iri>, "lex"@en, "lex"^^<dt>; variables as ?name.
  std::string to_ntriples() const;

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term&, const Term&) = default;

 private:
  TermKind kind_ = TermKind::Iri;
  std::string value_;
  std::string lang_;
  std::string datatype_;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  friend bool operator==(const Triple&, const Triple&) = default;
  friend std::strong_ordering operator<=>(const Triple&, const Triple&) = default;
};

bool is_valid_variable_name(std::string_view name);

/// Escapes a lexical form for use inside a double-quoted N-Triples/SPARQL literal.
std::string escape_literal(std::string_view text);

namespace xsd {
inline constexpr const char* kInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr const char* kDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr const char* kDouble = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr const char* kDateTime = "http://www.w3.org/2001/XMLSchema#dateTime";
inline constexpr const char* kDate = "http://www.w3.org/2001/XMLSchema#date";
inline constexpr const char* kString = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr const char* kBoolean = "http://www.w3.org/2001/XMLSchema#boolean";
}  // namespace xsd

inline constexpr const char* kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";

}  // namespace ikbqa

template <>
struct std::hash<ikbqa::Term> {
  std::size_t operator()(const ikbqa::Term& t) const noexcept {
    std::size_t h = std::hash<std::string>{}(t.value());
    h ^= std::hash<std::string>{}(t.lang()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h ^= std::hash<std::string>{}(t.datatype()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h ^ static_cast<std::size_t>(t.kind());
  }
};
