#include "ikbqa/term.hpp"

#include <stdexcept>

namespace ikbqa {

Term Term::iri(std::string iri) {
  Term t;
  t.kind_ = TermKind::Iri;
  t.value_ = std::move(iri);
  return t;
}

Term Term::literal(std::string lexical, std::string lang, std::string datatype) {
  if (!lang.empty() && !datatype.empty())
    throw std::invalid_argument("literal cannot carry both a language tag and a datatype");
  Term t;
  t.kind_ = TermKind::Literal;
  t.value_ = std::move(lexical);
  t.lang_ = std::move(lang);
  t.datatype_ = std::move(datatype);
  return t;
}

Term Term::variable(std::string name) {
  if (!is_valid_variable_name(name)) throw std::invalid_argument("invalid variable name: " + name);
  Term t;
  t.kind_ = TermKind::Variable;
  t.value_ = std::move(name);
  return t;
}

bool is_valid_variable_name(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name[0])) return false;
  for (char c : name.substr(1))
    if (!alpha(c) && !digit(c)) return false;
  return true;
}

std::string escape_literal(std::string_view text) {
  std::string out;
  out.reserve(text.size() + 2);
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Term::to_ntriples() const {
  switch (kind_) {
    case TermKind::Iri: return "<" + value_ + ">";
    case TermKind::Variable: return "?" + value_;
    case TermKind::Literal: {
      std::string out = "\"" + escape_literal(value_) + "\"";
      if (!lang_.empty()) out += "@" + lang_;
      else if (!datatype_.empty()) out += "^^<" + datatype_ + ">";
      return out;
    }
  }
  return {};
}

}  // namespace ikbqa
