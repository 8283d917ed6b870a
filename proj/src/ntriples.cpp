#include "ikbqa/ntriples.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "ikbqa/text.hpp"

namespace ikbqa {

namespace {

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t lineNo) : s_(line), line_(lineNo) {}

  Triple parse() {
    Triple t;
    t.subject = subject();
    t.predicate = iri_ref("predicate");
    t.object = object();
    skip_ws();
    expect('.');
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] != '#') fail("unexpected text after '.'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw LoadError(line_, msg); }

  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }

  void expect(char c) {
    if (pos_ >= s_.size() || s_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Term subject() {
    skip_ws();
    if (s_.substr(pos_, 2) == "_:") return blank();
    return iri_ref("subject");
  }

  Term object() {
    skip_ws();
    if (pos_ >= s_.size()) fail("missing object");
    if (s_[pos_] == '"') return literal();
    if (s_.substr(pos_, 2) == "_:") return blank();
    return iri_ref("object");
  }

  Term blank() {
    const auto start = pos_;
    pos_ += 2;
    while (pos_ < s_.size() && s_[pos_] != ' ' && s_[pos_] != '\t' && s_[pos_] != '.') ++pos_;
    if (pos_ == start + 2) fail("empty blank node label");
    return Term::iri(std::string(s_.substr(start, pos_ - start)));
  }

  Term iri_ref(const char* what) {
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != '<') fail(std::string("expected IRI for ") + what);
    ++pos_;
    std::string iri;
    while (pos_ < s_.size() && s_[pos_] != '>') {
      if (s_[pos_] == '\\') {
        iri += unescape();
        continue;
      }
      if (s_[pos_] == ' ') fail("space inside IRI");
      iri += s_[pos_++];
    }
    if (pos_ >= s_.size()) fail("unterminated IRI");
    ++pos_;
    if (iri.empty()) fail("empty IRI");
    return Term::iri(std::move(iri));
  }

  std::string unescape() {
    ++pos_;  // backslash
    if (pos_ >= s_.size()) fail("dangling escape");
    const char c = s_[pos_++];
    switch (c) {
      case 't': return "\t";
      case 'n': return "\n";
      case 'r': return "\r";
      case 'b': return "\b";
      case 'f': return "\f";
      case '"': return "\"";
      case '\'': return "'";
      case '\\': return "\\";
      case 'u':
      case 'U': {
        const std::size_t len = c == 'u' ? 4 : 8;
        if (pos_ + len > s_.size()) fail("truncated unicode escape");
        char32_t cp = 0;
        for (std::size_t i = 0; i < len; ++i) {
          const char h = s_[pos_ + i];
          cp <<= 4;
          if (h >= '0' && h <= '9') cp |= static_cast<char32_t>(h - '0');
          else if (h >= 'a' && h <= 'f') cp |= static_cast<char32_t>(h - 'a' + 10);
          else if (h >= 'A' && h <= 'F') cp |= static_cast<char32_t>(h - 'A' + 10);
          else fail("bad hex digit in unicode escape");
        }
        pos_ += len;
        std::string out;
        append_utf8(out, cp);
        return out;
      }
      default: fail(std::string("unknown escape \\") + c);
    }
  }

  Term literal() {
    ++pos_;  // opening quote
    std::string lex;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') {
        lex += unescape();
        continue;
      }
      lex += s_[pos_++];
    }
    if (pos_ >= s_.size()) fail("unterminated literal");
    ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '@') {
      const auto start = ++pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '-'))
        ++pos_;
      if (pos_ == start) fail("empty language tag");
      return Term::literal(std::move(lex), std::string(s_.substr(start, pos_ - start)));
    }
    if (s_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      auto dt = iri_ref("datatype");
      return Term::literal(std::move(lex), {}, dt.value());
    }
    return Term::literal(std::move(lex));
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<Triple> parse_ntriples(std::string_view text) {
  std::vector<Triple> out;
  std::size_t lineNo = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++lineNo;
    auto line = text.substr(start, end - start);
    std::size_t first = line.find_first_not_of(" \t\r");
    if (first != std::string_view::npos && line[first] != '#')
      out.push_back(LineParser(line, lineNo).parse());
    if (end == text.size()) break;
    start = end + 1;
  }
  return out;
}

KnowledgeBase load_ntriples(const std::filesystem::path& path, const KbSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return KnowledgeBase::from_triples(parse_ntriples(buf.str()), schema);
}

KnowledgeBase load_ntriples(const std::filesystem::path& path, SchemaProfile profile) {
  return load_ntriples(path, KbSchema::defaults(profile));
}

std::string write_ntriples(const std::vector<Triple>& triples) {
  std::string out;
  for (const auto& t : triples)
    out += t.subject.to_ntriples() + " " + t.predicate.to_ntriples() + " " + t.object.to_ntriples() + " .\n";
  return out;
}

}  // namespace ikbqa
