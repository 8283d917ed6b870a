#include "ikbqa/sparql.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <set>

#include "ikbqa/text.hpp"

namespace ikbqa {

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "=";
}

std::vector<std::string> SelectQuery::pattern_variables() const {
  std::vector<std::string> out;
  auto add = [&](const Term& t) {
    if (t.is_variable() && std::find(out.begin(), out.end(), t.value()) == out.end())
      out.push_back(t.value());
  };
  for (const auto& p : patterns) {
    add(p.subject);
    add(p.predicate);
    add(p.object);
  }
  return out;
}

std::vector<std::string> SelectQuery::output_variables() const {
  if (count) return {count->alias};
  if (selectAll) return pattern_variables();
  return projection;
}

namespace {

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

const std::set<std::string>& supported_keywords() {
  static const std::set<std::string> k = {"SELECT", "DISTINCT", "WHERE", "FILTER", "ORDER", "BY",
                                          "ASC",    "DESC",     "LIMIT", "OFFSET", "PREFIX", "COUNT",
                                          "AS"};
  return k;
}

const std::set<std::string>& unsupported_keywords() {
  static const std::set<std::string> k = {
      "OPTIONAL", "UNION",   "MINUS",    "GRAPH",     "BIND",         "VALUES",    "SERVICE",
      "GROUP",    "HAVING",  "CONSTRUCT", "ASK",      "DESCRIBE",     "INSERT",    "DELETE",
      "LOAD",     "CLEAR",   "DROP",     "CREATE",    "REDUCED",      "FROM",      "NAMED",
      "NOT",      "EXISTS",  "BASE",     "REGEX",     "STR",          "LANG",      "LANGMATCHES",
      "CONTAINS", "STRSTARTS", "STRENDS", "BOUND",    "ISIRI",        "ISURI",     "ISLITERAL",
      "ISBLANK",  "YEAR",    "MONTH",    "DAY",       "SUM",          "AVG",       "MIN",
      "MAX",      "SAMPLE",  "GROUP_CONCAT", "DATATYPE", "IF",        "COALESCE",  "UCASE",
      "LCASE",    "STRLEN",  "SUBSTR",   "CONCAT",    "NOW",          "ABS",       "ROUND"};
  return k;
}

bool is_reserved(std::string_view word) {
  const auto u = upper(word);
  return supported_keywords().count(u) || unsupported_keywords().count(u);
}

bool name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
}

bool is_bare_name(std::string_view s) {
  if (s.empty() || !name_start(s.front()) || s.back() == '.' || s.back() == '-') return false;
  for (char c : s)
    if (!name_char(c)) return false;
  if (s == "a" || s == "true" || s == "false") return false;
  return !is_reserved(s);
}

enum class Tok {
  End, Var, IriRef, PName, Name, String, Number, LangTag, DoubleCaret, LBrace, RBrace, LParen,
  RParen, Dot, Semi, Comma, Star, Op, And, Or, Bang, Slash, Pipe, Caret, Plus, Minus, LBracket,
  Other
};

struct Token {
  Tok kind = Tok::End;
  std::string text;    // identifier, IRI, string value, operator...
  std::string prefix;  // PName prefix
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_ws();
      Token t = next();
      out.push_back(t);
      if (t.kind == Tok::End) break;
    }
    return out;
  }

 private:
  [[noreturn]] void fail(std::size_t at, const std::string& msg) const { throw SparqlError(at, msg); }

  void skip_ws() {
    for (;;) {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
  }

  Token make(Tok k, std::size_t at, std::string text = {}) {
    Token t;
    t.kind = k;
    t.offset = at;
    t.text = std::move(text);
    return t;
  }

  bool looks_like_iriref() const {
    for (std::size_t i = pos_ + 1; i < s_.size(); ++i) {
      const char c = s_[i];
      if (c == '>') return i > pos_ + 1;
      if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '"' || c == '{' ||
          c == '}' || c == '\'' || c == '(' || c == ')')
        return false;
    }
    return false;
  }

  Token next() {
    const std::size_t at = pos_;
    if (pos_ >= s_.size()) return make(Tok::End, at);
    const char c = s_[pos_];
    switch (c) {
      case '{': ++pos_; return make(Tok::LBrace, at, "{");
      case '}': ++pos_; return make(Tok::RBrace, at, "}");
      case '(': ++pos_; return make(Tok::LParen, at, "(");
      case ')': ++pos_; return make(Tok::RParen, at, ")");
      case '[': ++pos_; return make(Tok::LBracket, at, "[");
      case '.': ++pos_; return make(Tok::Dot, at, ".");
      case ';': ++pos_; return make(Tok::Semi, at, ";");
      case ',': ++pos_; return make(Tok::Comma, at, ",");
      case '*': ++pos_; return make(Tok::Star, at, "*");
      case '/': ++pos_; return make(Tok::Slash, at, "/");
      case '=': ++pos_; return make(Tok::Op, at, "=");
      default: break;
    }
    if (c == '^') {
      if (s_.substr(pos_, 2) == "^^") {
        pos_ += 2;
        return make(Tok::DoubleCaret, at, "^^");
      }
      ++pos_;
      return make(Tok::Caret, at, "^");
    }
    if (c == '|') {
      if (s_.substr(pos_, 2) == "||") {
        pos_ += 2;
        return make(Tok::Or, at, "||");
      }
      ++pos_;
      return make(Tok::Pipe, at, "|");
    }
    if (c == '&') {
      if (s_.substr(pos_, 2) == "&&") {
        pos_ += 2;
        return make(Tok::And, at, "&&");
      }
      fail(at, "unexpected character '&'");
    }
    if (c == '!') {
      if (s_.substr(pos_, 2) == "!=") {
        pos_ += 2;
        return make(Tok::Op, at, "!=");
      }
      ++pos_;
      return make(Tok::Bang, at, "!");
    }
    if (c == '<') {
      if (looks_like_iriref()) {
        const auto close = s_.find('>', pos_);
        std::string iri(s_.substr(pos_ + 1, close - pos_ - 1));
        pos_ = close + 1;
        return make(Tok::IriRef, at, std::move(iri));
      }
      if (s_.substr(pos_, 2) == "<=") {
        pos_ += 2;
        return make(Tok::Op, at, "<=");
      }
      ++pos_;
      return make(Tok::Op, at, "<");
    }
    if (c == '>') {
      if (s_.substr(pos_, 2) == ">=") {
        pos_ += 2;
        return make(Tok::Op, at, ">=");
      }
      ++pos_;
      return make(Tok::Op, at, ">");
    }
    if (c == '?' || c == '$') {
      std::size_t i = pos_ + 1;
      while (i < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i])) || s_[i] == '_')) ++i;
      std::string name(s_.substr(pos_ + 1, i - pos_ - 1));
      if (!is_valid_variable_name(name)) {
        ++pos_;
        return make(Tok::Other, at, std::string(1, c));
      }
      pos_ = i;
      return make(Tok::Var, at, std::move(name));
    }
    if (c == '"' || c == '\'') return string_literal();
    if (c == '@') {
      std::size_t i = pos_ + 1;
      while (i < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i])) || s_[i] == '-')) ++i;
      if (i == pos_ + 1) fail(at, "empty language tag");
      std::string tag(s_.substr(pos_ + 1, i - pos_ - 1));
      pos_ = i;
      return make(Tok::LangTag, at, std::move(tag));
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '-' || c == '+') && pos_ + 1 < s_.size() &&
         (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '.'))) {
      return number();
    }
    if (c == '+') {
      ++pos_;
      return make(Tok::Plus, at, "+");
    }
    if (c == '-') {
      ++pos_;
      return make(Tok::Minus, at, "-");
    }
    if (name_start(c) || c == ':') return name_or_pname();
    ++pos_;
    return make(Tok::Other, at, std::string(1, c));
  }

  Token number() {
    const std::size_t at = pos_;
    std::size_t i = pos_;
    if (s_[i] == '-' || s_[i] == '+') ++i;
    bool dot = false, exp = false;
    while (i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i]))) ++i;
    if (i < s_.size() && s_[i] == '.' && i + 1 < s_.size() &&
        std::isdigit(static_cast<unsigned char>(s_[i + 1]))) {
      dot = true;
      ++i;
      while (i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i]))) ++i;
    }
    if (i < s_.size() && (s_[i] == 'e' || s_[i] == 'E')) {
      std::size_t j = i + 1;
      if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
      if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
        exp = true;
        i = j;
        while (i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i]))) ++i;
      }
    }
    Token t = make(Tok::Number, at, std::string(s_.substr(pos_, i - pos_)));
    t.prefix = exp ? xsd::kDouble : dot ? xsd::kDecimal : xsd::kInteger;
    pos_ = i;
    return t;
  }

  Token name_or_pname() {
    const std::size_t at = pos_;
    std::size_t i = pos_;
    while (i < s_.size() && name_char(s_[i])) ++i;
    if (i < s_.size() && s_[i] == ':') {
      std::string prefix(s_.substr(pos_, i - pos_));
      std::size_t j = i + 1;
      while (j < s_.size() && (name_char(s_[j]) || s_[j] == ':' || s_[j] == '%')) ++j;
      while (j > i + 1 && s_[j - 1] == '.') --j;
      Token t = make(Tok::PName, at, std::string(s_.substr(i + 1, j - i - 1)));
      t.prefix = std::move(prefix);
      pos_ = j;
      return t;
    }
    while (i > pos_ + 1 && s_[i - 1] == '.') --i;
    Token t = make(Tok::Name, at, std::string(s_.substr(pos_, i - pos_)));
    pos_ = i;
    return t;
  }

  Token string_literal() {
    const std::size_t at = pos_;
    const char q = s_[pos_];
    const bool triple = s_.substr(pos_, 3) == std::string(3, q);
    pos_ += triple ? 3 : 1;
    std::string value;
    for (;;) {
      if (pos_ >= s_.size()) fail(at, "unterminated string literal");
      const char c = s_[pos_];
      if (triple ? s_.substr(pos_, 3) == std::string(3, q) : c == q) {
        pos_ += triple ? 3 : 1;
        break;
      }
      if (!triple && c == '\n') fail(at, "unterminated string literal");
      if (c == '\\') {
        if (pos_ + 1 >= s_.size()) fail(pos_, "dangling escape");
        const char e = s_[pos_ + 1];
        pos_ += 2;
        switch (e) {
          case 'n': value += '\n'; break;
          case 't': value += '\t'; break;
          case 'r': value += '\r'; break;
          case 'b': value += '\b'; break;
          case 'f': value += '\f'; break;
          case '"': value += '"'; break;
          case '\'': value += '\''; break;
          case '\\': value += '\\'; break;
          case 'u':
          case 'U': {
            const std::size_t len = e == 'u' ? 4 : 8;
            if (pos_ + len > s_.size()) fail(pos_, "truncated unicode escape");
            char32_t cp = 0;
            for (std::size_t k = 0; k < len; ++k) {
              const char h = s_[pos_ + k];
              cp <<= 4;
              if (h >= '0' && h <= '9') cp |= static_cast<char32_t>(h - '0');
              else if (h >= 'a' && h <= 'f') cp |= static_cast<char32_t>(h - 'a' + 10);
              else if (h >= 'A' && h <= 'F') cp |= static_cast<char32_t>(h - 'A' + 10);
              else fail(pos_, "bad unicode escape");
            }
            pos_ += len;
            append_utf8(value, cp);
            break;
          }
          default: fail(pos_ - 2, std::string("unknown escape \\") + e);
        }
        continue;
      }
      value += c;
      ++pos_;
    }
    return make(Tok::String, at, std::move(value));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

const std::map<std::string, std::string>& builtin_prefixes() {
  static const std::map<std::string, std::string> p = {
      {"xsd", "http://www.w3.org/2001/XMLSchema#"},
      {"rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"},
      {"rdfs", "http://www.w3.org/2000/01/rdf-schema#"},
  };
  return p;
}

CompareOp parse_op(const std::string& s) {
  if (s == "=") return CompareOp::Eq;
  if (s == "!=") return CompareOp::Ne;
  if (s == "<") return CompareOp::Lt;
  if (s == "<=") return CompareOp::Le;
  if (s == ">") return CompareOp::Gt;
  return CompareOp::Ge;
}

CompareOp flip(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return CompareOp::Gt;
    case CompareOp::Le: return CompareOp::Ge;
    case CompareOp::Gt: return CompareOp::Lt;
    case CompareOp::Ge: return CompareOp::Le;
    default: return op;
  }
}

class Parser {
 public:
  explicit Parser(std::string_view text) : toks_(Lexer(text).run()) {}

  SelectQuery parse() {
    while (is_keyword("PREFIX")) prefix_decl();
    if (is_keyword("BASE")) unsupported("BASE");
    if (!is_keyword("SELECT")) {
      if (peek().kind == Tok::Name && unsupported_keywords().count(upper(peek().text)))
        unsupported(upper(peek().text));
      fail("expected SELECT");
    }
    advance();
    if (is_keyword("DISTINCT")) {
      advance();
      q_.distinct = true;
    } else if (is_keyword("REDUCED")) {
      unsupported("REDUCED");
    }
    projection();
    if (is_keyword("FROM")) unsupported("FROM");
    if (is_keyword("WHERE")) advance();
    expect(Tok::LBrace, "expected '{'");
    group();
    modifiers();
    if (peek().kind != Tok::End) {
      if (peek().kind == Tok::Name && unsupported_keywords().count(upper(peek().text)))
        unsupported(upper(peek().text));
      fail("unexpected trailing input '" + peek().text + "'");
    }
    validate();
    return std::move(q_);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& advance() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string& msg) const { throw SparqlError(peek().offset, msg); }
  [[noreturn]] void fail_at(std::size_t offset, const std::string& msg) const {
    throw SparqlError(offset, msg);
  }
  [[noreturn]] void unsupported(const std::string& what) const {
    fail("unsupported construct: " + what);
  }

  bool is_keyword(const char* kw) const {
    return peek().kind == Tok::Name && upper(peek().text) == kw;
  }

  void expect(Tok kind, const std::string& msg) {
    if (peek().kind != kind) fail(msg);
    advance();
  }

  void prefix_decl() {
    advance();
    if (peek().kind != Tok::PName || !peek().text.empty()) fail("expected prefix label");
    std::string label = advance().prefix;
    if (peek().kind != Tok::IriRef) fail("expected IRI after prefix label");
    q_.prefixes[label] = advance().text;
  }

  void projection() {
    if (peek().kind == Tok::Star) {
      advance();
      q_.selectAll = true;
      return;
    }
    if (peek().kind == Tok::LParen) {
      count_projection();
      if (peek().kind == Tok::Var || peek().kind == Tok::LParen)
        unsupported("mixed variable and aggregate projection");
      return;
    }
    while (peek().kind == Tok::Var) {
      varOffsets_.emplace_back(peek().text, peek().offset);
      q_.projection.push_back(advance().text);
    }
    if (q_.projection.empty()) fail("expected projection");
    if (peek().kind == Tok::LParen) unsupported("mixed variable and aggregate projection");
  }

  void count_projection() {
    advance();  // (
    if (!is_keyword("COUNT")) {
      if (peek().kind == Tok::Name) unsupported(upper(peek().text));
      fail("expected COUNT");
    }
    advance();
    expect(Tok::LParen, "expected '(' after COUNT");
    CountAggregate agg;
    if (is_keyword("DISTINCT")) {
      advance();
      agg.distinct = true;
    }
    if (peek().kind == Tok::Star) {
      advance();
    } else if (peek().kind == Tok::Var) {
      varOffsets_.emplace_back(peek().text, peek().offset);
      agg.variable = advance().text;
    } else {
      fail("expected variable or '*' in COUNT");
    }
    expect(Tok::RParen, "expected ')'");
    if (!is_keyword("AS")) fail("expected AS");
    advance();
    if (peek().kind != Tok::Var) fail("expected alias variable");
    agg.alias = advance().text;
    expect(Tok::RParen, "expected ')'");
    q_.count = std::move(agg);
  }

  void group() {
    for (;;) {
      const auto& t = peek();
      if (t.kind == Tok::RBrace) {
        advance();
        return;
      }
      if (t.kind == Tok::End) fail("unterminated group pattern");
      if (t.kind == Tok::Dot) {
        advance();
        continue;
      }
      if (t.kind == Tok::LBrace) unsupported("nested group pattern");
      if (t.kind == Tok::Name && upper(t.text) == "FILTER") {
        advance();
        filter();
        continue;
      }
      triples_same_subject();
    }
  }

  void triples_same_subject() {
    Term subject = term(Position::Subject);
    for (;;) {
      Term predicate = term(Position::Predicate);
      for (;;) {
        Term object = term(Position::Object);
        q_.patterns.push_back({subject, predicate, object});
        if (peek().kind == Tok::Comma) {
          advance();
          continue;
        }
        break;
      }
      if (peek().kind == Tok::Semi) {
        advance();
        while (peek().kind == Tok::Semi) advance();
        if (peek().kind == Tok::Dot || peek().kind == Tok::RBrace) break;
        continue;
      }
      break;
    }
    const auto k = peek().kind;
    if (k == Tok::Dot) {
      advance();
    } else if (k != Tok::RBrace && !(k == Tok::Name && upper(peek().text) == "FILTER")) {
      if (k == Tok::Name && unsupported_keywords().count(upper(peek().text)))
        unsupported(upper(peek().text));
      fail("expected '.' or '}' after triple pattern");
    }
  }

  enum class Position { Subject, Predicate, Object, FilterOperand };

  std::string expand(const Token& t) const {
    if (t.prefix == "_") unsupported("blank node");
    if (auto it = q_.prefixes.find(t.prefix); it != q_.prefixes.end()) return it->second + t.text;
    if (auto it = builtin_prefixes().find(t.prefix); it != builtin_prefixes().end())
      return it->second + t.text;
    fail_at(t.offset, "undeclared prefix: " + t.prefix);
  }

  Term term(Position where) {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Var:
        advance();
        return Term::variable(t.text);
      case Tok::IriRef: {
        advance();
        Term out = Term::iri(t.text);
        if (where == Position::Predicate) reject_path();
        return out;
      }
      case Tok::PName: {
        advance();
        Term out = Term::iri(expand(t));
        if (where == Position::Predicate) reject_path();
        return out;
      }
      case Tok::Name: {
        const auto u = upper(t.text);
        if (unsupported_keywords().count(u)) unsupported(u);
        if (supported_keywords().count(u)) fail("unexpected keyword " + u);
        advance();
        if (t.text == "a" && where == Position::Predicate) {
          reject_path();
          return Term::iri(kRdfType);
        }
        if ((t.text == "true" || t.text == "false") && where != Position::Predicate &&
            where != Position::Subject)
          return Term::literal(t.text, {}, xsd::kBoolean);
        if (where == Position::Predicate) reject_path();
        if (where == Position::FilterOperand && peek().kind == Tok::LParen) unsupported(u);
        return Term::iri(t.text);
      }
      case Tok::String: {
        if (where == Position::Subject || where == Position::Predicate)
          fail("literal not allowed in " +
               std::string(where == Position::Subject ? "subject" : "predicate") + " position");
        advance();
        if (peek().kind == Tok::LangTag) return Term::literal(t.text, advance().text);
        if (peek().kind == Tok::DoubleCaret) {
          advance();
          const Token& dt = peek();
          if (dt.kind == Tok::IriRef) {
            advance();
            return Term::literal(t.text, {}, dt.text);
          }
          if (dt.kind == Tok::PName) {
            advance();
            return Term::literal(t.text, {}, expand(dt));
          }
          fail("expected datatype IRI");
        }
        return Term::literal(t.text);
      }
      case Tok::Number: {
        if (where == Position::Subject || where == Position::Predicate)
          fail("literal not allowed in this position");
        advance();
        std::string lex = t.text;
        if (!lex.empty() && lex.front() == '+') lex.erase(0, 1);
        return Term::literal(lex, {}, t.prefix);
      }
      case Tok::LBracket: unsupported("blank node property list");
      case Tok::LParen:
        if (where != Position::FilterOperand) unsupported("RDF collection");
        break;
      case Tok::Caret: unsupported("property path");
      case Tok::Bang: unsupported("!");
      default: break;
    }
    fail("unexpected token '" + t.text + "'");
  }

  void reject_path() const {
    const auto k = peek().kind;
    if (k == Tok::Slash || k == Tok::Pipe || k == Tok::Caret || k == Tok::Star || k == Tok::Plus ||
        (k == Tok::Other && peek().text == "?"))
      unsupported("property path");
  }

  void filter() {
    if (is_keyword("NOT") || is_keyword("EXISTS")) unsupported(upper(peek().text));
    if (peek().kind == Tok::Name) unsupported(upper(peek().text));
    expect(Tok::LParen, "expected '(' after FILTER");
    conjunction();
    expect(Tok::RParen, "expected ')' to close FILTER");
  }

  void conjunction() {
    comparison();
    for (;;) {
      if (peek().kind == Tok::And) {
        advance();
        comparison();
        continue;
      }
      if (peek().kind == Tok::Or) unsupported("||");
      return;
    }
  }

  void comparison() {
    if (peek().kind == Tok::LParen) {
      advance();
      conjunction();
      expect(Tok::RParen, "expected ')'");
      return;
    }
    if (peek().kind == Tok::Bang) unsupported("!");
    const std::size_t at = peek().offset;
    Term lhs = term(Position::FilterOperand);
    if (peek().kind == Tok::Plus || peek().kind == Tok::Minus || peek().kind == Tok::Star ||
        peek().kind == Tok::Slash)
      unsupported("arithmetic expression");
    if (peek().kind != Tok::Op) fail("expected comparison operator");
    CompareOp op = parse_op(advance().text);
    Term rhs = term(Position::FilterOperand);
    if (peek().kind == Tok::Plus || peek().kind == Tok::Minus || peek().kind == Tok::Star ||
        peek().kind == Tok::Slash)
      unsupported("arithmetic expression");
    if (!lhs.is_variable()) {
      if (!rhs.is_variable()) fail_at(at, "filter must reference a variable");
      std::swap(lhs, rhs);
      op = flip(op);
    }
    q_.filters.push_back({op, std::move(lhs), std::move(rhs)});
  }

  void modifiers() {
    for (;;) {
      if (is_keyword("ORDER")) {
        if (q_.orderBy) fail("duplicate ORDER BY");
        advance();
        if (!is_keyword("BY")) fail("expected BY");
        advance();
        OrderKey key;
        if (is_keyword("ASC") || is_keyword("DESC")) {
          key.direction = is_keyword("DESC") ? SortDirection::Desc : SortDirection::Asc;
          advance();
          expect(Tok::LParen, "expected '('");
          if (peek().kind != Tok::Var) fail("expected variable in ORDER BY");
          orderOffset_ = peek().offset;
          key.variable = advance().text;
          expect(Tok::RParen, "expected ')'");
        } else if (peek().kind == Tok::Var) {
          orderOffset_ = peek().offset;
          key.variable = advance().text;
        } else {
          fail("expected ORDER BY key");
        }
        if (peek().kind == Tok::Var || is_keyword("ASC") || is_keyword("DESC"))
          unsupported("multiple ORDER BY keys");
        q_.orderBy = std::move(key);
        continue;
      }
      if (is_keyword("LIMIT") || is_keyword("OFFSET")) {
        const bool isLimit = is_keyword("LIMIT");
        advance();
        const Token& n = peek();
        if (n.kind != Tok::Number || n.prefix != xsd::kInteger || n.text.front() == '-')
          fail("expected non-negative integer");
        advance();
        const auto value = std::stoull(n.text);
        if (isLimit) {
          if (q_.limit) fail("duplicate LIMIT");
          q_.limit = value;
        } else {
          if (q_.offset) fail("duplicate OFFSET");
          q_.offset = value;
        }
        continue;
      }
      if (is_keyword("GROUP")) unsupported("GROUP BY");
      if (is_keyword("HAVING")) unsupported("HAVING");
      if (is_keyword("VALUES")) unsupported("VALUES");
      return;
    }
  }

  void validate() const {
    if (q_.patterns.empty()) fail_at(0, "query has no triple patterns");
    const auto vars = q_.pattern_variables();
    auto known = [&](const std::string& v) {
      return std::find(vars.begin(), vars.end(), v) != vars.end();
    };
    for (const auto& [name, offset] : varOffsets_)
      if (!known(name)) fail_at(offset, "variable ?" + name + " does not appear in any pattern");
    if (q_.orderBy && !known(q_.orderBy->variable))
      fail_at(orderOffset_, "variable ?" + q_.orderBy->variable + " does not appear in any pattern");
    if (q_.count && known(q_.count->alias))
      fail_at(0, "alias ?" + q_.count->alias + " collides with a pattern variable");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  SelectQuery q_;
  std::vector<std::pair<std::string, std::size_t>> varOffsets_;
  std::size_t orderOffset_ = 0;
};

}  // namespace

SelectQuery parse_sparql(std::string_view text) { return Parser(text).parse(); }

std::string sparql_term(const Term& term, const IriMapper& mapper) {
  switch (term.kind()) {
    case TermKind::Variable: return "?" + term.value();
    case TermKind::Iri: {
      const std::string iri = mapper ? mapper(term.value()) : term.value();
      if (is_bare_name(iri)) return iri;
      return "<" + iri + ">";
    }
    case TermKind::Literal: {
      std::string out = "\"" + escape_literal(term.value()) + "\"";
      if (!term.lang().empty()) out += "@" + term.lang();
      else if (!term.datatype().empty()) out += "^^<" + term.datatype() + ">";
      return out;
    }
  }
  return {};
}

std::string serialize_sparql(const SelectQuery& q, const IriMapper& mapper) {
  std::string out;
  for (const auto& [label, iri] : q.prefixes) out += "PREFIX " + label + ": <" + iri + ">\n";
  out += "SELECT ";
  if (q.distinct) out += "DISTINCT ";
  if (q.count) {
    out += "(COUNT(";
    if (q.count->distinct) out += "DISTINCT ";
    out += q.count->variable.empty() ? "*" : "?" + q.count->variable;
    out += ") AS ?" + q.count->alias + ")";
  } else if (q.selectAll) {
    out += "*";
  } else {
    for (std::size_t i = 0; i < q.projection.size(); ++i) {
      if (i) out += ' ';
      out += "?" + q.projection[i];
    }
  }
  out += " WHERE {";
  for (const auto& p : q.patterns)
    out += " " + sparql_term(p.subject, mapper) + " " + sparql_term(p.predicate, mapper) + " " +
           sparql_term(p.object, mapper) + " .";
  for (const auto& f : q.filters)
    out += " FILTER(" + sparql_term(f.lhs, mapper) + " " + std::string(to_string(f.op)) + " " +
           sparql_term(f.rhs, mapper) + ")";
  out += " }";
  if (q.orderBy)
    out += std::string(" ORDER BY ") + (q.orderBy->direction == SortDirection::Desc ? "DESC" : "ASC") +
           "(?" + q.orderBy->variable + ")";
  if (q.limit) out += " LIMIT " + std::to_string(*q.limit);
  if (q.offset) out += " OFFSET " + std::to_string(*q.offset);
  return out;
}

}  // namespace ikbqa
