#include "ikbqa/action.hpp"

#include <array>
#include <cctype>

#include "ikbqa/text.hpp"

namespace ikbqa {

std::string_view tool_name(ActionKind kind) {
  switch (kind) {
    case ActionKind::SearchNodes: return "SearchNodes";
    case ActionKind::SearchGraphPatterns: return "SearchGraphPatterns";
    case ActionKind::ExecuteSPARQL: return "ExecuteSPARQL";
    case ActionKind::Done: return "Done";
  }
  return "Done";
}

namespace {

struct ToolSignature {
  ActionKind kind;
  std::string_view name;
  std::vector<std::string_view> params;
};

const std::array<ToolSignature, 4>& signatures() {
  static const std::array<ToolSignature, 4> s = {{
      {ActionKind::SearchNodes, "SearchNodes", {"name"}},
      {ActionKind::SearchGraphPatterns, "SearchGraphPatterns", {"sparql", "semantic"}},
      {ActionKind::ExecuteSPARQL, "ExecuteSPARQL", {"sparql"}},
      {ActionKind::Done, "Done", {}},
  }};
  return s;
}

std::string expects(const ToolSignature& sig) {
  std::string out = "tool " + std::string(sig.name) + " expects (";
  for (std::size_t i = 0; i < sig.params.size(); ++i) {
    if (i) out += ", ";
    out += sig.params[i];
  }
  return out + ")";
}

struct RawArg {
  std::string keyword;  // empty for positional
  std::string value;
};

struct SyntaxError {
  std::string message;
};

class CallParser {
 public:
  explicit CallParser(std::string_view s) : s_(s) {}

  // Returns false with error_ set on a syntax error.
  bool run(std::string& name, std::vector<RawArg>& args, bool& hasParens) {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(uc(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (pos_ == start || std::isdigit(uc(s_[start]))) return fail("expected a tool name at offset " + std::to_string(start));
    name = std::string(s_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ == s_.size()) {
      hasParens = false;
      return true;
    }
    if (s_[pos_] != '(') return fail("expected '(' at offset " + std::to_string(pos_));
    hasParens = true;
    ++pos_;
    skip_ws();
    if (peek() == ')') {
      ++pos_;
      return finish();
    }
    for (;;) {
      skip_ws();
      RawArg arg;
      if (pos_ < s_.size() && (std::isalpha(uc(s_[pos_])) || s_[pos_] == '_')) {
        const std::size_t kw = pos_;
        while (pos_ < s_.size() && (std::isalnum(uc(s_[pos_])) || s_[pos_] == '_')) ++pos_;
        arg.keyword = std::string(s_.substr(kw, pos_ - kw));
        skip_ws();
        if (peek() != '=') return fail("expected '=' after " + arg.keyword + " at offset " + std::to_string(pos_));
        ++pos_;
        skip_ws();
      }
      if (!string_literal(arg.value)) return false;
      args.push_back(std::move(arg));
      skip_ws();
      if (peek() == ',') {
        ++pos_;
        skip_ws();
        if (peek() == ')') {
          ++pos_;
          return finish();
        }
        continue;
      }
      if (peek() == ')') {
        ++pos_;
        return finish();
      }
      if (pos_ == s_.size()) return fail("missing ')' at offset " + std::to_string(pos_));
      return fail("expected ',' or ')' at offset " + std::to_string(pos_));
    }
  }

  const std::string& error() const { return error_; }

 private:
  static unsigned char uc(char c) { return static_cast<unsigned char>(c); }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(uc(s_[pos_]))) ++pos_;
  }
  bool fail(std::string msg) {
    error_ = std::move(msg);
    return false;
  }
  bool finish() {
    skip_ws();
    if (pos_ != s_.size()) return fail("unexpected text after ')' at offset " + std::to_string(pos_));
    return true;
  }
  bool malformed(std::size_t at) { return fail("malformed string literal at offset " + std::to_string(at)); }

  bool hex(std::size_t digits, char32_t& cp) {
    if (s_.size() - pos_ < digits) return false;
    cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      const char c = s_[pos_ + i];
      cp <<= 4;
      if (c >= '0' && c <= '9') cp |= static_cast<char32_t>(c - '0');
      else if (c >= 'a' && c <= 'f') cp |= static_cast<char32_t>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') cp |= static_cast<char32_t>(c - 'A' + 10);
      else return false;
    }
    pos_ += digits;
    return true;
  }

  bool string_literal(std::string& out) {
    const std::size_t at = pos_;
    const char q = peek();
    if (q != '"' && q != '\'') return malformed(at);
    const bool triple = s_.substr(pos_, 3) == std::string(3, q);
    pos_ += triple ? 3 : 1;
    for (;;) {
      if (pos_ >= s_.size()) return malformed(at);
      const char c = s_[pos_];
      if (c == q) {
        if (!triple) {
          ++pos_;
          return true;
        }
        if (s_.substr(pos_, 3) == std::string(3, q)) {
          pos_ += 3;
          return true;
        }
        out += c;
        ++pos_;
        continue;
      }
      if (c != '\\') {
        out += c;
        ++pos_;
        continue;
      }
      ++pos_;
      if (pos_ >= s_.size()) return malformed(at);
      const char e = s_[pos_++];
      char32_t cp = 0;
      switch (e) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        case '0': out += '\0'; break;
        case '\\': out += '\\'; break;
        case '\'': out += '\''; break;
        case '"': out += '"'; break;
        case '\n': break;  // line continuation
        case 'x':
          if (!hex(2, cp)) return malformed(at);
          append_utf8(out, cp);
          break;
        case 'u':
          if (!hex(4, cp)) return malformed(at);
          append_utf8(out, cp);
          break;
        case 'U':
          if (!hex(8, cp) || cp > 0x10FFFF) return malformed(at);
          append_utf8(out, cp);
          break;
        default:
          // unknown escapes keep the backslash, as Python does
          out += '\\';
          out += e;
      }
    }
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::string error_;
};

}  // namespace

ActionParse parse_action(std::string_view text) {
  ActionParse result;
  std::string name;
  std::vector<RawArg> raw;
  bool hasParens = false;
  CallParser parser(text);
  if (!parser.run(name, raw, hasParens)) {
    result.error = parser.error();
    return result;
  }
  const ToolSignature* sig = nullptr;
  for (const auto& s : signatures())
    if (s.name == name) sig = &s;
  if (!sig) {
    result.error = "unknown tool " + name;
    return result;
  }
  if (!hasParens && sig->kind != ActionKind::Done) {
    result.error = expects(*sig);
    return result;
  }
  std::vector<std::optional<std::string>> slots(sig->params.size());
  std::size_t positional = 0;
  bool sawKeyword = false;
  for (auto& a : raw) {
    if (a.keyword.empty()) {
      if (sawKeyword || positional >= slots.size()) {
        result.error = expects(*sig);
        return result;
      }
      slots[positional++] = std::move(a.value);
      continue;
    }
    sawKeyword = true;
    std::size_t idx = sig->params.size();
    for (std::size_t i = 0; i < sig->params.size(); ++i)
      if (sig->params[i] == a.keyword) idx = i;
    if (idx == sig->params.size()) {
      result.error = "unexpected argument " + a.keyword;
      return result;
    }
    if (slots[idx]) {
      result.error = expects(*sig);
      return result;
    }
    slots[idx] = std::move(a.value);
  }
  Action action;
  action.kind = sig->kind;
  for (auto& s : slots) {
    if (!s) {
      result.error = expects(*sig);
      return result;
    }
    action.args.push_back(std::move(*s));
  }
  result.action = std::move(action);
  return result;
}

namespace {

std::string escape_arg(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7F) {
          static const char* digits = "0123456789abcdef";
          out += "\\x";
          out += digits[(static_cast<unsigned char>(c) >> 4) & 0xF];
          out += digits[static_cast<unsigned char>(c) & 0xF];
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

}  // namespace

std::string serialize_action(const Action& action) {
  if (action.kind == ActionKind::Done) return "Done";
  std::string out(tool_name(action.kind));
  out += '(';
  for (std::size_t i = 0; i < action.args.size(); ++i) {
    if (i) out += ", ";
    if (action.kind == ActionKind::SearchGraphPatterns && i == 1) out += "semantic=";
    out += escape_arg(action.args[i]);
  }
  return out + ")";
}

}  // namespace ikbqa
