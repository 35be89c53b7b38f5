#include "lexer.h"

#include <algorithm>
#include <array>

namespace hooklens::detail {
namespace {

bool ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}
bool ident_part(unsigned char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Longest first.
constexpr std::array<std::string_view, 48> kPunctuators = {
    ">>>=", "...", "===", "!==", "**=", "<<=", "&&=", "||=", "?\?=", "=>", "==", "!=",
    "<=",   "&&",  "||",  "??",  "?.",  "++",  "--",  "+=",  "-=",  "*=", "/=", "%=",
    "&=",   "|=",  "^=",  "**",  "<<",  "{",   "}",   "(",   ")",   "[",  "]",  ";",
    ",",    "<",   "+",   "-",   "*",   "/",   "%",   "&",   "|",   "^",  "!",  "~",
};
constexpr std::string_view kSinglePunct = "?:=.@>";

}  // namespace

bool is_reserved_word(std::string_view w) {
  static constexpr std::array<std::string_view, 38> kWords = {
      "break",  "case",    "catch",  "class",    "const",  "continue", "debugger", "default",
      "delete", "do",      "else",   "export",   "extends", "false",   "finally",  "for",
      "function", "if",    "import", "in",       "instanceof", "new",  "null",     "return",
      "super",  "switch",  "this",   "throw",    "true",   "try",      "typeof",   "var",
      "void",   "while",   "with",   "enum",     "let",    "yield"};
  return std::find(kWords.begin(), kWords.end(), w) != kWords.end();
}

Lexer::Lexer(std::string_view src) : src_(src) {
  if (src_.starts_with("#!")) {
    while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
  }
  // UTF-8 byte order mark.
  if (src_.starts_with("\xEF\xBB\xBF")) pos_ = 3;
}

void Lexer::fail(const std::string& msg) const { throw SyntaxError(pos_, msg); }

Token Lexer::make(Tok type, std::uint32_t start, bool nl) {
  Token t;
  t.type = type;
  t.start = start;
  t.end = pos_;
  t.text = src_.substr(start, pos_ - start);
  t.newline_before = nl;
  return t;
}

bool Lexer::skip_trivia() {
  bool nl = false;
  while (pos_ < src_.size()) {
    char c = src_[pos_];
    if (c == '\n') {
      nl = true;
      ++pos_;
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v') {
      ++pos_;
    } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
      while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
      auto close = src_.find("*/", pos_ + 2);
      if (close == std::string_view::npos) fail("unterminated comment");
      if (src_.substr(pos_, close - pos_).find('\n') != std::string_view::npos) nl = true;
      pos_ = static_cast<std::uint32_t>(close + 2);
    } else if (static_cast<unsigned char>(c) == 0xE2 && pos_ + 2 < src_.size() &&
               static_cast<unsigned char>(src_[pos_ + 1]) == 0x80 &&
               (static_cast<unsigned char>(src_[pos_ + 2]) == 0xA8 ||
                static_cast<unsigned char>(src_[pos_ + 2]) == 0xA9)) {
      nl = true;  // U+2028 / U+2029
      pos_ += 3;
    } else if (static_cast<unsigned char>(c) == 0xC2 && pos_ + 1 < src_.size() &&
               static_cast<unsigned char>(src_[pos_ + 1]) == 0xA0) {
      pos_ += 2;  // NBSP
    } else {
      break;
    }
  }
  return nl;
}

void Lexer::scan_string(char quote) {
  ++pos_;
  while (pos_ < src_.size()) {
    char c = src_[pos_];
    if (c == quote) {
      ++pos_;
      return;
    }
    if (c == '\\') {
      pos_ += 2;
      continue;
    }
    if (c == '\n') fail("unterminated string literal");
    ++pos_;
  }
  fail("unterminated string literal");
}

void Lexer::scan_number() {
  auto digits = [&](auto pred) {
    while (pos_ < src_.size() && (pred(src_[pos_]) || src_[pos_] == '_')) ++pos_;
  };
  if (src_[pos_] == '0' && pos_ + 1 < src_.size()) {
    char p = static_cast<char>(src_[pos_ + 1] | 0x20);
    if (p == 'x' || p == 'o' || p == 'b') {
      pos_ += 2;
      digits([](char c) { return is_digit(c) || ((c | 0x20) >= 'a' && (c | 0x20) <= 'f'); });
      if (pos_ < src_.size() && src_[pos_] == 'n') ++pos_;
      return;
    }
  }
  digits(is_digit);
  if (pos_ < src_.size() && src_[pos_] == 'n') {
    ++pos_;
    return;
  }
  if (pos_ < src_.size() && src_[pos_] == '.') {
    ++pos_;
    digits(is_digit);
  }
  if (pos_ < src_.size() && (src_[pos_] | 0x20) == 'e') {
    std::uint32_t save = pos_;
    ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
    if (pos_ < src_.size() && is_digit(src_[pos_])) {
      digits(is_digit);
    } else {
      pos_ = save;
    }
  }
  if (pos_ < src_.size() && ident_start(static_cast<unsigned char>(src_[pos_]))) {
    fail("identifier directly after number");
  }
}

Token Lexer::scan_template_chars(std::uint32_t start, bool head, bool nl) {
  // pos_ is just past the opening '`' or '}'.
  while (pos_ < src_.size()) {
    char c = src_[pos_];
    if (c == '\\') {
      pos_ += 2;
      continue;
    }
    if (c == '`') {
      ++pos_;
      return make(head ? Tok::TemplateFull : Tok::TemplateTail, start, nl);
    }
    if (c == '$' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '{') {
      pos_ += 2;
      return make(head ? Tok::TemplateHead : Tok::TemplateMiddle, start, nl);
    }
    ++pos_;
  }
  fail("unterminated template literal");
}

Token Lexer::next() {
  bool nl = skip_trivia();
  std::uint32_t start = pos_;
  if (pos_ >= src_.size()) return make(Tok::Eof, start, nl);

  auto c = static_cast<unsigned char>(src_[pos_]);
  if (ident_start(c) || c == '\\') {
    while (pos_ < src_.size()) {
      auto d = static_cast<unsigned char>(src_[pos_]);
      if (ident_part(d)) {
        // Stop before Unicode line/paragraph separators and NBSP.
        if (d == 0xE2 && pos_ + 2 < src_.size() && static_cast<unsigned char>(src_[pos_ + 1]) == 0x80 &&
            (static_cast<unsigned char>(src_[pos_ + 2]) & 0xFE) == 0xA8)
          break;
        if (d == 0xC2 && pos_ + 1 < src_.size() && static_cast<unsigned char>(src_[pos_ + 1]) == 0xA0) break;
        ++pos_;
      } else if (d == '\\' && pos_ + 1 < src_.size() && src_[pos_ + 1] == 'u') {
        pos_ += 2;
        if (pos_ < src_.size() && src_[pos_] == '{') {
          while (pos_ < src_.size() && src_[pos_] != '}') ++pos_;
          ++pos_;
        } else {
          pos_ += 4;
        }
      } else {
        break;
      }
    }
    pos_ = std::min<std::uint32_t>(pos_, static_cast<std::uint32_t>(src_.size()));
    return make(Tok::Identifier, start, nl);
  }
  if (is_digit(static_cast<char>(c)) ||
      (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
    scan_number();
    return make(Tok::Number, start, nl);
  }
  if (c == '"' || c == '\'') {
    scan_string(static_cast<char>(c));
    return make(Tok::String, start, nl);
  }
  if (c == '`') {
    ++pos_;
    return scan_template_chars(start, true, nl);
  }
  if (c == '#' && pos_ + 1 < src_.size() && ident_start(static_cast<unsigned char>(src_[pos_ + 1]))) {
    ++pos_;
    while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    return make(Tok::PrivateName, start, nl);
  }
  auto rest = src_.substr(pos_);
  for (auto p : kPunctuators) {
    if (rest.starts_with(p)) {
      // "?." followed by a digit is a conditional, not optional chaining.
      if (p == "?." && rest.size() > 2 && is_digit(rest[2])) continue;
      pos_ += static_cast<std::uint32_t>(p.size());
      return make(Tok::Punct, start, nl);
    }
  }
  if (kSinglePunct.find(static_cast<char>(c)) != std::string_view::npos) {
    ++pos_;
    return make(Tok::Punct, start, nl);
  }
  fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
}

Token Lexer::rescan_regex(const Token& slash) {
  pos_ = slash.start + 1;
  bool in_class = false;
  while (true) {
    if (pos_ >= src_.size() || src_[pos_] == '\n') fail("unterminated regular expression");
    char c = src_[pos_];
    if (c == '\\') {
      pos_ += 2;
      continue;
    }
    if (c == '[') in_class = true;
    if (c == ']') in_class = false;
    ++pos_;
    if (c == '/' && !in_class) break;
  }
  while (pos_ < src_.size() && ident_part(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  return make(Tok::Regex, slash.start, slash.newline_before);
}

Token Lexer::rescan_template_continuation(const Token& rbrace) {
  pos_ = rbrace.start + 1;
  return scan_template_chars(rbrace.start, false, rbrace.newline_before);
}

Token Lexer::rescan_greater(const Token& gt) {
  pos_ = gt.start;
  for (std::string_view p : {">>>=", ">>>", ">>=", ">>", ">="}) {
    if (src_.substr(pos_).starts_with(p)) {
      pos_ += static_cast<std::uint32_t>(p.size());
      return make(Tok::Punct, gt.start, gt.newline_before);
    }
  }
  pos_ = gt.end;
  return gt;
}

Token Lexer::rescan_jsx_identifier(const Token& ident) {
  pos_ = ident.end;
  while (pos_ < src_.size()) {
    auto d = static_cast<unsigned char>(src_[pos_]);
    if (ident_part(d) || d == '-') {
      ++pos_;
    } else {
      break;
    }
  }
  return make(Tok::Identifier, ident.start, ident.newline_before);
}

Token Lexer::rescan_jsx_string(const Token& str) {
  char quote = src_[str.start];
  auto close = src_.find(quote, str.start + 1);
  if (close == std::string_view::npos) fail("unterminated JSX attribute string");
  pos_ = static_cast<std::uint32_t>(close + 1);
  return make(Tok::String, str.start, str.newline_before);
}

Token Lexer::next_jsx_attr_value() {
  bool nl = skip_trivia();
  if (pos_ < src_.size() && (src_[pos_] == '"' || src_[pos_] == '\'')) {
    Token quote;
    quote.start = pos_;
    quote.newline_before = nl;
    return rescan_jsx_string(quote);
  }
  Token t = next();
  t.newline_before = t.newline_before || nl;
  return t;
}

char Lexer::peek_char() {
  std::uint32_t save = pos_;
  skip_trivia();
  char c = pos_ < src_.size() ? src_[pos_] : '\0';
  pos_ = save;
  return c;
}

Token Lexer::scan_jsx_text() {
  std::uint32_t start = pos_;
  while (pos_ < src_.size() && src_[pos_] != '{' && src_[pos_] != '<') ++pos_;
  if (pos_ >= src_.size()) fail("unterminated JSX contents");
  return make(Tok::JsxText, start, false);
}

}  // namespace hooklens::detail
