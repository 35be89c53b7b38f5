#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hooklens::detail {

enum class Tok : std::uint8_t {
  Eof,
  Identifier,  // includes reserved words; see is_reserved_word
  PrivateName, // #name
  Punct,
  Number,
  String,
  Regex,
  TemplateFull,    // `...` without substitutions
  TemplateHead,    // `...${
  TemplateMiddle,  // }...${
  TemplateTail,    // }...`
  JsxText,
};

struct Token {
  Tok type = Tok::Eof;
  std::uint32_t start = 0;
  std::uint32_t end = 0;
  std::string_view text;
  bool newline_before = false;

  bool is(Tok t) const { return type == t; }
  bool punct(std::string_view p) const { return type == Tok::Punct && text == p; }
  bool ident(std::string_view w) const { return type == Tok::Identifier && text == w; }
};

struct SyntaxError : std::runtime_error {
  SyntaxError(std::uint32_t at, const std::string& msg) : std::runtime_error(msg), offset(at) {}
  std::uint32_t offset;
};

bool is_reserved_word(std::string_view word);

// On-demand scanner. Context-dependent tokens (regex, template continuation,
// JSX text, composite '>' operators) are produced by rescanning at the
// parser's request.
class Lexer {
 public:
  explicit Lexer(std::string_view src);

  Token next();
  std::uint32_t pos() const { return pos_; }
  void set_pos(std::uint32_t p) { pos_ = p; }
  std::string_view source() const { return src_; }

  Token rescan_regex(const Token& slash);
  Token rescan_template_continuation(const Token& rbrace);
  Token rescan_greater(const Token& gt);
  Token rescan_jsx_identifier(const Token& ident);
  Token rescan_jsx_string(const Token& str);
  // Scans JSX child text from the current position up to '{' or '<'.
  Token scan_jsx_text();
  // Token after '=' in a JSX attribute: quoted strings are raw (no escapes,
  // may span lines); anything else lexes normally.
  Token next_jsx_attr_value();
  // Next significant character without consuming anything.
  char peek_char();

 private:
  bool skip_trivia();  // returns true if a line terminator was crossed
  Token make(Tok type, std::uint32_t start, bool nl);
  Token scan_template_chars(std::uint32_t start, bool head, bool nl);
  void scan_string(char quote);
  void scan_number();
  [[noreturn]] void fail(const std::string& msg) const;

  std::string_view src_;
  std::uint32_t pos_ = 0;
};

}  // namespace hooklens::detail
