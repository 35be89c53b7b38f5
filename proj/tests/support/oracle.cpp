#include "oracle.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>

namespace oracle {

// ---------------------------------------------------------------- lexer

namespace {

constexpr std::string_view kPunct[] = {
    "...", "===", "!==", "**=", "=>", "==", "!=", "<=", ">=", "&&", "||", "??", "?.", "++", "--", "+=", "-=",
    "*=",  "/=",  "**",  "{",   "}",  "(",  ")",  "[",  "]",  ";",  ",",  "<",  ">",  "+",  "-",  "*",  "/",
    "%",   "&",   "|",   "^",   "!",  "~",  "?",  ":",  "=",  ".",  "@",  "#"};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }
bool space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

enum class Mode { Code, Tag, Children, TemplateBody };

struct Frame {
  Mode mode;
  int depth = 0;
  std::string tag;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Lexed run() {
    frames_.push_back({Mode::Code});
    while (ok_ && i_ < s_.size()) {
      switch (frames_.back().mode) {
        case Mode::Code: code(); break;
        case Mode::Tag: tag(); break;
        case Mode::Children: children(); break;
        case Mode::TemplateBody: template_body(); break;
      }
    }
    if (ok_ && (frames_.size() != 1 || frames_[0].depth != 0)) fail("unexpected end of file");
    return {std::move(out_), ok_, error_};
  }

 private:
  void fail(std::string why) {
    if (ok_) error_ = std::move(why) + " at " + std::to_string(i_);
    ok_ = false;
  }

  void emit(Tok k, std::size_t b, std::size_t e) { out_.push_back({k, std::string(s_.substr(b, e - b)), b, e}); }
  void emit_text(Tok k, std::string text, std::size_t b, std::size_t e) { out_.push_back({k, std::move(text), b, e}); }

  bool at(std::string_view lit) const { return s_.substr(i_, lit.size()) == lit; }

  bool jsx_allowed() const {
    if (out_.empty()) return true;
    const Token& p = out_.back();
    if (p.kind == Tok::Ident) return p.text == "return";
    if (p.kind != Tok::Punct) return false;
    static const std::set<std::string> ok = {"(", ",", "=", "=>", "?", ":", "&&", "||", "[", "{", "}", ";", "!", "??"};
    return ok.count(p.text) > 0;
  }

  void string_literal() {
    char q = s_[i_];
    std::size_t b = i_++;
    while (i_ < s_.size() && s_[i_] != q) {
      if (s_[i_] == '\\') ++i_;
      if (s_[i_] == '\n' && frames_.back().mode == Mode::Code) return fail("unterminated string");
      ++i_;
    }
    if (i_ >= s_.size()) return fail("unterminated string");
    ++i_;
    emit(Tok::String, b, i_);
  }

  void open_tag() {
    // at '<' followed by a name or '>'
    std::size_t b = i_++;
    if (i_ < s_.size() && s_[i_] == '>') {
      ++i_;
      emit_text(Tok::JsxOpen, "", b, i_);
      emit_text(Tok::JsxOpenEnd, ">", i_ - 1, i_);
      frames_.push_back({Mode::Children, 0, ""});
      return;
    }
    std::size_t nb = i_;
    while (i_ < s_.size() && (ident_char(s_[i_]) || s_[i_] == '.' || s_[i_] == '-' || s_[i_] == ':')) ++i_;
    emit_text(Tok::JsxOpen, std::string(s_.substr(nb, i_ - nb)), b, i_);
    frames_.push_back({Mode::Tag, 0, std::string(s_.substr(nb, i_ - nb))});
  }

  void skip_comment_or_space() {
    while (i_ < s_.size()) {
      if (space(s_[i_])) {
        ++i_;
      } else if (at("//")) {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else if (at("/*")) {
        auto e = s_.find("*/", i_ + 2);
        if (e == std::string_view::npos) return fail("unterminated comment");
        i_ = e + 2;
      } else {
        return;
      }
    }
  }

  void code() {
    skip_comment_or_space();
    if (!ok_ || i_ >= s_.size()) return;
    char c = s_[i_];
    std::size_t b = i_;
    if (ident_start(c)) {
      while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
      return emit(Tok::Ident, b, i_);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i_ < s_.size() && (ident_char(s_[i_]) || s_[i_] == '.')) ++i_;
      return emit(Tok::Number, b, i_);
    }
    if (c == '"' || c == '\'') return string_literal();
    if (c == '`') {
      ++i_;
      emit(Tok::Template, b, i_);
      frames_.push_back({Mode::TemplateBody});
      return;
    }
    if (c == '<' && jsx_allowed() && i_ + 1 < s_.size() && (ident_start(s_[i_ + 1]) || s_[i_ + 1] == '>')) {
      return open_tag();
    }
    if (c == '{') {
      frames_.back().depth++;
      ++i_;
      return emit(Tok::Punct, b, i_);
    }
    if (c == '}') {
      ++i_;
      emit(Tok::Punct, b, i_);
      if (frames_.back().depth > 0) {
        frames_.back().depth--;
      } else if (frames_.size() > 1) {
        frames_.pop_back();
      } else {
        fail("unbalanced '}'");
      }
      return;
    }
    for (auto p : kPunct) {
      if (at(p)) {
        i_ += p.size();
        return emit(Tok::Punct, b, i_);
      }
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  void template_body() {
    std::size_t b = i_;
    while (i_ < s_.size()) {
      if (s_[i_] == '\\') {
        i_ += 2;
      } else if (s_[i_] == '`') {
        ++i_;
        emit(Tok::Template, b, i_);
        frames_.pop_back();
        return;
      } else if (at("${")) {
        emit(Tok::Template, b, i_);
        std::size_t p = i_;
        i_ += 2;
        emit(Tok::Punct, p, i_);
        frames_.push_back({Mode::Code});
        return;
      } else {
        ++i_;
      }
    }
    fail("unterminated template");
  }

  void tag() {
    skip_comment_or_space();
    if (!ok_ || i_ >= s_.size()) return;
    std::size_t b = i_;
    char c = s_[i_];
    if (at("/>")) {
      i_ += 2;
      emit(Tok::JsxSelfClose, b, i_);
      frames_.pop_back();
    } else if (c == '>') {
      ++i_;
      emit(Tok::JsxOpenEnd, b, i_);
      frames_.back().mode = Mode::Children;
    } else if (c == '{') {
      ++i_;
      emit(Tok::Punct, b, i_);
      frames_.push_back({Mode::Code});
    } else if (c == '"' || c == '\'') {
      string_literal();
    } else if (c == '=') {
      ++i_;
      emit(Tok::Punct, b, i_);
    } else if (ident_start(c)) {
      while (i_ < s_.size() && (ident_char(s_[i_]) || s_[i_] == '-' || s_[i_] == ':')) ++i_;
      emit(Tok::JsxAttr, b, i_);
    } else {
      fail("bad tag content");
    }
  }

  void children() {
    std::size_t b = i_;
    if (s_[i_] == '{') {
      ++i_;
      emit(Tok::Punct, b, i_);
      frames_.push_back({Mode::Code});
      return;
    }
    if (at("</")) {
      i_ += 2;
      auto e = s_.find('>', i_);
      if (e == std::string_view::npos) return fail("unterminated closing tag");
      std::string name(s_.substr(i_, e - i_));
      name.erase(std::remove_if(name.begin(), name.end(), space), name.end());
      i_ = e + 1;
      if (name != frames_.back().tag) return fail("mismatched closing tag " + name);
      emit_text(Tok::JsxClose, name, b, i_);
      frames_.pop_back();
      return;
    }
    if (s_[i_] == '<') {
      if (i_ + 1 < s_.size() && (ident_start(s_[i_ + 1]) || s_[i_ + 1] == '>')) return open_tag();
      return fail("bad '<' in JSX text");
    }
    while (i_ < s_.size() && s_[i_] != '{' && s_[i_] != '<') ++i_;
    std::string_view text = s_.substr(b, i_ - b);
    if (std::any_of(text.begin(), text.end(), [](char ch) { return !space(ch); })) emit(Tok::JsxText, b, i_);
  }

  std::string_view s_;
  std::size_t i_ = 0;
  std::vector<Frame> frames_;
  std::vector<Token> out_;
  bool ok_ = true;
  std::string error_;
};

}  // namespace

Lexed lex(std::string_view src) { return Lexer(src).run(); }

bool is_reserved(std::string_view w) {
  static const std::set<std::string_view> words = {
      "break",  "case",   "catch", "class", "const",  "continue", "debugger", "default", "delete", "do",
      "else",   "export", "extends", "false", "finally", "for",  "function", "if",      "import", "in",
      "instanceof", "new", "null", "return", "super", "switch", "this", "throw", "true", "try", "typeof",
      "var", "void", "while", "with", "let", "static", "yield", "await", "async", "of", "from", "as", "undefined"};
  return words.count(w) > 0;
}

// ---------------------------------------------------------------- model

namespace {

enum class TK { StateValue, StateSetter, Prop };

struct Target {
  TK kind;
  int index;
  friend bool operator==(const Target&, const Target&) = default;
};

struct Prop {
  std::string key;
  std::string local;
  bool rest = false;
  bool implicit = false;
};

struct State {
  std::string value;
  std::string setter;
};

struct Attr {
  std::string name;
  std::optional<Target> source;
};

struct Spread {
  enum Kind { Rest, PropsObj, Other } kind = Other;
  std::optional<Target> source;
};

struct Site {
  std::string child;
  std::vector<Attr> attrs;
  std::vector<Spread> spreads;
};

struct Region {
  std::string name;
  std::size_t begin, end;
};

struct Comp {
  std::string name;
  std::string file;
  enum { None, Destructured, Object } params = None;
  std::string props_name;
  std::vector<Prop> props;
  std::vector<State> states;
  std::map<std::string, Target> aliases;
  bool open = false;
  std::vector<Site> sites;
  std::vector<std::vector<Target>> effects;  // called targets, in order
  std::vector<Counts> state_counts;
  std::vector<Counts> prop_counts;
  std::vector<Region> shadows;

  int find_prop(const std::string& key) const {
    for (std::size_t i = 0; i < props.size(); ++i) {
      if (props[i].key == key) return static_cast<int>(i);
    }
    return -1;
  }
  int rest() const { return find_prop("...rest"); }
  std::string label(const Target& t) const {
    if (t.kind == TK::Prop) return name + ".prop:" + props[t.index].key;
    return name + ".state:" + states[t.index].value;
  }
};

bool upper(const std::string& s) { return !s.empty() && std::isupper(static_cast<unsigned char>(s[0])); }

class FileScan {
 public:
  FileScan(std::string path, std::vector<Token> toks) : path_(std::move(path)), t_(std::move(toks)) {}

  bool match_brackets() {
    match_.assign(t_.size(), -1);
    std::vector<std::size_t> st;
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (t_[i].kind != Tok::Punct) continue;
      const std::string& x = t_[i].text;
      if (x == "(" || x == "[" || x == "{" || x == "${") {
        st.push_back(i);
      } else if (x == ")" || x == "]" || x == "}") {
        if (st.empty()) return false;
        const std::string& o = t_[st.back()].text;
        bool pair = (x == ")" && o == "(") || (x == "]" && o == "[") || (x == "}" && (o == "{" || o == "${"));
        if (!pair) return false;
        match_[st.back()] = static_cast<long>(i);
        match_[i] = static_cast<long>(st.back());
        st.pop_back();
      }
    }
    return st.empty();
  }

  bool has_jsx() const {
    return std::any_of(t_.begin(), t_.end(), [](const Token& k) { return k.kind == Tok::JsxOpen; });
  }

  std::vector<Comp> components() {
    std::vector<Comp> out;
    std::size_t i = 0;
    while (i < t_.size()) {
      std::size_t j = i;
      while (j < t_.size() && is(j, "export")) ++j;
      if (is(j, "default")) ++j;
      if (auto c = try_component(j, i)) {
        out.push_back(std::move(*c));
        continue;
      }
      i = skip(i);
    }
    return out;
  }

 private:
  bool is(std::size_t i, std::string_view text) const {
    return i < t_.size() && (t_[i].kind == Tok::Ident || t_[i].kind == Tok::Punct) && t_[i].text == text;
  }
  bool ident(std::size_t i) const { return i < t_.size() && t_[i].kind == Tok::Ident && !is_reserved(t_[i].text); }
  std::size_t close(std::size_t i) const { return static_cast<std::size_t>(match_[i]); }
  std::size_t skip(std::size_t i) const {
    if (t_[i].kind == Tok::Punct && match_[i] > static_cast<long>(i)) return close(i) + 1;
    return i + 1;
  }

  // Component at j (after export/default); on success `next` moves past it.
  std::optional<Comp> try_component(std::size_t j, std::size_t& next) {
    std::string name;
    std::size_t pb = 0, pe = 0;  // inside the parentheses
    std::size_t bb = 0, be = 0;  // body tokens
    bool single_param = false;
    if (is(j, "function") && ident(j + 1) && is(j + 2, "(")) {
      name = t_[j + 1].text;
      pb = j + 3;
      pe = close(j + 2);
      if (!is(pe + 1, "{")) return std::nullopt;
      bb = pe + 2;
      be = close(pe + 1);
      next = be + 1;
    } else if ((is(j, "const") || is(j, "let")) && ident(j + 1) && is(j + 2, "=")) {
      name = t_[j + 1].text;
      std::size_t k = j + 3;
      std::vector<std::size_t> wrappers;  // open parens of memo(...) / forwardRef(...)
      while (true) {
        std::size_t w = k;
        if (is(w, "React") && is(w + 1, ".")) w += 2;
        if ((is(w, "memo") || is(w, "forwardRef")) && is(w + 1, "(")) {
          wrappers.push_back(w + 1);
          k = w + 2;
        } else {
          break;
        }
      }
      if (is(k, "function")) {
        ++k;
        if (ident(k)) ++k;
        if (!is(k, "(")) return std::nullopt;
        pb = k + 1;
        pe = close(k);
        if (!is(pe + 1, "{")) return std::nullopt;
        bb = pe + 2;
        be = close(pe + 1);
      } else {
        if (is(k, "(")) {
          pb = k + 1;
          pe = close(k);
        } else if (ident(k)) {
          pb = k;
          pe = k + 1;
          single_param = true;
        } else {
          return std::nullopt;
        }
        std::size_t arrow = single_param ? pe : pe + 1;
        if (!is(arrow, "=>")) return std::nullopt;
        if (is(arrow + 1, "{")) {
          bb = arrow + 2;
          be = close(arrow + 1);
        } else {
          bb = arrow + 1;
          be = expression_end(bb, t_.size());
        }
      }
      next = wrappers.empty() ? be + 1 : close(wrappers.front()) + 1;
    } else {
      return std::nullopt;
    }
    if (!upper(name)) return std::nullopt;
    bool jsx = false;
    for (std::size_t k = bb; k < be; ++k) jsx |= t_[k].kind == Tok::JsxOpen;
    if (!jsx) return std::nullopt;
    Comp c;
    c.name = name;
    c.file = path_;
    parse_params(c, pb, pe);
    analyze_body(c, bb, be);
    return c;
  }

  // End of an expression starting at b: first `,` or `;` at depth zero, or
  // the bracket that closes the enclosing group.
  std::size_t expression_end(std::size_t b, std::size_t limit) const {
    std::size_t k = b;
    while (k < limit) {
      const Token& x = t_[k];
      if (x.kind == Tok::Punct) {
        if (x.text == "," || x.text == ";") return k;
        if (x.text == ")" || x.text == "]" || x.text == "}") return k;
        if (match_[k] > static_cast<long>(k)) {
          k = close(k) + 1;
          continue;
        }
      }
      ++k;
    }
    return limit;
  }

  // Binding names of a destructuring pattern or a parameter list in [b, e).
  void pattern_bindings(std::size_t b, std::size_t e, std::vector<std::size_t>& out) const {
    std::size_t k = b;
    while (k < e) {
      std::size_t entry_end = k;
      while (entry_end < e && !is(entry_end, ",")) entry_end = skip(entry_end);
      std::size_t x = k;
      if (is(x, "...")) ++x;
      if (ident(x) && is(x + 1, ":")) x += 2;  // key: target
      if (is(x, "{") || is(x, "[")) {
        pattern_bindings(x + 1, close(x), out);
      } else if (ident(x)) {
        out.push_back(x);
      }
      k = entry_end + 1;
    }
  }

  void parse_params(Comp& c, std::size_t pb, std::size_t pe) {
    if (pb >= pe) return;
    if (ident(pb) && pe == pb + 1) {
      c.params = Comp::Object;
      c.props_name = t_[pb].text;
      return;
    }
    if (!is(pb, "{")) return;
    c.params = Comp::Destructured;
    std::size_t e = close(pb);
    std::size_t k = pb + 1;
    while (k < e) {
      std::size_t entry_end = k;
      while (entry_end < e && !is(entry_end, ",")) entry_end = skip(entry_end);
      if (is(k, "...") && ident(k + 1)) {
        c.props.push_back({"...rest", t_[k + 1].text, true});
        decl_.insert(k + 1);
      } else if (ident(k) && is(k + 1, ":") && ident(k + 2)) {
        c.props.push_back({t_[k].text, t_[k + 2].text});
        decl_.insert(k + 2);
      } else if (ident(k)) {
        c.props.push_back({t_[k].text, t_[k].text});
        decl_.insert(k);
      }
      k = entry_end + 1;
    }
  }

  bool statement_start(std::size_t k, std::size_t bb) const {
    return k == bb || is(k - 1, ";") || is(k - 1, "}");
  }

  bool is_hook(std::size_t k, std::string_view hook, std::size_t& open) const {
    std::size_t x = k;
    if (is(x, "React") && is(x + 1, ".")) x += 2;
    if (is(x, hook) && is(x + 1, "(")) {
      open = x + 1;
      return true;
    }
    return false;
  }

  std::optional<Target> direct(const Comp& c, const std::string& n) const {
    for (std::size_t i = 0; i < c.states.size(); ++i) {
      if (c.states[i].value == n) return Target{TK::StateValue, int(i)};
      if (c.states[i].setter == n) return Target{TK::StateSetter, int(i)};
    }
    for (std::size_t i = 0; i < c.props.size(); ++i) {
      if (c.props[i].local == n) return Target{TK::Prop, int(i)};
    }
    return std::nullopt;
  }

  bool shadowed(const Comp& c, std::size_t k) const {
    for (const auto& r : c.shadows) {
      if (r.name == t_[k].text && r.begin <= k && k < r.end) return true;
    }
    return false;
  }

  bool property_position(std::size_t k) const {
    if (k > 0 && (is(k - 1, ".") || is(k - 1, "?."))) return true;
    return is(k + 1, ":") && k > 0 && (is(k - 1, "{") || is(k - 1, ","));
  }

  // What the identifier at k designates, if a state, setter or prop.
  std::optional<Target> resolve(Comp& c, std::size_t k) {
    if (!ident(k) || decl_.count(k) || consumed_.count(k) || property_position(k) || shadowed(c, k)) {
      return std::nullopt;
    }
    const std::string& n = t_[k].text;
    if (c.params == Comp::Object && n == c.props_name) {
      if (is(k + 1, ".") && ident(k + 2)) {
        int p = c.find_prop(t_[k + 2].text);
        if (p < 0) {
          c.props.push_back({t_[k + 2].text, ""});
          c.prop_counts.emplace_back();
          p = static_cast<int>(c.props.size()) - 1;
        }
        return Target{TK::Prop, p};
      }
      return std::nullopt;
    }
    if (auto a = c.aliases.find(n); a != c.aliases.end()) return a->second;
    return direct(c, n);
  }

  void collect_shadows(Comp& c, std::size_t bb, std::size_t be) {
    for (std::size_t k = bb; k < be; ++k) {
      if (is(k, "=>")) {
        std::vector<std::size_t> names;
        if (is(k - 1, ")")) {
          pattern_bindings(close(k - 1) + 1, k - 1, names);
        } else if (ident(k - 1)) {
          names.push_back(k - 1);
        }
        std::size_t end = is(k + 1, "{") ? close(k + 1) : expression_end(k + 1, be);
        for (auto n : names) {
          decl_.insert(n);
          c.shadows.push_back({t_[n].text, k + 1, end});
        }
      } else if (is(k, "function") && k + 1 < be) {
        std::size_t p = ident(k + 1) ? k + 2 : k + 1;
        if (!is(p, "(") || !is(close(p) + 1, "{")) continue;
        std::vector<std::size_t> names;
        pattern_bindings(p + 1, close(p), names);
        for (auto n : names) {
          decl_.insert(n);
          c.shadows.push_back({t_[n].text, close(p) + 1, close(close(p) + 1)});
        }
      } else if ((is(k, "const") || is(k, "let") || is(k, "var")) && !top_level_.count(k)) {
        std::vector<std::size_t> names;
        if (is(k + 1, "{") || is(k + 1, "[")) {
          pattern_bindings(k + 2, close(k + 1), names);
        } else if (ident(k + 1)) {
          names.push_back(k + 1);
        }
        // innermost enclosing block
        std::size_t end = be;
        for (std::size_t o = k; o-- > bb;) {
          if (is(o, "{") && close(o) > k) {
            end = close(o);
            break;
          }
        }
        for (auto n : names) {
          decl_.insert(n);
          c.shadows.push_back({t_[n].text, n + 1, end});
        }
      }
    }
  }

  void top_level_statements(Comp& c, std::size_t bb, std::size_t be, std::vector<std::pair<std::size_t, std::size_t>>& effects) {
    std::size_t k = bb;
    while (k < be) {
      std::size_t open = 0;
      if (!statement_start(k, bb)) {
        k = skip(k);
        continue;
      }
      if ((is(k, "const") || is(k, "let")) && is(k + 1, "[")) {
        std::size_t rb = close(k + 1);
        if (is(rb + 1, "=") && is_hook(rb + 2, "useState", open)) {
          top_level_.insert(k);
          State s;
          std::size_t x = k + 2;
          if (ident(x)) {
            s.value = t_[x].text;
            decl_.insert(x);
            ++x;
          }
          if (is(x, ",") && ident(x + 1)) {
            s.setter = t_[x + 1].text;
            decl_.insert(x + 1);
          }
          c.states.push_back(s);
          c.state_counts.emplace_back();
          k = skip(k + 1);
          continue;
        }
      }
      if ((is(k, "const") || is(k, "let")) && ident(k + 1) && is(k + 2, "=") && ident(k + 3) &&
          (is(k + 4, ";") || k + 4 >= be)) {
        std::string src = t_[k + 3].text;
        if (auto t = direct(c, src)) {
          top_level_.insert(k);
          c.aliases[t_[k + 1].text] = *t;
          decl_.insert(k + 1);
          consumed_.insert(k + 3);
          k += 4;
          continue;
        }
      }
      if ((is(k, "const") || is(k, "let")) && is(k + 1, "{") && is(close(k + 1) + 1, "=") &&
          c.params == Comp::Object && is(close(k + 1) + 2, c.props_name) && ident(close(k + 1) + 2)) {
        top_level_.insert(k);
        std::size_t e = close(k + 1);
        std::size_t x = k + 2;
        while (x < e) {
          std::size_t entry_end = x;
          while (entry_end < e && !is(entry_end, ",")) entry_end = skip(entry_end);
          std::string key, local;
          if (ident(x) && is(x + 1, ":") && ident(x + 2)) {
            key = t_[x].text;
            local = t_[x + 2].text;
            decl_.insert(x + 2);
          } else if (ident(x)) {
            key = local = t_[x].text;
            decl_.insert(x);
          }
          if (!key.empty()) {
            int p = c.find_prop(key);
            if (p < 0) {
              c.props.push_back({key, local});
              c.prop_counts.emplace_back();
            } else {
              c.props[p].local = local;
            }
          }
          x = entry_end + 1;
        }
        consumed_.insert(e + 2);
        k = e + 3;
        continue;
      }
      if (is(k, "const") || is(k, "let") || is(k, "var")) top_level_.insert(k);
      if (is_hook(k, "useEffect", open)) {
        std::size_t e = close(open);
        std::size_t arg_end = open + 1;
        while (arg_end < e && !is(arg_end, ",")) arg_end = skip(arg_end);
        effects.emplace_back(open + 1, arg_end);
      }
      k = skip(k);
    }
  }

  // Root identifier of an attribute value, when it forwards one.
  std::optional<std::size_t> attr_root(std::size_t b, std::size_t e) const {
    auto member_chain_end = [&](std::size_t x) {
      if (!ident(x)) return x;
      ++x;
      while (x < e) {
        if ((is(x, ".") || is(x, "?.")) && x + 1 < e && t_[x + 1].kind == Tok::Ident) {
          x += 2;
        } else if (is(x, "[")) {
          x = close(x) + 1;
        } else {
          break;
        }
      }
      return x;
    };
    if (ident(b) && member_chain_end(b) == e) return b;
    // callback wrapping: params => callee(...)  or  params => { callee(...); }
    std::size_t arrow = b;
    if (is(b, "(")) {
      arrow = close(b) + 1;
    } else if (ident(b)) {
      arrow = b + 1;
    }
    if (!is(arrow, "=>")) return std::nullopt;
    std::size_t s = arrow + 1, t = e;
    if (is(s, "{") && close(s) == e - 1) {
      t = e - 1;
      ++s;
      if (t > s && is(t - 1, ";")) --t;
    }
    std::size_t callee_end = member_chain_end(s);
    if (callee_end == s || !is(callee_end, "(") || close(callee_end) + 1 != t) return std::nullopt;
    return s;
  }

  void collect_sites(Comp& c, std::size_t bb, std::size_t be) {
    for (std::size_t k = bb; k < be; ++k) {
      if (t_[k].kind != Tok::JsxOpen) continue;
      const std::string& name = t_[k].text;
      bool component = upper(name) && name.find('.') == std::string::npos;
      Site site;
      site.child = name;
      std::size_t m = k + 1;
      while (m < be && t_[m].kind != Tok::JsxOpenEnd && t_[m].kind != Tok::JsxSelfClose) {
        if (t_[m].kind == Tok::JsxAttr) {
          Attr a{t_[m].text, std::nullopt};
          std::size_t after = m + 1;
          if (is(m + 1, "=")) {
            after = m + 3;
            if (is(m + 2, "{")) {
              std::size_t e = close(m + 2);
              after = e + 1;
              if (component && a.name != "key" && a.name != "ref") {
                if (auto root = attr_root(m + 3, e)) {
                  if (auto t = resolve(c, *root)) {
                    forwards_.insert(*root);
                    a.source = t;
                  }
                }
              }
            }
          }
          if (a.name != "key" && a.name != "ref") site.attrs.push_back(a);
          m = after;
        } else if (is(m, "{") && is(m + 1, "...")) {
          std::size_t e = close(m);
          Spread sp;
          std::size_t x = m + 2;
          if (component && ident(x) && x + 1 == e) {
            if (c.params == Comp::Object && t_[x].text == c.props_name && !shadowed(c, x)) {
              sp.kind = Spread::PropsObj;
              consumed_.insert(x);
            } else if (auto t = resolve(c, x)) {
              sp.source = t;
              sp.kind = t->kind == TK::Prop && c.props[t->index].rest ? Spread::Rest : Spread::Other;
              forwards_.insert(x);
            }
          }
          site.spreads.push_back(sp);
          m = e + 1;
        } else {
          m = skip(m);
        }
      }
      if (component) c.sites.push_back(std::move(site));
    }
  }

  void analyze_body(Comp& c, std::size_t bb, std::size_t be) {
    c.prop_counts.assign(c.props.size(), {});
    std::vector<std::pair<std::size_t, std::size_t>> effect_ranges;
    top_level_statements(c, bb, be, effect_ranges);
    collect_shadows(c, bb, be);
    collect_sites(c, bb, be);
    // wholesale uses of the props object
    if (c.params == Comp::Object) {
      for (std::size_t k = bb; k < be; ++k) {
        if (!ident(k) || t_[k].text != c.props_name || consumed_.count(k) || property_position(k) || shadowed(c, k)) {
          continue;
        }
        if (!(is(k + 1, ".") && ident(k + 2))) c.open = true;
      }
    }
    for (auto [b, e] : effect_ranges) {
      std::vector<Target> calls;
      for (std::size_t k = b; k < e; ++k) {
        auto t = resolve(c, k);
        if (!t) continue;
        bool member = c.params == Comp::Object && t_[k].text == c.props_name;
        std::size_t paren = member ? k + 3 : k + 1;
        if (!is(paren, "(")) continue;
        if (t->kind == TK::StateSetter || t->kind == TK::Prop) calls.push_back(*t);
      }
      c.effects.push_back(std::move(calls));
    }
    for (std::size_t k = bb; k < be; ++k) {
      auto t = resolve(c, k);
      if (!t) continue;
      Counts& n = t->kind == TK::Prop ? c.prop_counts[t->index] : c.state_counts[t->index];
      bool member = c.params == Comp::Object && t_[k].text == c.props_name;
      if (forwards_.count(k)) {
        (t->kind == TK::StateSetter ? n.setter_forward : n.forward)++;
      } else if (t->kind == TK::StateSetter) {
        (is(member ? k + 3 : k + 1, "(") ? n.call : n.setter_use)++;
      } else {
        n.use++;
      }
    }
  }

  std::string path_;
  std::vector<Token> t_;
  std::vector<long> match_;
  std::set<std::size_t> decl_;       // binding identifiers
  std::set<std::size_t> consumed_;   // alias and destructuring sources
  std::set<std::size_t> forwards_;   // attribute roots at component render sites
  std::set<std::size_t> top_level_;  // declarations that are component-level statements
};

// ---------------------------------------------------------------- linking

struct Edge {
  std::string from, to;
  bool setter;
};

struct NodeInfo {
  int use = 0;
  int forward = 0;
  bool state = false;
  std::string component;
};

class Project {
 public:
  Project(std::vector<Comp> comps, int threshold) : c_(std::move(comps)), threshold_(threshold) {}

  Result run() {
    for (std::size_t i = 0; i < c_.size(); ++i) by_name_[c_[i].name].push_back(i);
    add_implicit_props();
    std::map<std::string, int> sink, spread_sink, extra;
    for (const auto& parent : c_) {
      for (const auto& site : parent.sites) {
        int ci = child_of(parent, site.child);
        if (ci < 0) {
          if (ambiguous(parent, site.child)) {
            for (const auto& a : site.attrs) {
              if (a.source) suspect_.insert(parent.label(*a.source));
            }
          }
          for (const auto& a : site.attrs) {
            if (a.source && a.source->kind != TK::StateSetter) sink[parent.label(*a.source)]++;
          }
          for (const auto& s : site.spreads) {
            if (s.source && s.source->kind != TK::StateSetter) sink[parent.label(*s.source)]++;
          }
          continue;
        }
        const Comp& child = c_[ci];
        renders_[parent.name + "@" + parent.file].insert(child.name + "@" + child.file);
        bool closed = !child.open;
        std::set<std::string> bound;
        for (const auto& a : site.attrs) bound.insert(a.name);
        int rest = child.rest();
        for (const auto& a : site.attrs) {
          if (!a.source) continue;
          int p = child.find_prop(a.name);
          if (p < 0) p = rest;
          std::string from = parent.label(*a.source);
          if (p >= 0) {
            edges_.push_back({from, child.label({TK::Prop, p}), a.source->kind == TK::StateSetter});
          } else if (!closed) {
            if (a.source->kind != TK::StateSetter) sink[from]++;
          }
        }
        std::vector<int> unbound;
        for (std::size_t p = 0; p < child.props.size(); ++p) {
          if (!child.props[p].rest && !bound.count(child.props[p].key)) unbound.push_back(int(p));
        }
        for (const auto& s : site.spreads) {
          if (s.kind == Spread::Rest) {
            std::string from = parent.label(*s.source);
            bool linked = false;
            for (int p : unbound) {
              edges_.push_back({from, child.label({TK::Prop, p}), false});
              linked = true;
            }
            if (rest >= 0) {
              edges_.push_back({from, child.label({TK::Prop, rest}), false});
              linked = true;
            }
            if (!linked && !closed) sink[from]++;
          } else if (s.kind == Spread::PropsObj) {
            for (std::size_t pp = 0; pp < parent.props.size(); ++pp) {
              const Prop& prop = parent.props[pp];
              if (prop.rest || bound.count(prop.key)) continue;
              std::string from = parent.label({TK::Prop, int(pp)});
              int p = child.find_prop(prop.key);
              if (p >= 0 && child.props[p].rest) p = -1;
              if (p < 0) p = rest;
              if (p >= 0) {
                edges_.push_back({from, child.label({TK::Prop, p}), false});
                extra[from]++;
              } else if (!closed) {
                spread_sink[from]++;
              } else {
                extra[from]++;
              }
            }
          } else {
            if (s.source) {
              suspect_.insert(parent.label(*s.source));
              if (s.source->kind != TK::StateSetter) sink[parent.label(*s.source)]++;
            }
            for (int p : unbound) suspect_.insert(child.label({TK::Prop, p}));
            if (rest >= 0) suspect_.insert(child.label({TK::Prop, rest}));
          }
        }
      }
    }
    propagate_setters();

    Result r;
    for (const auto& c : c_) {
      if (c.open) {
        for (std::size_t p = 0; p < c.props.size(); ++p) suspect_.insert(c.label({TK::Prop, int(p)}));
      }
      bool any_alias = !c.aliases.empty();
      for (std::size_t i = 0; i < c.states.size(); ++i) {
        std::string l = c.label({TK::StateValue, int(i)});
        const Counts& k = c.state_counts[i];
        r.counts[l] = k;
        info_[l] = {k.use + sink[l], k.forward - sink[l], true, c.name};
        call_[l] = k.call;
        bool shadow = std::any_of(c.shadows.begin(), c.shadows.end(), [&](const Region& g) {
          return g.name == c.states[i].value || g.name == c.states[i].setter;
        });
        if (any_alias || shadow) r.aliased_or_shadowed.insert(l);
      }
      for (std::size_t p = 0; p < c.props.size(); ++p) {
        std::string l = c.label({TK::Prop, int(p)});
        const Counts& k = c.prop_counts[p];
        r.counts[l] = k;
        info_[l] = {k.use + sink[l] + spread_sink[l], k.forward - sink[l] + extra[l], false, c.name};
      }
    }
    unreferenced(r);
    drilling(r);
    effect_parent(r);
    std::sort(r.findings.begin(), r.findings.end());
    r.component_count = static_cast<int>(c_.size());
    return r;
  }

 private:
  std::vector<std::size_t> candidates(const Comp& parent, const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return {};
    std::vector<std::size_t> same;
    for (auto i : it->second) {
      if (c_[i].file == parent.file) same.push_back(i);
    }
    return same.empty() ? it->second : same;
  }
  int child_of(const Comp& parent, const std::string& name) const {
    auto c = candidates(parent, name);
    return c.size() == 1 ? static_cast<int>(c[0]) : -1;
  }
  bool ambiguous(const Comp& parent, const std::string& name) const { return candidates(parent, name).size() > 1; }

  void add_implicit_props() {
    std::map<std::size_t, std::set<std::string>> keys;
    for (const auto& parent : c_) {
      for (const auto& site : parent.sites) {
        int ci = child_of(parent, site.child);
        if (ci < 0) continue;
        for (const auto& a : site.attrs) keys[ci].insert(a.name);
      }
    }
    for (auto& [ci, names] : keys) {
      Comp& c = c_[ci];
      if (c.params != Comp::Object || c.open) continue;
      bool spreads = false;
      for (const auto& s : c.sites) {
        for (const auto& sp : s.spreads) spreads |= sp.kind == Spread::PropsObj;
      }
      if (!spreads) continue;
      for (const auto& n : names) {
        if (c.find_prop(n) >= 0) continue;
        c.props.push_back({n, "", false, true});
        c.prop_counts.emplace_back();
      }
    }
  }

  void propagate_setters() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::set<std::string> carriers;
      for (const auto& e : edges_) {
        if (e.setter) carriers.insert(e.to);
      }
      for (auto& e : edges_) {
        if (!e.setter && carriers.count(e.from)) {
          e.setter = true;
          changed = true;
        }
      }
      carriers_ = carriers;
    }
  }

  std::string confidence(const std::vector<std::string>& nodes) const {
    for (const auto& n : nodes) {
      if (suspect_.count(n)) return "suspect";
    }
    return "definite";
  }

  std::vector<const Edge*> out(const std::string& from) const {
    std::vector<const Edge*> r;
    const bool state = info_.at(from).state;
    for (const auto& e : edges_) {
      if (e.from == from && !(state && e.setter)) r.push_back(&e);
    }
    return r;
  }

  // Brute force: a node is unreferenced when no node reachable from it over
  // flow edges (itself included) is used.
  void unreferenced(Result& r) const {
    for (const auto& [label, n] : info_) {
      std::set<std::string> seen{label};
      std::vector<std::string> stack{label};
      bool live = false;
      while (!stack.empty() && !live) {
        std::string at = stack.back();
        stack.pop_back();
        if (info_.at(at).use > 0) live = true;
        for (const Edge* e : out(at)) {
          if (seen.insert(e->to).second) stack.push_back(e->to);
        }
      }
      if (!live) r.findings.push_back({"unreferenced_state_or_prop", {label}, confidence({label})});
    }
  }

  void drilling(Result& r) const {
    for (const auto& [label, n] : info_) {
      if (!n.state) continue;
      for (bool setter : {false, true}) {
        std::vector<std::string> path{label};
        std::function<void()> walk = [&] {
          std::vector<std::string> next;
          for (const auto& e : edges_) {
            if (e.from == path.back() && e.setter == setter &&
                std::find(path.begin(), path.end(), e.to) == path.end()) {
              next.push_back(e.to);
            }
          }
          if (next.empty()) {
            if (path.size() < 2 || info_.at(path.back()).use == 0) return;
            std::vector<std::string> nodes{label};
            int pass = 0;
            for (std::size_t i = 1; i + 1 < path.size(); ++i) {
              const NodeInfo& h = info_.at(path[i]);
              if (h.forward > 0 && h.use == 0) {
                nodes.push_back(path[i]);
                ++pass;
              }
            }
            if (pass < threshold_) return;
            nodes.push_back(path.back());
            r.findings.push_back({"prop_drilling", nodes, confidence(nodes)});
            return;
          }
          for (const auto& to : next) {
            path.push_back(to);
            walk();
            path.pop_back();
          }
        };
        walk();
      }
    }
  }

  bool descends(const std::string& ancestor, const std::string& node) const {
    if (ancestor == node) return false;
    std::set<std::string> seen;
    std::vector<std::string> stack{ancestor};
    while (!stack.empty()) {
      std::string at = stack.back();
      stack.pop_back();
      auto it = renders_.find(at);
      if (it == renders_.end()) continue;
      for (const auto& to : it->second) {
        if (to == node) return true;
        if (seen.insert(to).second) stack.push_back(to);
      }
    }
    return false;
  }

  void effect_parent(Result& r) const {
    std::map<std::string, std::string> owner;  // state label -> "Comp@file"
    for (const auto& c : c_) {
      for (std::size_t i = 0; i < c.states.size(); ++i) owner[c.label({TK::StateValue, int(i)})] = c.name + "@" + c.file;
    }
    for (const auto& c : c_) {
      std::string self = c.name + "@" + c.file;
      for (std::size_t k = 0; k < c.effects.size(); ++k) {
        std::string effect = c.name + ".effect#" + std::to_string(k);
        std::set<std::string> seen;
        for (const Target& t : c.effects[k]) {
          std::vector<std::pair<std::string, std::vector<std::string>>> hits;
          if (t.kind == TK::StateSetter) {
            hits.push_back({c.label(t), {}});
          } else {
            std::string prop = c.label(t);
            if (!carriers_.count(prop)) continue;
            // every simple backward chain over setter flows
            std::map<std::string, std::vector<std::string>> best;
            std::vector<std::string> chain{prop};
            std::function<void()> back = [&] {
              for (const auto& e : edges_) {
                if (!e.setter || e.to != chain.back()) continue;
                if (info_.at(e.from).state) {
                  auto it = best.find(e.from);
                  bool better = it == best.end() || chain.size() < it->second.size() ||
                                (chain.size() == it->second.size() && chain < it->second);
                  if (better) best[e.from] = chain;
                } else if (std::find(chain.begin(), chain.end(), e.from) == chain.end()) {
                  chain.push_back(e.from);
                  back();
                  chain.pop_back();
                }
              }
            };
            back();
            for (auto& [s, ch] : best) hits.push_back({s, ch});
          }
          for (auto& [state, via] : hits) {
            if (!seen.insert(state).second) continue;
            if (!descends(owner.at(state), self)) continue;
            std::vector<std::string> nodes{effect};
            nodes.insert(nodes.end(), via.begin(), via.end());
            nodes.push_back(state);
            r.findings.push_back({"effect_modifying_parent_state", nodes, confidence(nodes)});
          }
        }
      }
    }
  }

  std::vector<Comp> c_;
  int threshold_;
  std::map<std::string, std::vector<std::size_t>> by_name_;
  std::vector<Edge> edges_;
  std::map<std::string, NodeInfo> info_;
  std::map<std::string, int> call_;
  std::set<std::string> carriers_;
  std::set<std::string> suspect_;
  std::map<std::string, std::set<std::string>> renders_;
};

}  // namespace

Result analyze(const std::vector<std::pair<std::string, std::string>>& files, int drill_threshold) {
  std::vector<Comp> comps;
  int jsx_files = 0;
  std::vector<std::string> broken;
  for (const auto& [path, text] : files) {
    Lexed lx = lex(text);
    if (!lx.ok) {
      broken.push_back(path);
      continue;
    }
    FileScan scan(path, std::move(lx.tokens));
    if (!scan.match_brackets()) {
      broken.push_back(path);
      continue;
    }
    if (scan.has_jsx()) ++jsx_files;
    for (auto& c : scan.components()) comps.push_back(std::move(c));
  }
  Result r = Project(std::move(comps), drill_threshold).run();
  r.jsx_file_count = jsx_files;
  r.broken_files = std::move(broken);
  return r;
}

}  // namespace oracle
