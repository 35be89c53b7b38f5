// ESTree JSON -> normalized tree. Produces the same shapes as parse_file so
// either front end can feed extraction.

#include <algorithm>
#include <stdexcept>

#include "hooklens/ast.h"

namespace hooklens {
namespace {

using nlohmann::json;

// Maps UTF-16 code unit offsets to byte offsets.
class OffsetMap {
 public:
  explicit OffsetMap(std::string_view text) {
    ascii_ = std::all_of(text.begin(), text.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
    if (ascii_) return;
    units_to_bytes_.reserve(text.size() + 1);
    for (std::uint32_t i = 0; i < text.size();) {
      auto c = static_cast<unsigned char>(text[i]);
      std::uint32_t len = c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
      units_to_bytes_.push_back(i);
      if (len == 4) units_to_bytes_.push_back(i);  // surrogate pair
      i += len;
    }
    units_to_bytes_.push_back(static_cast<std::uint32_t>(text.size()));
  }

  std::uint32_t bytes(std::uint64_t units) const {
    if (ascii_) return static_cast<std::uint32_t>(units);
    if (units >= units_to_bytes_.size()) return units_to_bytes_.back();
    return units_to_bytes_[units];
  }

 private:
  bool ascii_ = true;
  std::vector<std::uint32_t> units_to_bytes_;
};

class Converter {
 public:
  Converter(const SourceFile& file) : file_(file), map_(file.content) {}

  NormNode program(const json& root) {
    if (!root.is_object() || root.value("type", "") != "Program") {
      throw std::invalid_argument("ESTree root must be a Program node");
    }
    NormNode n;
    n.kind = NodeKind::Other;
    n.name = "Program";
    n.span = file_.span(0, static_cast<std::uint32_t>(file_.content.size()));
    for (const auto& s : root.at("body")) n.children.push_back(expr(s));
    return n;
  }

 private:
  static bool present(const json& j, const char* key) {
    auto it = j.find(key);
    return it != j.end() && !it->is_null();
  }

  Span span_of(const json& j) const {
    std::uint64_t start = 0, end = 0;
    if (auto r = j.find("range"); r != j.end() && r->is_array() && r->size() == 2) {
      start = (*r)[0].get<std::uint64_t>();
      end = (*r)[1].get<std::uint64_t>();
    } else if (j.contains("start") && j["start"].is_number() && j.contains("end")) {
      start = j["start"].get<std::uint64_t>();
      end = j["end"].get<std::uint64_t>();
    } else if (j.contains("loc")) {
      // loc lines are 1-based, columns 0-based UTF-16 units.
      auto to_byte = [&](const json& pos) {
        auto line = pos.at("line").get<std::size_t>();
        auto col = pos.at("column").get<std::uint64_t>();
        std::uint32_t base = line >= 1 && line <= file_.line_offsets.size() ? file_.line_offsets[line - 1] : 0;
        std::string_view rest = std::string_view(file_.content).substr(base);
        OffsetMap line_map(rest);
        return base + line_map.bytes(col);
      };
      auto& loc = j["loc"];
      return file_.span(to_byte(loc.at("start")), to_byte(loc.at("end")));
    } else {
      throw std::invalid_argument("ESTree node without range / loc");
    }
    return file_.span(map_.bytes(start), map_.bytes(end));
  }

  NormNode base(NodeKind kind, const json& j) const {
    NormNode n;
    n.kind = kind;
    n.span = span_of(j);
    return n;
  }

  NormNode other(const std::string& label, const json& j) const {
    NormNode n = base(NodeKind::Other, j);
    n.name = label;
    set_text(n);
    return n;
  }

  void set_text(NormNode& n) const {
    auto raw = file_.slice(n.span);
    n.text = std::string(raw.substr(0, std::min(raw.size(), kOtherTextLimit)));
  }

  NormNode identifier(const json& j, std::uint16_t role) const {
    NormNode n = base(NodeKind::Identifier, j);
    n.name = j.at("name").get<std::string>();
    n.flags = role;
    return n;
  }

  // Keys: non-computed identifiers are property keys, literals stay literals.
  NormNode key(const json& j, bool computed) {
    if (!computed && j.value("type", "") == "Identifier") return identifier(j, flag::kPropertyKey);
    return expr(j);
  }

  NormNode params(const json& list, const json& body) {
    NormNode n;
    n.kind = NodeKind::Other;
    n.name = "Params";
    for (const auto& p : list) n.children.push_back(pattern(p, flag::kBinding));
    if (n.children.empty()) {
      auto at = span_of(body).start_byte;
      n.span = file_.span(at, at);
    } else {
      n.span = file_.span(n.children.front().span.start_byte, n.children.back().span.end_byte);
    }
    set_text(n);
    return n;
  }

  NormNode function(const json& j, bool declaration) {
    std::vector<NormNode> kids;
    if (present(j, "id")) kids.push_back(identifier(j["id"], flag::kBinding));
    kids.push_back(params(j.at("params"), j.at("body")));
    kids.push_back(expr(j.at("body")));
    std::uint16_t flags = (j.value("async", false) ? flag::kAsync : 0) | (declaration ? 0 : flag::kFunctionExpression);
    NormNode n;
    if (j.value("generator", false)) {
      n = other(declaration ? "GeneratorDeclaration" : "GeneratorExpression", j);
    } else {
      n = base(NodeKind::FunctionDecl, j);
      if (present(j, "id")) n.name = j["id"].at("name").get<std::string>();
    }
    n.flags = flags;
    n.children = std::move(kids);
    return n;
  }

  // Holes are empty spans just after the previous element (or the '[').
  std::vector<NormNode> elements(const json& list, const Span& outer, bool as_pattern, std::uint16_t role) {
    std::vector<NormNode> out;
    std::uint32_t last_end = outer.start_byte + 1;
    for (const auto& e : list) {
      if (e.is_null()) {
        NormNode hole;
        hole.kind = NodeKind::Other;
        hole.name = "Hole";
        hole.span = file_.span(last_end, last_end);
        hole.text = "";
        out.push_back(std::move(hole));
        continue;
      }
      out.push_back(as_pattern ? pattern(e, role) : expr(e));
      last_end = out.back().span.end_byte;
    }
    return out;
  }

  NormNode property(const json& p, bool as_pattern, std::uint16_t role) {
    bool computed = p.value("computed", false);
    NormNode n = other("Property", p);
    if (computed) n.flags |= flag::kComputed;
    if (p.value("shorthand", false)) {
      n.flags |= flag::kShorthand;
      n.children.push_back(as_pattern ? pattern(p.at("value"), role) : expr(p.at("value")));
      return n;
    }
    n.children.push_back(key(p.at("key"), computed));
    n.children.push_back(as_pattern ? pattern(p.at("value"), role) : expr(p.at("value")));
    return n;
  }

  NormNode pattern(const json& j, std::uint16_t role) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "Identifier") return identifier(j, role);
    if (type == "ObjectPattern" || type == "ObjectExpression") {
      NormNode n = base(NodeKind::ObjectPattern, j);
      for (const auto& p : j.at("properties")) {
        auto ptype = p.at("type").get<std::string>();
        if (ptype == "RestElement" || ptype == "SpreadElement") {
          NormNode r = other("RestElement", p);
          r.children.push_back(pattern(p.at("argument"), role));
          n.children.push_back(std::move(r));
        } else {
          n.children.push_back(property(p, true, role));
        }
      }
      return n;
    }
    if (type == "ArrayPattern" || type == "ArrayExpression") {
      NormNode n = base(NodeKind::ArrayPattern, j);
      n.children = elements(j.at("elements"), n.span, true, role);
      return n;
    }
    if (type == "RestElement" || type == "SpreadElement") {
      NormNode n = other("RestElement", j);
      n.children.push_back(pattern(j.at("argument"), role));
      return n;
    }
    if (type == "AssignmentPattern") {
      NormNode n = other("AssignmentPattern", j);
      n.children.push_back(pattern(j.at("left"), role));
      n.children.push_back(expr(j.at("right")));
      return n;
    }
    return expr(j);
  }

  NormNode jsx_name(const json& j, bool tag) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "JSXIdentifier") return identifier(j, tag ? flag::kJsxTag : flag::kPropertyKey);
    if (type == "JSXMemberExpression") {
      NormNode n = base(NodeKind::MemberExpr, j);
      n.children.push_back(jsx_name(j.at("object"), tag));
      n.children.push_back(identifier(j.at("property"), flag::kPropertyKey));
      return n;
    }
    if (type == "JSXNamespacedName") {
      NormNode n = other("JSXNamespacedName", j);
      n.children.push_back(identifier(j.at("namespace"), tag ? flag::kJsxTag : flag::kPropertyKey));
      n.children.push_back(identifier(j.at("name"), flag::kPropertyKey));
      return n;
    }
    throw std::invalid_argument("unexpected JSX name node " + type);
  }

  static std::string jsx_name_text(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "JSXIdentifier") return j.at("name");
    if (type == "JSXMemberExpression") {
      return jsx_name_text(j.at("object")) + "." + j.at("property").at("name").get<std::string>();
    }
    if (type == "JSXNamespacedName") {
      return j.at("namespace").at("name").get<std::string>() + ":" + j.at("name").at("name").get<std::string>();
    }
    return "";
  }

  NormNode jsx_child(const json& c) {
    const std::string type = c.at("type").get<std::string>();
    if (type == "JSXText") return other("JSXText", c);
    if (type == "JSXExpressionContainer") {
      NormNode n = base(NodeKind::JsxExpressionContainer, c);
      if (c.at("expression").value("type", "") != "JSXEmptyExpression") n.children.push_back(expr(c["expression"]));
      return n;
    }
    if (type == "JSXSpreadChild") {
      NormNode n = other("JSXSpreadChild", c);
      n.children.push_back(expr(c.at("expression")));
      return n;
    }
    return expr(c);
  }

  NormNode jsx_attribute(const json& a) {
    if (a.at("type") == "JSXSpreadAttribute") {
      NormNode n = base(NodeKind::JsxSpreadAttribute, a);
      n.children.push_back(expr(a.at("argument")));
      return n;
    }
    NormNode n = base(NodeKind::JsxAttribute, a);
    n.name = jsx_name_text(a.at("name"));
    n.children.push_back(jsx_name(a.at("name"), false));
    if (present(a, "value")) n.children.push_back(jsx_child(a["value"]));
    return n;
  }

  NormNode jsx_element(const json& j) {
    NormNode n = base(NodeKind::JsxElement, j);
    if (j.at("type") == "JSXFragment") {
      n.flags |= flag::kFragment;
      n.name = "";
    } else {
      const auto& open = j.at("openingElement");
      n.name = jsx_name_text(open.at("name"));
      n.children.push_back(jsx_name(open.at("name"), true));
      for (const auto& a : open.at("attributes")) n.children.push_back(jsx_attribute(a));
    }
    for (const auto& c : j.at("children")) n.children.push_back(jsx_child(c));
    if (present(j, "closingElement")) n.children.push_back(jsx_name(j["closingElement"].at("name"), true));
    return n;
  }

  NormNode module_specifier(const json& j, std::uint16_t role) {
    if (j.value("type", "") == "Identifier") return identifier(j, role);
    return expr(j);
  }

  bool same_range(const json& a, const json& b) const { return span_of(a) == span_of(b); }

  // Children of an unmodeled node: every nested node, in source order.
  std::vector<NormNode> generic_children(const json& j) {
    std::vector<const json*> nested;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "loc" || it.key() == "range") continue;
      const json& v = it.value();
      if (v.is_object() && v.contains("type")) nested.push_back(&v);
      if (v.is_array()) {
        for (const auto& e : v) {
          if (e.is_object() && e.contains("type")) nested.push_back(&e);
        }
      }
    }
    std::vector<NormNode> out;
    for (const json* c : nested) out.push_back(expr(*c));
    std::stable_sort(out.begin(), out.end(),
                     [](const NormNode& a, const NormNode& b) { return a.span.start_byte < b.span.start_byte; });
    return out;
  }

  void push_opt(NormNode& n, const json& j, const char* key) {
    if (present(j, key)) n.children.push_back(expr(j[key]));
  }

  void push_all(NormNode& n, const json& j, const char* key) {
    for (const auto& c : j.at(key)) n.children.push_back(expr(c));
  }

  NormNode expr(const json& j) {
    const std::string type = j.at("type").get<std::string>();

    if (type == "Identifier") return identifier(j, 0);
    if (type == "ChainExpression" || type == "ParenthesizedExpression") return expr(j.at("expression"));
    if (type == "Literal") return other("Literal", j);
    if (type == "PrivateIdentifier") return other("PrivateIdentifier", j);

    if (type == "FunctionDeclaration") return function(j, true);
    if (type == "FunctionExpression") return function(j, false);
    if (type == "ArrowFunctionExpression") {
      NormNode n = base(NodeKind::ArrowFunction, j);
      n.children.push_back(params(j.at("params"), j.at("body")));
      n.children.push_back(expr(j.at("body")));
      if (j.value("async", false)) n.flags |= flag::kAsync;
      if (j.value("expression", false)) n.flags |= flag::kExpressionBody;
      return n;
    }
    if (type == "VariableDeclaration") {
      NormNode n = other("VariableDeclaration", j);
      auto kind = j.value("kind", "var");
      std::uint16_t kflag = kind == "const" ? flag::kConst : kind == "let" ? flag::kLet : flag::kVar;
      for (const auto& d : j.at("declarations")) {
        NormNode decl = base(NodeKind::VariableDecl, d);
        decl.flags = kflag;
        decl.children.push_back(pattern(d.at("id"), flag::kBinding));
        push_opt(decl, d, "init");
        n.children.push_back(std::move(decl));
      }
      return n;
    }
    if (type == "CallExpression") {
      NormNode n = base(NodeKind::CallExpr, j);
      if (j.value("optional", false)) n.flags |= flag::kOptional;
      n.children.push_back(expr(j.at("callee")));
      push_all(n, j, "arguments");
      return n;
    }
    if (type == "MemberExpression") {
      NormNode n = base(NodeKind::MemberExpr, j);
      bool computed = j.value("computed", false);
      if (computed) n.flags |= flag::kComputed;
      if (j.value("optional", false)) n.flags |= flag::kOptional;
      n.children.push_back(expr(j.at("object")));
      n.children.push_back(key(j.at("property"), computed));
      return n;
    }
    if (type == "AssignmentExpression") {
      NormNode n = base(NodeKind::AssignmentExpr, j);
      auto op = j.at("operator").get<std::string>();
      n.name = op;
      n.children.push_back(op == "=" ? pattern(j.at("left"), flag::kWrite) : expr(j.at("left")));
      n.children.push_back(expr(j.at("right")));
      return n;
    }
    if (type == "ReturnStatement") {
      NormNode n = base(NodeKind::ReturnStmt, j);
      push_opt(n, j, "argument");
      return n;
    }
    if (type == "JSXElement" || type == "JSXFragment") return jsx_element(j);
    if (type == "JSXExpressionContainer" || type == "JSXText" || type == "JSXSpreadChild") return jsx_child(j);

    if (type == "ObjectPattern" || type == "ArrayPattern" || type == "AssignmentPattern" || type == "RestElement") {
      return pattern(j, flag::kBinding);
    }
    if (type == "ObjectExpression") {
      NormNode n = other("ObjectExpression", j);
      for (const auto& p : j.at("properties")) {
        if (p.at("type") == "SpreadElement") {
          n.children.push_back(expr(p));
        } else {
          n.children.push_back(property(p, false, 0));
        }
      }
      return n;
    }
    if (type == "ArrayExpression") {
      NormNode n = other("ArrayExpression", j);
      n.children = elements(j.at("elements"), n.span, false, 0);
      return n;
    }
    if (type == "Property") return property(j, false, 0);
    if (type == "MetaProperty") {
      NormNode n = other("MetaProperty", j);
      n.children.push_back(identifier(j.at("property"), flag::kPropertyKey));
      return n;
    }
    if (type == "LabeledStatement") {
      NormNode n = other(type, j);
      n.children.push_back(identifier(j.at("label"), flag::kLabel));
      n.children.push_back(expr(j.at("body")));
      return n;
    }
    if (type == "BreakStatement" || type == "ContinueStatement") {
      NormNode n = other(type, j);
      if (present(j, "label")) n.children.push_back(identifier(j["label"], flag::kLabel));
      return n;
    }
    if (type == "ForInStatement" || type == "ForOfStatement") {
      NormNode n = other(type, j);
      const auto& left = j.at("left");
      n.children.push_back(left.at("type") == "VariableDeclaration" ? expr(left) : pattern(left, flag::kWrite));
      n.children.push_back(expr(j.at("right")));
      n.children.push_back(expr(j.at("body")));
      return n;
    }
    if (type == "ForStatement") {
      NormNode n = other(type, j);
      push_opt(n, j, "init");
      push_opt(n, j, "test");
      push_opt(n, j, "update");
      n.children.push_back(expr(j.at("body")));
      return n;
    }
    if (type == "CatchClause") {
      NormNode n = other(type, j);
      if (present(j, "param")) n.children.push_back(pattern(j["param"], flag::kBinding));
      n.children.push_back(expr(j.at("body")));
      return n;
    }
    if (type == "ClassDeclaration" || type == "ClassExpression") {
      NormNode n = other(type, j);
      if (j.contains("decorators")) push_all(n, j, "decorators");
      if (present(j, "id")) n.children.push_back(identifier(j["id"], flag::kBinding));
      push_opt(n, j, "superClass");
      n.children.push_back(expr(j.at("body")));
      return n;
    }
    if (type == "MethodDefinition" || type == "PropertyDefinition") {
      bool computed = j.value("computed", false);
      NormNode n = other(type, j);
      if (computed) n.flags |= flag::kComputed;
      if (j.contains("decorators")) push_all(n, j, "decorators");
      n.children.push_back(key(j.at("key"), computed));
      push_opt(n, j, "value");
      return n;
    }
    if (type == "StaticBlock") {
      NormNode n = other(type, j);
      push_all(n, j, "body");
      return n;
    }
    if (type == "ImportDeclaration") {
      NormNode n = other(type, j);
      for (const auto& s : j.at("specifiers")) {
        NormNode spec = other(s.at("type").get<std::string>(), s);
        if (s.at("type") == "ImportSpecifier" && !same_range(s.at("imported"), s.at("local"))) {
          spec.children.push_back(module_specifier(s.at("imported"), flag::kPropertyKey));
        }
        spec.children.push_back(identifier(s.at("local"), flag::kBinding));
        n.children.push_back(std::move(spec));
      }
      n.children.push_back(expr(j.at("source")));
      return n;
    }
    if (type == "ExportNamedDeclaration") {
      NormNode n = other(type, j);
      if (present(j, "declaration")) {
        n.children.push_back(expr(j["declaration"]));
        return n;
      }
      bool from = present(j, "source");
      for (const auto& s : j.at("specifiers")) {
        NormNode spec = other("ExportSpecifier", s);
        spec.children.push_back(module_specifier(s.at("local"), from ? flag::kPropertyKey : 0));
        if (!same_range(s.at("local"), s.at("exported"))) {
          spec.children.push_back(module_specifier(s.at("exported"), flag::kPropertyKey));
        }
        n.children.push_back(std::move(spec));
      }
      if (from) n.children.push_back(expr(j["source"]));
      return n;
    }
    if (type == "ExportAllDeclaration") {
      NormNode n = other(type, j);
      if (present(j, "exported")) n.children.push_back(module_specifier(j["exported"], flag::kPropertyKey));
      n.children.push_back(expr(j.at("source")));
      return n;
    }
    if (type == "ImportExpression") {
      NormNode n = other(type, j);
      n.children.push_back(expr(j.at("source")));
      push_opt(n, j, "options");
      return n;
    }
    if (type == "TemplateLiteral") {
      NormNode n = other(type, j);
      push_all(n, j, "expressions");
      return n;
    }
    if (type == "TemplateElement") return other(type, j);

    // Statements and expressions whose children are already in source order.
    NormNode n = other(type, j);
    n.children = generic_children(j);
    return n;
  }

  const SourceFile& file_;
  OffsetMap map_;
};

}  // namespace

NormalizedAst normalize_estree(const nlohmann::json& estree, const SourceFile& file) {
  NormalizedAst ast;
  ast.file_id = file.file_id;
  Converter conv(file);
  ast.root = conv.program(estree);
  return ast;
}

nlohmann::json tree_to_json(const NormNode& node) {
  nlohmann::json j;
  j["kind"] = std::string(to_string(node.kind));
  if (node.name) j["name"] = *node.name;
  if (node.text) j["text"] = *node.text;
  j["span"] = {node.span.start_byte, node.span.end_byte};
  j["flags"] = node.flags;
  auto& kids = j["children"] = nlohmann::json::array();
  for (const auto& c : node.children) kids.push_back(tree_to_json(c));
  return j;
}

}  // namespace hooklens
