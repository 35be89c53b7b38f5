#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hooklens/source.h"

namespace hooklens {

enum class NodeKind : std::uint8_t {
  FunctionDecl,
  ArrowFunction,
  VariableDecl,
  CallExpr,
  Identifier,
  MemberExpr,
  JsxElement,
  JsxAttribute,
  JsxSpreadAttribute,
  JsxExpressionContainer,
  ObjectPattern,
  ArrayPattern,
  ReturnStmt,
  AssignmentExpr,
  Other,
};

std::string_view to_string(NodeKind kind);

// Node flags. The identifier role bits are mutually exclusive; an Identifier
// with none of them set is a value read.
namespace flag {
inline constexpr std::uint16_t kBinding = 1 << 0;      // declares a name
inline constexpr std::uint16_t kPropertyKey = 1 << 1;  // member property, object key, attr name
inline constexpr std::uint16_t kJsxTag = 1 << 2;       // element name in a JSX tag
inline constexpr std::uint16_t kWrite = 1 << 3;        // plain assignment target
inline constexpr std::uint16_t kLabel = 1 << 4;        // statement label
inline constexpr std::uint16_t kRoleMask = 0x1F;

inline constexpr std::uint16_t kComputed = 1 << 5;     // a[b], {[k]: v}
inline constexpr std::uint16_t kShorthand = 1 << 6;    // {a}
inline constexpr std::uint16_t kOptional = 1 << 7;     // a?.b, f?.()
inline constexpr std::uint16_t kAsync = 1 << 8;
inline constexpr std::uint16_t kExpressionBody = 1 << 9;  // () => expr
inline constexpr std::uint16_t kFunctionExpression = 1 << 10;
inline constexpr std::uint16_t kFragment = 1 << 11;   // <>...</>
inline constexpr std::uint16_t kConst = 1 << 12;      // VariableDecl introduced by const
inline constexpr std::uint16_t kLet = 1 << 13;
inline constexpr std::uint16_t kVar = 1 << 14;
}  // namespace flag

// Layout conventions (children order):
//   FunctionDecl / ArrowFunction : [Identifier id]? , Other "Params"{patterns...}, body
//   VariableDecl                 : pattern, init?
//   CallExpr                     : callee, args...
//   MemberExpr                   : object, property
//   JsxElement                   : tag name?, attributes..., children..., closing tag name?
//   JsxAttribute                 : Identifier name, value?
//   JsxSpreadAttribute           : argument
//   JsxExpressionContainer       : expression?
//   ObjectPattern                : Other "Property"{key, value} | Other "RestElement"
//   ArrayPattern                 : elements (Other "Hole" for elisions)
//   ReturnStmt                   : argument?
//   AssignmentExpr (name = op)   : target, value
// Other nodes carry the ESTree node type in `name` (e.g. "IfStatement").
struct NormNode {
  NodeKind kind = NodeKind::Other;
  Span span;
  std::vector<NormNode> children;
  std::optional<std::string> name;
  std::optional<std::string> text;
  std::uint16_t flags = 0;

  bool has(std::uint16_t f) const { return (flags & f) != 0; }
  bool is(NodeKind k) const { return kind == k; }
  bool is_other(std::string_view label) const {
    return kind == NodeKind::Other && name && *name == label;
  }
  const std::string& name_or_empty() const;

  friend bool operator==(const NormNode&, const NormNode&) = default;
};

// Longest raw slice kept in Other::text.
inline constexpr std::size_t kOtherTextLimit = 120;

struct ParseDiagnostic {
  Span span;
  std::string message;

  friend bool operator==(const ParseDiagnostic&, const ParseDiagnostic&) = default;
};

struct NormalizedAst {
  FileId file_id = -1;
  NormNode root;  // Other "Program"
  std::vector<ParseDiagnostic> parse_diagnostics;

  bool failed() const { return !parse_diagnostics.empty() && root.children.empty(); }
};

enum class SourceDialect { JavaScript, TypeScript, TypeScriptJsx };
SourceDialect dialect_for_path(std::string_view relative_path);

// Parses JavaScript/JSX/TypeScript into the normalized tree. A fatal syntax
// error yields an empty Program plus one diagnostic; it never throws.
NormalizedAst parse_file(const SourceFile& file);

// Converts an ESTree-shaped JSON tree (Espree / typescript-estree output with
// `range` or `loc`) into the same normalized tree parse_file produces.
// `range` values are interpreted as UTF-16 offsets into file.content.
NormalizedAst normalize_estree(const nlohmann::json& estree, const SourceFile& file);

// Debug/test rendering: {kind, name?, text?, span:[start,end], flags, children}.
nlohmann::json tree_to_json(const NormNode& node);

// Pre-order traversal helper. `fn` returns false to skip a node's children.
template <typename Fn>
void walk(const NormNode& node, Fn&& fn) {
  if (!fn(node)) return;
  for (const auto& c : node.children) walk(c, fn);
}

// Accessors for function-like nodes.
const NormNode* function_id(const NormNode& fn);
const NormNode& function_params(const NormNode& fn);
const NormNode& function_body(const NormNode& fn);

}  // namespace hooklens
