#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hooklens/ast.h"
#include "hooklens/source.h"

namespace hooklens {

using NodeId = std::string;

struct Diagnostic {
  std::string file;
  Span span;
  std::string code;
  std::string message;
  std::vector<NodeId> node_ids;  // graph nodes the diagnostic touches

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct NameRef {
  std::string name;
  Span span;

  friend bool operator==(const NameRef&, const NameRef&) = default;
};

// Which half of a useState pair a reference designates.
enum class Channel { Value, Setter };
std::string_view to_string(Channel c);

// Reference counts for a state or prop. Forwards are appearances as the value
// of an attribute at a component render site; they are not uses.
struct RefCounts {
  int use_count = 0;
  int forward_count = 0;
  // Setter half of a state (zero for props).
  int call_count = 0;
  int setter_use_count = 0;
  int setter_forward_count = 0;

  friend bool operator==(const RefCounts&, const RefCounts&) = default;
};

struct StateDecl {
  NodeId state_id;
  std::string value_name;  // "" when the value slot is elided; `_state_k` when synthesized
  std::optional<std::string> setter_name;
  Span decl_span;
  Span init_span;
  NodeId component_id;
  bool synthesized = false;
  RefCounts refs;

  friend bool operator==(const StateDecl&, const StateDecl&) = default;
};

enum class DepResolution { State, StateSetter, Prop, LocalAlias, Local, Unresolved };
std::string_view to_string(DepResolution r);

struct DepRef {
  std::string root_name;
  std::string raw_text;
  Span span;
  DepResolution resolution = DepResolution::Unresolved;
  std::optional<NodeId> target;  // state or prop id when resolved to one
  Channel channel = Channel::Value;

  friend bool operator==(const DepRef&, const DepRef&) = default;
};

struct SetterCall {
  std::string name;  // callee text as written
  Span span;
  NodeId target;     // state (callee is its setter) or prop (callee is that prop)
  bool via_prop = false;

  friend bool operator==(const SetterCall&, const SetterCall&) = default;
};

struct EffectDecl {
  NodeId effect_id;
  Span span;       // the useEffect call
  Span body_span;  // the callback
  std::optional<std::vector<DepRef>> deps;
  std::vector<NameRef> body_reads;
  std::vector<SetterCall> setter_calls;
  NodeId component_id;
  int index = 0;

  friend bool operator==(const EffectDecl&, const EffectDecl&) = default;
};

// PropsSpread: keys callers pass to a component that spreads its whole props
// object onward; added when the project is linked.
enum class PropSource { DestructuredParam, PropsMemberAccess, SpreadRest, PropsSpread };
std::string_view to_string(PropSource s);

struct PropDecl {
  NodeId prop_id;
  std::string name;  // key as seen by the parent; `...rest` for rest bindings
  Span binding_span;
  NodeId component_id;
  PropSource source = PropSource::DestructuredParam;
  RefCounts refs;

  friend bool operator==(const PropDecl&, const PropDecl&) = default;
};

enum class AttrValueKind { IdentifierRef, MemberRef, CallbackWrapping, Literal, ComplexExpr };
std::string_view to_string(AttrValueKind k);

struct AttrBinding {
  std::string attr_name;
  AttrValueKind value_kind = AttrValueKind::Literal;
  std::optional<std::string> root_identifier;
  Span span;
  std::string raw_text;  // value source text
  // What the root identifier resolves to in the parent, if a state or prop.
  std::optional<NodeId> source;
  Channel channel = Channel::Value;

  friend bool operator==(const AttrBinding&, const AttrBinding&) = default;
};

struct SpreadBinding {
  Span span;
  std::string raw_text;
  enum class Kind { RestProps, PropsObject, Other } kind = Kind::Other;
  std::optional<NodeId> source;  // the rest prop for RestProps, a state/prop for Other

  friend bool operator==(const SpreadBinding&, const SpreadBinding&) = default;
};

struct RenderSite {
  NodeId site_id;
  NodeId parent_component_id;
  std::string child_name;
  Span span;
  std::vector<AttrBinding> attributes;
  bool has_spread = false;
  std::vector<SpreadBinding> spreads;
  // The tag names a local binding that is not a component (HOC result etc.).
  bool bound_to_non_component = false;

  friend bool operator==(const RenderSite&, const RenderSite&) = default;
};

enum class PropParamShape { None, Destructured, Object, Unsupported };
std::string_view to_string(PropParamShape s);

struct AliasTarget {
  NodeId target;  // state or prop id
  Channel channel = Channel::Value;
  Span span;      // the alias declaration

  friend bool operator==(const AliasTarget&, const AliasTarget&) = default;
};

struct ComponentDef {
  NodeId component_id;
  std::string name;
  FileId file_id = -1;
  std::string file;
  Span span;
  std::optional<NodeId> lexical_parent;
  PropParamShape params = PropParamShape::None;
  std::optional<std::string> props_object_name;
  // The props object (or a rest binding) escapes somewhere extraction cannot
  // follow, so the set of consumed keys is unknown.
  bool props_open = false;
  std::vector<StateDecl> states;
  std::vector<EffectDecl> effects;
  std::vector<PropDecl> declared_props;
  std::vector<RenderSite> render_sites;
  std::map<std::string, AliasTarget> local_aliases;
  std::vector<NameRef> identifier_reads;

  const PropDecl* find_prop(std::string_view name) const;

  friend bool operator==(const ComponentDef&, const ComponentDef&) = default;
};

struct FileExtraction {
  FileId file_id = -1;
  bool has_jsx = false;
  std::vector<ComponentDef> components;
  std::vector<Diagnostic> diagnostics;
  // Names bound at module level in this file that are not components.
  std::vector<std::string> non_component_bindings;
};

// Recognizes components and their hooks, props, render sites, and the
// reference counts among them. Pure function of the file and its tree.
FileExtraction extract_components(const SourceFile& file, const NormalizedAst& ast);

NodeId make_id(std::string_view kind, std::string_view path, const Span& span);

}  // namespace hooklens
