#include "hooklens/extract.h"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "scope.h"

namespace hooklens {

using detail::ScopeInfo;

std::string_view to_string(Channel c) { return c == Channel::Value ? "value" : "setter"; }

std::string_view to_string(DepResolution r) {
  switch (r) {
    case DepResolution::State: return "state";
    case DepResolution::StateSetter: return "state_setter";
    case DepResolution::Prop: return "prop";
    case DepResolution::LocalAlias: return "local_alias";
    case DepResolution::Local: return "local";
    case DepResolution::Unresolved: return "unresolved";
  }
  return "unresolved";
}

std::string_view to_string(PropSource s) {
  switch (s) {
    case PropSource::DestructuredParam: return "destructured_param";
    case PropSource::PropsMemberAccess: return "props_member_access";
    case PropSource::SpreadRest: return "spread_rest";
    case PropSource::PropsSpread: return "props_spread";
  }
  return "destructured_param";
}

std::string_view to_string(AttrValueKind k) {
  switch (k) {
    case AttrValueKind::IdentifierRef: return "identifier_ref";
    case AttrValueKind::MemberRef: return "member_ref";
    case AttrValueKind::CallbackWrapping: return "callback_wrapping";
    case AttrValueKind::Literal: return "literal";
    case AttrValueKind::ComplexExpr: return "complex_expr";
  }
  return "complex_expr";
}

std::string_view to_string(PropParamShape s) {
  switch (s) {
    case PropParamShape::None: return "none";
    case PropParamShape::Destructured: return "destructured";
    case PropParamShape::Object: return "object";
    case PropParamShape::Unsupported: return "unsupported";
  }
  return "none";
}

NodeId make_id(std::string_view kind, std::string_view path, const Span& span) {
  return std::string(kind) + ":" + std::string(path) + ":" + std::to_string(span.start_byte) + "-" +
         std::to_string(span.end_byte);
}

const PropDecl* ComponentDef::find_prop(std::string_view prop_name) const {
  for (const auto& p : declared_props) {
    if (p.name == prop_name) return &p;
  }
  return nullptr;
}

namespace {

bool is_upper(std::string_view name) { return !name.empty() && name[0] >= 'A' && name[0] <= 'Z'; }

bool is_function_like(const NormNode& n) {
  return n.is(NodeKind::FunctionDecl) || n.is(NodeKind::ArrowFunction);
}

bool contains_jsx(const NormNode& n) {
  bool found = false;
  walk(n, [&](const NormNode& c) {
    if (c.is(NodeKind::JsxElement)) found = true;
    return !found;
  });
  return found;
}

// Return statements belonging to `fn` itself (not to nested functions).
void own_returns(const NormNode& n, std::vector<const NormNode*>& out) {
  for (const auto& c : n.children) {
    if (is_function_like(c) || c.is_other("GeneratorExpression") || c.is_other("GeneratorDeclaration") ||
        c.is_other("ClassDeclaration") || c.is_other("ClassExpression")) {
      continue;
    }
    if (c.is(NodeKind::ReturnStmt)) out.push_back(&c);
    own_returns(c, out);
  }
}

bool returns_jsx(const NormNode& fn) {
  const NormNode& body = function_body(fn);
  if (fn.has(flag::kExpressionBody)) return contains_jsx(body);
  std::vector<const NormNode*> returns;
  own_returns(body, returns);
  return std::any_of(returns.begin(), returns.end(), [](const NormNode* r) {
    return !r->children.empty() && contains_jsx(r->children[0]);
  });
}

std::string unquote(std::string_view text) {
  if (text.size() >= 2 && (text.front() == '"' || text.front() == '\'')) return std::string(text.substr(1, text.size() - 2));
  return std::string(text);
}

// Name of a non-computed key (identifier or string literal).
std::optional<std::string> key_name(const NormNode& key) {
  if (key.is(NodeKind::Identifier)) return key.name;
  if (key.is_other("Literal") && key.text) return unquote(*key.text);
  return std::nullopt;
}

const NormNode* leftmost_identifier(const NormNode& n) {
  const NormNode* cur = &n;
  while (true) {
    if (cur->is(NodeKind::Identifier)) return cur;
    if ((cur->is(NodeKind::MemberExpr) || cur->is(NodeKind::CallExpr)) && !cur->children.empty()) {
      cur = &cur->children[0];
      continue;
    }
    return nullptr;
  }
}

bool is_member_chain(const NormNode& n) {
  const NormNode* cur = &n;
  while (cur->is(NodeKind::MemberExpr)) cur = &cur->children[0];
  return cur->is(NodeKind::Identifier);
}

enum class TargetKind { StateValue, StateSetter, Prop, PropsObject, Alias };

struct Target {
  TargetKind kind;
  int component = -1;
  int index = -1;  // state or prop index; alias: unused
  std::string alias_name;
};

class Extractor {
 public:
  Extractor(const SourceFile& file, const NormalizedAst& ast)
      : file_(file), ast_(ast), scopes_(detail::analyze_scopes(ast.root)) {}

  FileExtraction run() {
    out_.file_id = file_.file_id;
    for (const auto& d : ast_.parse_diagnostics) {
      out_.diagnostics.push_back({file_.relative_path, d.span, "parse_error", d.message, {}});
    }
    index_parents(ast_.root, nullptr);
    out_.has_jsx = contains_jsx(ast_.root);
    collect_hook_names();
    find_components();
    for (std::size_t i = 0; i < fns_.size(); ++i) extract_params(static_cast<int>(i));
    for (std::size_t i = 0; i < fns_.size(); ++i) extract_body(static_cast<int>(i));
    for (std::size_t i = 0; i < fns_.size(); ++i) extract_member_props(static_cast<int>(i));
    for (std::size_t i = 0; i < fns_.size(); ++i) extract_render_sites(static_cast<int>(i));
    count_references();
    for (std::size_t i = 0; i < fns_.size(); ++i) extract_effects(static_cast<int>(i));
    report_shadowing();
    collect_module_bindings();
    widen_props_diagnostics();
    return std::move(out_);
  }

 private:
  // ------------------------------------------------------------ utilities

  void index_parents(const NormNode& n, const NormNode* parent) {
    parent_[&n] = parent;
    for (const auto& c : n.children) index_parents(c, &n);
  }

  const NormNode* parent(const NormNode* n) const {
    auto it = parent_.find(n);
    return it == parent_.end() ? nullptr : it->second;
  }

  void diag(const Span& span, std::string code, std::string message, std::vector<NodeId> ids) {
    out_.diagnostics.push_back({file_.relative_path, span, std::move(code), std::move(message), std::move(ids)});
  }

  ComponentDef& comp(int c) { return out_.components[c]; }

  const Target* target_of_binding(int binding) const {
    auto it = targets_.find(binding);
    return it == targets_.end() ? nullptr : &it->second;
  }

  const Target* target_of_ref(const NormNode* ident) const {
    int b = scopes_.resolve(ident);
    return b < 0 ? nullptr : target_of_binding(b);
  }

  void set_target(const NormNode& ident, Target t) {
    auto it = scopes_.binding_index.find(&ident);
    if (it != scopes_.binding_index.end()) targets_[it->second] = std::move(t);
  }

  void bind_leaves(const NormNode& pattern, const Target& t) {
    walk(pattern, [&](const NormNode& n) {
      if (n.is(NodeKind::Identifier) && n.has(flag::kBinding)) set_target(n, t);
      return true;
    });
  }

  // ------------------------------------------------------------ hooks

  void collect_hook_names() {
    state_hooks_.insert("useState");
    effect_hooks_.insert("useEffect");
    for (const auto& stmt : ast_.root.children) {
      const NormNode* decl = &stmt;
      if (!decl->is_other("ImportDeclaration")) continue;
      for (const auto& spec : decl->children) {
        if (!spec.is_other("ImportSpecifier") || spec.children.size() != 2) continue;
        auto imported = key_name(spec.children[0]);
        const auto& local = spec.children[1];
        if (!imported || !local.name) continue;
        if (*imported == "useState") state_hooks_.insert(*local.name);
        if (*imported == "useEffect") effect_hooks_.insert(*local.name);
      }
    }
  }

  bool is_hook_call(const NormNode& n, const std::set<std::string>& local_names, std::string_view hook) const {
    if (!n.is(NodeKind::CallExpr) || n.children.empty()) return false;
    const NormNode& callee = n.children[0];
    if (callee.is(NodeKind::Identifier)) return local_names.count(callee.name_or_empty()) > 0;
    if (callee.is(NodeKind::MemberExpr) && !callee.has(flag::kComputed)) {
      return callee.children[0].is(NodeKind::Identifier) && callee.children[1].name_or_empty() == hook;
    }
    return false;
  }

  bool is_state_call(const NormNode& n) const { return is_hook_call(n, state_hooks_, "useState"); }
  bool is_effect_call(const NormNode& n) const { return is_hook_call(n, effect_hooks_, "useEffect"); }

  // ------------------------------------------------------------ components

  static bool is_wrapper_callee(const NormNode& callee) {
    auto wrapper = [](std::string_view n) { return n == "memo" || n == "forwardRef"; };
    if (callee.is(NodeKind::Identifier)) return wrapper(callee.name_or_empty());
    if (callee.is(NodeKind::MemberExpr) && !callee.has(flag::kComputed)) {
      return wrapper(callee.children[1].name_or_empty());
    }
    return false;
  }

  // memo(fn), forwardRef(fn), memo(forwardRef(fn)).
  static const NormNode* unwrap_component_init(const NormNode& init) {
    if (is_function_like(init) && !init.is_other("GeneratorExpression")) return &init;
    if (init.is(NodeKind::CallExpr) && init.children.size() >= 2 && is_wrapper_callee(init.children[0])) {
      return unwrap_component_init(init.children[1]);
    }
    return nullptr;
  }

  struct Candidate {
    const NormNode* fn;
    std::string name;
    const NormNode* decl;
    const NormNode* name_ident;
  };

  void find_candidates(const NormNode& n, std::vector<Candidate>& out, std::unordered_set<const NormNode*>& claimed) {
    if (n.is(NodeKind::VariableDecl) && n.children.size() == 2 && n.children[0].is(NodeKind::Identifier)) {
      const auto& id = n.children[0];
      if (is_upper(id.name_or_empty())) {
        if (const NormNode* fn = unwrap_component_init(n.children[1])) {
          out.push_back({fn, *id.name, &n, &id});
          claimed.insert(fn);
        }
      }
    }
    if (n.is(NodeKind::FunctionDecl) && !claimed.count(&n)) {
      const NormNode* id = function_id(n);
      bool wrapped_expr = n.has(flag::kFunctionExpression) && is_wrapped_argument(n);
      if (id && is_upper(id->name_or_empty()) && (!n.has(flag::kFunctionExpression) || wrapped_expr)) {
        out.push_back({&n, *id->name, &n, n.has(flag::kFunctionExpression) ? nullptr : id});
        claimed.insert(&n);
      }
    }
    for (const auto& c : n.children) find_candidates(c, out, claimed);
  }

  // `function Foo` passed straight to memo/forwardRef (e.g. export default memo(function Foo(){})).
  bool is_wrapped_argument(const NormNode& fn) const {
    const NormNode* p = parent(&fn);
    return p && p->is(NodeKind::CallExpr) && p->children.size() >= 2 && &p->children[1] == &fn &&
           is_wrapper_callee(p->children[0]);
  }

  void find_components() {
    std::vector<Candidate> candidates;
    std::unordered_set<const NormNode*> claimed;
    find_candidates(ast_.root, candidates, claimed);
    for (const auto& cand : candidates) {
      if (!returns_jsx(*cand.fn)) continue;
      ComponentDef def;
      def.name = cand.name;
      def.file_id = file_.file_id;
      def.file = file_.relative_path;
      def.span = cand.decl->span;
      def.component_id = make_id("component", file_.relative_path, def.span);
      fn_index_[cand.fn] = static_cast<int>(fns_.size());
      fns_.push_back(cand.fn);
      if (cand.name_ident) {
        auto it = scopes_.binding_index.find(cand.name_ident);
        if (it != scopes_.binding_index.end()) component_bindings_.insert(it->second);
      }
      out_.components.push_back(std::move(def));
    }
    for (std::size_t i = 0; i < fns_.size(); ++i) {
      for (const NormNode* p = parent(fns_[i]); p; p = parent(p)) {
        auto it = fn_index_.find(p);
        if (it != fn_index_.end()) {
          out_.components[i].lexical_parent = out_.components[it->second].component_id;
          break;
        }
      }
    }
  }

  // Innermost component function enclosing `n`, or -1.
  int owning_component(const NormNode* n) const {
    for (const NormNode* p = n; p; p = parent(p)) {
      auto it = fn_index_.find(p);
      if (it != fn_index_.end()) return it->second;
    }
    return -1;
  }

  // ------------------------------------------------------------ props

  int add_prop(int c, const std::string& name, const Span& span, PropSource source) {
    auto& props = comp(c).declared_props;
    for (std::size_t i = 0; i < props.size(); ++i) {
      if (props[i].name == name) return static_cast<int>(i);
    }
    PropDecl p;
    p.name = name;
    p.binding_span = span;
    p.component_id = comp(c).component_id;
    p.source = source;
    p.prop_id = make_id("prop", file_.relative_path, span);
    props.push_back(std::move(p));
    return static_cast<int>(props.size()) - 1;
  }

  void destructure_props(int c, const NormNode& pattern, PropSource named_source) {
    for (const auto& entry : pattern.children) {
      if (entry.is_other("RestElement")) {
        int idx = add_prop(c, "...rest", entry.span, PropSource::SpreadRest);
        bind_leaves(entry, {TargetKind::Prop, c, idx, {}});
        continue;
      }
      if (!entry.is_other("Property") || entry.children.empty()) continue;
      std::optional<std::string> name;
      if (entry.has(flag::kShorthand)) {
        const NormNode& v = entry.children[0];
        const NormNode* id = v.is_other("AssignmentPattern") ? &v.children[0] : &v;
        if (id->is(NodeKind::Identifier)) name = id->name;
      } else if (!entry.has(flag::kComputed)) {
        name = key_name(entry.children[0]);
      }
      if (!name) {
        comp(c).props_open = true;
        diag(entry.span, "unresolved_props_object", "computed key in props destructuring", {comp(c).component_id});
        continue;
      }
      int idx = add_prop(c, *name, entry.span, named_source);
      bind_leaves(entry.children.back(), {TargetKind::Prop, c, idx, {}});
    }
  }

  void extract_params(int c) {
    const NormNode& params = function_params(*fns_[c]);
    if (params.children.empty()) return;
    const NormNode* p = &params.children[0];
    if (p->is_other("AssignmentPattern")) p = &p->children[0];
    auto& def = comp(c);
    if (p->is(NodeKind::ObjectPattern)) {
      def.params = PropParamShape::Destructured;
      destructure_props(c, *p, PropSource::DestructuredParam);
    } else if (p->is(NodeKind::Identifier)) {
      def.params = PropParamShape::Object;
      def.props_object_name = p->name;
      set_target(*p, {TargetKind::PropsObject, c, -1, {}});
    } else {
      def.params = PropParamShape::Unsupported;
      def.props_open = true;
      diag(p->span, "unresolved_props_object", "unsupported props parameter pattern", {def.component_id});
    }
  }

  // `props.x` with `props` resolving to a props object: returns (component, key).
  std::optional<std::pair<int, std::string>> props_member(const NormNode* ident) const {
    const Target* t = target_of_ref(ident);
    if (!t || t->kind != TargetKind::PropsObject) return std::nullopt;
    const NormNode* m = parent(ident);
    if (!m || !m->is(NodeKind::MemberExpr) || &m->children[0] != ident) return std::nullopt;
    const NormNode& prop = m->children[1];
    if (m->has(flag::kComputed)) {
      if (!prop.is_other("Literal")) return std::nullopt;
      return std::make_pair(t->component, unquote(prop.text.value_or("")));
    }
    return std::make_pair(t->component, prop.name_or_empty());
  }

  bool is_spread_argument(const NormNode* ident) const {
    const NormNode* p = parent(ident);
    return p && p->is(NodeKind::JsxSpreadAttribute);
  }

  void extract_member_props(int c) {
    // Member accesses on this component's props object, in source order.
    for (const auto& ref : scopes_.references) {
      const Target* t = target_of_ref(ref.ident);
      if (!t || t->kind != TargetKind::PropsObject || t->component != c) continue;
      if (consumed_.count(ref.ident)) continue;
      if (auto pm = props_member(ref.ident)) {
        add_prop(c, pm->second, parent(ref.ident)->span, PropSource::PropsMemberAccess);
      } else if (!is_spread_argument(ref.ident)) {
        if (!comp(c).props_open) {
          diag(ref.ident->span, "unresolved_props_object", "props object used as a whole", {comp(c).component_id});
        }
        comp(c).props_open = true;
      }
    }
  }

  // ------------------------------------------------------------ body

  const NormNode* init_of_identifier_decl(const NormNode& decl) const {
    if (decl.children.size() == 2 && decl.children[0].is(NodeKind::Identifier)) return &decl.children[1];
    return nullptr;
  }

  void extract_body(int c) {
    const NormNode& body = function_body(*fns_[c]);
    if (!body.is_other("BlockStatement")) return;
    for (const auto& stmt : body.children) {
      if (stmt.is_other("VariableDeclaration")) {
        for (const auto& decl : stmt.children) body_declaration(c, decl);
      } else if (stmt.is_other("ExpressionStatement") && !stmt.children.empty() && is_state_call(stmt.children[0])) {
        add_state(c, stmt.children[0], stmt.children[0].span, nullptr);
      }
    }
  }

  void add_state(int c, const NormNode& call, const Span& decl_span, const NormNode* pattern) {
    auto& def = comp(c);
    StateDecl s;
    int k = static_cast<int>(def.states.size());
    s.decl_span = decl_span;
    s.init_span = call.children.size() > 1 ? call.children[1].span : call.span;
    s.component_id = def.component_id;
    s.state_id = make_id("state", file_.relative_path, decl_span);
    Target value{TargetKind::StateValue, c, k, {}};
    bool ok = pattern && pattern->is(NodeKind::ArrayPattern);
    if (ok) {
      const auto& els = pattern->children;
      if (els.empty() || els[0].is_other("Hole")) {
        s.value_name = "";
      } else if (els[0].is(NodeKind::Identifier)) {
        s.value_name = *els[0].name;
        set_target(els[0], value);
      } else {
        ok = false;
        bind_leaves(els[0], value);
      }
      if (els.size() > 1 && els[1].is(NodeKind::Identifier)) {
        s.setter_name = els[1].name;
        set_target(els[1], {TargetKind::StateSetter, c, k, {}});
      }
    } else if (pattern) {
      bind_leaves(*pattern, value);
    }
    if (!ok) {
      s.synthesized = true;
      s.value_name = "_state_" + std::to_string(k);
      diag(call.span, "unresolved_state_pattern", "useState result is not destructured into [value, setter]",
           {s.state_id});
    }
    def.states.push_back(std::move(s));
  }

  void body_declaration(int c, const NormNode& decl) {
    if (decl.children.size() < 2) return;
    const NormNode& pattern = decl.children[0];
    const NormNode& init = decl.children[1];
    if (is_state_call(init)) {
      add_state(c, init, decl.span, &pattern);
      return;
    }
    // const {a, b} = props
    if (pattern.is(NodeKind::ObjectPattern) && init.is(NodeKind::Identifier)) {
      const Target* t = target_of_ref(&init);
      if (t && t->kind == TargetKind::PropsObject && t->component == c) {
        consumed_.insert(&init);
        destructure_props(c, pattern, PropSource::PropsMemberAccess);
        return;
      }
    }
    if (!pattern.is(NodeKind::Identifier)) return;
    const NormNode* source_ident = nullptr;
    std::optional<AliasTarget> alias;
    if (init.is(NodeKind::Identifier)) {
      source_ident = &init;
      if (const Target* t = target_of_ref(&init)) {
        if (t->kind == TargetKind::Alias) {
          const auto& owner = comp(t->component);
          diag(decl.span, "unresolved_alias", "alias of alias '" + *init.name + "' is not followed",
               {owner.local_aliases.at(t->alias_name).target});
          return;
        }
        alias = alias_for(*t, decl.span);
      }
    } else if (init.is(NodeKind::MemberExpr) && init.children[0].is(NodeKind::Identifier)) {
      if (auto pm = props_member(&init.children[0])) {
        int idx = add_prop(pm->first, pm->second, init.span, PropSource::PropsMemberAccess);
        source_ident = &init.children[0];
        alias = AliasTarget{comp(pm->first).declared_props[idx].prop_id, Channel::Value, decl.span};
      }
    }
    if (!alias) return;
    consumed_.insert(source_ident);
    comp(c).local_aliases[*pattern.name] = *alias;
    set_target(pattern, {TargetKind::Alias, c, -1, *pattern.name});
  }

  std::optional<AliasTarget> alias_for(const Target& t, const Span& span) {
    switch (t.kind) {
      case TargetKind::StateValue:
        return AliasTarget{comp(t.component).states[t.index].state_id, Channel::Value, span};
      case TargetKind::StateSetter:
        return AliasTarget{comp(t.component).states[t.index].state_id, Channel::Setter, span};
      case TargetKind::Prop:
        return AliasTarget{comp(t.component).declared_props[t.index].prop_id, Channel::Value, span};
      default:
        return std::nullopt;
    }
  }

  // Resolved meaning of an identifier read: (node id, channel, is prop).
  struct Resolved {
    NodeId id;
    Channel channel;
    bool prop;
    int component;
    int index;  // state or prop index in that component
  };

  std::optional<Resolved> resolve_ident(const NormNode* ident) {
    const Target* t = target_of_ref(ident);
    if (!t) return std::nullopt;
    switch (t->kind) {
      case TargetKind::StateValue:
        return Resolved{comp(t->component).states[t->index].state_id, Channel::Value, false, t->component, t->index};
      case TargetKind::StateSetter:
        return Resolved{comp(t->component).states[t->index].state_id, Channel::Setter, false, t->component, t->index};
      case TargetKind::Prop:
        return Resolved{comp(t->component).declared_props[t->index].prop_id, Channel::Value, true, t->component,
                        t->index};
      case TargetKind::PropsObject:
        if (auto pm = props_member(ident)) {
          int idx = find_prop_index(pm->first, pm->second);
          if (idx >= 0) {
            return Resolved{comp(pm->first).declared_props[idx].prop_id, Channel::Value, true, pm->first, idx};
          }
        }
        return std::nullopt;
      case TargetKind::Alias: {
        const AliasTarget& a = comp(t->component).local_aliases.at(t->alias_name);
        return resolve_id(a.target, a.channel);
      }
    }
    return std::nullopt;
  }

  int find_prop_index(int c, const std::string& name) const {
    const auto& props = out_.components[c].declared_props;
    for (std::size_t i = 0; i < props.size(); ++i) {
      if (props[i].name == name) return static_cast<int>(i);
    }
    return -1;
  }

  std::optional<Resolved> resolve_id(const NodeId& id, Channel ch) {
    for (std::size_t c = 0; c < out_.components.size(); ++c) {
      const auto& def = out_.components[c];
      for (std::size_t i = 0; i < def.states.size(); ++i) {
        if (def.states[i].state_id == id) return Resolved{id, ch, false, static_cast<int>(c), static_cast<int>(i)};
      }
      for (std::size_t i = 0; i < def.declared_props.size(); ++i) {
        if (def.declared_props[i].prop_id == id) return Resolved{id, ch, true, static_cast<int>(c), static_cast<int>(i)};
      }
    }
    return std::nullopt;
  }

  // ------------------------------------------------------------ render sites

  void collect_jsx(const NormNode& n, int c, std::vector<const NormNode*>& out) {
    if (n.is(NodeKind::JsxElement)) out.push_back(&n);
    for (const auto& ch : n.children) {
      auto it = fn_index_.find(&ch);
      if (it != fn_index_.end() && it->second != c) continue;  // nested component
      collect_jsx(ch, c, out);
    }
  }

  static const NormNode* callback_callee(const NormNode& fn) {
    const NormNode& body = function_body(fn);
    const NormNode* call = nullptr;
    if (fn.has(flag::kExpressionBody)) {
      call = &body;
    } else if (body.is_other("BlockStatement") && body.children.size() == 1 &&
               body.children[0].is_other("ExpressionStatement")) {
      call = &body.children[0].children[0];
    }
    if (!call || !call->is(NodeKind::CallExpr)) return nullptr;
    const NormNode& callee = call->children[0];
    if (!is_member_chain(callee)) return nullptr;
    return &callee;
  }

  void classify_attr(AttrBinding& a, const NormNode& attr, const NormNode*& root) {
    root = nullptr;
    if (attr.children.size() < 2) {
      a.value_kind = AttrValueKind::Literal;
      a.span = attr.span;
      return;
    }
    const NormNode& value = attr.children[1];
    a.span = value.span;
    a.raw_text = std::string(file_.slice(value.span));
    if (value.is_other("Literal")) {
      a.value_kind = AttrValueKind::Literal;
      return;
    }
    if (!value.is(NodeKind::JsxExpressionContainer) || value.children.empty()) {
      a.value_kind = value.is(NodeKind::JsxExpressionContainer) ? AttrValueKind::Literal : AttrValueKind::ComplexExpr;
      return;
    }
    const NormNode& e = value.children[0];
    a.raw_text = std::string(file_.slice(e.span));
    if (e.is(NodeKind::Identifier)) {
      a.value_kind = AttrValueKind::IdentifierRef;
      root = &e;
    } else if (e.is(NodeKind::MemberExpr) && is_member_chain(e)) {
      a.value_kind = AttrValueKind::MemberRef;
      root = leftmost_identifier(e);
    } else if (is_function_like(e) && callback_callee(e)) {
      a.value_kind = AttrValueKind::CallbackWrapping;
      root = leftmost_identifier(*callback_callee(e));
    } else if (e.is_other("Literal") || (e.is_other("TemplateLiteral") && e.children.empty())) {
      a.value_kind = AttrValueKind::Literal;
    } else {
      a.value_kind = AttrValueKind::ComplexExpr;
    }
    if (root) a.root_identifier = root->name;
  }

  void extract_render_sites(int c) {
    std::vector<const NormNode*> elements;
    collect_jsx(function_body(*fns_[c]), c, elements);
    for (const NormNode* el : elements) {
      if (el->has(flag::kFragment) || el->children.empty() || !el->children[0].is(NodeKind::Identifier)) continue;
      const NormNode& tag = el->children[0];
      if (!is_upper(tag.name_or_empty())) continue;
      RenderSite site;
      site.parent_component_id = comp(c).component_id;
      site.child_name = *tag.name;
      site.span = el->span;
      site.site_id = make_id("site", file_.relative_path, el->span);
      int tb = scopes_.resolve(&tag);
      if (tb >= 0 && !component_bindings_.count(tb) && !is_import_binding(tb)) site.bound_to_non_component = true;
      for (const auto& attr : el->children) {
        if (attr.is(NodeKind::JsxSpreadAttribute)) {
          site.has_spread = true;
          site.spreads.push_back(classify_spread(attr));
          continue;
        }
        if (!attr.is(NodeKind::JsxAttribute)) continue;
        const std::string& name = attr.name_or_empty();
        if (name == "key" || name == "ref") continue;  // consumed by React, never a prop
        AttrBinding a;
        a.attr_name = name;
        const NormNode* root = nullptr;
        classify_attr(a, attr, root);
        if (root) {
          if (auto r = resolve_ident(root)) {
            a.source = r->id;
            a.channel = r->channel;
            forwards_[root] = r->channel;
          }
        }
        site.attributes.push_back(std::move(a));
      }
      comp(c).render_sites.push_back(std::move(site));
    }
  }

  SpreadBinding classify_spread(const NormNode& attr) {
    SpreadBinding s;
    const NormNode& arg = attr.children[0];
    s.span = attr.span;
    s.raw_text = std::string(file_.slice(arg.span));
    if (arg.is(NodeKind::Identifier)) {
      const Target* t = target_of_ref(&arg);
      if (t && t->kind == TargetKind::PropsObject) {
        s.kind = SpreadBinding::Kind::PropsObject;
        props_spreads_.insert(&arg);
        return s;
      }
      if (t && t->kind == TargetKind::Prop && comp(t->component).declared_props[t->index].source == PropSource::SpreadRest) {
        s.kind = SpreadBinding::Kind::RestProps;
        s.source = comp(t->component).declared_props[t->index].prop_id;
        forwards_[&arg] = Channel::Value;
        return s;
      }
      if (auto r = resolve_ident(&arg)) {
        s.source = r->id;
        forwards_[&arg] = r->channel;
      }
    }
    return s;
  }

  bool is_import_binding(int b) const {
    const NormNode* p = parent(scopes_.bindings[b].ident);
    return p && (p->is_other("ImportSpecifier") || p->is_other("ImportDefaultSpecifier") ||
                 p->is_other("ImportNamespaceSpecifier"));
  }

  // ------------------------------------------------------------ counting

  RefCounts* counts_for(const Resolved& r) {
    auto& def = comp(r.component);
    return r.prop ? &def.declared_props[r.index].refs : &def.states[r.index].refs;
  }

  bool is_callee(const NormNode* ident) const {
    const NormNode* node = ident;
    // props.onX() : the member expression is the callee
    const NormNode* p = parent(node);
    if (p && p->is(NodeKind::MemberExpr) && &p->children[0] == node) {
      const Target* t = target_of_ref(ident);
      if (t && t->kind == TargetKind::PropsObject) {
        node = p;
        p = parent(p);
      }
    }
    return p && p->is(NodeKind::CallExpr) && &p->children[0] == node;
  }

  void count_references() {
    for (const auto& ref : scopes_.references) {
      const NormNode* ident = ref.ident;
      if (ident->has(flag::kWrite) || consumed_.count(ident) || props_spreads_.count(ident)) continue;
      auto r = resolve_ident(ident);
      if (!r) continue;
      RefCounts* rc = counts_for(*r);
      auto fwd = forwards_.find(ident);
      if (fwd != forwards_.end()) {
        (r->channel == Channel::Setter && !r->prop ? rc->setter_forward_count : rc->forward_count)++;
      } else if (r->channel == Channel::Setter && !r->prop) {
        (is_callee(ident) ? rc->call_count : rc->setter_use_count)++;
      } else {
        rc->use_count++;
      }
    }
  }

  // ------------------------------------------------------------ effects

  void extract_effects(int c) {
    auto& def = comp(c);
    const NormNode& body = function_body(*fns_[c]);
    if (!body.is_other("BlockStatement")) return;
    for (const auto& stmt : body.children) {
      if (!stmt.is_other("ExpressionStatement") || stmt.children.empty()) continue;
      const NormNode& call = stmt.children[0];
      if (!is_effect_call(call)) continue;
      EffectDecl e;
      e.span = call.span;
      e.effect_id = make_id("effect", file_.relative_path, call.span);
      e.component_id = def.component_id;
      e.index = static_cast<int>(def.effects.size());
      e.body_span = call.children.size() > 1 ? call.children[1].span : call.span;
      if (call.children.size() > 1) effect_body(call.children[1], e);
      if (call.children.size() > 2) {
        const NormNode& deps = call.children[2];
        e.deps.emplace();
        if (deps.is_other("ArrayExpression")) {
          for (const auto& d : deps.children) {
            if (!d.is_other("Hole")) e.deps->push_back(dep_ref(d));
          }
        } else {
          diag(deps.span, "non_literal_deps", "dependency list is not an array literal", {e.effect_id});
        }
      }
      def.effects.push_back(std::move(e));
    }
  }

  void effect_body(const NormNode& cb, EffectDecl& e) {
    walk(cb, [&](const NormNode& n) {
      if (n.is(NodeKind::Identifier) && (n.flags & flag::kRoleMask) == 0) e.body_reads.push_back({*n.name, n.span});
      if (n.is(NodeKind::CallExpr)) {
        const NormNode& callee = n.children[0];
        const NormNode* ident = nullptr;
        if (callee.is(NodeKind::Identifier)) {
          ident = &callee;
        } else if (callee.is(NodeKind::MemberExpr) && callee.children[0].is(NodeKind::Identifier)) {
          const Target* t = target_of_ref(&callee.children[0]);
          if (t && t->kind == TargetKind::PropsObject) ident = &callee.children[0];
        }
        if (ident) {
          if (auto r = resolve_ident(ident)) {
            if (r->prop || r->channel == Channel::Setter) {
              e.setter_calls.push_back({std::string(file_.slice(callee.span)), n.span, r->id, r->prop});
            }
          }
        }
      }
      return true;
    });
  }

  DepRef dep_ref(const NormNode& d) {
    DepRef ref;
    ref.span = d.span;
    ref.raw_text = std::string(file_.slice(d.span));
    const NormNode* root = leftmost_identifier(d);
    if (!root) {
      ref.resolution = DepResolution::Unresolved;
      return ref;
    }
    ref.root_name = *root->name;
    const Target* t = target_of_ref(root);
    if (!t) {
      ref.resolution = scopes_.resolve(root) >= 0 ? DepResolution::Local : DepResolution::Unresolved;
      return ref;
    }
    auto r = resolve_ident(root);
    switch (t->kind) {
      case TargetKind::StateValue: ref.resolution = DepResolution::State; break;
      case TargetKind::StateSetter: ref.resolution = DepResolution::StateSetter; break;
      case TargetKind::Prop: ref.resolution = DepResolution::Prop; break;
      case TargetKind::Alias: ref.resolution = DepResolution::LocalAlias; break;
      case TargetKind::PropsObject: ref.resolution = r ? DepResolution::Prop : DepResolution::Local; break;
    }
    if (r) {
      ref.target = r->id;
      ref.channel = r->channel;
    }
    return ref;
  }

  // ------------------------------------------------------------ diagnostics

  void report_shadowing() {
    for (std::size_t b = 0; b < scopes_.bindings.size(); ++b) {
      if (owning_component(scopes_.bindings[b].ident) < 0) continue;
      for (int outer : scopes_.shadowed_by(static_cast<int>(b))) {
        const Target* t = target_of_binding(outer);
        if (!t) continue;
        std::vector<NodeId> ids;
        if (t->kind == TargetKind::Alias) {
          ids.push_back(comp(t->component).local_aliases.at(t->alias_name).target);
        } else if (t->kind == TargetKind::Prop) {
          ids.push_back(comp(t->component).declared_props[t->index].prop_id);
        } else if (t->kind == TargetKind::StateValue || t->kind == TargetKind::StateSetter) {
          ids.push_back(comp(t->component).states[t->index].state_id);
        } else {
          ids.push_back(comp(t->component).component_id);
        }
        diag(scopes_.bindings[b].ident->span, "shadowed_binding",
             "'" + scopes_.bindings[b].name + "' shadows an outer state or prop binding", ids);
        break;
      }
    }
  }

  // An escaping props object leaves every prop of that component unresolved.
  void widen_props_diagnostics() {
    for (auto& d : out_.diagnostics) {
      if (d.code != "unresolved_props_object") continue;
      std::vector<NodeId> extra;
      for (const auto& id : d.node_ids) {
        for (const auto& c : out_.components) {
          if (c.component_id != id) continue;
          for (const auto& p : c.declared_props) extra.push_back(p.prop_id);
        }
      }
      d.node_ids.insert(d.node_ids.end(), extra.begin(), extra.end());
    }
  }

  void collect_module_bindings() {
    if (scopes_.scopes.empty()) return;
    std::set<std::string> names;
    for (const auto& [name, b] : scopes_.scopes[0].names) {
      if (!component_bindings_.count(b) && !is_import_binding(b)) names.insert(name);
    }
    out_.non_component_bindings.assign(names.begin(), names.end());
    // Components' identifier reads.
    for (std::size_t c = 0; c < fns_.size(); ++c) {
      std::vector<NameRef> reads;
      walk(function_body(*fns_[c]), [&](const NormNode& n) {
        if (n.is(NodeKind::Identifier) && (n.flags & flag::kRoleMask) == 0) reads.push_back({*n.name, n.span});
        return true;
      });
      out_.components[c].identifier_reads = std::move(reads);
    }
  }

  const SourceFile& file_;
  const NormalizedAst& ast_;
  ScopeInfo scopes_;
  FileExtraction out_;
  std::unordered_map<const NormNode*, const NormNode*> parent_;
  std::set<std::string> state_hooks_;
  std::set<std::string> effect_hooks_;
  std::vector<const NormNode*> fns_;
  std::unordered_map<const NormNode*, int> fn_index_;
  std::unordered_set<int> component_bindings_;
  std::unordered_map<int, Target> targets_;
  std::unordered_set<const NormNode*> consumed_;       // alias / destructure sources
  std::unordered_set<const NormNode*> props_spreads_;  // {...props}
  std::unordered_map<const NormNode*, Channel> forwards_;
};

}  // namespace

FileExtraction extract_components(const SourceFile& file, const NormalizedAst& ast) {
  return Extractor(file, ast).run();
}

}  // namespace hooklens
