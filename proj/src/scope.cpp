#include "scope.h"

namespace hooklens::detail {
namespace {

bool is_function_like(const NormNode& n) {
  return n.is(NodeKind::FunctionDecl) || n.is(NodeKind::ArrowFunction) || n.is_other("GeneratorDeclaration") ||
         n.is_other("GeneratorExpression") || n.is_other("TSDeclareFunction");
}

bool opens_block_scope(const NormNode& n) {
  return n.is_other("BlockStatement") || n.is_other("ForStatement") || n.is_other("ForInStatement") ||
         n.is_other("ForOfStatement") || n.is_other("SwitchStatement") || n.is_other("CatchClause") ||
         n.is_other("StaticBlock") || n.is_other("ClassExpression") || n.is_other("TSModuleDeclaration");
}

class Builder {
 public:
  explicit Builder(ScopeInfo& info) : info_(info) {}

  void run(const NormNode& root) {
    int module = open(&root, true, -1);
    for (const auto& c : root.children) visit(c, module);
  }

 private:
  int open(const NormNode* owner, bool fn, int parent) {
    Scope s;
    s.parent = parent;
    s.owner = owner;
    s.function_scope = fn;
    info_.scopes.push_back(std::move(s));
    return static_cast<int>(info_.scopes.size()) - 1;
  }

  int function_scope_of(int scope) const {
    while (scope >= 0 && !info_.scopes[scope].function_scope) scope = info_.scopes[scope].parent;
    return scope;
  }

  void bind(const NormNode& ident, int scope) {
    int idx = static_cast<int>(info_.bindings.size());
    info_.bindings.push_back({*ident.name, &ident, scope});
    info_.binding_index[&ident] = idx;
    info_.scopes[scope].names.try_emplace(*ident.name, idx);
  }

  void reference(const NormNode& ident, int scope) {
    info_.reference_index[&ident] = static_cast<int>(info_.references.size());
    info_.references.push_back({&ident, scope, -1});
  }

  // Binding identifiers of a pattern go to `target`; default values and
  // computed keys are ordinary expressions evaluated in `scope`.
  void bind_pattern(const NormNode& n, int target, int scope) {
    switch (n.kind) {
      case NodeKind::Identifier:
        if (n.has(flag::kBinding)) {
          bind(n, target);
        } else {
          visit(n, scope);
        }
        return;
      case NodeKind::ObjectPattern:
      case NodeKind::ArrayPattern:
        for (const auto& c : n.children) bind_pattern(c, target, scope);
        return;
      default:
        break;
    }
    if (n.is_other("Property")) {
      if (n.children.size() == 2) {
        if (n.has(flag::kComputed)) visit(n.children[0], scope);
        bind_pattern(n.children[1], target, scope);
      } else if (!n.children.empty()) {
        bind_pattern(n.children[0], target, scope);
      }
      return;
    }
    if (n.is_other("RestElement")) {
      for (const auto& c : n.children) bind_pattern(c, target, scope);
      return;
    }
    if (n.is_other("AssignmentPattern")) {
      bind_pattern(n.children[0], target, scope);
      visit(n.children[1], scope);
      return;
    }
    if (n.is_other("Hole")) return;
    visit(n, scope);
  }

  void visit_function(const NormNode& fn, int scope) {
    bool expression = fn.has(flag::kFunctionExpression) || fn.is(NodeKind::ArrowFunction) ||
                      fn.is_other("GeneratorExpression");
    int inner = open(&fn, true, scope);
    const NormNode* id = nullptr;
    if (!fn.children.empty() && fn.children[0].is(NodeKind::Identifier)) id = &fn.children[0];
    if (id) bind(*id, expression ? inner : scope);
    for (const auto& c : fn.children) {
      if (&c == id) continue;
      if (c.is_other("Params")) {
        for (const auto& p : c.children) bind_pattern(p, inner, inner);
      } else if (c.is_other("BlockStatement") && &c == &fn.children.back()) {
        for (const auto& s : c.children) visit(s, inner);
      } else {
        visit(c, inner);
      }
    }
  }

  void visit(const NormNode& n, int scope) {
    if (n.is(NodeKind::Identifier)) {
      auto role = n.flags & flag::kRoleMask;
      if (role == 0 || role == flag::kWrite || role == flag::kJsxTag) {
        reference(n, scope);
      } else if (role == flag::kBinding) {
        bind(n, scope);
      }
      return;
    }
    if (is_function_like(n)) {
      visit_function(n, scope);
      return;
    }
    if (n.is_other("VariableDeclaration")) {
      for (const auto& d : n.children) {
        int target = d.has(flag::kVar) ? function_scope_of(scope) : scope;
        if (!d.children.empty()) bind_pattern(d.children[0], target, scope);
        for (std::size_t i = 1; i < d.children.size(); ++i) visit(d.children[i], scope);
      }
      return;
    }
    if (n.is_other("ClassDeclaration")) {
      int inner = open(&n, false, scope);
      for (const auto& c : n.children) {
        if (c.is(NodeKind::Identifier) && c.has(flag::kBinding)) {
          bind(c, scope);
        } else {
          visit(c, inner);
        }
      }
      return;
    }
    if (n.is_other("CatchClause")) {
      int inner = open(&n, false, scope);
      for (const auto& c : n.children) {
        if (c.is_other("BlockStatement")) {
          for (const auto& s : c.children) visit(s, inner);
        } else {
          bind_pattern(c, inner, inner);
        }
      }
      return;
    }
    if (n.is_other("ImportDeclaration")) {
      int module = 0;
      for (const auto& spec : n.children) {
        for (const auto& c : spec.children) {
          if (c.is(NodeKind::Identifier) && c.has(flag::kBinding)) bind(c, module);
        }
      }
      return;
    }
    if (opens_block_scope(n)) {
      int inner = open(&n, false, scope);
      for (const auto& c : n.children) visit(c, inner);
      return;
    }
    for (const auto& c : n.children) visit(c, scope);
  }

  ScopeInfo& info_;
};

}  // namespace

int ScopeInfo::resolve(const NormNode* ident) const {
  auto it = reference_index.find(ident);
  if (it == reference_index.end()) return -1;
  return references[it->second].binding;
}

std::vector<int> ScopeInfo::shadowed_by(int b) const {
  std::vector<int> out;
  const auto& binding = bindings[b];
  for (int s = scopes[binding.scope].parent; s >= 0; s = scopes[s].parent) {
    auto it = scopes[s].names.find(binding.name);
    if (it != scopes[s].names.end()) out.push_back(it->second);
  }
  return out;
}

bool ScopeInfo::scope_within(int inner, int outer) const {
  for (int s = inner; s >= 0; s = scopes[s].parent) {
    if (s == outer) return true;
  }
  return false;
}

ScopeInfo analyze_scopes(const NormNode& root) {
  ScopeInfo info;
  Builder(info).run(root);
  for (auto& ref : info.references) {
    const std::string& name = *ref.ident->name;
    for (int s = ref.scope; s >= 0; s = info.scopes[s].parent) {
      auto it = info.scopes[s].names.find(name);
      if (it != info.scopes[s].names.end()) {
        ref.binding = it->second;
        break;
      }
    }
  }
  return info;
}

}  // namespace hooklens::detail
