#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "hooklens/ast.h"

namespace hooklens::detail {

struct Scope {
  int parent = -1;
  const NormNode* owner = nullptr;
  bool function_scope = false;
  std::unordered_map<std::string, int> names;  // first binding of each name
};

struct Binding {
  std::string name;
  const NormNode* ident = nullptr;
  int scope = -1;
};

struct Reference {
  const NormNode* ident = nullptr;
  int scope = -1;
  int binding = -1;  // -1: global / undeclared
};

// Lexical scopes of one file. Declarations are hoisted to their scope (no
// temporal dead zone), `var` goes to the nearest function scope.
struct ScopeInfo {
  std::vector<Scope> scopes;
  std::vector<Binding> bindings;
  std::vector<Reference> references;
  std::unordered_map<const NormNode*, int> binding_index;    // binding identifier -> binding
  std::unordered_map<const NormNode*, int> reference_index;  // read identifier -> reference

  // Binding a read resolves to, or -1.
  int resolve(const NormNode* ident) const;
  // Bindings of the same name in enclosing scopes of `b`.
  std::vector<int> shadowed_by(int b) const;
  bool scope_within(int inner, int outer) const;
};

ScopeInfo analyze_scopes(const NormNode& root);

}  // namespace hooklens::detail
