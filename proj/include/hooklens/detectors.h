#pragma once

#include <string>
#include <vector>

#include "hooklens/graph.h"

namespace hooklens {

enum class FindingKind { UnreferencedStateOrProp, PropDrilling, EffectModifyingParentState };
std::string_view to_string(FindingKind k);

enum class Confidence { Definite, Suspect };
std::string_view to_string(Confidence c);

struct Finding {
  std::string finding_id;
  FindingKind kind = FindingKind::UnreferencedStateOrProp;
  std::vector<NodeId> node_ids;  // path order for drilling
  std::vector<Span> spans;       // parallel to node_ids
  std::string message;
  Confidence confidence = Confidence::Definite;
  // Drilling only: every prop on the provenance path, origin first.
  std::vector<NodeId> path;

  friend bool operator==(const Finding&, const Finding&) = default;
};

// State values and props whose forward closure never reaches a consuming use.
std::vector<Finding> detect_unreferenced(const HookGraph& graph);

// One finding per maximal provenance path that ends in a use and passes
// through at least `threshold` components that only forward the value.
std::vector<Finding> detect_prop_drilling(const HookGraph& graph, int threshold);

// Effects calling the setter of a state owned by a render ancestor.
std::vector<Finding> detect_effect_parent_mutation(const HookGraph& graph);

// All three, sorted by (file, span, kind) with ids assigned.
std::vector<Finding> run_detectors(const HookGraph& graph, int drill_threshold);

// Graph size counts plus finding counts per kind.
ProjectMetrics compute_metrics(const HookGraph& graph, const std::vector<Finding>& findings);

}  // namespace hooklens
