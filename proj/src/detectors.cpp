#include "hooklens/detectors.h"

#include <algorithm>
#include <set>
#include <tuple>

namespace hooklens {

std::string_view to_string(FindingKind k) {
  switch (k) {
    case FindingKind::UnreferencedStateOrProp: return "unreferenced_state_or_prop";
    case FindingKind::PropDrilling: return "prop_drilling";
    case FindingKind::EffectModifyingParentState: return "effect_modifying_parent_state";
  }
  return "unreferenced_state_or_prop";
}

std::string_view to_string(Confidence c) {
  return c == Confidence::Definite ? "definite" : "suspect";
}

namespace {

Finding make_finding(const HookGraph& g, FindingKind kind, std::vector<NodeId> ids, std::string message) {
  Finding f;
  f.kind = kind;
  f.message = std::move(message);
  for (const auto& id : ids) {
    const GraphNode* n = g.node(id);
    f.spans.push_back(n ? n->span : Span{});
    if (g.touched_by_unresolved(id)) f.confidence = Confidence::Suspect;
  }
  f.node_ids = std::move(ids);
  return f;
}

std::string label(const HookGraph& g, const NodeId& id) {
  const GraphNode* n = g.node(id);
  if (!n) return id;
  const GraphNode* c = n->parent_component ? g.node(*n->parent_component) : nullptr;
  return (c ? c->name + "." : std::string()) + (n->name.empty() ? "<unnamed>" : n->name);
}

// Value-channel flow out of a state, any flow out of a prop.
std::vector<const GraphEdge*> flow_out(const HookGraph& g, const GraphNode& n) {
  auto out = g.out_edges(n.id, EdgeKind::PropFlow);
  if (n.kind == GraphNodeKind::State) {
    std::erase_if(out, [](const GraphEdge* e) { return e->carries == Channel::Setter; });
  }
  return out;
}

bool strict_render_descendant(const HookGraph& g, const NodeId& ancestor, const NodeId& node) {
  if (ancestor == node) return false;
  std::set<NodeId> seen;
  std::vector<NodeId> stack{ancestor};
  while (!stack.empty()) {
    NodeId at = stack.back();
    stack.pop_back();
    for (const GraphEdge* e : g.out_edges(at, EdgeKind::Renders)) {
      if (e->to == node) return true;
      if (seen.insert(e->to).second) stack.push_back(e->to);
    }
  }
  return false;
}

}  // namespace

std::vector<Finding> detect_unreferenced(const HookGraph& g) {
  // Live = consumed locally or able to reach a live node. Everything else is
  // the greatest fixed point of "unused and only feeds unused nodes".
  std::map<NodeId, std::vector<NodeId>> preds;
  std::vector<NodeId> work;
  std::set<NodeId> live;
  for (const auto& n : g.nodes) {
    if (n.kind != GraphNodeKind::State && n.kind != GraphNodeKind::Prop) continue;
    for (const GraphEdge* e : flow_out(g, n)) preds[e->to].push_back(n.id);
    if (n.refs.use > 0) {
      live.insert(n.id);
      work.push_back(n.id);
    }
  }
  while (!work.empty()) {
    NodeId at = work.back();
    work.pop_back();
    for (const auto& p : preds[at]) {
      if (live.insert(p).second) work.push_back(p);
    }
  }
  std::vector<Finding> out;
  for (const auto& n : g.nodes) {
    if (n.kind != GraphNodeKind::State && n.kind != GraphNodeKind::Prop) continue;
    if (live.count(n.id)) continue;
    std::string what = n.kind == GraphNodeKind::State ? "state" : "prop";
    std::string msg = what + " '" + label(g, n.id) + "' is never read";
    if (n.refs.forward > 0) msg += " by any component it is passed to";
    if (n.kind == GraphNodeKind::State && n.refs.call > 0) msg += "; its setter is still called";
    out.push_back(make_finding(g, FindingKind::UnreferencedStateOrProp, {n.id}, std::move(msg)));
  }
  return out;
}

std::vector<Finding> detect_prop_drilling(const HookGraph& g, int threshold) {
  std::vector<Finding> out;
  for (const auto& n : g.nodes) {
    if (n.kind != GraphNodeKind::State) continue;
    for (const auto& p : trace_provenance(g, n.id)) {
      if (!p.terminal_use || p.hops.empty()) continue;
      std::vector<NodeId> ids{p.origin};
      std::vector<NodeId> path{p.origin};
      int pass = 0;
      for (std::size_t i = 0; i < p.hops.size(); ++i) {
        const auto& h = p.hops[i];
        path.push_back(h.prop_id);
        bool last = i + 1 == p.hops.size();
        if (!last && h.forwarded && !h.used_locally) {
          ids.push_back(h.prop_id);
          ++pass;
        }
      }
      if (pass < threshold) continue;
      ids.push_back(p.hops.back().prop_id);
      std::string what = p.channel == Channel::Setter ? "setter of state '" : "state '";
      std::string msg = what + label(g, n.id) + "' passes through " + std::to_string(pass) +
                        (pass == 1 ? " component" : " components") + " before use in '" +
                        label(g, p.hops.back().prop_id) + "'";
      Finding f = make_finding(g, FindingKind::PropDrilling, std::move(ids), std::move(msg));
      f.path = std::move(path);
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::vector<Finding> detect_effect_parent_mutation(const HookGraph& g) {
  std::vector<Finding> out;
  for (const auto& e : g.edges) {
    if (e.kind != EdgeKind::EffectSet) continue;
    const GraphNode* effect = g.node(e.from);
    const GraphNode* state = g.node(e.to);
    if (!effect || !state || !effect->parent_component || !state->parent_component) continue;
    if (!strict_render_descendant(g, *state->parent_component, *effect->parent_component)) continue;
    std::vector<NodeId> ids{e.from};
    ids.insert(ids.end(), e.via.begin(), e.via.end());
    ids.push_back(e.to);
    std::string msg = "effect in '" + label(g, *effect->parent_component) + "' sets state '" + label(g, e.to) +
                      "' of an ancestor";
    out.push_back(make_finding(g, FindingKind::EffectModifyingParentState, std::move(ids), std::move(msg)));
  }
  return out;
}

std::vector<Finding> run_detectors(const HookGraph& g, int drill_threshold) {
  std::vector<Finding> all = detect_unreferenced(g);
  for (auto& part : {detect_prop_drilling(g, drill_threshold), detect_effect_parent_mutation(g)}) {
    all.insert(all.end(), part.begin(), part.end());
  }

  auto key = [&](const Finding& f) {
    const GraphNode* n = g.node(f.node_ids.front());
    std::string file = n ? n->file : std::string();
    return std::make_tuple(file, f.spans.front().start_byte, f.spans.front().end_byte, static_cast<int>(f.kind),
                           f.node_ids);
  };
  std::stable_sort(all.begin(), all.end(), [&](const Finding& a, const Finding& b) { return key(a) < key(b); });
  std::map<FindingKind, int> next;
  for (auto& f : all) f.finding_id = std::string(to_string(f.kind)) + ":" + std::to_string(next[f.kind]++);
  return all;
}

ProjectMetrics compute_metrics(const HookGraph& g, const std::vector<Finding>& findings) {
  ProjectMetrics m = g.metrics;
  m.unreferenced_count = m.prop_drilling_count = m.effect_parent_count = 0;
  for (const auto& f : findings) {
    switch (f.kind) {
      case FindingKind::UnreferencedStateOrProp: m.unreferenced_count++; break;
      case FindingKind::PropDrilling: m.prop_drilling_count++; break;
      case FindingKind::EffectModifyingParentState: m.effect_parent_count++; break;
    }
  }
  return m;
}

}  // namespace hooklens
