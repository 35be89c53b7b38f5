#include "hooklens/graph.h"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

namespace hooklens {

std::string_view to_string(GraphNodeKind k) {
  switch (k) {
    case GraphNodeKind::Component: return "component";
    case GraphNodeKind::State: return "state";
    case GraphNodeKind::Prop: return "prop";
    case GraphNodeKind::Effect: return "effect";
  }
  return "component";
}

std::string_view to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::Renders: return "renders";
    case EdgeKind::PropFlow: return "prop_flow";
    case EdgeKind::EffectDep: return "effect_dep";
    case EdgeKind::EffectSet: return "effect_set";
  }
  return "renders";
}

bool GraphNode::has_flag(std::string_view f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

const GraphNode* HookGraph::node(const NodeId& id) const {
  auto it = node_index_.find(id);
  return it == node_index_.end() ? nullptr : &nodes[it->second];
}

const ComponentDef* HookGraph::component(const NodeId& id) const {
  auto it = component_index_.find(id);
  return it == component_index_.end() ? nullptr : &components[it->second];
}

std::vector<const GraphEdge*> HookGraph::out_edges(const NodeId& id, EdgeKind kind) const {
  std::vector<const GraphEdge*> r;
  if (auto it = out_.find(id); it != out_.end()) {
    for (auto i : it->second) {
      if (edges[i].kind == kind) r.push_back(&edges[i]);
    }
  }
  return r;
}

std::vector<const GraphEdge*> HookGraph::in_edges(const NodeId& id, EdgeKind kind) const {
  std::vector<const GraphEdge*> r;
  if (auto it = in_.find(id); it != in_.end()) {
    for (auto i : it->second) {
      if (edges[i].kind == kind) r.push_back(&edges[i]);
    }
  }
  return r;
}

bool HookGraph::touched_by_unresolved(const NodeId& id) const {
  auto it = unresolved_.find(id);
  return it != unresolved_.end() && it->second;
}

void HookGraph::reindex() {
  node_index_.clear();
  component_index_.clear();
  out_.clear();
  in_.clear();
  unresolved_.clear();
  for (std::size_t i = 0; i < nodes.size(); ++i) node_index_[nodes[i].id] = i;
  for (std::size_t i = 0; i < components.size(); ++i) component_index_[components[i].component_id] = i;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    out_[edges[i].from].push_back(i);
    in_[edges[i].to].push_back(i);
  }
  for (const auto& d : diagnostics) {
    bool unresolved = d.code.starts_with("unresolved_") || d.code == "ambiguous_component";
    if (!unresolved) continue;
    for (const auto& id : d.node_ids) unresolved_[id] = true;
  }
}

namespace {

class Linker {
 public:
  Linker(const ProjectSnapshot& snap, const std::vector<FileExtraction>& ex) : snap_(snap), ex_(ex) {}

  HookGraph run() {
    for (const auto& fx : ex_) {
      for (const auto& c : fx.components) g_.components.push_back(c);
      for (const auto& d : fx.diagnostics) g_.diagnostics.push_back(d);
      if (fx.has_jsx) g_.metrics.jsx_file_count++;
    }
    for (const auto& f : snap_.files) g_.metrics.total_loc += static_cast<int>(f.line_count());
    std::sort(g_.components.begin(), g_.components.end(),
              [](const ComponentDef& a, const ComponentDef& b) { return a.component_id < b.component_id; });
    for (std::size_t i = 0; i < g_.components.size(); ++i) by_name_[g_.components[i].name].push_back(i);
    add_spread_props();
    make_nodes();
    link_render_sites();
    propagate_setter_channel();
    link_effects();
    flag_recursion();
    finish();
    return std::move(g_);
  }

 private:
  struct NodeData {
    GraphNode node;
    int sink = 0;           // value forwards consumed outside the project
    int setter_sink = 0;
    int extra_forward = 0;  // forwards created by props-object spreads
    int spread_sink = 0;    // props-object spreads into a child whose props escape
  };

  GraphNode& add_node(NodeId id, GraphNodeKind kind, std::string name, const std::string& file, const Span& span,
                      std::optional<NodeId> parent) {
    auto [it, inserted] = data_.try_emplace(id);
    auto& n = it->second.node;
    n.id = std::move(id);
    n.kind = kind;
    n.name = std::move(name);
    n.file = file;
    n.span = span;
    n.parent_component = std::move(parent);
    return n;
  }

  void make_nodes() {
    for (std::size_t i = 0; i < g_.components.size(); ++i) {
      const auto& c = g_.components[i];
      add_node(c.component_id, GraphNodeKind::Component, c.name, c.file, c.span, c.lexical_parent);
      for (const auto& s : c.states) {
        auto& n = add_node(s.state_id, GraphNodeKind::State, s.value_name, c.file, s.decl_span, c.component_id);
        if (s.synthesized) n.flags.push_back("synthesized");
        if (s.setter_name) n.flags.push_back("has_setter");
      }
      for (const auto& p : c.declared_props) {
        auto& n = add_node(p.prop_id, GraphNodeKind::Prop, p.name, c.file, p.binding_span, c.component_id);
        if (p.source == PropSource::PropsSpread) n.flags.push_back("implicit");
      }
      for (const auto& e : c.effects) {
        add_node(e.effect_id, GraphNodeKind::Effect, "effect#" + std::to_string(e.index), c.file, e.span,
                 c.component_id);
      }
    }
  }

  void diag(const std::string& file, const Span& span, std::string code, std::string msg, std::vector<NodeId> ids) {
    g_.diagnostics.push_back({file, span, std::move(code), std::move(msg), std::move(ids)});
  }

  void add_edge(EdgeKind kind, const NodeId& from, const NodeId& to, std::optional<Span> site,
                std::optional<std::string> label, std::optional<Channel> carries) {
    GraphEdge e;
    e.kind = kind;
    e.from = from;
    e.to = to;
    e.site = site;
    e.label = std::move(label);
    e.carries = carries;
    g_.edges.push_back(std::move(e));
  }

  // Definitions a tag may name: same file first, then the whole project.
  std::vector<std::size_t> candidates(const ComponentDef& parent, const std::string& name) const {
    auto it = by_name_.find(name);
    if (it == by_name_.end()) return {};
    std::vector<std::size_t> same_file;
    for (auto i : it->second) {
      if (g_.components[i].file == parent.file) same_file.push_back(i);
    }
    return same_file.empty() ? it->second : same_file;
  }

  // A component that spreads its props object onward gets one prop per key
  // its callers pass, so the value can be followed through it.
  void add_spread_props() {
    std::map<std::size_t, std::set<std::string>> keys;
    for (const auto& parent : g_.components) {
      for (const auto& site : parent.render_sites) {
        if (site.bound_to_non_component) continue;
        auto pool = candidates(parent, site.child_name);
        if (pool.size() != 1) continue;
        for (const auto& a : site.attributes) keys[pool[0]].insert(a.attr_name);
      }
    }
    for (auto& [i, names] : keys) {
      ComponentDef& c = g_.components[i];
      if (c.params != PropParamShape::Object || c.props_open) continue;
      const SpreadBinding* spread = nullptr;
      for (const auto& site : c.render_sites) {
        for (const auto& sp : site.spreads) {
          if (!spread && sp.kind == SpreadBinding::Kind::PropsObject) spread = &sp;
        }
      }
      if (!spread) continue;
      Span at = spread->span;
      for (const auto& name : names) {
        if (c.find_prop(name)) continue;
        PropDecl p;
        p.prop_id = make_id("prop", c.file, at) + "#" + name;
        p.name = name;
        p.binding_span = at;
        p.component_id = c.component_id;
        p.source = PropSource::PropsSpread;
        c.declared_props.push_back(std::move(p));
      }
    }
  }

  // Child component for a site, or -1 (diagnostic already emitted).
  int resolve_child(const ComponentDef& parent, const RenderSite& site, std::vector<NodeId> touched) {
    if (site.bound_to_non_component) {
      touched.insert(touched.begin(), parent.component_id);
      diag(parent.file, site.span, "unresolved_render",
           "'" + site.child_name + "' is bound to a value that is not a component definition", std::move(touched));
      return -1;
    }
    auto pool = candidates(parent, site.child_name);
    if (pool.empty()) {
      diag(parent.file, site.span, "external_component",
           "'" + site.child_name + "' is not defined in the project", {parent.component_id});
      return -1;
    }
    if (pool.size() == 1) return static_cast<int>(pool[0]);
    touched.insert(touched.begin(), parent.component_id);
    for (auto i : pool) touched.push_back(g_.components[i].component_id);
    diag(parent.file, site.span, "ambiguous_component",
         "'" + site.child_name + "' has " + std::to_string(pool.size()) + " definitions", std::move(touched));
    return -1;
  }

  void sink(const NodeId& source, Channel ch) {
    auto& d = data_[source];
    (ch == Channel::Setter && d.node.kind == GraphNodeKind::State ? d.setter_sink : d.sink)++;
  }

  static bool props_closed(const ComponentDef& c) {
    return !c.props_open && c.params != PropParamShape::Unsupported;
  }

  void link_render_sites() {
    for (const auto& parent : g_.components) {
      for (const auto& site : parent.render_sites) {
        std::vector<NodeId> sources;
        for (const auto& a : site.attributes) {
          if (a.source) sources.push_back(*a.source);
        }
        for (const auto& s : site.spreads) {
          if (s.source) sources.push_back(*s.source);
        }
        int ci = resolve_child(parent, site, sources);
        if (ci < 0) {
          for (const auto& a : site.attributes) {
            if (a.source) sink(*a.source, a.channel);
          }
          for (const auto& s : site.spreads) {
            if (s.source) sink(*s.source, Channel::Value);
          }
          continue;
        }
        const ComponentDef& child = g_.components[ci];
        add_edge(EdgeKind::Renders, parent.component_id, child.component_id, site.span, std::nullopt, std::nullopt);
        link_attributes(parent, site, child);
      }
    }
  }

  void link_attributes(const ComponentDef& parent, const RenderSite& site, const ComponentDef& child) {
    std::set<std::string> bound;
    for (const auto& a : site.attributes) bound.insert(a.attr_name);
    const PropDecl* child_rest = child.find_prop("...rest");

    for (const auto& a : site.attributes) {
      if (!a.source) continue;
      const PropDecl* target = child.find_prop(a.attr_name);
      if (!target) target = child_rest;
      if (target) {
        add_edge(EdgeKind::PropFlow, *a.source, target->prop_id, site.span, a.attr_name, a.channel);
      } else if (!props_closed(child)) {
        sink(*a.source, a.channel);
      } else {
        diag(parent.file, a.span, "unknown_prop",
             "'" + child.name + "' does not declare prop '" + a.attr_name + "'", {*a.source});
      }
    }

    // Child props a spread may supply: declared and not set by name here.
    std::vector<const PropDecl*> open_targets;
    for (const auto& p : child.declared_props) {
      if (p.source != PropSource::SpreadRest && !bound.count(p.name)) open_targets.push_back(&p);
    }
    for (const auto& s : site.spreads) {
      switch (s.kind) {
        case SpreadBinding::Kind::RestProps: {
          bool linked = false;
          for (const PropDecl* p : open_targets) {
            add_edge(EdgeKind::PropFlow, *s.source, p->prop_id, site.span, "..." + p->name, Channel::Value);
            linked = true;
          }
          if (child_rest) {
            add_edge(EdgeKind::PropFlow, *s.source, child_rest->prop_id, site.span, "...", Channel::Value);
            linked = true;
          }
          if (!linked && !props_closed(child)) sink(*s.source, Channel::Value);
          break;
        }
        case SpreadBinding::Kind::PropsObject: {
          for (const auto& pp : parent.declared_props) {
            if (pp.source == PropSource::SpreadRest || bound.count(pp.name)) continue;
            const PropDecl* target = child.find_prop(pp.name);
            if (target && target->source == PropSource::SpreadRest) target = nullptr;
            if (!target) target = child_rest;
            if (target) {
              add_edge(EdgeKind::PropFlow, pp.prop_id, target->prop_id, site.span, "..." + pp.name, Channel::Value);
              data_[pp.prop_id].extra_forward++;
            } else if (!props_closed(child)) {
              data_[pp.prop_id].spread_sink++;
            } else {
              data_[pp.prop_id].extra_forward++;
            }
          }
          break;
        }
        case SpreadBinding::Kind::Other: {
          std::vector<NodeId> touched;
          if (s.source) {
            touched.push_back(*s.source);
            sink(*s.source, Channel::Value);
          }
          for (const PropDecl* p : open_targets) touched.push_back(p->prop_id);
          if (child_rest) touched.push_back(child_rest->prop_id);
          diag(parent.file, s.span, "unresolved_spread", "cannot tell which props '{..." + s.raw_text + "}' supplies",
               std::move(touched));
          break;
        }
      }
    }
  }

  // A prop carries a setter when any incoming flow does; its outgoing flows
  // then carry it too.
  void propagate_setter_channel() {
    bool changed = true;
    while (changed) {
      changed = false;
      std::set<NodeId> carriers;
      for (const auto& e : g_.edges) {
        if (e.kind == EdgeKind::PropFlow && e.carries == Channel::Setter) carriers.insert(e.to);
      }
      for (auto& e : g_.edges) {
        if (e.kind != EdgeKind::PropFlow || e.carries == Channel::Setter) continue;
        if (carriers.count(e.from)) {
          e.carries = Channel::Setter;
          changed = true;
        }
      }
      carriers_ = std::move(carriers);
    }
    for (const auto& id : carriers_) data_[id].node.flags.push_back("carries_setter");
  }

  void link_effects() {
    for (const auto& c : g_.components) {
      for (const auto& e : c.effects) {
        if (e.deps) {
          for (const auto& d : *e.deps) {
            if (d.target && data_.count(*d.target)) {
              add_edge(EdgeKind::EffectDep, *d.target, e.effect_id, d.span, d.raw_text, d.channel);
            }
          }
        }
        std::set<NodeId> seen;
        for (const auto& call : e.setter_calls) {
          if (!data_.count(call.target)) continue;
          if (!call.via_prop) {
            if (seen.insert(call.target).second) {
              GraphEdge& edge = effect_set(e.effect_id, call.target, call.span);
              (void)edge;
            }
            continue;
          }
          if (!carriers_.count(call.target)) continue;
          for (auto& [state, chain] : setter_origins(call.target)) {
            if (!seen.insert(state).second) continue;
            effect_set(e.effect_id, state, call.span).via = chain;
          }
        }
      }
    }
  }

  GraphEdge& effect_set(const NodeId& effect, const NodeId& state, const Span& site) {
    add_edge(EdgeKind::EffectSet, effect, state, site, std::nullopt, Channel::Setter);
    return g_.edges.back();
  }

  // States reachable backwards from a setter-carrying prop over setter
  // flows. Each comes with its shortest prop chain (starting at `prop`),
  // ties broken by the chain's "Component.prop:name" labels.
  std::vector<std::pair<NodeId, std::vector<NodeId>>> setter_origins(const NodeId& prop) {
    std::map<NodeId, std::vector<NodeId>> preds;
    for (const auto& e : g_.edges) {
      if (e.kind == EdgeKind::PropFlow && e.carries == Channel::Setter) preds[e.to].push_back(e.from);
    }
    auto label = [&](const NodeId& id) {
      const GraphNode& n = data_[id].node;
      return data_[n.parent_component.value_or("")].node.name + ".prop:" + n.name;
    };
    // Breadth-first over chains; the first chain to reach a state is the
    // shortest and, with candidates kept sorted, the smallest by label.
    using Chain = std::vector<NodeId>;
    auto key = [&](const Chain& c) {
      std::vector<std::string> k;
      for (const auto& id : c) k.push_back(label(id));
      return k;
    };
    std::vector<std::pair<NodeId, std::vector<NodeId>>> out;
    std::set<NodeId> found;
    std::vector<Chain> layer{{prop}};
    std::set<NodeId> expanded{prop};
    while (!layer.empty()) {
      std::sort(layer.begin(), layer.end(), [&](const Chain& a, const Chain& b) { return key(a) < key(b); });
      std::vector<Chain> next;
      for (const Chain& c : layer) {
        for (const auto& from : preds[c.back()]) {
          if (data_[from].node.kind == GraphNodeKind::State) {
            if (found.insert(from).second) out.emplace_back(from, c);
          } else if (std::find(c.begin(), c.end(), from) == c.end()) {
            Chain longer = c;
            longer.push_back(from);
            next.push_back(std::move(longer));
          }
        }
      }
      // Keep one chain per frontier prop: the smallest, since every
      // extension of a larger one is dominated by the same extension of it.
      std::sort(next.begin(), next.end(), [&](const Chain& a, const Chain& b) { return key(a) < key(b); });
      layer.clear();
      for (auto& c : next) {
        if (expanded.insert(c.back()).second) layer.push_back(std::move(c));
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  void flag_recursion() {
    // Components on a render cycle (including self-rendering).
    std::map<NodeId, std::vector<NodeId>> adj;
    for (const auto& e : g_.edges) {
      if (e.kind == EdgeKind::Renders) adj[e.from].push_back(e.to);
    }
    for (const auto& c : g_.components) {
      std::set<NodeId> seen;
      std::vector<NodeId> stack(adj[c.component_id].begin(), adj[c.component_id].end());
      bool cyclic = false;
      while (!stack.empty() && !cyclic) {
        NodeId at = stack.back();
        stack.pop_back();
        if (at == c.component_id) cyclic = true;
        if (!seen.insert(at).second) continue;
        for (const auto& n : adj[at]) stack.push_back(n);
      }
      if (cyclic) data_[c.component_id].node.flags.push_back("recursive");
    }
    for (const auto& c : g_.components) {
      if (c.lexical_parent) data_[c.component_id].node.flags.push_back("nested");
      if (c.props_open) data_[c.component_id].node.flags.push_back("props_open");
    }
  }

  void finish() {
    // Reference counts with sinks reclassified as uses.
    for (const auto& c : g_.components) {
      for (const auto& s : c.states) {
        auto& d = data_[s.state_id];
        d.node.refs.use = s.refs.use_count + d.sink;
        d.node.refs.forward = s.refs.forward_count - d.sink;
        d.node.refs.call = s.refs.call_count;
        if (s.refs.call_count > 0) d.node.flags.push_back("setter_called");
      }
      for (const auto& p : c.declared_props) {
        auto& d = data_[p.prop_id];
        d.node.refs.use = p.refs.use_count + d.sink + d.spread_sink;
        d.node.refs.forward = p.refs.forward_count - d.sink + d.extra_forward;
        if (p.source == PropSource::SpreadRest) d.node.flags.push_back("rest");
      }
    }
    std::sort(g_.diagnostics.begin(), g_.diagnostics.end(), [](const Diagnostic& a, const Diagnostic& b) {
      return std::tie(a.file, a.span.start_byte, a.span.end_byte, a.code, a.message) <
             std::tie(b.file, b.span.start_byte, b.span.end_byte, b.code, b.message);
    });
    for (auto& [id, d] : data_) {
      std::sort(d.node.flags.begin(), d.node.flags.end());
      d.node.flags.erase(std::unique(d.node.flags.begin(), d.node.flags.end()), d.node.flags.end());
      g_.nodes.push_back(std::move(d.node));
      if (g_.nodes.back().kind == GraphNodeKind::Component) g_.metrics.component_count++;
      if (g_.nodes.back().kind == GraphNodeKind::State) g_.metrics.state_count++;
      if (g_.nodes.back().kind == GraphNodeKind::Prop) g_.metrics.prop_count++;
      if (g_.nodes.back().kind == GraphNodeKind::Effect) g_.metrics.effect_count++;
    }
    for (auto& e : g_.edges) {
      e.edge_id = std::string(to_string(e.kind)) + ":" + e.from + "->" + e.to;
      if (e.site) e.edge_id += "@" + std::to_string(e.site->start_byte);
      if (e.label) e.edge_id += "#" + *e.label;
    }
    std::sort(g_.edges.begin(), g_.edges.end(),
              [](const GraphEdge& a, const GraphEdge& b) { return a.edge_id < b.edge_id; });
    g_.edges.erase(std::unique(g_.edges.begin(), g_.edges.end(),
                               [](const GraphEdge& a, const GraphEdge& b) { return a.edge_id == b.edge_id; }),
                   g_.edges.end());
    g_.reindex();
    for (auto& n : g_.nodes) {
      if (g_.touched_by_unresolved(n.id)) n.flags.push_back("unresolved");
      std::sort(n.flags.begin(), n.flags.end());
    }
  }

  const ProjectSnapshot& snap_;
  const std::vector<FileExtraction>& ex_;
  HookGraph g_;
  std::map<NodeId, NodeData> data_;
  std::map<std::string, std::vector<std::size_t>> by_name_;
  std::set<NodeId> carriers_;
};

}  // namespace

HookGraph build_graph(const ProjectSnapshot& snapshot, const std::vector<FileExtraction>& extractions) {
  return Linker(snapshot, extractions).run();
}

HookGraph analyze_snapshot(const ProjectSnapshot& snapshot) {
  std::vector<FileExtraction> extractions;
  extractions.reserve(snapshot.files.size());
  for (const auto& f : snapshot.files) extractions.push_back(extract_components(f, parse_file(f)));
  return build_graph(snapshot, extractions);
}

std::vector<ProvenancePath> trace_provenance(const HookGraph& graph, const NodeId& state_id) {
  const GraphNode* origin = graph.node(state_id);
  if (!origin || origin->kind != GraphNodeKind::State) throw NotAStateNode("not a state node: " + state_id);
  std::vector<ProvenancePath> paths;
  for (Channel ch : {Channel::Value, Channel::Setter}) {
    std::vector<ProvenanceHop> hops;
    std::set<NodeId> visited{state_id};
    std::function<void(const NodeId&)> dfs = [&](const NodeId& at) {
      std::vector<const GraphEdge*> next;
      for (const GraphEdge* e : graph.out_edges(at, EdgeKind::PropFlow)) {
        if (e->carries.value_or(Channel::Value) == ch && !visited.count(e->to)) next.push_back(e);
      }
      if (next.empty()) {
        ProvenancePath p;
        p.origin = state_id;
        p.channel = ch;
        p.hops = hops;
        if (hops.empty()) {
          p.terminal_use = ch == Channel::Value ? origin->refs.use > 0 : origin->refs.call > 0;
        } else {
          p.terminal_use = hops.back().used_locally;
        }
        paths.push_back(std::move(p));
        return;
      }
      for (const GraphEdge* e : next) {
        const GraphNode* prop = graph.node(e->to);
        hops.push_back({prop->parent_component.value_or(""), prop->id, prop->refs.use > 0, prop->refs.forward > 0});
        visited.insert(e->to);
        dfs(e->to);
        visited.erase(e->to);
        hops.pop_back();
      }
    };
    // The setter half only yields paths when something passes it on.
    if (ch == Channel::Setter) {
      bool any = false;
      for (const GraphEdge* e : graph.out_edges(state_id, EdgeKind::PropFlow)) any |= e->carries == Channel::Setter;
      if (!any) continue;
    }
    dfs(state_id);
  }
  return paths;
}

}  // namespace hooklens
