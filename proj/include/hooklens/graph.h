#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hooklens/extract.h"
#include "hooklens/ingest.h"

namespace hooklens {

enum class GraphNodeKind { Component, State, Prop, Effect };
std::string_view to_string(GraphNodeKind k);

enum class EdgeKind { Renders, PropFlow, EffectDep, EffectSet };
std::string_view to_string(EdgeKind k);

// Reference counts as seen by the graph: forwards that end in a component
// outside the project (or one whose props escape) count as uses.
struct NodeRefs {
  int use = 0;
  int forward = 0;
  int call = 0;  // setter calls, states only

  friend bool operator==(const NodeRefs&, const NodeRefs&) = default;
};

struct GraphNode {
  NodeId id;
  GraphNodeKind kind = GraphNodeKind::Component;
  std::string name;
  std::string file;
  Span span;
  std::optional<NodeId> parent_component;
  std::vector<std::string> flags;  // sorted
  NodeRefs refs;

  bool has_flag(std::string_view f) const;
  friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
  std::string edge_id;
  EdgeKind kind = EdgeKind::Renders;
  NodeId from;
  NodeId to;
  std::optional<Span> site;
  std::optional<std::string> label;
  std::optional<Channel> carries;  // prop_flow and effect_dep
  std::vector<NodeId> via;         // effect_set: setter-carrying props, child to ancestor

  friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

struct ProjectMetrics {
  int jsx_file_count = 0;
  int component_count = 0;
  int total_loc = 0;
  int state_count = 0;
  int prop_count = 0;
  int effect_count = 0;
  int unreferenced_count = 0;
  int prop_drilling_count = 0;
  int effect_parent_count = 0;

  friend bool operator==(const ProjectMetrics&, const ProjectMetrics&) = default;
};

struct HookGraph {
  std::vector<ComponentDef> components;
  std::vector<GraphNode> nodes;  // sorted by id
  std::vector<GraphEdge> edges;  // canonical order
  std::vector<Diagnostic> diagnostics;
  ProjectMetrics metrics;        // size counts; finding counts come from compute_metrics

  const GraphNode* node(const NodeId& id) const;
  const ComponentDef* component(const NodeId& id) const;
  std::vector<const GraphEdge*> out_edges(const NodeId& id, EdgeKind kind) const;
  std::vector<const GraphEdge*> in_edges(const NodeId& id, EdgeKind kind) const;
  // Diagnostics (by code prefix) touching a node.
  bool touched_by_unresolved(const NodeId& id) const;
  // Lookup tables; rebuilt by build_graph and after deserialization.
  void reindex();

 private:
  std::map<NodeId, std::size_t> node_index_;
  std::map<NodeId, std::size_t> component_index_;
  std::map<NodeId, std::vector<std::size_t>> out_;
  std::map<NodeId, std::vector<std::size_t>> in_;
  std::map<NodeId, bool> unresolved_;
};

HookGraph build_graph(const ProjectSnapshot& snapshot, const std::vector<FileExtraction>& extractions);

struct ProvenanceHop {
  NodeId component_id;
  NodeId prop_id;
  bool used_locally = false;
  bool forwarded = false;

  friend bool operator==(const ProvenanceHop&, const ProvenanceHop&) = default;
};

struct ProvenancePath {
  NodeId origin;
  Channel channel = Channel::Value;
  std::vector<ProvenanceHop> hops;
  bool terminal_use = false;

  friend bool operator==(const ProvenancePath&, const ProvenancePath&) = default;
};

struct NotAStateNode : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Every maximal PropFlow chain from the state's value, then from its setter.
std::vector<ProvenancePath> trace_provenance(const HookGraph& graph, const NodeId& state_id);

// Parse, extract and link a snapshot in one go.
HookGraph analyze_snapshot(const ProjectSnapshot& snapshot);

}  // namespace hooklens
