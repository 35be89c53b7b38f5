#include "hooklens/report.h"

#include <openssl/evp.h>

#include <array>
#include <map>
#include <stdexcept>

namespace hooklens {

using nlohmann::json;

std::size_t AnalysisReport::definite_count() const {
  std::size_t n = 0;
  for (const auto& f : findings) n += f.confidence == Confidence::Definite;
  return n;
}

std::string content_digest(const ProjectSnapshot& snapshot) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  const char sep = '\0';
  for (const auto& f : snapshot.files) {
    EVP_DigestUpdate(ctx, f.relative_path.data(), f.relative_path.size());
    EVP_DigestUpdate(ctx, &sep, 1);
    std::string size = std::to_string(f.content.size());
    EVP_DigestUpdate(ctx, size.data(), size.size());
    EVP_DigestUpdate(ctx, &sep, 1);
    EVP_DigestUpdate(ctx, f.content.data(), f.content.size());
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, md.data(), &len);
  EVP_MD_CTX_free(ctx);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out = "sha256:";
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 15];
  }
  return out;
}

AnalysisReport build_report(const ProjectSnapshot& snapshot) {
  HookGraph graph = analyze_snapshot(snapshot);
  AnalysisReport r;
  r.root = snapshot.config.root_path.generic_string();
  r.digest = content_digest(snapshot);
  r.drill_threshold = snapshot.config.drill_threshold;
  r.findings = run_detectors(graph, snapshot.config.drill_threshold);
  r.metrics = compute_metrics(graph, r.findings);
  r.nodes = std::move(graph.nodes);
  r.edges = std::move(graph.edges);
  r.diagnostics = std::move(graph.diagnostics);
  for (const auto& f : snapshot.files) r.files.push_back({f.relative_path, f.line_count(), f.content.size()});
  r.skipped = snapshot.skipped;
  return r;
}

AnalysisReport run_analyze(const AnalysisConfig& config) {
  config.validate();
  return build_report(scan_project(config));
}

namespace {

template <typename E, std::size_t N>
E parse_enum(const json& j, const std::array<E, N>& values) {
  std::string s = j.get<std::string>();
  for (E v : values) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown enum value: " + s);
}

constexpr std::array kNodeKinds{GraphNodeKind::Component, GraphNodeKind::State, GraphNodeKind::Prop,
                                GraphNodeKind::Effect};
constexpr std::array kEdgeKinds{EdgeKind::Renders, EdgeKind::PropFlow, EdgeKind::EffectDep, EdgeKind::EffectSet};
constexpr std::array kChannels{Channel::Value, Channel::Setter};
constexpr std::array kFindingKinds{FindingKind::UnreferencedStateOrProp, FindingKind::PropDrilling,
                                   FindingKind::EffectModifyingParentState};
constexpr std::array kConfidences{Confidence::Definite, Confidence::Suspect};

json span_json(const Span& s) {
  return {{"sl", s.start_line}, {"sc", s.start_col}, {"el", s.end_line},
          {"ec", s.end_col},    {"start", s.start_byte}, {"end", s.end_byte}};
}

json located_span_json(const std::string& file, const Span& s) {
  json j = span_json(s);
  j["file"] = file;
  return j;
}

class Reader {
 public:
  explicit Reader(const json& files) {
    for (std::size_t i = 0; i < files.size(); ++i) ids_[files[i].at("path").get<std::string>()] = FileId(i);
  }

  FileId file_id(const std::string& path) const {
    auto it = ids_.find(path);
    return it == ids_.end() ? -1 : it->second;
  }

  Span span(const json& j, const std::string& file) const {
    Span s;
    s.file_id = file_id(file);
    s.start_line = j.at("sl");
    s.start_col = j.at("sc");
    s.end_line = j.at("el");
    s.end_col = j.at("ec");
    s.start_byte = j.at("start");
    s.end_byte = j.at("end");
    return s;
  }

  Span located_span(const json& j) const { return span(j, j.at("file").get<std::string>()); }

 private:
  std::map<std::string, FileId> ids_;
};

}  // namespace

json to_json(const AnalysisReport& r) {
  json nodes = json::array();
  for (const auto& n : r.nodes) {
    nodes.push_back({{"id", n.id},
                     {"kind", to_string(n.kind)},
                     {"name", n.name},
                     {"file", n.file},
                     {"span", span_json(n.span)},
                     {"parent_component", n.parent_component ? json(*n.parent_component) : json(nullptr)},
                     {"flags", n.flags},
                     {"refs", {{"use", n.refs.use}, {"forward", n.refs.forward}, {"call", n.refs.call}}}});
  }
  json edges = json::array();
  auto file_by_id = [&](FileId id) { return id >= 0 && std::size_t(id) < r.files.size() ? r.files[id].path : ""; };
  for (const auto& e : r.edges) {
    json j = {{"id", e.edge_id}, {"kind", to_string(e.kind)}, {"from", e.from}, {"to", e.to}};
    if (e.label) j["label"] = *e.label;
    if (e.site) j["site"] = located_span_json(file_by_id(e.site->file_id), *e.site);
    if (e.carries) j["carries"] = to_string(*e.carries);
    if (!e.via.empty()) j["via"] = e.via;
    edges.push_back(std::move(j));
  }
  json findings = json::array();
  for (const auto& f : r.findings) {
    json spans = json::array();
    for (std::size_t i = 0; i < f.spans.size(); ++i) {
      spans.push_back(located_span_json(file_by_id(f.spans[i].file_id), f.spans[i]));
    }
    findings.push_back({{"id", f.finding_id},
                        {"kind", to_string(f.kind)},
                        {"confidence", to_string(f.confidence)},
                        {"node_ids", f.node_ids},
                        {"spans", spans},
                        {"message", f.message},
                        {"path", f.path}});
  }
  json diagnostics = json::array();
  for (const auto& d : r.diagnostics) {
    diagnostics.push_back({{"file", d.file},
                           {"span", span_json(d.span)},
                           {"code", d.code},
                           {"message", d.message},
                           {"node_ids", d.node_ids}});
  }
  json files = json::array();
  for (const auto& f : r.files) files.push_back({{"path", f.path}, {"line_count", f.line_count}, {"bytes", f.bytes}});
  json skipped = json::array();
  for (const auto& s : r.skipped) skipped.push_back({{"path", s.path}, {"reason", s.reason}});
  const auto& m = r.metrics;
  return {{"schema_version", r.schema_version},
          {"generated_from", {{"root", r.root}, {"digest", r.digest}}},
          {"config", {{"drill_threshold", r.drill_threshold}}},
          {"metrics",
           {{"jsx_file_count", m.jsx_file_count},
            {"component_count", m.component_count},
            {"total_loc", m.total_loc},
            {"state_count", m.state_count},
            {"prop_count", m.prop_count},
            {"effect_count", m.effect_count},
            {"unreferenced_count", m.unreferenced_count},
            {"prop_drilling_count", m.prop_drilling_count},
            {"effect_parent_count", m.effect_parent_count}}},
          {"graph", {{"nodes", nodes}, {"edges", edges}}},
          {"findings", findings},
          {"diagnostics", diagnostics},
          {"files", files},
          {"skipped", skipped}};
}

AnalysisReport report_from_json(const json& j) {
  AnalysisReport r;
  r.schema_version = j.at("schema_version");
  if (r.schema_version != kSchemaVersion) throw std::invalid_argument("unsupported schema " + r.schema_version);
  r.root = j.at("generated_from").at("root");
  r.digest = j.at("generated_from").at("digest");
  r.drill_threshold = j.at("config").at("drill_threshold");
  const json& files = j.at("files");
  Reader rd(files);
  for (const auto& f : files) r.files.push_back({f.at("path"), f.at("line_count"), f.at("bytes")});
  for (const auto& s : j.at("skipped")) r.skipped.push_back({s.at("path"), s.at("reason")});
  const json& m = j.at("metrics");
  r.metrics = {m.at("jsx_file_count"),     m.at("component_count"),     m.at("total_loc"),
               m.at("state_count"),        m.at("prop_count"),          m.at("effect_count"),
               m.at("unreferenced_count"), m.at("prop_drilling_count"), m.at("effect_parent_count")};
  for (const auto& n : j.at("graph").at("nodes")) {
    GraphNode g;
    g.id = n.at("id");
    g.kind = parse_enum(n.at("kind"), kNodeKinds);
    g.name = n.at("name");
    g.file = n.at("file");
    g.span = rd.span(n.at("span"), g.file);
    if (!n.at("parent_component").is_null()) g.parent_component = n.at("parent_component").get<std::string>();
    g.flags = n.at("flags").get<std::vector<std::string>>();
    g.refs = {n.at("refs").at("use"), n.at("refs").at("forward"), n.at("refs").at("call")};
    r.nodes.push_back(std::move(g));
  }
  for (const auto& e : j.at("graph").at("edges")) {
    GraphEdge g;
    g.edge_id = e.at("id");
    g.kind = parse_enum(e.at("kind"), kEdgeKinds);
    g.from = e.at("from");
    g.to = e.at("to");
    if (e.contains("label")) g.label = e.at("label").get<std::string>();
    if (e.contains("site")) g.site = rd.located_span(e.at("site"));
    if (e.contains("carries")) g.carries = parse_enum(e.at("carries"), kChannels);
    if (e.contains("via")) g.via = e.at("via").get<std::vector<NodeId>>();
    r.edges.push_back(std::move(g));
  }
  for (const auto& f : j.at("findings")) {
    Finding g;
    g.finding_id = f.at("id");
    g.kind = parse_enum(f.at("kind"), kFindingKinds);
    g.confidence = parse_enum(f.at("confidence"), kConfidences);
    g.node_ids = f.at("node_ids").get<std::vector<NodeId>>();
    for (const auto& s : f.at("spans")) g.spans.push_back(rd.located_span(s));
    g.message = f.at("message");
    g.path = f.at("path").get<std::vector<NodeId>>();
    if (g.node_ids.empty() || g.node_ids.size() != g.spans.size()) {
      throw std::invalid_argument("finding " + g.finding_id + " has mismatched node_ids/spans");
    }
    r.findings.push_back(std::move(g));
  }
  for (const auto& d : j.at("diagnostics")) {
    Diagnostic g;
    g.file = d.at("file");
    g.span = rd.span(d.at("span"), g.file);
    g.code = d.at("code");
    g.message = d.at("message");
    g.node_ids = d.at("node_ids").get<std::vector<NodeId>>();
    r.diagnostics.push_back(std::move(g));
  }
  return r;
}

std::string serialize(const AnalysisReport& report) { return to_json(report).dump(2, ' ', false, json::error_handler_t::replace) + "\n"; }

}  // namespace hooklens
