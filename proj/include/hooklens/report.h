#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hooklens/detectors.h"
#include "hooklens/graph.h"
#include "hooklens/ingest.h"

namespace hooklens {

inline constexpr const char* kSchemaVersion = "1.0";

struct ReportFile {
  std::string path;
  std::uint32_t line_count = 0;
  std::uint64_t bytes = 0;

  friend bool operator==(const ReportFile&, const ReportFile&) = default;
};

struct AnalysisReport {
  std::string schema_version = kSchemaVersion;
  std::string root;
  std::string digest;  // "sha256:<hex>" over every analyzed path and content
  int drill_threshold = 1;
  ProjectMetrics metrics;
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  std::vector<Finding> findings;
  std::vector<Diagnostic> diagnostics;
  std::vector<ReportFile> files;
  std::vector<SkippedFile> skipped;

  std::size_t definite_count() const;
  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

// Scan, parse, extract, link, detect. Throws IngestError for a bad root or
// config; per-file failures only show up as diagnostics.
AnalysisReport run_analyze(const AnalysisConfig& config);

// Same pipeline over an existing snapshot.
AnalysisReport build_report(const ProjectSnapshot& snapshot);

std::string content_digest(const ProjectSnapshot& snapshot);

nlohmann::json to_json(const AnalysisReport& report);
// Throws nlohmann::json::exception or std::invalid_argument on malformed input.
AnalysisReport report_from_json(const nlohmann::json& j);

// Canonical bytes: sorted keys, two-space indent, trailing newline.
std::string serialize(const AnalysisReport& report);

}  // namespace hooklens
