#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "hooklens/source.h"

namespace hooklens {

struct AnalysisConfig {
  std::filesystem::path root_path;
  std::vector<std::string> include_globs{"**/*.jsx", "**/*.tsx", "**/*.js", "**/*.ts"};
  std::vector<std::string> exclude_globs{"**/node_modules/**", "**/dist/**", "**/build/**"};
  int drill_threshold = 1;
  bool fail_on_findings = false;
  std::uint64_t max_file_bytes = 1024 * 1024;

  // Throws ConfigError when an invariant is violated.
  void validate() const;
};

struct SkippedFile {
  std::string path;
  std::string reason;  // over_size_limit | invalid_encoding | read_error | symlink

  friend bool operator==(const SkippedFile&, const SkippedFile&) = default;
};

struct ProjectSnapshot {
  AnalysisConfig config;
  std::vector<SourceFile> files;  // sorted by relative_path, file_id == index
  std::vector<SkippedFile> skipped;

  const SourceFile* find(std::string_view relative_path) const;
};

class IngestError : public std::runtime_error {
 public:
  IngestError(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class ConfigError : public IngestError {
 public:
  explicit ConfigError(const std::string& what) : IngestError("ConfigError", what) {}
};

// Walks config.root_path without following symlinks. Throws IngestError with
// code RootNotFound / RootNotDirectory; per-file problems land in `skipped`.
ProjectSnapshot scan_project(const AnalysisConfig& config);

// Builds a snapshot from in-memory sources (tests, generated projects). Files
// are filtered by the include/exclude globs and sorted like scan_project.
ProjectSnapshot make_snapshot(const AnalysisConfig& config,
                              std::vector<std::pair<std::string, std::string>> sources);

}  // namespace hooklens
