#include "hooklens/ingest.h"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

#include "hooklens/glob.h"

namespace fs = std::filesystem;

namespace hooklens {
namespace {

bool matches_any(const std::vector<std::string>& globs, std::string_view path) {
  return std::any_of(globs.begin(), globs.end(),
                     [&](const std::string& g) { return glob_match(g, path); });
}

bool read_file(const fs::path& p, std::string& out) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) return false;
  out = std::move(buf).str();
  return true;
}

void finalize(ProjectSnapshot& snap, std::vector<std::pair<std::string, std::string>> loaded) {
  std::sort(loaded.begin(), loaded.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  snap.files.reserve(loaded.size());
  for (auto& [path, text] : loaded) {
    auto id = static_cast<FileId>(snap.files.size());
    snap.files.emplace_back(id, std::move(path), std::move(text));
  }
  std::sort(snap.skipped.begin(), snap.skipped.end(),
            [](const SkippedFile& a, const SkippedFile& b) { return a.path < b.path; });
}

}  // namespace

void AnalysisConfig::validate() const {
  if (drill_threshold < 1) throw ConfigError("drill_threshold must be >= 1");
  if (include_globs.empty()) throw ConfigError("include_globs must not be empty");
  if (max_file_bytes == 0) throw ConfigError("max_file_bytes must be positive");
}

const SourceFile* ProjectSnapshot::find(std::string_view relative_path) const {
  auto it = std::lower_bound(files.begin(), files.end(), relative_path,
                             [](const SourceFile& f, std::string_view p) { return f.relative_path < p; });
  if (it == files.end() || it->relative_path != relative_path) return nullptr;
  return &*it;
}

ProjectSnapshot scan_project(const AnalysisConfig& config) {
  config.validate();
  std::error_code ec;
  auto status = fs::status(config.root_path, ec);
  if (ec || !fs::exists(status)) {
    throw IngestError("RootNotFound", "root not found: " + config.root_path.string());
  }
  if (!fs::is_directory(status)) {
    throw IngestError("RootNotDirectory", "root is not a directory: " + config.root_path.string());
  }

  ProjectSnapshot snap;
  snap.config = config;
  std::vector<std::pair<std::string, std::string>> loaded;

  fs::recursive_directory_iterator it(config.root_path, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw IngestError("RootNotFound", "cannot read root: " + ec.message());
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) break;
    const auto& entry = *it;
    auto rel = entry.path().lexically_relative(config.root_path).generic_string();

    std::error_code sec;
    if (entry.is_symlink(sec)) {
      if (matches_any(config.include_globs, rel) && !matches_any(config.exclude_globs, rel)) {
        snap.skipped.push_back({rel, "symlink"});
      }
      it.disable_recursion_pending();
      continue;
    }
    if (entry.is_directory(sec)) {
      bool pruned = std::any_of(config.exclude_globs.begin(), config.exclude_globs.end(),
                                [&](const std::string& g) { return glob_covers_directory(g, rel); });
      if (pruned) it.disable_recursion_pending();
      continue;
    }
    if (!entry.is_regular_file(sec)) continue;
    if (!matches_any(config.include_globs, rel) || matches_any(config.exclude_globs, rel)) continue;

    auto size = entry.file_size(sec);
    if (sec) {
      snap.skipped.push_back({rel, "read_error"});
      continue;
    }
    if (size > config.max_file_bytes) {
      snap.skipped.push_back({rel, "over_size_limit"});
      continue;
    }
    std::string text;
    if (!read_file(entry.path(), text)) {
      snap.skipped.push_back({rel, "read_error"});
      continue;
    }
    if (!is_valid_utf8(text)) {
      snap.skipped.push_back({rel, "invalid_encoding"});
      continue;
    }
    loaded.emplace_back(std::move(rel), std::move(text));
  }
  if (ec) throw IngestError("RootNotFound", "directory walk failed: " + ec.message());

  finalize(snap, std::move(loaded));
  return snap;
}

ProjectSnapshot make_snapshot(const AnalysisConfig& config,
                              std::vector<std::pair<std::string, std::string>> sources) {
  config.validate();
  ProjectSnapshot snap;
  snap.config = config;
  std::vector<std::pair<std::string, std::string>> loaded;
  for (auto& [path, text] : sources) {
    if (!matches_any(config.include_globs, path) || matches_any(config.exclude_globs, path)) continue;
    if (text.size() > config.max_file_bytes) {
      snap.skipped.push_back({path, "over_size_limit"});
    } else if (!is_valid_utf8(text)) {
      snap.skipped.push_back({path, "invalid_encoding"});
    } else {
      loaded.emplace_back(std::move(path), std::move(text));
    }
  }
  finalize(snap, std::move(loaded));
  return snap;
}

}  // namespace hooklens
