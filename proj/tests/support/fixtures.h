#pragma once

#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "hooklens/report.h"
#include "oracle.h"

namespace testkit {

// A finding in label form: node ids replaced by "Comp.state:name",
// "Comp.prop:name" or "Comp.effect#k".
struct Labeled {
  std::string kind;
  std::vector<std::string> nodes;
  std::string confidence;

  friend auto operator<=>(const Labeled&, const Labeled&) = default;
};

struct Fixture {
  std::string name;
  std::filesystem::path root;  // the project directory
  std::string description;
  std::vector<Labeled> expected;           // sorted
  std::map<int, int> drilling_by_threshold;
  std::vector<std::string> diagnostics;    // "file:code" that must be present
};

std::vector<Fixture> load_fixtures();
const Fixture& fixture(const std::string& name);

hooklens::AnalysisConfig config_for(const std::filesystem::path& root, int drill_threshold = 1);

std::string node_label(const hooklens::AnalysisReport& report, const std::string& node_id);
std::vector<Labeled> labeled_findings(const hooklens::AnalysisReport& report);
std::vector<Labeled> from_oracle(const oracle::Result& r);

struct Score {
  int true_pos = 0;
  int false_pos = 0;
  int false_neg = 0;
  double precision() const { return true_pos + false_pos == 0 ? 1.0 : double(true_pos) / (true_pos + false_pos); }
  double recall() const { return true_pos + false_neg == 0 ? 1.0 : double(true_pos) / (true_pos + false_neg); }
};

// Multiset match, restricted to one confidence level.
Score score(const std::vector<Labeled>& expected, const std::vector<Labeled>& actual, const std::string& confidence);

// All source files under root, as (relative path, content), sorted.
std::vector<std::pair<std::string, std::string>> read_sources(const std::filesystem::path& root);

// Random project in the subset the oracle understands: up to
// `max_components` components, render edges only from lower to higher
// index, mixes of used, forwarded and ignored states, props and setters.
std::vector<std::pair<std::string, std::string>> random_project(std::mt19937& rng, int max_components);

struct CliResult {
  int exit_code = -1;
  std::string out;
};
// Runs the hooklens binary with the given arguments (stderr discarded).
CliResult run_cli(const std::string& args);

std::filesystem::path temp_dir(const std::string& tag);

}  // namespace testkit
