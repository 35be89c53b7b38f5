// hooklens: React hook anti-pattern analyzer.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "hooklens/report.h"
#include "hooklens/server.h"

namespace {

struct CommonOptions {
  std::string root;
  std::vector<std::string> include;
  std::vector<std::string> exclude;
  int drill_threshold = 1;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--root", o.root, "project directory")->required();
  cmd->add_option("--include", o.include, "glob of files to analyze (repeatable)");
  cmd->add_option("--exclude", o.exclude, "glob of files to skip (repeatable)");
  cmd->add_option("--drill-threshold", o.drill_threshold, "pass-through components needed for a drilling finding");
}

hooklens::AnalysisConfig to_config(const CommonOptions& o) {
  hooklens::AnalysisConfig c;
  c.root_path = o.root;
  if (!o.include.empty()) c.include_globs = o.include;
  if (!o.exclude.empty()) c.exclude_globs = o.exclude;
  c.drill_threshold = o.drill_threshold;
  return c;
}

int analyze(const CommonOptions& o, const std::string& out, bool fail_on_findings) {
  hooklens::AnalysisConfig config = to_config(o);
  config.fail_on_findings = fail_on_findings;
  hooklens::AnalysisReport report;
  try {
    report = hooklens::run_analyze(config);
  } catch (const hooklens::IngestError& e) {
    std::cerr << "hooklens: " << e.code() << ": " << e.what() << "\n";
    return 2;
  }
  std::string bytes = hooklens::serialize(report);
  if (out.empty()) {
    std::cout << bytes;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!(f << bytes)) {
      std::cerr << "hooklens: cannot write " << out << "\n";
      return 2;
    }
  }
  return config.fail_on_findings && report.definite_count() > 0 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Find React hook anti-patterns: unreferenced state and props, prop drilling, effects setting parent state"};
  app.require_subcommand(1);

  CommonOptions analyze_opts;
  std::string format = "json";
  std::string out;
  bool fail_on_findings = false;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "analyze a project and print the JSON report");
  add_common(analyze_cmd, analyze_opts);
  analyze_cmd->add_option("--format", format, "output format")->check(CLI::IsMember({"json"}));
  analyze_cmd->add_option("--out", out, "write the report here instead of stdout");
  analyze_cmd->add_flag("--fail-on-findings", fail_on_findings, "exit 1 when any definite finding exists");

  CommonOptions serve_opts;
  int port = 7420;
  std::string ui_dir;
  CLI::App* serve_cmd = app.add_subcommand("serve", "analyze a project and serve the report over HTTP");
  add_common(serve_cmd, serve_opts);
  serve_cmd->add_option("--port", port, "TCP port on 127.0.0.1")->required()->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--ui-dir", ui_dir, "static UI assets served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (analyze_cmd->parsed()) return analyze(analyze_opts, out, fail_on_findings);
  std::optional<std::filesystem::path> ui;
  if (!ui_dir.empty()) ui = ui_dir;
  try {
    return hooklens::run_serve(to_config(serve_opts), port, ui);
  } catch (const hooklens::IngestError& e) {
    std::cerr << "hooklens: " << e.what() << "\n";
    return 2;
  }
}
