#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "hooklens/ingest.h"
#include "hooklens/report.h"

namespace httplib {
class Server;
}

namespace hooklens {

// One immutable analysis result served to every request until replaced.
struct ServedSnapshot {
  ProjectSnapshot project;
  AnalysisReport report;
  std::string report_bytes;
  std::uint64_t generation = 0;
};

std::shared_ptr<const ServedSnapshot> make_served_snapshot(const AnalysisConfig& config, std::uint64_t generation);

// GET /api/source payload, or the HTTP status explaining why there is none.
struct SourceLookup {
  int status = 200;
  std::string body;
};
SourceLookup lookup_source(const ServedSnapshot& snap, const std::string& file);

class ApiServer {
 public:
  // Runs the first analysis; throws IngestError like run_analyze.
  ApiServer(AnalysisConfig config, std::optional<std::filesystem::path> ui_dir = std::nullopt);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Port 0 picks a free port. False when the address is taken.
  bool bind(const std::string& host, int port);
  int port() const { return port_; }
  // Blocks until stop().
  void listen();
  void stop();

  std::shared_ptr<const ServedSnapshot> snapshot() const;
  // Starts a background re-analysis unless one is running; returns whether it started.
  bool request_reanalyze();
  // Blocks until no re-analysis is running.
  void wait_idle();

 private:
  void routes();

  AnalysisConfig config_;
  std::optional<std::filesystem::path> ui_dir_;
  std::unique_ptr<httplib::Server> http_;
  mutable std::mutex mu_;
  std::shared_ptr<const ServedSnapshot> current_;
  std::atomic<bool> busy_{false};
  std::thread worker_;
  std::mutex worker_mu_;
  int port_ = -1;
};

// `serve` command: exit 2 when the root is bad or the port is taken.
int run_serve(const AnalysisConfig& config, int port, const std::optional<std::filesystem::path>& ui_dir);

}  // namespace hooklens
