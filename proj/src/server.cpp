#include "hooklens/server.h"

#include <httplib.h>

#include <csignal>
#include <iostream>

namespace hooklens {

std::shared_ptr<const ServedSnapshot> make_served_snapshot(const AnalysisConfig& config, std::uint64_t generation) {
  config.validate();
  auto snap = std::make_shared<ServedSnapshot>();
  snap->project = scan_project(config);
  snap->report = build_report(snap->project);
  snap->report_bytes = serialize(snap->report);
  snap->generation = generation;
  return snap;
}

SourceLookup lookup_source(const ServedSnapshot& snap, const std::string& file) {
  auto bad = [](std::string why) { return SourceLookup{400, nlohmann::json{{"error", std::move(why)}}.dump()}; };
  if (file.empty()) return bad("missing file parameter");
  if (file.find('\0') != std::string::npos || file.find('\\') != std::string::npos) return bad("invalid path");
  std::filesystem::path p(file);
  if (p.is_absolute() || p.has_root_name() || file.front() == '/') return bad("absolute paths are not served");
  for (const auto& part : p) {
    if (part == "..") return bad("path escapes the project root");
  }
  std::string rel = p.lexically_normal().generic_string();
  const SourceFile* f = snap.project.find(rel);
  if (!f) return {404, nlohmann::json{{"error", "unknown file"}, {"path", rel}}.dump()};
  nlohmann::json j = {{"path", f->relative_path},
                      {"content", f->content},
                      {"line_count", f->line_count()},
                      {"line_offsets", f->line_offsets}};
  return {200, j.dump()};
}

ApiServer::ApiServer(AnalysisConfig config, std::optional<std::filesystem::path> ui_dir)
    : config_(std::move(config)), ui_dir_(std::move(ui_dir)), http_(std::make_unique<httplib::Server>()) {
  current_ = make_served_snapshot(config_, 1);
  // httplib's defaults add SO_REUSEPORT, which would let a second server
  // share a port that is already taken.
  http_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
  });
  routes();
}

ApiServer::~ApiServer() {
  stop();
  wait_idle();
}

std::shared_ptr<const ServedSnapshot> ApiServer::snapshot() const {
  std::lock_guard lock(mu_);
  return current_;
}

bool ApiServer::request_reanalyze() {
  bool expected = false;
  if (!busy_.compare_exchange_strong(expected, true)) return false;
  std::lock_guard lock(worker_mu_);
  if (worker_.joinable()) worker_.join();
  worker_ = std::thread([this] {
    try {
      auto next = make_served_snapshot(config_, snapshot()->generation + 1);
      std::lock_guard lock(mu_);
      current_ = std::move(next);
    } catch (const std::exception& e) {
      std::cerr << "hooklens: reanalysis failed, keeping previous report: " << e.what() << "\n";
    }
    busy_ = false;
  });
  return true;
}

void ApiServer::wait_idle() {
  std::lock_guard lock(worker_mu_);
  if (worker_.joinable()) worker_.join();
}

void ApiServer::routes() {
  http_->Get("/api/graph", [this](const httplib::Request&, httplib::Response& res) {
    auto snap = snapshot();
    res.set_header("X-Report-Generation", std::to_string(snap->generation));
    res.set_content(snap->report_bytes, "application/json");
  });
  http_->Get("/api/source", [this](const httplib::Request& req, httplib::Response& res) {
    auto snap = snapshot();
    SourceLookup r = lookup_source(*snap, req.has_param("file") ? req.get_param_value("file") : "");
    res.status = r.status;
    res.set_content(r.body, "application/json");
  });
  http_->Post("/api/reanalyze", [this](const httplib::Request&, httplib::Response& res) {
    bool started = request_reanalyze();
    res.status = 202;
    res.set_content(nlohmann::json{{"status", started ? "accepted" : "already_running"}}.dump(),
                    "application/json");
  });
  if (ui_dir_ && !http_->set_mount_point("/", ui_dir_->string())) {
    throw ConfigError("ui dir is not a directory: " + ui_dir_->string());
  }
}

bool ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = http_->bind_to_any_port(host);
    return port_ > 0;
  }
  if (!http_->bind_to_port(host, port)) return false;
  port_ = port;
  return true;
}

void ApiServer::listen() { http_->listen_after_bind(); }

void ApiServer::stop() {
  if (http_) http_->stop();
}

namespace {
ApiServer* g_running = nullptr;
void on_signal(int) {
  if (g_running) g_running->stop();
}
}  // namespace

int run_serve(const AnalysisConfig& config, int port, const std::optional<std::filesystem::path>& ui_dir) {
  std::unique_ptr<ApiServer> server;
  try {
    server = std::make_unique<ApiServer>(config, ui_dir);
  } catch (const IngestError& e) {
    std::cerr << "hooklens: " << e.what() << "\n";
    return 2;
  }
  if (!server->bind("127.0.0.1", port)) {
    std::cerr << "hooklens: cannot listen on port " << port << "\n";
    return 2;
  }
  std::cerr << "hooklens: serving " << config.root_path.generic_string() << " on http://127.0.0.1:" << server->port()
            << "\n";
  g_running = server.get();
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server->listen();
  g_running = nullptr;
  return 0;
}

}  // namespace hooklens
