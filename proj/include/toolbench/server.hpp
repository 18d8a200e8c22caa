#pragma once

#include "toolbench/session.hpp"

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace toolbench {

struct ServerOptions {
  std::string address = "127.0.0.1";
  std::uint16_t port = 8080;     // 0 picks a free port
  double pace = 1.0;             // simulated seconds per wall second
  bool turbo = false;            // step as fast as the client drains frames
  std::string default_scenario = "flat-b";
  std::filesystem::path record_dir;  // empty: keep session logs in memory only
};

/// HTTP + WebSocket front end. `/session` upgrades to a live session (scenario
/// chosen by `?scenario=<name>`), `GET /healthz` and `GET /scenarios` answer
/// JSON. All sessions share one I/O thread; each owns its own SessionCore.
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts serving on a background thread.
  void start();
  /// Binds and serves on the calling thread until stop() (or a signal).
  void run();
  void stop();

  std::uint16_t port() const;
  /// Logs of sessions that have ended (bye, protocol error or disconnect).
  std::vector<SessionLog> finished_sessions() const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

}  // namespace toolbench
