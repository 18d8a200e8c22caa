#pragma once

#include "toolbench/metrics.hpp"
#include "toolbench/runner.hpp"
#include "toolbench/scenario.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace toolbench {

inline constexpr std::string_view kProtocol = "toolbench-proto/1";
inline constexpr std::string_view kSessionSchema = "toolbench-session/1";

/// A message the client should never have sent; the session answers with an
/// error frame carrying `code()` and then closes.
class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(std::string code, const std::string& what) : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

enum class SessionEventKind { Intent, SetMode, SetParam };

/// A client input applied at the boundary before step `step` (i.e. after
/// `step` steps have completed).
struct SessionEvent {
  std::int64_t step = 0;
  SessionEventKind kind = SessionEventKind::Intent;
  nlohmann::json payload;
};

/// Everything needed to reproduce a live session headlessly.
struct SessionLog {
  ScenarioConfig config;
  std::vector<SessionEvent> events;
  std::int64_t steps = 0;
  std::string hash;  // trace hash reported by the live session

  nlohmann::json to_json() const;
  static SessionLog from_json(const nlohmann::json& j);
};

/// Applies one recorded event to a simulation (shared by live and replay paths).
void apply_event(Simulation& sim, const SessionEvent& event);

/// Re-runs a recorded session without a network; the trace hash equals the live one.
RunResult replay_session(const SessionLog& log);

struct SessionOptions {
  double frame_rate = 60.0;  // state frames per simulated second
  bool keep_trace = true;    // retain records in memory (hash is always kept)
};

/// Transport-free live session: handshake, message validation, step-boundary
/// input, frame decimation and recording. The caller owns the clock: it calls
/// `handle` for each inbound message and `tick` once per frame period.
/// Single-threaded; a transport hands messages over through its own queue.
class SessionCore {
 public:
  explicit SessionCore(ScenarioConfig config, SessionOptions options = {});

  struct Reply {
    std::vector<nlohmann::json> frames;
    bool close = false;
  };

  /// Processes one client text frame at the current step boundary.
  Reply handle_text(std::string_view text);
  Reply handle(const nlohmann::json& message);

  /// Advances one frame period (16 or 17 steps at 1 kHz / 60 Hz) unless the
  /// session is idle, and returns the frames to send: one state frame, plus a
  /// fault or finished notice when the run stops.
  std::vector<nlohmann::json> tick();

  /// Client went away: pause and stop accepting input.
  void disconnect();

  bool greeted() const { return greeted_; }
  bool paused() const { return paused_; }
  bool closed() const { return closed_; }
  /// True when tick() would advance the simulation.
  bool running() const { return greeted_ && !paused_ && !closed_ && !sim_.finished(); }

  std::int64_t step() const { return sim_.state().step; }
  const Simulation& simulation() const { return sim_; }
  const std::vector<TraceRecord>& trace() const { return trace_; }
  std::string trace_hash() const { return hasher_.hex(); }
  SessionLog log() const;

  nlohmann::json state_frame();

 private:
  void restart();
  nlohmann::json welcome() const;

  ScenarioConfig config_;
  SessionOptions options_;
  Simulation sim_;
  std::vector<TraceRecord> trace_;
  TraceHasher hasher_;
  std::vector<SessionEvent> events_;
  std::uint64_t frames_ = 0;
  std::optional<std::int64_t> last_seq_;
  bool greeted_ = false;
  bool paused_ = false;
  bool closed_ = false;
  bool end_reported_ = false;
};

nlohmann::json error_frame(const std::string& code, const std::string& message);

}  // namespace toolbench
