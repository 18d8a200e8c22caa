#include "toolbench/session.hpp"

#include <algorithm>
#include <cmath>

namespace toolbench {

using nlohmann::json;

namespace {

const char* kind_name(SessionEventKind k) {
  switch (k) {
    case SessionEventKind::Intent: return "intent";
    case SessionEventKind::SetMode: return "set_mode";
    case SessionEventKind::SetParam: return "set_param";
  }
  return "intent";
}

SessionEventKind kind_from(const std::string& s) {
  if (s == "intent") return SessionEventKind::Intent;
  if (s == "set_mode") return SessionEventKind::SetMode;
  if (s == "set_param") return SessionEventKind::SetParam;
  throw InvalidInput("session log: unknown event type '" + s + "'");
}

const json& field(const json& msg, const char* key) {
  auto it = msg.find(key);
  if (it == msg.end()) throw ProtocolError("bad-message", std::string("missing field '") + key + "'");
  return *it;
}

double number_field(const json& msg, const char* key) {
  const json& v = field(msg, key);
  if (!v.is_number()) throw ProtocolError("bad-message", std::string("field '") + key + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ProtocolError("bad-message", std::string("field '") + key + "' must be finite");
  return d;
}

Vec3 vec_field(const json& msg, const char* key) {
  const json& v = field(msg, key);
  if (!v.is_array() || v.size() != 3) throw ProtocolError("bad-message", std::string("field '") + key + "' must be a 3-array");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) throw ProtocolError("bad-message", std::string("field '") + key + "' must hold numbers");
    out[i] = v[i].get<double>();
  }
  if (!is_finite(out)) throw ProtocolError("bad-message", std::string("field '") + key + "' must be finite");
  return out;
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

LiveIntent intent_from_payload(const json& p) {
  LiveIntent li;
  li.pos = Vec3(p.at("pos")[0].get<double>(), p.at("pos")[1].get<double>(), p.at("pos")[2].get<double>());
  li.press_bias = p.at("press_bias").get<double>();
  li.buttons = p.at("buttons").get<std::uint32_t>();
  return li;
}

}  // namespace

json error_frame(const std::string& code, const std::string& message) {
  return {{"type", "error"}, {"code", code}, {"message", message}};
}

// ---------------------------------------------------------------- SessionLog

json SessionLog::to_json() const {
  json ev = json::array();
  for (const auto& e : events) {
    json j = e.payload;
    j["type"] = kind_name(e.kind);
    j["step"] = e.step;
    ev.push_back(std::move(j));
  }
  return {{"schema", kSessionSchema}, {"config", toolbench::to_json(config)}, {"events", std::move(ev)},
          {"steps", steps},           {"hash", hash}};
}

SessionLog SessionLog::from_json(const json& j) {
  if (!j.is_object() || j.value("schema", "") != kSessionSchema)
    throw InvalidInput("session log: expected schema " + std::string(kSessionSchema));
  SessionLog log;
  log.config = parse_scenario(j.at("config"));
  log.steps = j.at("steps").get<std::int64_t>();
  log.hash = j.value("hash", "");
  std::int64_t prev = 0;
  for (const auto& e : j.at("events")) {
    SessionEvent ev;
    ev.kind = kind_from(e.at("type").get<std::string>());
    ev.step = e.at("step").get<std::int64_t>();
    if (ev.step < prev) throw InvalidInput("session log: events out of step order");
    prev = ev.step;
    ev.payload = e;
    ev.payload.erase("type");
    ev.payload.erase("step");
    log.events.push_back(std::move(ev));
  }
  return log;
}

void apply_event(Simulation& sim, const SessionEvent& event) {
  switch (event.kind) {
    case SessionEventKind::Intent:
      sim.set_live_intent(intent_from_payload(event.payload));
      break;
    case SessionEventKind::SetMode: {
      const auto mode = parse_mode(event.payload.at("mode").get<std::string>());
      if (!mode) throw InvalidInput("session log: bad mode");
      sim.set_mode(*mode);
      break;
    }
    case SessionEventKind::SetParam:
      sim.set_param(event.payload.at("path").get<std::string>(), event.payload.at("value"));
      break;
  }
}

RunResult replay_session(const SessionLog& log) {
  Simulation sim(log.config);
  RunResult result;
  TraceHasher hasher;
  std::size_t next = 0;
  while (sim.state().step < log.steps && !sim.finished()) {
    while (next < log.events.size() && log.events[next].step <= sim.state().step) apply_event(sim, log.events[next++]);
    result.trace.push_back(sim.step());
    hasher.add(result.trace.back());
  }
  if (sim.faulted()) {
    result.status = RunStatus::Fault;
    result.fault_message = sim.fault_message();
  }
  result.hash = hasher.hex();
  if (!result.trace.empty())
    result.metrics = compute_metrics(result.trace, log.config.metrics_context(sim.initial_bead_volume()));
  return result;
}

// ---------------------------------------------------------------- SessionCore

SessionCore::SessionCore(ScenarioConfig config, SessionOptions options)
    : config_(std::move(config)), options_(options), sim_(config_) {
  if (!(options_.frame_rate > 0.0)) throw InvalidInput("session: frame_rate must be > 0");
}

void SessionCore::restart() {
  sim_ = Simulation(config_);
  trace_.clear();
  hasher_ = TraceHasher{};
  events_.clear();
  frames_ = 0;
  end_reported_ = false;
}

json SessionCore::welcome() const {
  const BeadField& beads = sim_.workpiece().beads;
  return {{"type", "welcome"},
          {"protocol", kProtocol},
          {"scenario", config_.name},
          {"mode", std::string(to_string(sim_.state().mode))},
          {"dt", config_.dt},
          {"duration", config_.duration},
          {"beads",
           {{"u0", beads.u0()},
            {"v0", beads.v0()},
            {"du", beads.du()},
            {"dv", beads.dv()},
            {"nu", beads.nu()},
            {"nv", beads.nv()},
            {"periodic_u", beads.periodic_u()},
            {"h", beads.heights()}}}};
}

SessionCore::Reply SessionCore::handle_text(std::string_view text) {
  json msg;
  try {
    msg = json::parse(text);
  } catch (const json::parse_error& e) {
    closed_ = true;
    return {{error_frame("bad-json", e.what())}, true};
  }
  return handle(msg);
}

SessionCore::Reply SessionCore::handle(const json& msg) {
  Reply reply;
  if (closed_) {
    reply.frames.push_back(error_frame("closed", "session is closed"));
    reply.close = true;
    return reply;
  }
  try {
    if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string())
      throw ProtocolError("bad-message", "message must be an object with a string 'type'");
    const std::string type = msg["type"].get<std::string>();

    if (type == "hello") {
      if (greeted_) throw ProtocolError("duplicate-hello", "hello already received");
      const json& version = field(msg, "protocol");
      if (!version.is_string() || version.get<std::string>() != kProtocol)
        throw ProtocolError("unsupported-version", "server speaks " + std::string(kProtocol));
      greeted_ = true;
      reply.frames.push_back(welcome());
      return reply;
    }
    static const char* known[] = {"set_mode", "intent", "set_param", "pause", "resume", "reset", "bye"};
    if (std::find(std::begin(known), std::end(known), type) == std::end(known))
      throw ProtocolError("unknown-type", "unknown message type '" + type + "'");
    if (!greeted_) throw ProtocolError("expected-hello", "first message must be hello");

    const std::int64_t at = sim_.state().step;
    if (type == "intent") {
      const json& seq = field(msg, "seq");
      if (!seq.is_number_integer()) throw ProtocolError("bad-message", "field 'seq' must be an integer");
      const std::int64_t s = seq.get<std::int64_t>();
      if (last_seq_ && s <= *last_seq_) throw ProtocolError("seq-not-increasing", "intent seq must strictly increase");
      const Vec3 pos = vec_field(msg, "pos");
      const double press = number_field(msg, "press_bias");
      std::uint32_t buttons = 0;
      if (msg.contains("buttons")) {
        const json& b = msg["buttons"];
        if (!b.is_number_integer() || b.get<std::int64_t>() < 0 || b.get<std::int64_t>() > 0xffffffffLL)
          throw ProtocolError("bad-message", "field 'buttons' must be a 32-bit unsigned integer");
        buttons = static_cast<std::uint32_t>(b.get<std::int64_t>());
      }
      last_seq_ = s;
      SessionEvent ev{at, SessionEventKind::Intent, {{"seq", s}, {"pos", vec_json(pos)}, {"press_bias", press}, {"buttons", buttons}}};
      apply_event(sim_, ev);
      events_.push_back(std::move(ev));
    } else if (type == "set_mode") {
      const json& m = field(msg, "mode");
      const auto mode = m.is_string() ? parse_mode(m.get<std::string>()) : std::nullopt;
      if (!mode) {
        reply.frames.push_back(error_frame("bad-mode", "unknown mode"));
        return reply;
      }
      SessionEvent ev{at, SessionEventKind::SetMode, {{"mode", std::string(to_string(*mode))}}};
      try {
        apply_event(sim_, ev);
      } catch (const ConfigError& e) {
        reply.frames.push_back(error_frame("bad-mode", e.what()));
        return reply;
      }
      events_.push_back(std::move(ev));
      reply.frames.push_back(state_frame());
    } else if (type == "set_param") {
      const json& path = field(msg, "path");
      if (!path.is_string()) throw ProtocolError("bad-message", "field 'path' must be a string");
      SessionEvent ev{at, SessionEventKind::SetParam, {{"path", path}, {"value", field(msg, "value")}}};
      try {
        apply_event(sim_, ev);
      } catch (const ConfigError& e) {
        reply.frames.push_back(error_frame("bad-param", e.what()));
        return reply;
      }
      events_.push_back(std::move(ev));
    } else if (type == "pause") {
      paused_ = true;
      reply.frames.push_back(state_frame());
    } else if (type == "resume") {
      paused_ = false;
      reply.frames.push_back(state_frame());
    } else if (type == "reset") {
      restart();
      paused_ = false;
      reply.frames.push_back(welcome());
    } else if (type == "bye") {
      closed_ = true;
      paused_ = true;
      reply.frames.push_back({{"type", "bye"}, {"steps", step()}, {"hash", trace_hash()}});
      reply.close = true;
    }
  } catch (const ProtocolError& e) {
    closed_ = true;
    paused_ = true;
    reply.frames = {error_frame(e.code(), e.what())};
    reply.close = true;
  }
  return reply;
}

std::vector<json> SessionCore::tick() {
  std::vector<json> out;
  if (!running()) return out;
  const auto steps_per_second = static_cast<std::uint64_t>(std::llround(1.0 / config_.dt));
  ++frames_;
  const auto target = static_cast<std::int64_t>(static_cast<double>(frames_ * steps_per_second) / options_.frame_rate);
  while (sim_.state().step < target && !sim_.finished()) {
    TraceRecord rec = sim_.step();
    hasher_.add(rec);
    if (options_.keep_trace) trace_.push_back(std::move(rec));
  }
  out.push_back(state_frame());
  if (sim_.finished() && !end_reported_) {
    end_reported_ = true;
    paused_ = true;
    if (sim_.faulted()) {
      out.push_back({{"type", "fault"}, {"step", step()}, {"message", sim_.fault_message()}});
    } else {
      out.push_back({{"type", "finished"}, {"step", step()}, {"hash", trace_hash()}});
    }
  }
  return out;
}

void SessionCore::disconnect() {
  paused_ = true;
  closed_ = true;
}

json SessionCore::state_frame() {
  const SimState& s = sim_.state();
  const BeadField& beads = sim_.workpiece().beads;
  json patches = json::array();
  for (std::size_t idx : sim_.take_changed_cells()) {
    const std::size_t i = idx % beads.nu();
    const std::size_t j = idx / beads.nu();
    patches.push_back({{"i", i}, {"j", j}, {"h", beads.node(i, j)}});
  }
  const double removed =
      sim_.initial_bead_volume() > 0.0 ? std::clamp(sim_.removed_volume() / sim_.initial_bead_volume(), 0.0, 1.0) : 0.0;
  json frame = {{"type", "state"},
                {"step", s.step},
                {"t", s.t},
                {"slave_pos", vec_json(s.slave.pos)},
                {"master_pos", vec_json(s.master.pos)},
                {"normal_force", s.contact.normal_force()},
                {"master_feedback", vec_json(sim_.master_feedback().f)},
                {"beads", std::move(patches)},
                {"mode", std::string(to_string(s.mode))},
                {"removed_fraction", removed},
                {"fault", sim_.faulted()},
                {"paused", paused_}};
  frame["ack"] = last_seq_ ? json(*last_seq_) : json(nullptr);
  return frame;
}

SessionLog SessionCore::log() const {
  SessionLog log;
  log.config = config_;
  log.events = events_;
  log.steps = sim_.state().step;
  log.hash = hasher_.hex();
  return log;
}

}  // namespace toolbench
