#include "toolbench/runner.hpp"
#include "toolbench/scenario.hpp"
#include "toolbench/server.hpp"
#include "toolbench/session.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace toolbench;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitConfig = 2;
constexpr int kExitFault = 3;

// A config argument may be a file path or the name of a library scenario.
ScenarioConfig resolve_config(const std::string& arg) {
  std::ifstream probe(arg);
  if (probe) return load_scenario(arg);
  return standard_scenario(arg);
}

std::vector<ControlMode> parse_modes(const std::string& list) {
  std::vector<ControlMode> modes;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto m = parse_mode(item);
    if (!m) throw ConfigError("--modes", "unknown mode '" + item + "'");
    modes.push_back(*m);
  }
  return modes;
}

void write_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  out << j.dump(2) << '\n';
}

int cmd_run(const std::string& config_arg, const std::string& trace_path, const std::string& metrics_path) {
  const ScenarioConfig cfg = resolve_config(config_arg);
  const RunResult r = run_scenario(cfg);
  if (!trace_path.empty()) {
    std::ofstream out(trace_path);
    write_trace(out, r.trace);
  }
  if (!metrics_path.empty()) write_json(metrics_path, r.metrics ? to_json(*r.metrics) : json{{"schema", kSchema}, {"steps", 0}});
  std::cout << "scenario " << cfg.name << " mode " << to_string(cfg.mode) << ": " << r.trace.size() << " steps, hash "
            << r.hash << '\n';
  if (r.metrics) std::cout << to_json(*r.metrics).dump(2) << '\n';
  if (r.status == RunStatus::Fault) {
    std::cerr << "simulation fault: " << r.fault_message << '\n';
    return kExitFault;
  }
  return kExitOk;
}

int cmd_compare(const std::string& config_arg, const std::string& modes_arg, const std::string& out_path) {
  const ScenarioConfig cfg = resolve_config(config_arg);
  const ModeComparison cmp = compare_modes(cfg, parse_modes(modes_arg));
  std::cout << cmp.table();
  if (!out_path.empty()) write_json(out_path, cmp.to_json());
  return kExitOk;
}

// Replays a recorded live session (JSON log) or re-reads a JSONL trace.
int cmd_replay(const std::string& input, const std::string& config_arg, bool want_metrics, const std::string& metrics_path,
               const std::string& trace_path) {
  std::ifstream in(input);
  if (!in) throw InvalidInput("cannot open " + input);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();

  const json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_object() && doc.value("schema", "") == kSessionSchema) {
    const SessionLog log = SessionLog::from_json(doc);
    const RunResult r = replay_session(log);
    if (!trace_path.empty()) {
      std::ofstream out(trace_path);
      write_trace(out, r.trace);
    }
    std::cout << "session " << log.config.name << ": " << r.trace.size() << " steps, " << log.events.size()
              << " events, hash " << r.hash;
    if (!log.hash.empty()) std::cout << (log.hash == r.hash ? " (matches recording)" : " (recorded " + log.hash + ")");
    std::cout << '\n';
    if (want_metrics && r.metrics) {
      if (metrics_path.empty()) std::cout << to_json(*r.metrics).dump(2) << '\n';
      else write_json(metrics_path, to_json(*r.metrics));
    }
    if (r.status == RunStatus::Fault) return kExitFault;
    return (!log.hash.empty() && log.hash != r.hash) ? kExitMismatch : kExitOk;
  }

  std::istringstream lines(text);
  const std::vector<TraceRecord> trace = read_trace(lines);
  if (trace.empty()) throw InvalidInput(input + ": empty trace");
  std::cout << "trace " << input << ": " << trace.size() << " steps, hash " << trace_hash(trace) << '\n';
  if (want_metrics) {
    MetricsContext ctx;
    if (!config_arg.empty()) {
      const ScenarioConfig cfg = resolve_config(config_arg);
      ctx = cfg.metrics_context(cfg.build_workpiece().beads.volume());
    } else if (trace.size() > 1) {
      ctx.dt = trace[1].t - trace[0].t;
    }
    const MetricsReport m = compute_metrics(trace, ctx);
    if (metrics_path.empty()) std::cout << to_json(m).dump(2) << '\n';
    else write_json(metrics_path, to_json(m));
  }
  return trace.back().fault ? kExitFault : kExitOk;
}

int cmd_serve(const ServerOptions& options) {
  Server server(options);
  std::cout << "toolbench serving " << kProtocol << " on " << options.address << ':' << options.port
            << (options.turbo ? " (turbo)" : "") << std::endl;
  server.run();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toolbench: contact-tooling teleoperation simulator"};
  app.require_subcommand(1);

  std::string config_arg, trace_path, metrics_path, modes_arg = "A,B,C,D", out_path;
  auto* run = app.add_subcommand("run", "run one scenario headless");
  run->add_option("config", config_arg, "scenario JSON file or library name")->required();
  run->add_option("--trace", trace_path, "write the trace as JSONL");
  run->add_option("--metrics", metrics_path, "write the metrics report as JSON");

  auto* compare = app.add_subcommand("compare", "run a scenario under several modes");
  compare->add_option("config", config_arg, "scenario JSON file or library name")->required();
  compare->add_option("--modes", modes_arg, "comma-separated modes (A,B,C,D,VF,SC,HYBRID)");
  compare->add_option("--out", out_path, "write the comparison as JSON");

  std::string scenario_name;
  auto* scenarios = app.add_subcommand("scenarios", "list or emit library scenarios");
  scenarios->require_subcommand(1);
  auto* list = scenarios->add_subcommand("list", "list scenario names");
  auto* emit = scenarios->add_subcommand("emit", "print a scenario as JSON");
  emit->add_option("name", scenario_name, "scenario name")->required();

  std::string replay_input, replay_config, replay_metrics, replay_trace;
  auto* replay = app.add_subcommand("replay", "re-run a recorded session or re-score a trace");
  replay->add_option("input", replay_input, "session log (.json) or trace (.jsonl)")->required();
  replay->add_option("--config", replay_config, "scenario for the metrics context when re-scoring a trace");
  auto* replay_metrics_opt = replay->add_option("--metrics", replay_metrics, "print metrics, or write them to a file")
                                 ->expected(0, 1);
  replay->add_option("--trace", replay_trace, "write the replayed trace as JSONL");

  ServerOptions serve_opts;
  auto* serve = app.add_subcommand("serve", "run the live session server");
  serve->add_option("--port", serve_opts.port, "TCP port (0 = any free port)");
  serve->add_option("--address", serve_opts.address, "listen address");
  serve->add_option("--pace", serve_opts.pace, "simulated seconds per wall-clock second")->check(CLI::PositiveNumber);
  serve->add_flag("--turbo", serve_opts.turbo, "step unpaced, as fast as frames are drained");
  serve->add_option("--scenario", serve_opts.default_scenario, "scenario when the client does not choose one");
  serve->add_option("--record", serve_opts.record_dir, "directory for session logs and traces");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) return cmd_run(config_arg, trace_path, metrics_path);
    if (*compare) return cmd_compare(config_arg, modes_arg, out_path);
    if (*replay)
      return cmd_replay(replay_input, replay_config, replay_metrics_opt->count() > 0, replay_metrics, replay_trace);
    if (*serve) return cmd_serve(serve_opts);
    if (*list) {
      for (const auto& n : scenario_names()) std::cout << n << '\n';
      return kExitOk;
    }
    if (*emit) {
      std::cout << to_json(standard_scenario(scenario_name)).dump(2) << '\n';
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
