#include "toolbench/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <sstream>

namespace toolbench {

using nlohmann::json;

Simulation::Simulation(ScenarioConfig config) : config_(std::move(config)) {
  validate(config_);
  workpiece_ = config_.build_workpiece();
  initial_bead_volume_ = workpiece_.beads.volume();
  changed_flag_.assign(workpiece_.beads.heights().size(), 0);

  state_.slave = RigidPoint{config_.slave_initial, Vec3::Zero(), config_.slave_mass};
  state_.master = RigidPoint{config_.master_initial, Vec3::Zero(), config_.master.mass};
  state_.contact = contact_force(workpiece_, state_.slave);
  state_.mode = config_.mode;
  admittance_.pos = state_.slave.pos;
  apply_config();
  operator_state_ = make_operator_state(operator_);
}

void Simulation::apply_config() {
  pipeline_ = assemble_mode(config_.mode, config_.mode_parameters());
  operator_ = config_.operator_model_for_run();
  hybrid_path_ = config_.hybrid ? Path(config_.hybrid->path) : Path();
  fixture_.reset();
  if (config_.fixture) {
    fixture_ = fixture_from_workpiece(config_.workpiece.geometry, config_.fixture->offset, config_.fixture->stiffness,
                                      config_.fixture->damping, config_.fixture->side);
  }
  workpiece_.contact = config_.workpiece.contact;
  workpiece_.preston_k = config_.workpiece.preston_k;
  workpiece_.tool_radius = config_.workpiece.tool_radius;
}

Vec3 Simulation::master_press_dir() const {
  try {
    return -surface_normal(workpiece_.geometry, state_.master.pos);
  } catch (const InvalidInput&) {
    return -state_.contact.normal;
  }
}

void Simulation::set_mode(ControlMode mode) {
  ScenarioConfig next = config_;
  next.mode = mode;
  (void)assemble_mode(mode, next.mode_parameters());
  config_ = std::move(next);
  apply_config();
  state_.mode = mode;
  state_.force_integral = Vec3::Zero();
  admittance_ = AdmittanceState{state_.slave.pos, Vec3::Zero()};
}

void Simulation::set_param(const std::string& pointer, const json& value) {
  static const char* frozen[] = {"/schema", "/dt", "/duration", "/seed", "/workpiece/geometry", "/workpiece/beads",
                                 "/slave", "/master/initial_position", "/mode"};
  for (const char* prefix : frozen) {
    if (pointer.rfind(prefix, 0) == 0) throw ConfigError(pointer, "parameter cannot change during a run");
  }
  json j = to_json(config_);
  try {
    j.at(json::json_pointer(pointer)) = value;
  } catch (const json::exception&) {
    throw ConfigError(pointer, "no such parameter");
  }
  ScenarioConfig next = parse_scenario(j);
  config_ = std::move(next);
  apply_config();
}

std::vector<std::size_t> Simulation::take_changed_cells() {
  std::vector<std::size_t> out;
  out.swap(changed_);
  for (std::size_t i : out) changed_flag_[i] = 0;
  return out;
}

TraceRecord Simulation::step() {
  const double dt = config_.dt;
  const double t = state_.t;
  const SimState before = state_;
  const CouplingParams coupling = config_.coupling.value_or(CouplingParams{});
  const Vec3 n = state_.contact.normal;
  const Vec3 press_dir = -n;

  TraceRecord rec;
  try {
    CouplingOutput link;
    switch (pipeline_.coupling) {
      case CouplingKind::PositionForce: link = pf_coupling(state_.master, state_.contact, coupling); break;
      case CouplingKind::PositionPosition: link = pp_coupling(state_.master, state_.slave, coupling); break;
      case CouplingKind::None: link.slave_setpoint = hybrid_path_.position(t); break;
    }
    if (pipeline_.fixture && fixture_) {
      link.master_feedback += fixture_wrench(*fixture_, state_.master);
      link.master_feedback = Wrench3(saturate(link.master_feedback.f, coupling.fmax_master));
    }

    Wrench3 master_force;
    if (pipeline_.needs_operator) {
      const Wrench3 hand =
          operator_step(operator_, operator_state_, state_.master, link.master_feedback, master_press_dir(), t, dt);
      master_force = Wrench3(hand.f + link.master_feedback.f - config_.master.damping * state_.master.vel);
    }

    Wrench3 control;
    switch (pipeline_.robot) {
      case RobotLoop::Admittance:
        admittance_ = admittance_step(*config_.admittance, link.slave_setpoint, admittance_, state_.contact.force_env, dt);
        control = position_control(config_.position, admittance_.pos, state_.slave);
        break;
      case RobotLoop::Position:
        control = position_control(config_.position, link.slave_setpoint, state_.slave);
        break;
      case RobotLoop::SharedVelocity: {
        const SharedSpec& spec = *config_.shared;
        SharedControlParams p{press_dir, spec.force_setpoint, spec.gains};
        const Vec3 v_teleop = coupling.motion_scale * state_.master.vel +
                              spec.lateral_gain * (link.slave_setpoint - state_.slave.pos);
        const Wrench3 tip = state_.contact.tip_force();
        state_.force_integral = accumulate_force_error(p.selection(), state_.force_integral, shared_force_error(p, tip),
                                                       dt, config_.force_integral_limit);
        const Vec3 v = shared_command(p, v_teleop, tip, state_.force_integral);
        control = velocity_to_force(v, state_.slave, config_.velocity_servo);
        break;
      }
      case RobotLoop::HybridVelocity: {
        const HybridSpec& spec = *config_.hybrid;
        const SelectionMatrix s = SelectionMatrix::from_normal(n);
        const Vec3 v_d = hybrid_path_.velocity(t) + spec.path_gain * (link.slave_setpoint - state_.slave.pos);
        const Wrench3 f_e(spec.force_setpoint * press_dir - state_.contact.tip_force().f);
        state_.force_integral = accumulate_force_error(s, state_.force_integral, f_e, dt, config_.force_integral_limit);
        const Vec3 v = hybrid_command(s, v_d, f_e, state_.force_integral, spec.gains);
        control = velocity_to_force(v, state_.slave, config_.velocity_servo);
        break;
      }
    }

    const Vec3 v_t = state_.slave.vel - n * state_.slave.vel.dot(n);
    std::vector<std::size_t> touched;
    removed_volume_ += removal_step(workpiece_, state_.contact, v_t, dt, &touched);
    for (std::size_t i : touched) {
      if (!changed_flag_[i]) {
        changed_flag_[i] = 1;
        changed_.push_back(i);
      }
    }

    integrate_step(state_, workpiece_, control, master_force, dt);
    last_feedback_ = link.master_feedback;

    rec.slave_setpoint = link.slave_setpoint;
    rec.master_feedback = link.master_feedback.f;
  } catch (const SimulationFault& e) {
    faulted_ = true;
    fault_message_ = e.what();
    state_ = before;
    rec.fault = true;
  }

  const std::int64_t step_index = faulted_ ? before.step + 1 : state_.step;
  rec.step = step_index;
  rec.t = static_cast<double>(step_index) * dt;
  rec.master_pos = state_.master.pos;
  rec.master_vel = state_.master.vel;
  rec.slave_pos = state_.slave.pos;
  rec.slave_vel = state_.slave.vel;
  rec.normal_force = state_.contact.normal_force();
  rec.env_force = state_.contact.force_env.f;
  rec.mode = state_.mode;
  rec.removed_volume = removed_volume_;
  return rec;
}

RunResult run_scenario(const ScenarioConfig& config) {
  Simulation sim(config);
  RunResult result;
  result.trace.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, config.total_steps())));
  while (!sim.finished()) result.trace.push_back(sim.step());
  if (sim.faulted()) {
    result.status = RunStatus::Fault;
    result.fault_message = sim.fault_message();
  }
  result.hash = trace_hash(result.trace);
  if (!result.trace.empty()) result.metrics = compute_metrics(result.trace, config.metrics_context(sim.initial_bead_volume()));
  return result;
}

ModeComparison compare_modes(const ScenarioConfig& base, const std::vector<ControlMode>& modes) {
  auto orderings = standard_orderings();
  for (auto& o : fixture_orderings()) orderings.push_back(std::move(o));
  return compare_modes(base, modes, orderings);
}

ModeComparison compare_modes(const ScenarioConfig& base, const std::vector<ControlMode>& modes,
                             const std::vector<ExpectedOrdering>& orderings) {
  if (modes.size() < 2) throw InvalidInput("compare_modes: at least two modes are required");
  std::vector<ScenarioConfig> configs;
  for (ControlMode m : modes) {
    ScenarioConfig c = base;
    c.mode = m;
    c.name = base.name + "/" + std::string(to_string(m));
    validate(c);
    configs.push_back(std::move(c));
  }

  std::vector<std::future<RunResult>> jobs;
  for (const auto& c : configs) jobs.push_back(std::async(std::launch::async, [&c] { return run_scenario(c); }));

  ModeComparison out;
  out.modes = modes;
  for (auto& j : jobs) out.runs.push_back(j.get());

  auto index_of = [&](ControlMode m) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < modes.size(); ++i)
      if (modes[i] == m) return i;
    return std::nullopt;
  };
  for (const auto& o : orderings) {
    const auto g = index_of(o.greater);
    const auto l = index_of(o.lesser);
    if (!g || !l || !out.runs[*g].metrics || !out.runs[*l].metrics) continue;
    OrderingCheck check{o, metric_value(*out.runs[*g].metrics, o.metric), metric_value(*out.runs[*l].metrics, o.metric)};
    check.satisfied = check.greater_value > o.ratio * check.lesser_value;
    out.checks.push_back(check);
  }
  return out;
}

json ModeComparison::to_json() const {
  json j;
  j["schema"] = kSchema;
  json runs_json = json::array();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    json r;
    r["mode"] = std::string(to_string(modes[i]));
    r["status"] = runs[i].status == RunStatus::Completed ? "completed" : "fault";
    r["hash"] = runs[i].hash;
    if (runs[i].metrics) r["metrics"] = toolbench::to_json(*runs[i].metrics);
    runs_json.push_back(r);
  }
  j["runs"] = runs_json;
  json checks_json = json::array();
  for (const auto& c : checks) {
    checks_json.push_back({{"metric", c.ordering.metric},
                           {"greater", std::string(to_string(c.ordering.greater))},
                           {"lesser", std::string(to_string(c.ordering.lesser))},
                           {"ratio", c.ordering.ratio},
                           {"greater_value", c.greater_value},
                           {"lesser_value", c.lesser_value},
                           {"satisfied", c.satisfied}});
  }
  j["orderings"] = checks_json;
  return j;
}

std::string ModeComparison::table() const {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof line, "%-7s %-9s %10s %10s %12s %10s %10s %8s %9s\n", "mode", "status", "peak[N]",
                "mean[N]", "hf[m2/s2]", "plane[mm]", "surf[mm]", "loss[ms]", "removed");
  os << line;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto& r = runs[i];
    const std::string status = r.status == RunStatus::Completed ? "ok" : "fault";
    if (!r.metrics) {
      std::snprintf(line, sizeof line, "%-7s %-9s (no steps)\n", std::string(to_string(modes[i])).c_str(), status.c_str());
    } else {
      const auto& m = *r.metrics;
      std::snprintf(line, sizeof line, "%-7s %-9s %10.3f %10.3f %12.4e %10.4f %10.4f %8.1f %9.4f\n",
                    std::string(to_string(modes[i])).c_str(), status.c_str(), m.peak_normal_force, m.mean_contact_force,
                    m.hf_energy, m.path_rms.in_plane * 1e3, m.surface_rms * 1e3, m.contact_loss_max * 1e3,
                    m.removed_fraction);
    }
    os << line;
  }
  for (const auto& c : checks) {
    std::snprintf(line, sizeof line, "[%s] %s(%s) > %.3g x %s(%s): %.6g vs %.6g\n", c.satisfied ? "PASS" : "FAIL",
                  c.ordering.metric.c_str(), std::string(to_string(c.ordering.greater)).c_str(), c.ordering.ratio,
                  c.ordering.metric.c_str(), std::string(to_string(c.ordering.lesser)).c_str(), c.greater_value,
                  c.lesser_value);
    os << line;
  }
  return os.str();
}

}  // namespace toolbench
