#include "toolbench/teleop.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace toolbench {

namespace {

// splitmix64; fixed bit-exact sequence for a given seed on every platform.
class SplitMix {
 public:
  explicit SplitMix(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace

Path::Path(std::vector<Waypoint> waypoints) : pts_(std::move(waypoints)) {
  for (std::size_t i = 1; i < pts_.size(); ++i)
    if (!(pts_[i].t > pts_[i - 1].t)) throw InvalidInput("path waypoint times must be strictly increasing");
}

Vec3 Path::position(double t) const {
  if (pts_.empty()) return Vec3::Zero();
  if (t <= pts_.front().t) return pts_.front().pos;
  if (t >= pts_.back().t) return pts_.back().pos;
  auto it = std::upper_bound(pts_.begin(), pts_.end(), t, [](double x, const Waypoint& w) { return x < w.t; });
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  const double s = (t - a.t) / (b.t - a.t);
  return a.pos + s * (b.pos - a.pos);
}

Vec3 Path::velocity(double t) const {
  if (pts_.size() < 2 || t < pts_.front().t || t >= pts_.back().t) return Vec3::Zero();
  auto it = std::upper_bound(pts_.begin(), pts_.end(), t, [](double x, const Waypoint& w) { return x < w.t; });
  const Waypoint& b = *it;
  const Waypoint& a = *(it - 1);
  return (b.pos - a.pos) / (b.t - a.t);
}

Tremor::Tremor(double amplitude, std::uint64_t seed) : amplitude_(amplitude) {
  SplitMix rng(seed);
  for (int axis = 0; axis < 3; ++axis) {
    for (int k = 0; k < kComponents; ++k) {
      freq_[axis][k] = kLowHz + (kHighHz - kLowHz) * rng.uniform();
      phase_[axis][k] = 2.0 * std::numbers::pi * rng.uniform();
    }
  }
}

Vec3 Tremor::offset(double t) const {
  if (amplitude_ == 0.0) return Vec3::Zero();
  Vec3 out;
  for (int axis = 0; axis < 3; ++axis) {
    double sum = 0.0;
    for (int k = 0; k < kComponents; ++k) sum += std::sin(2.0 * std::numbers::pi * freq_[axis][k] * t + phase_[axis][k]);
    out[axis] = amplitude_ * sum / kComponents;
  }
  return out;
}

OperatorState make_operator_state(const OperatorModel& op) {
  OperatorState s;
  s.tremor = Tremor(op.tremor_amplitude, op.seed);
  return s;
}

Wrench3 operator_step(const OperatorModel& op, OperatorState& state, const RigidPoint& master,
                      const Wrench3& master_feedback, const Vec3& press_dir, double t, double dt) {
  if (!(dt > 0.0)) throw InvalidInput("operator_step: dt must be > 0");

  if (state.live) {
    const LiveIntent& live = *state.live;
    state.intent = live.pos;
    state.initialized = true;
    const Vec3 f = op.hand_stiffness * (live.pos - master.pos) - op.hand_damping * master.vel + live.press_bias * press_dir;
    return Wrench3(f);
  }

  const double alpha = 1.0 - std::exp(-2.0 * std::numbers::pi * op.bandwidth * dt);
  const Vec3 target = op.target_path.position(t);
  if (!state.initialized) {
    state.intent = target;
    state.initialized = true;
  } else {
    state.intent += alpha * (target - state.intent);
  }

  // Yielding: the reflected push out of the surface is -feedback . press_dir.
  const double push_back = -master_feedback.f.dot(press_dir);
  if (push_back > op.comfort_threshold) state.over_threshold_time += dt;
  else state.over_threshold_time = 0.0;
  Vec3 yield_target = Vec3::Zero();
  if (state.over_threshold_time >= op.comfort_time)
    yield_target = -press_dir * (op.yield_compliance * (push_back - op.comfort_threshold));
  state.yield_offset += alpha * (yield_target - state.yield_offset);

  const Vec3 aim = state.intent + state.yield_offset + state.tremor.offset(t);
  const Vec3 f = op.hand_stiffness * (aim - master.pos) - op.hand_damping * master.vel + op.press_bias * press_dir;
  return Wrench3(f);
}

CouplingOutput pf_coupling(const RigidPoint& master, const ContactState& contact, const CouplingParams& p) {
  CouplingOutput out;
  out.slave_setpoint = p.motion_scale * master.pos;
  if (contact.in_contact) out.master_feedback = Wrench3(saturate(-p.kff * contact.tip_force().f, p.fmax_master));
  return out;
}

CouplingOutput pp_coupling(const RigidPoint& master, const RigidPoint& slave, const CouplingParams& p) {
  CouplingOutput out;
  out.slave_setpoint = p.motion_scale * master.pos;
  const Vec3 f = p.kpp * (slave.pos / p.motion_scale - master.pos) - p.bpp * master.vel;
  out.master_feedback = Wrench3(saturate(f, p.fmax_master));
  return out;
}

std::string Pipeline::describe() const {
  std::ostringstream os;
  switch (coupling) {
    case CouplingKind::PositionForce: os << "pf_coupling"; break;
    case CouplingKind::PositionPosition: os << "pp_coupling"; break;
    case CouplingKind::None: os << "planner"; break;
  }
  if (fixture) os << " + fixture_wrench";
  switch (robot) {
    case RobotLoop::Admittance: os << " -> admittance_step -> position_control"; break;
    case RobotLoop::Position: os << " -> position_control"; break;
    case RobotLoop::SharedVelocity: os << " -> shared_command -> velocity_to_force"; break;
    case RobotLoop::HybridVelocity: os << " -> hybrid_command -> velocity_to_force"; break;
  }
  os << " -> plant";
  return os.str();
}

Pipeline assemble_mode(ControlMode mode, const ModeParameters& params) {
  Pipeline p;
  p.mode = mode;
  switch (mode) {
    case ControlMode::A: p.coupling = CouplingKind::PositionForce; p.robot = RobotLoop::Admittance; break;
    case ControlMode::B: p.coupling = CouplingKind::PositionPosition; p.robot = RobotLoop::Admittance; break;
    case ControlMode::C: p.coupling = CouplingKind::PositionForce; p.robot = RobotLoop::Position; break;
    case ControlMode::D: p.coupling = CouplingKind::PositionPosition; p.robot = RobotLoop::Position; break;
    case ControlMode::VF:
      p.coupling = CouplingKind::PositionPosition;
      p.robot = RobotLoop::Admittance;
      p.fixture = true;
      break;
    case ControlMode::SC: p.coupling = CouplingKind::PositionPosition; p.robot = RobotLoop::SharedVelocity; break;
    case ControlMode::Hybrid:
      p.coupling = CouplingKind::None;
      p.robot = RobotLoop::HybridVelocity;
      p.needs_operator = false;
      break;
  }

  const std::string m(to_string(mode));
  if (p.robot == RobotLoop::Admittance && !params.admittance)
    throw ConfigError("admittance", "mode " + m + " requires admittance parameters");
  if (p.coupling != CouplingKind::None && !params.coupling)
    throw ConfigError("coupling", "mode " + m + " requires coupling parameters");
  if (p.needs_operator && !params.has_operator)
    throw ConfigError("operator", "mode " + m + " requires an operator model");
  if (p.fixture && !params.has_fixture) throw ConfigError("fixture", "mode " + m + " requires fixture parameters");
  if (p.robot == RobotLoop::SharedVelocity && !params.has_shared)
    throw ConfigError("shared", "mode " + m + " requires shared-control parameters");
  if (p.robot == RobotLoop::HybridVelocity && !params.has_hybrid)
    throw ConfigError("hybrid", "mode " + m + " requires hybrid-control parameters");
  return p;
}

void validate(const CouplingParams& p) {
  if (!(p.motion_scale > 0.0)) throw InvalidInput("coupling motion_scale must be > 0");
  if (!(p.kpp >= 0.0) || !(p.bpp >= 0.0) || !(p.kff >= 0.0)) throw InvalidInput("coupling gains must be >= 0");
  if (!(p.fmax_master > 0.0)) throw InvalidInput("coupling fmax_master must be > 0");
}

void validate(const OperatorModel& op) {
  if (!(op.bandwidth > 0.0)) throw InvalidInput("operator bandwidth must be > 0");
  if (!(op.hand_stiffness > 0.0)) throw InvalidInput("operator hand_stiffness must be > 0");
  if (!(op.hand_damping >= 0.0)) throw InvalidInput("operator hand_damping must be >= 0");
  if (!(op.tremor_amplitude >= 0.0)) throw InvalidInput("operator tremor_amplitude must be >= 0");
  if (!(op.comfort_threshold >= 0.0) || !(op.comfort_time >= 0.0)) throw InvalidInput("operator comfort rule must be >= 0");
  if (!(op.yield_compliance >= 0.0)) throw InvalidInput("operator yield_compliance must be >= 0");
}

}  // namespace toolbench
