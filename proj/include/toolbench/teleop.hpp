#pragma once

#include "toolbench/contact.hpp"
#include "toolbench/controllers.hpp"
#include "toolbench/mode.hpp"
#include "toolbench/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace toolbench {

struct CouplingParams {
  double motion_scale = 1.0;  // master -> slave
  double kpp = 2000.0;        // N/m, position-position reflection
  double bpp = 20.0;          // N*s/m
  double kff = 0.5;           // position-force reflection gain
  double fmax_master = 40.0;  // N, master force cap
};

struct CouplingOutput {
  Vec3 slave_setpoint = Vec3::Zero();
  Wrench3 master_feedback;
};

/// Haptic handle plant parameters.
struct MasterParams {
  double mass = 0.5;
  double damping = 5.0;  // intrinsic, N*s/m
};

struct Waypoint {
  double t = 0.0;
  Vec3 pos = Vec3::Zero();
};

/// Piecewise-linear, time-parameterized curve, held constant outside its span.
class Path {
 public:
  Path() = default;
  explicit Path(std::vector<Waypoint> waypoints);

  Vec3 position(double t) const;
  Vec3 velocity(double t) const;
  const std::vector<Waypoint>& waypoints() const { return pts_; }
  bool empty() const { return pts_.empty(); }

 private:
  std::vector<Waypoint> pts_;
};

struct OperatorModel {
  Path target_path;
  double bandwidth = 2.0;           // Hz, first-order intent lag
  double hand_stiffness = 300.0;    // N/m
  double hand_damping = 10.0;       // N*s/m
  double press_bias = 10.0;         // N into the surface
  double tremor_amplitude = 0.0;    // m, per axis peak
  double comfort_threshold = 15.0;  // N
  double comfort_time = 0.2;        // s of sustained feedback before yielding
  double yield_compliance = 1e-3;   // m/N retreat per newton above threshold
  std::uint64_t seed = 1;
};

/// Band-limited hand jitter: a fixed sum of sinusoids per axis whose
/// frequencies and phases are drawn from the seed.
class Tremor {
 public:
  static constexpr int kComponents = 3;
  static constexpr double kLowHz = 2.0;
  static constexpr double kHighHz = 6.0;

  Tremor() = default;
  Tremor(double amplitude, std::uint64_t seed);

  Vec3 offset(double t) const;

 private:
  double amplitude_ = 0.0;
  double freq_[3][kComponents]{};
  double phase_[3][kComponents]{};
};

/// Live operator input that replaces the scripted intent point.
struct LiveIntent {
  Vec3 pos = Vec3::Zero();
  double press_bias = 0.0;
  std::uint32_t buttons = 0;
};

struct OperatorState {
  Vec3 intent = Vec3::Zero();
  Vec3 yield_offset = Vec3::Zero();
  double over_threshold_time = 0.0;
  bool initialized = false;
  std::optional<LiveIntent> live;
  Tremor tremor;
};

OperatorState make_operator_state(const OperatorModel& op);

/// Scripted human: lagged path tracking through a hand impedance, pressing
/// along `press_dir` (unit, into the surface), yielding when the reflected
/// force stays above the comfort threshold.
Wrench3 operator_step(const OperatorModel& op, OperatorState& state, const RigidPoint& master,
                      const Wrench3& master_feedback, const Vec3& press_dir, double t, double dt);

/// Position-force coupling: the tip force is reflected as -k_ff * tip_force.
CouplingOutput pf_coupling(const RigidPoint& master, const ContactState& contact, const CouplingParams& p);

/// Position-position coupling: reflection from the master-slave position difference.
CouplingOutput pp_coupling(const RigidPoint& master, const RigidPoint& slave, const CouplingParams& p);

enum class CouplingKind { PositionForce, PositionPosition, None };
enum class RobotLoop { Admittance, Position, SharedVelocity, HybridVelocity };

/// Per-step wiring for a mode.
struct Pipeline {
  ControlMode mode = ControlMode::B;
  CouplingKind coupling = CouplingKind::PositionPosition;
  RobotLoop robot = RobotLoop::Admittance;
  bool fixture = false;
  bool needs_operator = true;

  std::string describe() const;
};

/// Which optional parameter blocks a scenario supplies.
struct ModeParameters {
  std::optional<AdmittanceParams> admittance;
  std::optional<CouplingParams> coupling;
  bool has_operator = false;
  bool has_fixture = false;
  bool has_shared = false;
  bool has_hybrid = false;
};

/// Throws ConfigError when `params` lacks a block the mode requires.
Pipeline assemble_mode(ControlMode mode, const ModeParameters& params);

void validate(const CouplingParams& p);
void validate(const OperatorModel& op);

}  // namespace toolbench
