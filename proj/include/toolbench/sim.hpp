#pragma once

#include "toolbench/contact.hpp"
#include "toolbench/mode.hpp"
#include "toolbench/types.hpp"
#include "toolbench/workpiece.hpp"

#include <cstdint>

namespace toolbench {

inline constexpr double kDefaultDt = 1e-3;
inline constexpr double kForceIntegralLimit = 50.0;  // N*s, per component

struct SimState {
  double t = 0.0;
  std::int64_t step = 0;
  RigidPoint slave{Vec3::Zero(), Vec3::Zero(), 2.0};
  RigidPoint master{Vec3::Zero(), Vec3::Zero(), 0.5};
  ContactState contact;
  Vec3 force_integral = Vec3::Zero();
  ControlMode mode = ControlMode::B;
};

/// Advances master and slave by one semi-implicit Euler step.
///
/// `applied_slave` excludes the contact force, which is taken from
/// `state.contact` (evaluated at the current position). Contact is
/// re-evaluated after the position update. Throws SimulationFault if any
/// produced component is non-finite; `state` is left untouched in that case.
void integrate_step(SimState& state, const Workpiece& wp, const Wrench3& applied_slave,
                    const Wrench3& applied_master, double dt);

/// Component-wise clamp of the force integral to +-limit.
Vec3 clamp_integral(const Vec3& integral, double limit = kForceIntegralLimit);

}  // namespace toolbench
