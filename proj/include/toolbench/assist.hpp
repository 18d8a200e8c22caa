#pragma once

#include "toolbench/controllers.hpp"
#include "toolbench/types.hpp"
#include "toolbench/workpiece.hpp"

namespace toolbench {

enum class FixtureSide { KeepAbove, KeepBelow };

/// Forbidden-region fixture rendered on the master handle.
///
/// KeepAbove forbids the side opposite the geometry's outward normal
/// (i.e. the material side of a plane, outside the radius of a bore).
struct VirtualFixture {
  Geometry geometry = Plane{};
  double stiffness = 5000.0;  // N/m
  double damping = 50.0;      // N*s/m, only while penetrating
  FixtureSide side = FixtureSide::KeepAbove;
};

/// Fixture built on a workpiece's true geometry, shifted along the outward
/// normal by `offset` (misalignment sensitivity; 0 = perfectly overlaid).
VirtualFixture fixture_from_workpiece(const Geometry& geometry, double offset, double stiffness, double damping,
                                      FixtureSide side = FixtureSide::KeepAbove);

/// Depth of `point` into the forbidden region along the restoring direction; <= 0 when allowed.
double fixture_penetration(const VirtualFixture& vf, const Vec3& point, Vec3* restoring_dir = nullptr);

Wrench3 fixture_wrench(const VirtualFixture& vf, const RigidPoint& master);

/// Potential energy stored by the fixture spring at `point` (0 on the allowed side).
double fixture_potential(const VirtualFixture& vf, const Vec3& point);

struct SharedControlParams {
  Vec3 press_dir = -Vec3::UnitZ();  // unit, into the surface; S = n n^T along it
  double force_setpoint = 10.0;     // N
  HybridGains gains;

  SelectionMatrix selection() const { return SelectionMatrix::from_normal(press_dir); }
};

/// Hybrid law with live teleoperation supplying V_d:
/// hybrid_command(S, v_teleop, F_d n - F_meas, integral, gains).
/// `measured_tip_force` is the force the tool applies to the workpiece.
Vec3 shared_command(const SharedControlParams& p, const Vec3& v_teleop, const Wrench3& measured_tip_force,
                    const Vec3& force_integral);

/// F_d n - F_meas, the force error fed to the shared loop and its integral.
Wrench3 shared_force_error(const SharedControlParams& p, const Wrench3& measured_tip_force);

void validate(const VirtualFixture& vf);
void validate(const SharedControlParams& p);

}  // namespace toolbench
