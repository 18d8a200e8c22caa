#include "toolbench/assist.hpp"

#include <cmath>

namespace toolbench {

VirtualFixture fixture_from_workpiece(const Geometry& geometry, double offset, double stiffness, double damping,
                                      FixtureSide side) {
  VirtualFixture vf;
  vf.stiffness = stiffness;
  vf.damping = damping;
  vf.side = side;
  if (const auto* pl = std::get_if<Plane>(&geometry)) {
    Plane shifted = *pl;
    shifted.origin += pl->normal * offset;
    vf.geometry = shifted;
  } else {
    InnerCylinder c = std::get<InnerCylinder>(geometry);
    c.radius -= offset;
    vf.geometry = c;
  }
  return vf;
}

double fixture_penetration(const VirtualFixture& vf, const Vec3& point, Vec3* restoring_dir) {
  const double gap = nominal_gap(vf.geometry, point);
  const Vec3 n = surface_normal(vf.geometry, point);
  if (vf.side == FixtureSide::KeepAbove) {
    if (restoring_dir) *restoring_dir = n;
    return -gap;
  }
  if (restoring_dir) *restoring_dir = -n;
  return gap;
}

Wrench3 fixture_wrench(const VirtualFixture& vf, const RigidPoint& master) {
  Vec3 back;
  const double p = fixture_penetration(vf, master.pos, &back);
  if (!(p > 0.0)) return Wrench3();
  const Vec3 f = vf.stiffness * p * back - vf.damping * master.vel.dot(back) * back;
  return Wrench3(f);
}

double fixture_potential(const VirtualFixture& vf, const Vec3& point) {
  const double p = fixture_penetration(vf, point);
  return p > 0.0 ? 0.5 * vf.stiffness * p * p : 0.0;
}

Wrench3 shared_force_error(const SharedControlParams& p, const Wrench3& measured_tip_force) {
  return Wrench3(p.force_setpoint * p.press_dir - measured_tip_force.f);
}

Vec3 shared_command(const SharedControlParams& p, const Vec3& v_teleop, const Wrench3& measured_tip_force,
                    const Vec3& force_integral) {
  return hybrid_command(p.selection(), v_teleop, shared_force_error(p, measured_tip_force), force_integral, p.gains);
}

void validate(const VirtualFixture& vf) {
  if (const auto* pl = std::get_if<Plane>(&vf.geometry)) {
    if (std::abs(pl->normal.norm() - 1.0) > 1e-9) throw InvalidInput("fixture normal must be unit length");
  } else if (!(std::get<InnerCylinder>(vf.geometry).radius > 0.0)) {
    throw InvalidInput("fixture radius must be > 0");
  }
  if (!(vf.stiffness > 0.0)) throw InvalidInput("fixture stiffness must be > 0");
  if (!(vf.damping >= 0.0)) throw InvalidInput("fixture damping must be >= 0");
}

void validate(const SharedControlParams& p) {
  if (std::abs(p.press_dir.norm() - 1.0) > 1e-9) throw InvalidInput("shared press_dir must be unit length");
  if (!(p.force_setpoint >= 0.0)) throw InvalidInput("shared force_setpoint must be >= 0");
  validate(p.gains);
}

}  // namespace toolbench
