#pragma once

#include "toolbench/types.hpp"
#include "toolbench/workpiece.hpp"

#include <vector>

namespace toolbench {

struct ContactState {
  bool in_contact = false;
  double penetration = 0.0;     // m, > 0 iff in_contact
  Vec3 normal = Vec3::UnitZ();  // outward from material at the contact
  Wrench3 force_env;            // force of the environment on the tool
  double u = 0.0, v = 0.0;      // surface coordinates of the contact point

  double normal_force() const { return force_env.f.dot(normal); }
  /// Force the tool applies to the workpiece, as a wrist sensor reports it.
  Wrench3 tip_force() const { return -force_env; }
};

/// Unilateral Kelvin-Voigt penalty contact with Coulomb friction.
ContactState contact_force(const Workpiece& wp, const RigidPoint& slave);

/// Preston-law grinding: lowers the bead field under the tool footprint by
/// preston_k * (|f_n| / A_tool) * |v_t| * dt and returns the removed volume.
double removal_step(Workpiece& wp, const ContactState& contact, const Vec3& v_tangential, double dt,
                    std::vector<std::size_t>* changed = nullptr);

}  // namespace toolbench
