#include "toolbench/contact.hpp"

#include <algorithm>
#include <cmath>

namespace toolbench {

ContactState contact_force(const Workpiece& wp, const RigidPoint& slave) {
  if (!is_finite(slave.pos) || !is_finite(slave.vel)) throw InvalidInput("contact_force: non-finite slave state");
  const SurfaceSample s = surface_eval(wp, slave.pos);

  ContactState c;
  c.normal = s.normal;
  c.u = s.u;
  c.v = s.v;
  const double delta = std::max(0.0, -s.gap);
  if (delta <= 0.0) return c;

  c.in_contact = true;
  c.penetration = delta;
  const double v_sep = slave.vel.dot(s.normal);
  const double fn = std::max(0.0, wp.contact.stiffness * delta - wp.contact.damping * v_sep);
  Vec3 f = s.normal * fn;

  const Vec3 v_t = slave.vel - s.normal * v_sep;
  const double speed = v_t.norm();
  if (speed >= wp.contact.deadband && fn > 0.0) f -= (wp.contact.friction * fn / speed) * v_t;

  c.force_env = Wrench3(f);
  return c;
}

double removal_step(Workpiece& wp, const ContactState& contact, const Vec3& v_tangential, double dt,
                    std::vector<std::size_t>* changed) {
  if (!(dt > 0.0)) throw InvalidInput("removal_step: dt must be > 0");
  if (!contact.in_contact || wp.preston_k <= 0.0) return 0.0;
  const double fn = std::max(0.0, contact.normal_force());
  const double speed = v_tangential.norm();
  const double depth = wp.preston_k * (fn / wp.tool_area()) * speed * dt;
  if (!(depth > 0.0)) return 0.0;
  return wp.beads.lower_disk(contact.u, contact.v, wp.tool_radius, depth, changed);
}

}  // namespace toolbench
