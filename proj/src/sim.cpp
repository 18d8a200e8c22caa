#include "toolbench/sim.hpp"

namespace toolbench {

namespace {

void advance(RigidPoint& p, const Vec3& force, double dt) {
  p.vel += (force / p.mass) * dt;
  p.pos += p.vel * dt;
}

}  // namespace

void integrate_step(SimState& state, const Workpiece& wp, const Wrench3& applied_slave,
                    const Wrench3& applied_master, double dt) {
  if (!is_finite(applied_slave.f) || !is_finite(applied_master.f))
    throw SimulationFault("non-finite applied force at step " + std::to_string(state.step));

  RigidPoint slave = state.slave;
  RigidPoint master = state.master;
  advance(slave, applied_slave.f + state.contact.force_env.f, dt);
  advance(master, applied_master.f, dt);
  if (!is_finite(slave.pos) || !is_finite(slave.vel) || !is_finite(master.pos) || !is_finite(master.vel))
    throw SimulationFault("non-finite state at step " + std::to_string(state.step + 1));

  ContactState contact;
  try {
    contact = contact_force(wp, slave);
  } catch (const InvalidInput& e) {
    throw SimulationFault(std::string("contact evaluation failed: ") + e.what());
  }

  state.slave = slave;
  state.master = master;
  state.contact = contact;
  state.step += 1;
  state.t = static_cast<double>(state.step) * dt;
}

Vec3 clamp_integral(const Vec3& integral, double limit) {
  return integral.cwiseMax(-limit).cwiseMin(limit);
}

}  // namespace toolbench
