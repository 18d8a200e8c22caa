#include "toolbench/controllers.hpp"

#include <cmath>

namespace toolbench {

SelectionMatrix::SelectionMatrix(const Mat3& s, double tol) : s_(s) {
  if (!is_projector(s, tol)) throw InvalidInput("selection matrix must be a symmetric idempotent projector");
}

bool SelectionMatrix::is_projector(const Mat3& s, double tol) {
  if (!s.allFinite()) return false;
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > tol) return false;
  return (s * s - s).cwiseAbs().maxCoeff() <= tol;
}

SelectionMatrix SelectionMatrix::from_normal(const Vec3& n) {
  const double len = n.norm();
  if (!(len > 0.0) || !std::isfinite(len)) throw InvalidInput("selection matrix needs a non-zero finite normal");
  const Vec3 u = n / len;
  return SelectionMatrix(u * u.transpose());
}

Vec3 hybrid_command(const SelectionMatrix& s, const Vec3& v_desired, const Wrench3& force_error,
                    const Vec3& force_integral, const HybridGains& gains) {
  if (!SelectionMatrix::is_projector(s.matrix())) throw InvalidInput("hybrid_command: S is not a projector");
  const Vec3 force_loop = gains.kfp * force_error.f + gains.kfi * force_integral;
  return s.motion_part(v_desired) + s.force_part(force_loop);
}

Vec3 accumulate_force_error(const SelectionMatrix& s, const Vec3& integral, const Wrench3& force_error,
                            double dt, double limit) {
  const Vec3 next = integral + s.force_part(force_error.f) * dt;
  return next.cwiseMax(-limit).cwiseMin(limit);
}

Wrench3 velocity_to_force(const Vec3& v_cmd, const RigidPoint& slave, const VelocityServo& servo) {
  return Wrench3(saturate(servo.kv * (v_cmd - slave.vel), servo.fmax));
}

AdmittanceState admittance_step(const AdmittanceParams& params, const Vec3& x_ref, const AdmittanceState& state,
                                const Wrench3& f_ext, double dt) {
  if (!(dt > 0.0)) throw InvalidInput("admittance_step: dt must be > 0");
  const Vec3 accel =
      (f_ext.f - params.damping * state.vel - params.stiffness * (state.pos - x_ref)) / params.mass;
  AdmittanceState next;
  next.vel = state.vel + accel * dt;
  next.pos = state.pos + next.vel * dt;
  return next;
}

Wrench3 position_control(const PositionGains& gains, const Vec3& x_desired, const RigidPoint& slave) {
  return Wrench3(saturate(gains.kp * (x_desired - slave.pos) - gains.kd * slave.vel, gains.fmax));
}

void validate(const HybridGains& g) {
  if (!(g.kfp >= 0.0) || !std::isfinite(g.kfp)) throw InvalidInput("hybrid gain kfp must be finite and >= 0");
  if (!(g.kfi >= 0.0) || !std::isfinite(g.kfi)) throw InvalidInput("hybrid gain kfi must be finite and >= 0");
}

void validate(const AdmittanceParams& p) {
  if (!(p.mass > 0.0)) throw InvalidInput("admittance mass must be > 0");
  if (!(p.damping >= 0.0)) throw InvalidInput("admittance damping must be >= 0");
  if (!(p.stiffness >= 0.0)) throw InvalidInput("admittance stiffness must be >= 0");
}

void validate(const PositionGains& g) {
  if (!(g.kp > 0.0)) throw InvalidInput("position gain kp must be > 0");
  if (!(g.kd >= 0.0)) throw InvalidInput("position gain kd must be >= 0");
  if (!(g.fmax > 0.0)) throw InvalidInput("position fmax must be > 0");
}

void validate(const VelocityServo& s) {
  if (!(s.kv > 0.0)) throw InvalidInput("velocity servo kv must be > 0");
  if (!(s.fmax > 0.0)) throw InvalidInput("velocity servo fmax must be > 0");
}

}  // namespace toolbench
