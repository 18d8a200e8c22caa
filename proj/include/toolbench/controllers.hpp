#pragma once

#include "toolbench/types.hpp"

namespace toolbench {

/// Orthogonal projector onto the force-controlled subspace. I - S projects
/// onto the motion-controlled subspace.
class SelectionMatrix {
 public:
  /// Zero projector: pure motion control.
  SelectionMatrix() : s_(Mat3::Zero()) {}

  /// Throws InvalidInput unless `s` is symmetric and idempotent to `tol`.
  explicit SelectionMatrix(const Mat3& s, double tol = 1e-12);

  /// S = n n^T for a (normalized) direction n.
  static SelectionMatrix from_normal(const Vec3& n);
  static SelectionMatrix identity() { return SelectionMatrix(Mat3::Identity()); }

  const Mat3& matrix() const { return s_; }
  Mat3 complement() const { return Mat3::Identity() - s_; }

  Vec3 force_part(const Vec3& v) const { return s_ * v; }
  Vec3 motion_part(const Vec3& v) const { return v - s_ * v; }

  static bool is_projector(const Mat3& s, double tol = 1e-12);

 private:
  Mat3 s_;
};

struct HybridGains {
  double kfp = 2e-3;  // (m/s)/N
  double kfi = 2e-2;  // (m/s)/(N*s); critically damps the force loop on a 2e4 N/m contact
};

struct AdmittanceParams {
  double mass = 4.0;         // kg
  double damping = 120.0;    // N*s/m
  double stiffness = 500.0;  // N/m

  bool overdamped() const { return damping * damping >= 4.0 * mass * stiffness; }
};

struct PositionGains {
  double kp = 1e4;    // N/m
  double kd = 200.0;  // N*s/m
  double fmax = 150.0;
};

struct VelocityServo {
  double kv = 400.0;  // N*s/m
  double fmax = 150.0;
};

struct AdmittanceState {
  Vec3 pos = Vec3::Zero();
  Vec3 vel = Vec3::Zero();
};

/// V = (I - S) V_d + S (K_fp F_e + K_fi * integral).
/// F_e = F_desired - F_measured; positive components drive the tool into the surface
/// when F_desired is expressed along the inward direction.
Vec3 hybrid_command(const SelectionMatrix& s, const Vec3& v_desired, const Wrench3& force_error,
                    const Vec3& force_integral, const HybridGains& gains);

/// Accumulates the S-projected force error into the integral and applies the anti-windup clamp.
Vec3 accumulate_force_error(const SelectionMatrix& s, const Vec3& integral, const Wrench3& force_error,
                            double dt, double limit);

/// High-gain velocity servo turning a velocity command into a plant force.
Wrench3 velocity_to_force(const Vec3& v_cmd, const RigidPoint& slave, const VelocityServo& servo);

/// One step of M x'' = F_ext - B x' - K (x - x_ref); semi-implicit Euler.
AdmittanceState admittance_step(const AdmittanceParams& params, const Vec3& x_ref, const AdmittanceState& state,
                                const Wrench3& f_ext, double dt);

/// Stiff PD pose servo: F = K_p (x_d - x) - K_d v, norm-saturated at fmax.
Wrench3 position_control(const PositionGains& gains, const Vec3& x_desired, const RigidPoint& slave);

void validate(const HybridGains& g);
void validate(const AdmittanceParams& p);
void validate(const PositionGains& g);
void validate(const VelocityServo& s);

}  // namespace toolbench
