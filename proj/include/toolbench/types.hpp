#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>

namespace toolbench {

// Translational quantities only; tool orientation is fixed.
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Force acting on a point (no torque channel).
struct Wrench3 {
  Vec3 f = Vec3::Zero();

  Wrench3() = default;
  explicit Wrench3(const Vec3& force) : f(force) {}

  Wrench3 operator+(const Wrench3& o) const { return Wrench3(f + o.f); }
  Wrench3 operator-() const { return Wrench3(-f); }
  Wrench3& operator+=(const Wrench3& o) {
    f += o.f;
    return *this;
  }
};

struct RigidPoint {
  Vec3 pos = Vec3::Zero();
  Vec3 vel = Vec3::Zero();
  double mass = 1.0;
};

/// Rejected argument to an operation (violated precondition).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario or parameter set that cannot be assembled; carries the offending field path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Non-finite value produced by the integrator.
class SimulationFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline bool is_finite(const Vec3& v) { return v.allFinite(); }

// Scales v so that its norm does not exceed limit; direction is preserved.
inline Vec3 saturate(const Vec3& v, double limit) {
  double n = v.norm();
  // Squaring can overflow for finite components; the scaled norm cannot.
  if (!std::isfinite(n) && v.allFinite()) n = v.stableNorm();
  if (n > limit && n > 0.0) return v * (limit / n);
  return v;
}

}  // namespace toolbench
