#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace toolbench {

/// Active control configuration. A-D are the four bilateral setups
/// (coupling + robot inner loop); VF and SC wrap them with assistance;
/// Hybrid runs the autonomous position-force controller with no operator.
enum class ControlMode {
  A,       // position-force coupling, admittance robot
  B,       // position-position coupling, admittance robot
  C,       // position-force coupling, stiff position robot
  D,       // position-position coupling, stiff position robot
  VF,      // B plus a haptic virtual fixture on the master
  SC,      // shared control: autonomous normal force, operator lateral motion
  Hybrid,  // autonomous hybrid position-force control along a planned path
};

std::string_view to_string(ControlMode mode);
std::optional<ControlMode> parse_mode(std::string_view text);

}  // namespace toolbench
