#include "toolbench/mode.hpp"

#include <array>
#include <utility>

namespace toolbench {

namespace {
constexpr std::array<std::pair<ControlMode, std::string_view>, 7> kNames{{
    {ControlMode::A, "A"},
    {ControlMode::B, "B"},
    {ControlMode::C, "C"},
    {ControlMode::D, "D"},
    {ControlMode::VF, "VF"},
    {ControlMode::SC, "SC"},
    {ControlMode::Hybrid, "HYBRID"},
}};
}  // namespace

std::string_view to_string(ControlMode mode) {
  for (const auto& [m, name] : kNames)
    if (m == mode) return name;
  return "?";
}

std::optional<ControlMode> parse_mode(std::string_view text) {
  for (const auto& [m, name] : kNames)
    if (name == text) return m;
  return std::nullopt;
}

}  // namespace toolbench
