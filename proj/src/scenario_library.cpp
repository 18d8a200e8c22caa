#include "toolbench/scenario.hpp"

#include <cmath>
#include <numbers>

namespace toolbench {

namespace {

constexpr double kPassLength = 0.3;
constexpr double kFlatDuration = 20.0;

// Straight grind along +x at surface level: hold, traverse, hold.
std::vector<Waypoint> flat_path() {
  const Vec3 start(-0.5 * kPassLength, 0.0, 0.0);
  const Vec3 end(0.5 * kPassLength, 0.0, 0.0);
  return {{0.0, start}, {2.0, start}, {18.0, end}, {kFlatDuration, end}};
}

ScenarioConfig flat_base() {
  ScenarioConfig c;
  c.dt = 1e-3;
  c.duration = kFlatDuration;
  c.seed = 7;

  Plane plane;
  c.workpiece.geometry = plane;
  c.workpiece.preston_k = 2e-5;
  c.workpiece.tool_radius = 0.01;
  BeadLayout& beads = c.workpiece.beads;
  beads.pitch = 1e-3;
  beads.u_min = -0.17;
  beads.u_max = 0.17;
  beads.v_min = -0.03;
  beads.v_max = 0.03;
  for (double center : {-0.075, 0.0, 0.075}) beads.ridges.push_back({'u', center, 0.002, 0.003});

  const auto path = flat_path();
  c.slave_initial = path.front().pos;
  c.master_initial = path.front().pos;

  // A light, just-overdamped admittance: compliant enough to show its own
  // contact dynamics, damped enough to stay on the workpiece through the pass.
  c.admittance = AdmittanceParams{.mass = 1.0, .damping = 51.5, .stiffness = 500.0};
  c.coupling = CouplingParams{};
  OperatorSpec op;
  op.path = path;
  op.tremor_amplitude = 5e-4;
  c.operator_model = op;
  FixtureSpec fixture;
  fixture.stiffness = 2e4;
  c.fixture = fixture;
  c.shared = SharedSpec{};
  HybridSpec hybrid;
  hybrid.path = path;
  c.hybrid = hybrid;
  // Analyse the traverse only; the end hold is not part of the pass.
  c.metrics.window_end = 18.0;
  return c;
}

}  // namespace

ScenarioConfig flat_scenario(ControlMode mode) {
  ScenarioConfig c = flat_base();
  c.mode = mode;
  std::string suffix(to_string(mode));
  for (auto& ch : suffix) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  c.name = "flat-" + suffix;
  return c;
}

ScenarioConfig finish_scenario(ControlMode mode) {
  ScenarioConfig c = flat_scenario(mode);
  c.name = "flat-finish";
  c.workpiece.beads.ridges.clear();
  return c;
}

ScenarioConfig downhole_scenario() {
  ScenarioConfig c;
  c.name = "downhole";
  c.mode = ControlMode::B;
  c.dt = 1e-3;
  c.seed = 11;

  constexpr double radius = 0.15;
  InnerCylinder bore;
  bore.axis_point = Vec3::Zero();
  bore.axis_dir = Vec3::UnitZ();
  bore.radius = radius;
  c.workpiece.geometry = bore;
  c.workpiece.preston_k = 2e-5;
  c.workpiece.tool_radius = 0.01;
  BeadLayout& beads = c.workpiece.beads;
  beads.pitch = 1e-3;
  beads.u_min = -std::numbers::pi * radius;
  beads.u_max = std::numbers::pi * radius;
  beads.v_min = -0.015;
  beads.v_max = 0.015;
  beads.periodic_u = true;
  beads.ridges.push_back({'v', 0.0, 0.002, 0.003});

  // One full orbit of the bore wall at the bead's axial station, starting
  // and ending at theta = 0 after a settling hold.
  constexpr double hold = 2.0;
  constexpr double orbit_time = 36.0;
  constexpr int segments = 144;
  std::vector<Waypoint> path;
  path.push_back({0.0, Vec3(radius, 0.0, 0.0)});
  for (int k = 0; k <= segments; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / segments;
    path.push_back({hold + orbit_time * k / segments, Vec3(radius * std::cos(theta), radius * std::sin(theta), 0.0)});
  }
  path.push_back({hold + orbit_time + 2.0, path.back().pos});
  c.duration = hold + orbit_time + 2.0;

  c.slave_initial = path.front().pos;
  c.master_initial = path.front().pos;
  c.admittance = AdmittanceParams{};
  c.coupling = CouplingParams{};
  OperatorSpec op;
  op.path = path;
  c.operator_model = op;
  return c;
}

ScenarioConfig full_removal_scenario() {
  ScenarioConfig c = flat_base();
  c.name = "full-removal";
  c.mode = ControlMode::Hybrid;
  c.workpiece.preston_k = 1e-4;
  BeadLayout& beads = c.workpiece.beads;
  beads.u_min = -0.02;
  beads.u_max = 0.02;
  beads.v_min = -0.004;
  beads.v_max = 0.004;
  beads.ridges = {{'u', 0.0, 0.0005, 0.003}};
  c.operator_model.reset();
  c.fixture.reset();
  c.shared.reset();
  c.coupling.reset();
  c.admittance.reset();
  const Vec3 start(-0.03, 0.0, 0.0);
  const Vec3 end(0.03, 0.0, 0.0);
  c.hybrid->path = {{0.0, start}, {1.0, start}, {7.0, end}, {8.0, end}};
  c.slave_initial = start;
  c.master_initial = start;
  c.duration = 8.0;
  c.metrics.settle_time = 1.0;
  return c;
}

std::vector<std::string> scenario_names() {
  return {"flat-a", "flat-b", "flat-c", "flat-d", "flat-vf", "flat-sc", "flat-hybrid", "flat-finish", "downhole", "full-removal"};
}

ScenarioConfig standard_scenario(const std::string& name) {
  if (name == "flat-a") return flat_scenario(ControlMode::A);
  if (name == "flat-b") return flat_scenario(ControlMode::B);
  if (name == "flat-c") return flat_scenario(ControlMode::C);
  if (name == "flat-d") return flat_scenario(ControlMode::D);
  if (name == "flat-vf") return flat_scenario(ControlMode::VF);
  if (name == "flat-sc") return flat_scenario(ControlMode::SC);
  if (name == "flat-hybrid") return flat_scenario(ControlMode::Hybrid);
  if (name == "flat-finish") return finish_scenario(ControlMode::VF);
  if (name == "downhole") return downhole_scenario();
  if (name == "full-removal") return full_removal_scenario();
  throw ConfigError("name", "unknown scenario '" + name + "'");
}

std::vector<ExpectedOrdering> standard_orderings() {
  return {
      {"peak_normal_force", ControlMode::C, ControlMode::A, 1.0, "force build-up without robot compliance (PF)"},
      {"peak_normal_force", ControlMode::C, ControlMode::B, 1.0, "force build-up without robot compliance"},
      {"hf_energy", ControlMode::A, ControlMode::D, 1.0, "admittance adds high-frequency motion"},
      {"hf_energy", ControlMode::B, ControlMode::D, 1.0, "admittance adds high-frequency motion"},
  };
}

std::vector<ExpectedOrdering> fixture_orderings() {
  return {{"surface_rms", ControlMode::B, ControlMode::VF, 5.0, "fixture steadies the tool path"}};
}

}  // namespace toolbench
