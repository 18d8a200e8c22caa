#pragma once

#include "toolbench/assist.hpp"
#include "toolbench/controllers.hpp"
#include "toolbench/metrics.hpp"
#include "toolbench/mode.hpp"
#include "toolbench/teleop.hpp"
#include "toolbench/workpiece.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace toolbench {

/// Gaussian weld ridge. axis 'u' varies across u (ridge line at constant u),
/// axis 'v' varies across v (ridge line at constant v, e.g. circumferential).
struct BeadRidge {
  char axis = 'u';
  double center = 0.0;
  double height = 0.002;
  double sigma = 0.003;

  bool operator==(const BeadRidge&) const = default;
};

struct BeadLayout {
  double pitch = 1e-3;
  double u_min = 0.0, u_max = 0.0;
  double v_min = 0.0, v_max = 0.0;
  bool periodic_u = false;
  std::vector<BeadRidge> ridges;

  bool operator==(const BeadLayout&) const = default;
};

struct WorkpieceSpec {
  Geometry geometry = Plane{};
  ContactModel contact;
  double preston_k = 0.0;
  double tool_radius = 0.01;
  BeadLayout beads;
};

struct FixtureSpec {
  double stiffness = 5000.0;
  double damping = 50.0;
  FixtureSide side = FixtureSide::KeepAbove;
  double offset = 0.0;  // misalignment along the outward normal, m
};

struct SharedSpec {
  double force_setpoint = 10.0;
  HybridGains gains;
  double lateral_gain = 10.0;  // 1/s, position correction of the teleop velocity
};

struct HybridSpec {
  double force_setpoint = 10.0;
  HybridGains gains;
  double path_gain = 20.0;  // 1/s
  std::vector<Waypoint> path;
};

struct OperatorSpec {
  std::vector<Waypoint> path;
  double bandwidth = 2.0;
  double hand_stiffness = 300.0;
  double hand_damping = 10.0;
  double press_bias = 10.0;
  double tremor_amplitude = 0.0;
  double comfort_threshold = 15.0;
  double comfort_time = 0.2;
  double yield_compliance = 1e-3;
};

struct MetricsSpec {
  double settle_time = 2.0;
  double window_end = 0.0;
  double force_reference = 10.0;
  double contact_threshold = 0.5;
  double hf_cutoff = 10.0;
  int smoothing_window = 50;
};

struct ScenarioConfig {
  std::string name = "scenario";
  double dt = 1e-3;
  double duration = 20.0;
  std::uint64_t seed = 1;
  ControlMode mode = ControlMode::B;

  WorkpieceSpec workpiece;
  double slave_mass = 2.0;
  Vec3 slave_initial = Vec3::Zero();
  MasterParams master;
  Vec3 master_initial = Vec3::Zero();

  PositionGains position;
  VelocityServo velocity_servo;
  double force_integral_limit = 50.0;
  std::optional<AdmittanceParams> admittance;
  std::optional<CouplingParams> coupling;
  std::optional<OperatorSpec> operator_model;
  std::optional<FixtureSpec> fixture;
  std::optional<SharedSpec> shared;
  std::optional<HybridSpec> hybrid;
  MetricsSpec metrics;

  std::int64_t total_steps() const;
  OperatorModel operator_model_for_run() const;
  ModeParameters mode_parameters() const;
  Workpiece build_workpiece() const;
  MetricsContext metrics_context(double initial_bead_volume) const;
  /// Reference path for deviation metrics: hybrid plan, else operator script.
  Path reference_path() const;
};

/// Strict parse: unknown fields, wrong types and out-of-range values raise
/// ConfigError naming the field path (e.g. "operator.hand_stiffness").
ScenarioConfig parse_scenario(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::string& file);
nlohmann::json to_json(const ScenarioConfig& c);

/// Full semantic validation, including the mode's required parameter blocks.
void validate(const ScenarioConfig& c);

BeadField build_bead_field(const BeadLayout& layout);

// Standard scenario library.
ScenarioConfig flat_scenario(ControlMode mode);
/// Standard flat pass with the bead ridges already ground away.
ScenarioConfig finish_scenario(ControlMode mode);
ScenarioConfig downhole_scenario();
ScenarioConfig full_removal_scenario();
std::vector<std::string> scenario_names();
/// Throws ConfigError for an unknown name.
ScenarioConfig standard_scenario(const std::string& name);

/// Expected cross-mode relation on a metric: metric(greater) > ratio * metric(lesser).
struct ExpectedOrdering {
  std::string metric;
  ControlMode greater;
  ControlMode lesser;
  double ratio = 1.0;
  std::string rationale;
};

/// Mode-configuration orderings on the beaded flat pass.
std::vector<ExpectedOrdering> standard_orderings();
/// Fixture precision ordering on the finishing pass.
std::vector<ExpectedOrdering> fixture_orderings();
double metric_value(const MetricsReport& m, const std::string& metric);

}  // namespace toolbench
