#pragma once

#include "toolbench/assist.hpp"
#include "toolbench/metrics.hpp"
#include "toolbench/scenario.hpp"
#include "toolbench/sim.hpp"
#include "toolbench/teleop.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace toolbench {

/// One scenario in progress: owns the state, the workpiece and the
/// controller memories, and advances them one fixed step at a time.
/// Not thread-safe; callers hand it between contexts only between steps.
class Simulation {
 public:
  explicit Simulation(ScenarioConfig config);

  const ScenarioConfig& config() const { return config_; }
  const SimState& state() const { return state_; }
  const Workpiece& workpiece() const { return workpiece_; }
  const Pipeline& pipeline() const { return pipeline_; }

  bool finished() const { return faulted_ || state_.step >= config_.total_steps(); }
  bool faulted() const { return faulted_; }
  const std::string& fault_message() const { return fault_message_; }

  /// Advances one step and returns its trace record. After a fault the
  /// returned record carries fault = true and the run is finished.
  TraceRecord step();

  void set_live_intent(std::optional<LiveIntent> intent) { operator_state_.live = intent; }
  const std::optional<LiveIntent>& live_intent() const { return operator_state_.live; }

  /// Switches the pipeline; resets the force integral and admittance memory.
  void set_mode(ControlMode mode);

  /// Replaces one scenario parameter addressed by a JSON pointer
  /// ("/operator/press_bias"). Geometry, beads, dt and initial state are frozen.
  void set_param(const std::string& pointer, const nlohmann::json& value);

  double initial_bead_volume() const { return initial_bead_volume_; }
  double removed_volume() const { return removed_volume_; }
  const Wrench3& master_feedback() const { return last_feedback_; }

  /// Flat bead-grid indices touched since the last call.
  std::vector<std::size_t> take_changed_cells();

 private:
  void apply_config();
  Vec3 master_press_dir() const;

  ScenarioConfig config_;
  Workpiece workpiece_;
  Pipeline pipeline_;
  SimState state_;
  OperatorModel operator_;
  OperatorState operator_state_;
  AdmittanceState admittance_;
  std::optional<VirtualFixture> fixture_;
  Path hybrid_path_;
  Wrench3 last_feedback_;
  double initial_bead_volume_ = 0.0;
  double removed_volume_ = 0.0;
  bool faulted_ = false;
  std::string fault_message_;
  std::vector<std::size_t> changed_;
  std::vector<std::uint8_t> changed_flag_;
};

enum class RunStatus { Completed, Fault };

struct RunResult {
  std::vector<TraceRecord> trace;
  std::optional<MetricsReport> metrics;  // empty for a zero-step run
  RunStatus status = RunStatus::Completed;
  std::string fault_message;
  std::string hash;
};

RunResult run_scenario(const ScenarioConfig& config);

struct OrderingCheck {
  ExpectedOrdering ordering;
  double greater_value = 0.0;
  double lesser_value = 0.0;
  bool satisfied = false;
};

struct ModeComparison {
  std::vector<ControlMode> modes;
  std::vector<RunResult> runs;
  std::vector<OrderingCheck> checks;

  nlohmann::json to_json() const;
  std::string table() const;
};

/// Runs `base` once per mode (concurrently) and evaluates every ordering whose
/// two modes are both present. The two-argument form checks the standard and
/// fixture orderings.
ModeComparison compare_modes(const ScenarioConfig& base, const std::vector<ControlMode>& modes,
                             const std::vector<ExpectedOrdering>& orderings);
ModeComparison compare_modes(const ScenarioConfig& base, const std::vector<ControlMode>& modes);

}  // namespace toolbench
