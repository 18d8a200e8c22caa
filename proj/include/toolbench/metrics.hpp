#pragma once

#include "toolbench/mode.hpp"
#include "toolbench/teleop.hpp"
#include "toolbench/types.hpp"
#include "toolbench/workpiece.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace toolbench {

inline constexpr const char* kSchema = "toolbench/1";

/// One simulated step as persisted in trace files.
struct TraceRecord {
  std::int64_t step = 0;
  double t = 0.0;
  Vec3 master_pos = Vec3::Zero();
  Vec3 master_vel = Vec3::Zero();
  Vec3 slave_pos = Vec3::Zero();
  Vec3 slave_vel = Vec3::Zero();
  Vec3 slave_setpoint = Vec3::Zero();
  double normal_force = 0.0;
  Vec3 env_force = Vec3::Zero();
  Vec3 master_feedback = Vec3::Zero();
  ControlMode mode = ControlMode::B;
  double removed_volume = 0.0;  // cumulative, m^3
  bool fault = false;
};

struct PathRms {
  double x = 0.0, y = 0.0, z = 0.0;
  double in_plane = 0.0;  // tangential to the surface
};

struct MetricsReport {
  std::size_t steps = 0;
  double peak_normal_force = 0.0;
  double peak_smoothed_force = 0.0;
  double mean_contact_force = 0.0;
  double settled_force_error_pct = 0.0;  // max |F - F_ref| / F_ref over settled contact
  PathRms path_rms;
  double surface_rms = 0.0;  // signed distance from the nominal surface, RMS
  double hf_energy = 0.0;    // slave velocity power above the cutoff, summed over axes
  std::size_t contact_loss_count = 0;
  double contact_loss_max = 0.0;  // s
  double removed_fraction = 0.0;
  bool partial = false;
};

/// Scenario-derived inputs to compute_metrics.
struct MetricsContext {
  double dt = 1e-3;
  double settle_time = 2.0;
  double window_end = 0.0;  // 0: analyse until the end of the trace
  double force_reference = 10.0;
  double contact_threshold = 0.5;
  double hf_cutoff = 10.0;
  int smoothing_window = 50;
  Path reference_path;  // empty: deviations are taken against slave_setpoint
  Geometry geometry = Plane{};
  double initial_bead_volume = 0.0;
};

MetricsReport compute_metrics(std::span<const TraceRecord> trace, const MetricsContext& ctx);

/// Maximal runs of sub-threshold force between the first and last contact, in steps.
std::vector<std::size_t> contact_loss_runs(std::span<const TraceRecord> trace, double threshold);

nlohmann::json to_json(const TraceRecord& r);
TraceRecord trace_record_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MetricsReport& m);

/// Canonical single-line serialization of a record (no trailing newline).
std::string trace_line(const TraceRecord& r);
void write_trace(std::ostream& os, std::span<const TraceRecord> trace);
std::vector<TraceRecord> read_trace(std::istream& is);

/// 64-bit FNV-1a over the canonical JSONL serialization.
class TraceHasher {
 public:
  void add(const TraceRecord& r);
  void add_line(const std::string& line);
  std::uint64_t value() const { return h_; }
  std::string hex() const;

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

std::string trace_hash(std::span<const TraceRecord> trace);

}  // namespace toolbench
