#include "toolbench/metrics.hpp"

#include "toolbench/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

namespace toolbench {

using nlohmann::json;

namespace {

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from(const json& j, const char* key) {
  const json& a = j.at(key);
  if (!a.is_array() || a.size() != 3) throw InvalidInput(std::string("trace field ") + key + " must be a 3-array");
  return Vec3(a[0].get<double>(), a[1].get<double>(), a[2].get<double>());
}

double rms(double sum_sq, std::size_t n) { return n ? std::sqrt(sum_sq / static_cast<double>(n)) : 0.0; }

}  // namespace

std::vector<std::size_t> contact_loss_runs(std::span<const TraceRecord> trace, double threshold) {
  std::vector<std::size_t> runs;
  std::size_t first = trace.size(), last = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].normal_force >= threshold) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first >= trace.size()) return runs;
  std::size_t run = 0;
  for (std::size_t i = first; i <= last; ++i) {
    if (trace[i].normal_force < threshold) {
      ++run;
    } else if (run > 0) {
      runs.push_back(run);
      run = 0;
    }
  }
  return runs;
}

MetricsReport compute_metrics(std::span<const TraceRecord> trace, const MetricsContext& ctx) {
  if (trace.empty()) throw InvalidInput("compute_metrics: empty trace");
  MetricsReport m;
  m.steps = trace.size();
  m.partial = trace.back().fault;
  const double initial_bead_volume = ctx.initial_bead_volume;
  const double final_removed = trace.back().removed_volume;
  if (ctx.window_end > 0.0) {
    std::size_t n = 0;
    while (n < trace.size() && trace[n].t <= ctx.window_end + 0.5 * ctx.dt) ++n;
    trace = trace.first(std::max<std::size_t>(n, 1));
  }

  std::vector<double> force(trace.size());
  for (std::size_t i = 0; i < trace.size(); ++i) force[i] = trace[i].normal_force;
  m.peak_normal_force = *std::max_element(force.begin(), force.end());
  const auto smoothed = smooth_arma(force, std::max(1, ctx.smoothing_window));
  m.peak_smoothed_force = *std::max_element(smoothed.begin(), smoothed.end());
  m.peak_normal_force = std::max(0.0, m.peak_normal_force);
  m.peak_smoothed_force = std::max(0.0, m.peak_smoothed_force);

  std::size_t last_contact = 0;
  for (std::size_t i = 0; i < trace.size(); ++i)
    if (force[i] >= ctx.contact_threshold) last_contact = i;

  double sq_x = 0.0, sq_y = 0.0, sq_z = 0.0, sq_plane = 0.0, sq_surface = 0.0;
  double contact_sum = 0.0, worst_err = 0.0;
  std::size_t n_settled = 0, n_contact = 0;
  std::vector<double> vx, vy, vz;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const TraceRecord& r = trace[i];
    if (r.t < ctx.settle_time) continue;
    const Vec3 ref = ctx.reference_path.empty() ? r.slave_setpoint : ctx.reference_path.position(r.t);
    const Vec3 d = r.slave_pos - ref;
    Vec3 n;
    double gap;
    try {
      n = surface_normal(ctx.geometry, r.slave_pos);
      gap = nominal_gap(ctx.geometry, r.slave_pos);
    } catch (const InvalidInput&) {
      n = Vec3::UnitZ();
      gap = 0.0;
    }
    const Vec3 tangential = d - n * d.dot(n);
    sq_x += d.x() * d.x();
    sq_y += d.y() * d.y();
    sq_z += d.z() * d.z();
    sq_plane += tangential.squaredNorm();
    sq_surface += gap * gap;
    ++n_settled;
    vx.push_back(r.slave_vel.x());
    vy.push_back(r.slave_vel.y());
    vz.push_back(r.slave_vel.z());

    if (force[i] >= ctx.contact_threshold && i <= last_contact) {
      contact_sum += force[i];
      ++n_contact;
      if (ctx.force_reference > 0.0)
        worst_err = std::max(worst_err, std::abs(force[i] - ctx.force_reference) / ctx.force_reference * 100.0);
    }
  }
  m.path_rms = {rms(sq_x, n_settled), rms(sq_y, n_settled), rms(sq_z, n_settled), rms(sq_plane, n_settled)};
  m.surface_rms = rms(sq_surface, n_settled);
  m.mean_contact_force = n_contact ? contact_sum / static_cast<double>(n_contact) : 0.0;
  m.settled_force_error_pct = worst_err;

  if (vx.size() >= 8 && ctx.hf_cutoff < 0.5 / ctx.dt)
    m.hf_energy = band_energy(hann_taper(vx), ctx.dt, ctx.hf_cutoff) +
                  band_energy(hann_taper(vy), ctx.dt, ctx.hf_cutoff) +
                  band_energy(hann_taper(vz), ctx.dt, ctx.hf_cutoff);

  const auto runs = contact_loss_runs(trace, ctx.contact_threshold);
  m.contact_loss_count = runs.size();
  if (!runs.empty()) m.contact_loss_max = static_cast<double>(*std::max_element(runs.begin(), runs.end())) * ctx.dt;

  if (initial_bead_volume > 0.0) m.removed_fraction = std::clamp(final_removed / initial_bead_volume, 0.0, 1.0);
  return m;
}

json to_json(const TraceRecord& r) {
  json j;
  j["schema"] = kSchema;
  j["step"] = r.step;
  j["t"] = r.t;
  j["master_pos"] = vec_json(r.master_pos);
  j["master_vel"] = vec_json(r.master_vel);
  j["slave_pos"] = vec_json(r.slave_pos);
  j["slave_vel"] = vec_json(r.slave_vel);
  j["slave_setpoint"] = vec_json(r.slave_setpoint);
  j["normal_force"] = r.normal_force;
  j["env_force"] = vec_json(r.env_force);
  j["master_feedback"] = vec_json(r.master_feedback);
  j["mode"] = std::string(to_string(r.mode));
  j["removed_volume"] = r.removed_volume;
  j["fault"] = r.fault;
  return j;
}

TraceRecord trace_record_from_json(const json& j) {
  if (j.value("schema", std::string()) != kSchema) throw InvalidInput("trace record: unsupported schema");
  TraceRecord r;
  r.step = j.at("step").get<std::int64_t>();
  r.t = j.at("t").get<double>();
  r.master_pos = vec_from(j, "master_pos");
  r.master_vel = vec_from(j, "master_vel");
  r.slave_pos = vec_from(j, "slave_pos");
  r.slave_vel = vec_from(j, "slave_vel");
  r.slave_setpoint = vec_from(j, "slave_setpoint");
  r.normal_force = j.at("normal_force").get<double>();
  r.env_force = vec_from(j, "env_force");
  r.master_feedback = vec_from(j, "master_feedback");
  const auto mode = parse_mode(j.at("mode").get<std::string>());
  if (!mode) throw InvalidInput("trace record: unknown mode");
  r.mode = *mode;
  r.removed_volume = j.at("removed_volume").get<double>();
  r.fault = j.at("fault").get<bool>();
  return r;
}

json to_json(const MetricsReport& m) {
  json j;
  j["schema"] = kSchema;
  j["steps"] = m.steps;
  j["peak_normal_force"] = m.peak_normal_force;
  j["peak_smoothed_force"] = m.peak_smoothed_force;
  j["mean_contact_force"] = m.mean_contact_force;
  j["settled_force_error_pct"] = m.settled_force_error_pct;
  j["path_rms"] = {{"x", m.path_rms.x}, {"y", m.path_rms.y}, {"z", m.path_rms.z}, {"in_plane", m.path_rms.in_plane}};
  j["surface_rms"] = m.surface_rms;
  j["hf_energy"] = m.hf_energy;
  j["contact_loss_count"] = m.contact_loss_count;
  j["contact_loss_max"] = m.contact_loss_max;
  j["removed_fraction"] = m.removed_fraction;
  j["partial"] = m.partial;
  return j;
}

std::string trace_line(const TraceRecord& r) { return to_json(r).dump(); }

void write_trace(std::ostream& os, std::span<const TraceRecord> trace) {
  for (const auto& r : trace) os << trace_line(r) << '\n';
}

std::vector<TraceRecord> read_trace(std::istream& is) {
  std::vector<TraceRecord> out;
  std::string line;
  std::int64_t expected = -1;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    TraceRecord r = trace_record_from_json(json::parse(line));
    if (expected >= 0 && r.step != expected) throw InvalidInput("trace: steps must increase by exactly 1");
    expected = r.step + 1;
    out.push_back(r);
  }
  return out;
}

void TraceHasher::add_line(const std::string& line) {
  for (unsigned char c : line) {
    h_ ^= c;
    h_ *= 0x100000001b3ULL;
  }
  h_ ^= static_cast<unsigned char>('\n');
  h_ *= 0x100000001b3ULL;
}

void TraceHasher::add(const TraceRecord& r) { add_line(trace_line(r)); }

std::string TraceHasher::hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
  return buf;
}

std::string trace_hash(std::span<const TraceRecord> trace) {
  TraceHasher h;
  for (const auto& r : trace) h.add(r);
  return h.hex();
}

}  // namespace toolbench
