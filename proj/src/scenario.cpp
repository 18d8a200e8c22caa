#include "toolbench/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace toolbench {

using nlohmann::json;

namespace {

enum class Range { Any, Positive, NonNegative };

// Reads one JSON object strictly; every key must be consumed before finish().
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return j_.contains(key); }

  const json* take(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  double number(const std::string& key, double fallback, Range range = Range::Any) {
    const json* v = take(key);
    double x = fallback;
    if (v) {
      if (!v->is_number()) throw ConfigError(field(key), "expected a number");
      x = v->get<double>();
    }
    check(key, x, range);
    return x;
  }

  void check(const std::string& key, double x, Range range) const {
    if (!std::isfinite(x)) throw ConfigError(field(key), "must be finite");
    if (range == Range::Positive && !(x > 0.0)) throw ConfigError(field(key), "must be > 0");
    if (range == Range::NonNegative && !(x >= 0.0)) throw ConfigError(field(key), "must be >= 0");
  }

  std::uint64_t unsigned_int(const std::string& key, std::uint64_t fallback) {
    const json* v = take(key);
    if (!v) return fallback;
    if (!v->is_number_unsigned()) throw ConfigError(field(key), "expected a non-negative integer");
    return v->get<std::uint64_t>();
  }

  int integer(const std::string& key, int fallback, int min_value) {
    const json* v = take(key);
    int x = fallback;
    if (v) {
      if (!v->is_number_integer()) throw ConfigError(field(key), "expected an integer");
      x = v->get<int>();
    }
    if (x < min_value) throw ConfigError(field(key), "must be >= " + std::to_string(min_value));
    return x;
  }

  bool boolean(const std::string& key, bool fallback) {
    const json* v = take(key);
    if (!v) return fallback;
    if (!v->is_boolean()) throw ConfigError(field(key), "expected a boolean");
    return v->get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    const json* v = take(key);
    if (!v) return fallback;
    if (!v->is_string()) throw ConfigError(field(key), "expected a string");
    return v->get<std::string>();
  }

  Vec3 vec(const std::string& key, const Vec3& fallback) {
    const json* v = take(key);
    if (!v) return fallback;
    if (!v->is_array() || v->size() != 3) throw ConfigError(field(key), "expected an array of 3 numbers");
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
      if (!(*v)[i].is_number()) throw ConfigError(field(key), "expected an array of 3 numbers");
      out[i] = (*v)[i].get<double>();
    }
    if (!out.allFinite()) throw ConfigError(field(key), "must be finite");
    return out;
  }

  Vec3 unit_vec(const std::string& key, const Vec3& fallback) {
    const Vec3 v = vec(key, fallback);
    if (std::abs(v.norm() - 1.0) > 1e-9) throw ConfigError(field(key), "must be a unit vector");
    return v;
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(field(it.key()), "unknown field");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

std::vector<Waypoint> parse_path(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of waypoints");
  std::vector<Waypoint> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    ObjectReader r(j[i], p);
    Waypoint w;
    w.t = r.number("t", 0.0, Range::NonNegative);
    w.pos = r.vec("pos", Vec3::Zero());
    r.finish();
    if (!out.empty() && !(w.t > out.back().t)) throw ConfigError(p + ".t", "waypoint times must strictly increase");
    out.push_back(w);
  }
  return out;
}

json path_json(const std::vector<Waypoint>& path) {
  json a = json::array();
  for (const auto& w : path) a.push_back({{"t", w.t}, {"pos", vec_json(w.pos)}});
  return a;
}

HybridGains parse_gains(ObjectReader& r) {
  HybridGains g;
  g.kfp = r.number("kfp", g.kfp, Range::NonNegative);
  g.kfi = r.number("kfi", g.kfi, Range::NonNegative);
  return g;
}

Geometry parse_geometry(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  const std::string type = r.string("type", "plane");
  if (type == "plane") {
    Plane p;
    p.origin = r.vec("origin", p.origin);
    p.normal = r.unit_vec("normal", p.normal);
    r.finish();
    return p;
  }
  if (type == "inner_cylinder") {
    InnerCylinder c;
    c.axis_point = r.vec("axis_point", c.axis_point);
    c.axis_dir = r.unit_vec("axis_dir", c.axis_dir);
    c.radius = r.number("radius", c.radius, Range::Positive);
    r.finish();
    return c;
  }
  throw ConfigError(path + ".type", "unknown geometry type '" + type + "'");
}

json geometry_json(const Geometry& g) {
  if (const auto* p = std::get_if<Plane>(&g))
    return {{"type", "plane"}, {"origin", vec_json(p->origin)}, {"normal", vec_json(p->normal)}};
  const auto& c = std::get<InnerCylinder>(g);
  return {{"type", "inner_cylinder"},
          {"axis_point", vec_json(c.axis_point)},
          {"axis_dir", vec_json(c.axis_dir)},
          {"radius", c.radius}};
}

BeadLayout parse_beads(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  BeadLayout b;
  b.pitch = r.number("pitch", b.pitch, Range::Positive);
  b.u_min = r.number("u_min", b.u_min);
  b.u_max = r.number("u_max", b.u_max);
  b.v_min = r.number("v_min", b.v_min);
  b.v_max = r.number("v_max", b.v_max);
  b.periodic_u = r.boolean("periodic_u", b.periodic_u);
  if (b.u_max < b.u_min) throw ConfigError(r.field("u_max"), "must be >= u_min");
  if (b.v_max < b.v_min) throw ConfigError(r.field("v_max"), "must be >= v_min");
  if (const json* ridges = r.take("ridges")) {
    if (!ridges->is_array()) throw ConfigError(r.field("ridges"), "expected an array");
    for (std::size_t i = 0; i < ridges->size(); ++i) {
      const std::string p = r.field("ridges") + "[" + std::to_string(i) + "]";
      ObjectReader rr((*ridges)[i], p);
      BeadRidge ridge;
      const std::string axis = rr.string("axis", "u");
      if (axis != "u" && axis != "v") throw ConfigError(p + ".axis", "must be \"u\" or \"v\"");
      ridge.axis = axis[0];
      ridge.center = rr.number("center", ridge.center);
      ridge.height = rr.number("height", ridge.height, Range::NonNegative);
      ridge.sigma = rr.number("sigma", ridge.sigma, Range::Positive);
      rr.finish();
      b.ridges.push_back(ridge);
    }
  }
  r.finish();
  return b;
}

json beads_json(const BeadLayout& b) {
  json ridges = json::array();
  for (const auto& r : b.ridges)
    ridges.push_back({{"axis", std::string(1, r.axis)}, {"center", r.center}, {"height", r.height}, {"sigma", r.sigma}});
  return {{"pitch", b.pitch}, {"u_min", b.u_min}, {"u_max", b.u_max}, {"v_min", b.v_min},
          {"v_max", b.v_max}, {"periodic_u", b.periodic_u}, {"ridges", ridges}};
}

std::optional<json> section(ObjectReader& r, const std::string& key) {
  const json* v = r.take(key);
  if (!v || v->is_null()) return std::nullopt;
  return *v;
}

}  // namespace

std::int64_t ScenarioConfig::total_steps() const { return static_cast<std::int64_t>(std::llround(duration / dt)); }

OperatorModel ScenarioConfig::operator_model_for_run() const {
  OperatorModel op;
  if (!operator_model) return op;
  const OperatorSpec& s = *operator_model;
  op.target_path = Path(s.path);
  op.bandwidth = s.bandwidth;
  op.hand_stiffness = s.hand_stiffness;
  op.hand_damping = s.hand_damping;
  op.press_bias = s.press_bias;
  op.tremor_amplitude = s.tremor_amplitude;
  op.comfort_threshold = s.comfort_threshold;
  op.comfort_time = s.comfort_time;
  op.yield_compliance = s.yield_compliance;
  op.seed = seed;
  return op;
}

ModeParameters ScenarioConfig::mode_parameters() const {
  ModeParameters p;
  p.admittance = admittance;
  p.coupling = coupling;
  p.has_operator = operator_model.has_value();
  p.has_fixture = fixture.has_value();
  p.has_shared = shared.has_value();
  p.has_hybrid = hybrid.has_value();
  return p;
}

BeadField build_bead_field(const BeadLayout& layout) {
  const double span_u = layout.u_max - layout.u_min;
  const double span_v = layout.v_max - layout.v_min;
  if (span_u <= 0.0 || span_v <= 0.0) return BeadField();

  std::size_t nu;
  double du;
  if (layout.periodic_u) {
    nu = static_cast<std::size_t>(std::max(1.0, std::round(span_u / layout.pitch)));
    du = span_u / static_cast<double>(nu);
  } else {
    nu = static_cast<std::size_t>(std::floor(span_u / layout.pitch + 1e-9)) + 1;
    du = layout.pitch;
  }
  const auto nv = static_cast<std::size_t>(std::floor(span_v / layout.pitch + 1e-9)) + 1;
  BeadField field(layout.u_min, layout.v_min, du, layout.pitch, nu, nv, layout.periodic_u);
  for (std::size_t j = 0; j < nv; ++j) {
    const double v = layout.v_min + static_cast<double>(j) * layout.pitch;
    for (std::size_t i = 0; i < nu; ++i) {
      const double u = layout.u_min + static_cast<double>(i) * du;
      double h = 0.0;
      for (const auto& r : layout.ridges) {
        const double d = (r.axis == 'u' ? u : v) - r.center;
        h = std::max(h, r.height * std::exp(-0.5 * d * d / (r.sigma * r.sigma)));
      }
      field.set_node(i, j, h);
    }
  }
  return field;
}

Workpiece ScenarioConfig::build_workpiece() const {
  Workpiece wp;
  wp.geometry = workpiece.geometry;
  wp.contact = workpiece.contact;
  wp.preston_k = workpiece.preston_k;
  wp.tool_radius = workpiece.tool_radius;
  wp.beads = build_bead_field(workpiece.beads);
  return wp;
}

Path ScenarioConfig::reference_path() const {
  if (hybrid && mode == ControlMode::Hybrid) return Path(hybrid->path);
  if (operator_model) return Path(operator_model->path);
  if (hybrid) return Path(hybrid->path);
  return Path();
}

MetricsContext ScenarioConfig::metrics_context(double initial_bead_volume) const {
  MetricsContext ctx;
  ctx.dt = dt;
  ctx.settle_time = metrics.settle_time;
  ctx.window_end = metrics.window_end;
  ctx.force_reference = metrics.force_reference;
  ctx.contact_threshold = metrics.contact_threshold;
  ctx.hf_cutoff = metrics.hf_cutoff;
  ctx.smoothing_window = metrics.smoothing_window;
  ctx.reference_path = reference_path();
  ctx.geometry = workpiece.geometry;
  ctx.initial_bead_volume = initial_bead_volume;
  return ctx;
}

ScenarioConfig parse_scenario(const json& j) {
  ObjectReader r(j, "");
  const std::string schema = r.string("schema", "");
  if (schema != kSchema) throw ConfigError("schema", "expected \"" + std::string(kSchema) + "\"");

  ScenarioConfig c;
  c.name = r.string("name", c.name);
  c.dt = r.number("dt", c.dt, Range::Positive);
  c.duration = r.number("duration", c.duration, Range::NonNegative);
  c.seed = r.unsigned_int("seed", c.seed);
  const std::string mode = r.string("mode", std::string(to_string(c.mode)));
  const auto parsed_mode = parse_mode(mode);
  if (!parsed_mode) throw ConfigError("mode", "unknown mode '" + mode + "'");
  c.mode = *parsed_mode;
  c.force_integral_limit = r.number("force_integral_limit", c.force_integral_limit, Range::Positive);

  if (auto w = section(r, "workpiece")) {
    ObjectReader wr(*w, "workpiece");
    if (const json* g = wr.take("geometry")) c.workpiece.geometry = parse_geometry(*g, "workpiece.geometry");
    c.workpiece.contact.stiffness = wr.number("stiffness", c.workpiece.contact.stiffness, Range::Positive);
    c.workpiece.contact.damping = wr.number("damping", c.workpiece.contact.damping, Range::NonNegative);
    c.workpiece.contact.friction = wr.number("friction", c.workpiece.contact.friction, Range::NonNegative);
    c.workpiece.contact.deadband = wr.number("friction_deadband", c.workpiece.contact.deadband, Range::NonNegative);
    c.workpiece.preston_k = wr.number("preston_k", c.workpiece.preston_k, Range::NonNegative);
    c.workpiece.tool_radius = wr.number("tool_radius", c.workpiece.tool_radius, Range::Positive);
    if (const json* b = wr.take("beads")) c.workpiece.beads = parse_beads(*b, "workpiece.beads");
    wr.finish();
  }
  if (auto s = section(r, "slave")) {
    ObjectReader sr(*s, "slave");
    c.slave_mass = sr.number("mass", c.slave_mass, Range::Positive);
    c.slave_initial = sr.vec("initial_position", c.slave_initial);
    sr.finish();
  }
  if (auto m = section(r, "master")) {
    ObjectReader mr(*m, "master");
    c.master.mass = mr.number("mass", c.master.mass, Range::Positive);
    c.master.damping = mr.number("damping", c.master.damping, Range::NonNegative);
    c.master_initial = mr.vec("initial_position", c.master_initial);
    mr.finish();
  }
  if (auto p = section(r, "position")) {
    ObjectReader pr(*p, "position");
    c.position.kp = pr.number("kp", c.position.kp, Range::Positive);
    c.position.kd = pr.number("kd", c.position.kd, Range::NonNegative);
    c.position.fmax = pr.number("fmax", c.position.fmax, Range::Positive);
    pr.finish();
  }
  if (auto v = section(r, "velocity_servo")) {
    ObjectReader vr(*v, "velocity_servo");
    c.velocity_servo.kv = vr.number("kv", c.velocity_servo.kv, Range::Positive);
    c.velocity_servo.fmax = vr.number("fmax", c.velocity_servo.fmax, Range::Positive);
    vr.finish();
  }
  if (auto a = section(r, "admittance")) {
    ObjectReader ar(*a, "admittance");
    AdmittanceParams p;
    p.mass = ar.number("mass", p.mass, Range::Positive);
    p.damping = ar.number("damping", p.damping, Range::NonNegative);
    p.stiffness = ar.number("stiffness", p.stiffness, Range::NonNegative);
    ar.finish();
    c.admittance = p;
  }
  if (auto cp = section(r, "coupling")) {
    ObjectReader cr(*cp, "coupling");
    CouplingParams p;
    p.motion_scale = cr.number("motion_scale", p.motion_scale, Range::Positive);
    p.kpp = cr.number("kpp", p.kpp, Range::NonNegative);
    p.bpp = cr.number("bpp", p.bpp, Range::NonNegative);
    p.kff = cr.number("kff", p.kff, Range::NonNegative);
    p.fmax_master = cr.number("fmax_master", p.fmax_master, Range::Positive);
    cr.finish();
    c.coupling = p;
  }
  if (auto o = section(r, "operator")) {
    ObjectReader orr(*o, "operator");
    OperatorSpec s;
    if (const json* path = orr.take("path")) s.path = parse_path(*path, "operator.path");
    s.bandwidth = orr.number("bandwidth", s.bandwidth, Range::Positive);
    s.hand_stiffness = orr.number("hand_stiffness", s.hand_stiffness, Range::Positive);
    s.hand_damping = orr.number("hand_damping", s.hand_damping, Range::NonNegative);
    s.press_bias = orr.number("press_bias", s.press_bias, Range::NonNegative);
    s.tremor_amplitude = orr.number("tremor_amplitude", s.tremor_amplitude, Range::NonNegative);
    s.comfort_threshold = orr.number("comfort_threshold", s.comfort_threshold, Range::NonNegative);
    s.comfort_time = orr.number("comfort_time", s.comfort_time, Range::NonNegative);
    s.yield_compliance = orr.number("yield_compliance", s.yield_compliance, Range::NonNegative);
    orr.finish();
    c.operator_model = s;
  }
  if (auto f = section(r, "fixture")) {
    ObjectReader fr(*f, "fixture");
    FixtureSpec s;
    s.stiffness = fr.number("stiffness", s.stiffness, Range::Positive);
    s.damping = fr.number("damping", s.damping, Range::NonNegative);
    const std::string side = fr.string("side", "keep_above");
    if (side == "keep_above") s.side = FixtureSide::KeepAbove;
    else if (side == "keep_below") s.side = FixtureSide::KeepBelow;
    else throw ConfigError("fixture.side", "must be \"keep_above\" or \"keep_below\"");
    s.offset = fr.number("offset", s.offset);
    fr.finish();
    c.fixture = s;
  }
  if (auto sc = section(r, "shared")) {
    ObjectReader sr(*sc, "shared");
    SharedSpec s;
    s.force_setpoint = sr.number("force_setpoint", s.force_setpoint, Range::NonNegative);
    s.gains = parse_gains(sr);
    s.lateral_gain = sr.number("lateral_gain", s.lateral_gain, Range::NonNegative);
    sr.finish();
    c.shared = s;
  }
  if (auto h = section(r, "hybrid")) {
    ObjectReader hr(*h, "hybrid");
    HybridSpec s;
    s.force_setpoint = hr.number("force_setpoint", s.force_setpoint, Range::NonNegative);
    s.gains = parse_gains(hr);
    s.path_gain = hr.number("path_gain", s.path_gain, Range::NonNegative);
    if (const json* path = hr.take("path")) s.path = parse_path(*path, "hybrid.path");
    hr.finish();
    c.hybrid = s;
  }
  if (auto m = section(r, "metrics")) {
    ObjectReader mr(*m, "metrics");
    c.metrics.settle_time = mr.number("settle_time", c.metrics.settle_time, Range::NonNegative);
    c.metrics.window_end = mr.number("window_end", c.metrics.window_end, Range::NonNegative);
    c.metrics.force_reference = mr.number("force_reference", c.metrics.force_reference, Range::NonNegative);
    c.metrics.contact_threshold = mr.number("contact_threshold", c.metrics.contact_threshold, Range::NonNegative);
    c.metrics.hf_cutoff = mr.number("hf_cutoff", c.metrics.hf_cutoff, Range::Positive);
    c.metrics.smoothing_window = mr.integer("smoothing_window", c.metrics.smoothing_window, 1);
    mr.finish();
  }
  r.finish();
  validate(c);
  return c;
}

ScenarioConfig load_scenario(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("", "cannot open config file '" + file + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(j);
}

json to_json(const ScenarioConfig& c) {
  json j;
  j["schema"] = kSchema;
  j["name"] = c.name;
  j["dt"] = c.dt;
  j["duration"] = c.duration;
  j["seed"] = c.seed;
  j["mode"] = std::string(to_string(c.mode));
  j["force_integral_limit"] = c.force_integral_limit;
  j["workpiece"] = {{"geometry", geometry_json(c.workpiece.geometry)},
                    {"stiffness", c.workpiece.contact.stiffness},
                    {"damping", c.workpiece.contact.damping},
                    {"friction", c.workpiece.contact.friction},
                    {"friction_deadband", c.workpiece.contact.deadband},
                    {"preston_k", c.workpiece.preston_k},
                    {"tool_radius", c.workpiece.tool_radius},
                    {"beads", beads_json(c.workpiece.beads)}};
  j["slave"] = {{"mass", c.slave_mass}, {"initial_position", vec_json(c.slave_initial)}};
  j["master"] = {{"mass", c.master.mass}, {"damping", c.master.damping}, {"initial_position", vec_json(c.master_initial)}};
  j["position"] = {{"kp", c.position.kp}, {"kd", c.position.kd}, {"fmax", c.position.fmax}};
  j["velocity_servo"] = {{"kv", c.velocity_servo.kv}, {"fmax", c.velocity_servo.fmax}};
  if (c.admittance)
    j["admittance"] = {{"mass", c.admittance->mass}, {"damping", c.admittance->damping}, {"stiffness", c.admittance->stiffness}};
  if (c.coupling)
    j["coupling"] = {{"motion_scale", c.coupling->motion_scale}, {"kpp", c.coupling->kpp}, {"bpp", c.coupling->bpp},
                     {"kff", c.coupling->kff}, {"fmax_master", c.coupling->fmax_master}};
  if (c.operator_model) {
    const auto& o = *c.operator_model;
    j["operator"] = {{"path", path_json(o.path)},
                     {"bandwidth", o.bandwidth},
                     {"hand_stiffness", o.hand_stiffness},
                     {"hand_damping", o.hand_damping},
                     {"press_bias", o.press_bias},
                     {"tremor_amplitude", o.tremor_amplitude},
                     {"comfort_threshold", o.comfort_threshold},
                     {"comfort_time", o.comfort_time},
                     {"yield_compliance", o.yield_compliance}};
  }
  if (c.fixture)
    j["fixture"] = {{"stiffness", c.fixture->stiffness},
                    {"damping", c.fixture->damping},
                    {"side", c.fixture->side == FixtureSide::KeepAbove ? "keep_above" : "keep_below"},
                    {"offset", c.fixture->offset}};
  if (c.shared)
    j["shared"] = {{"force_setpoint", c.shared->force_setpoint}, {"kfp", c.shared->gains.kfp},
                   {"kfi", c.shared->gains.kfi}, {"lateral_gain", c.shared->lateral_gain}};
  if (c.hybrid)
    j["hybrid"] = {{"force_setpoint", c.hybrid->force_setpoint}, {"kfp", c.hybrid->gains.kfp},
                   {"kfi", c.hybrid->gains.kfi}, {"path_gain", c.hybrid->path_gain}, {"path", path_json(c.hybrid->path)}};
  j["metrics"] = {{"settle_time", c.metrics.settle_time},
                  {"window_end", c.metrics.window_end},
                  {"force_reference", c.metrics.force_reference},
                  {"contact_threshold", c.metrics.contact_threshold},
                  {"hf_cutoff", c.metrics.hf_cutoff},
                  {"smoothing_window", c.metrics.smoothing_window}};
  return j;
}

void validate(const ScenarioConfig& c) {
  if (!(c.dt > 0.0)) throw ConfigError("dt", "must be > 0");
  if (!(c.duration >= 0.0)) throw ConfigError("duration", "must be >= 0");
  if (c.metrics.window_end > 0.0 && c.metrics.window_end <= c.metrics.settle_time)
    throw ConfigError("metrics.window_end", "must be after settle_time (or 0 for the whole run)");
  if (c.metrics.hf_cutoff >= 0.5 / c.dt) throw ConfigError("metrics.hf_cutoff", "must be below the Nyquist frequency");
  try {
    Workpiece wp;
    wp.geometry = c.workpiece.geometry;
    wp.contact = c.workpiece.contact;
    wp.preston_k = c.workpiece.preston_k;
    wp.tool_radius = c.workpiece.tool_radius;
    wp.validate();
    (void)surface_eval(wp, c.slave_initial);
  } catch (const InvalidInput& e) {
    throw ConfigError("workpiece", e.what());
  }
  if (c.fixture && c.fixture->offset != 0.0) {
    if (const auto* cyl = std::get_if<InnerCylinder>(&c.workpiece.geometry); cyl && !(cyl->radius - c.fixture->offset > 0.0))
      throw ConfigError("fixture.offset", "leaves a non-positive fixture radius");
  }
  (void)assemble_mode(c.mode, c.mode_parameters());
}

double metric_value(const MetricsReport& m, const std::string& metric) {
  if (metric == "peak_normal_force") return m.peak_normal_force;
  if (metric == "peak_smoothed_force") return m.peak_smoothed_force;
  if (metric == "mean_contact_force") return m.mean_contact_force;
  if (metric == "settled_force_error_pct") return m.settled_force_error_pct;
  if (metric == "path_rms_in_plane") return m.path_rms.in_plane;
  if (metric == "path_rms_z") return m.path_rms.z;
  if (metric == "surface_rms") return m.surface_rms;
  if (metric == "hf_energy") return m.hf_energy;
  if (metric == "contact_loss_max") return m.contact_loss_max;
  if (metric == "removed_fraction") return m.removed_fraction;
  throw InvalidInput("unknown metric '" + metric + "'");
}

}  // namespace toolbench
