#include "gullivr/config.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"

namespace gullivr {

using nlohmann::json;

ConfigValidationError::ConfigValidationError(std::vector<std::string> violations)
    : ConfigError([&] {
        std::ostringstream msg;
        msg << "invalid configuration (" << violations.size() << " problem"
            << (violations.size() == 1 ? "" : "s") << "):";
        for (const std::string& v : violations) msg << "\n  - " << v;
        return msg.str();
      }()),
      violations_(std::move(violations)) {}

namespace {

// Reads fields out of the document, collecting type errors instead of
// stopping at the first one.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

  static const json* child(const json& obj, const std::string& key) {
    if (!obj.is_object() || !obj.contains(key)) return nullptr;
    return &obj.at(key);
  }

  double number(const json& obj, const std::string& key, double fallback, const std::string& where) {
    const json* v = child(obj, key);
    if (!v) return fallback;
    if (!v->is_number()) {
      problems_.push_back(where + "." + key + " must be a number");
      return fallback;
    }
    return v->get<double>();
  }

  std::uint64_t unsigned_int(const json& obj, const std::string& key, std::uint64_t fallback,
                             const std::string& where) {
    const json* v = child(obj, key);
    if (!v) return fallback;
    if (!v->is_number_unsigned()) {
      problems_.push_back(where + "." + key + " must be a non-negative integer");
      return fallback;
    }
    return v->get<std::uint64_t>();
  }

  int integer(const json& obj, const std::string& key, int fallback, const std::string& where) {
    const json* v = child(obj, key);
    if (!v) return fallback;
    if (!v->is_number_integer()) {
      problems_.push_back(where + "." + key + " must be an integer");
      return fallback;
    }
    return v->get<int>();
  }

  bool boolean(const json& obj, const std::string& key, bool fallback, const std::string& where) {
    const json* v = child(obj, key);
    if (!v) return fallback;
    if (!v->is_boolean()) {
      problems_.push_back(where + "." + key + " must be true or false");
      return fallback;
    }
    return v->get<bool>();
  }

  std::string text(const json& obj, const std::string& key, const std::string& fallback,
                   const std::string& where) {
    const json* v = child(obj, key);
    if (!v) return fallback;
    if (!v->is_string()) {
      problems_.push_back(where + "." + key + " must be a string");
      return fallback;
    }
    return v->get<std::string>();
  }

  Vec2 vec2(const json& obj, const std::string& key, Vec2 fallback, const std::string& where) {
    const json* v = child(obj, key);
    if (!v) return fallback;
    if (!v->is_array() || v->size() != 2 || !(*v)[0].is_number() || !(*v)[1].is_number()) {
      problems_.push_back(where + "." + key + " must be [x, z]");
      return fallback;
    }
    return {(*v)[0].get<double>(), (*v)[1].get<double>()};
  }

  Vec3 vec3(const json& obj, const std::string& key, Vec3 fallback, const std::string& where) {
    const json* v = child(obj, key);
    if (!v) return fallback;
    if (!v->is_array() || v->size() != 3 || !(*v)[0].is_number() || !(*v)[1].is_number() ||
        !(*v)[2].is_number()) {
      problems_.push_back(where + "." + key + " must be [x, y, z]");
      return fallback;
    }
    return {(*v)[0].get<double>(), (*v)[1].get<double>(), (*v)[2].get<double>()};
  }

  const json& section(const json& obj, const std::string& key) {
    static const json empty = json::object();
    if (!obj.contains(key)) return empty;
    const json& v = obj.at(key);
    if (!v.is_object()) {
      problems_.push_back(key + " must be an object");
      return empty;
    }
    return v;
  }

  const json& list(const json& obj, const std::string& key) {
    static const json empty = json::array();
    if (!obj.contains(key)) return empty;
    const json& v = obj.at(key);
    if (!v.is_array()) {
      problems_.push_back(key + " must be a list");
      return empty;
    }
    return v;
  }

  void problem(std::string message) { problems_.push_back(std::move(message)); }

 private:
  std::vector<std::string>& problems_;
};

template <typename Enum, typename Parse>
Enum parse_enum(Reader& r, const std::string& value, Enum fallback, Parse parse) {
  try {
    return parse(value);
  } catch (const ConfigError& e) {
    r.problem(e.what());
    return fallback;
  }
}

bool bad_id(const std::string& id) {
  return id.empty() || id.find_first_of(",;=\n") != std::string::npos;
}

}  // namespace

std::vector<std::string> validate_scenario(const Scenario& sc) {
  std::vector<std::string> v;
  const auto fail = [&](auto&&... parts) {
    std::ostringstream msg;
    (msg << ... << parts);
    v.push_back(msg.str());
  };
  const HeightField& field = sc.field;
  const AgentScript& a = sc.agent;

  if (!(sc.chaperone.half_x > 0.0) || !(sc.chaperone.half_z > 0.0)) {
    fail("chaperone half extents must be positive");
  }
  if (!(a.walk_speed > 0.0)) fail("agent.walk_speed must be positive");
  if (!(a.aim_noise_sigma >= 0.0)) fail("agent.aim_noise_sigma must be >= 0");
  if (!(a.eye_height > 0.0)) fail("agent.eye_height must be positive");
  if (!(a.gm_trigger_ratio > 0.0 && a.gm_trigger_ratio < 1.0)) fail("agent.gm_trigger_ratio must lie in (0, 1)");
  if (!(a.aim_reach > 0.0)) fail("agent.aim_reach must be positive");
  if (!(a.stride > 0.0)) fail("agent.stride must be positive");
  if (!(a.wall_margin >= 0.0)) fail("agent.wall_margin must be >= 0");
  const double min_half = std::min(sc.chaperone.half_x, sc.chaperone.half_z);
  const double max_half = std::max(sc.chaperone.half_x, sc.chaperone.half_z);
  if (min_half > 0.0 && !(min_half > a.stride + a.wall_margin)) {
    fail("chaperone is too small: each half extent must exceed agent.stride + agent.wall_margin");
  }
  if (max_half > 0.0 && !(max_half * (1.0 - a.gm_trigger_ratio) >= a.wall_margin)) {
    fail("chaperone is too small for agent.wall_margin at agent.gm_trigger_ratio");
  }
  if (!sc.chaperone.contains(a.start_physical)) fail("agent.start_physical lies outside the chaperone");
  if (!field.contains(a.start_virtual)) fail("agent.start_virtual lies outside the heightfield");

  for (const auto& [state, scale] : sc.scale_table) {
    if (!(scale > 1.0) || !std::isfinite(scale)) fail("scale_table['", state, "'] must be a GM scale > 1");
  }

  std::set<std::string> ids;
  bool holding = false;
  for (std::size_t i = 0; i < a.waypoints.size(); ++i) {
    const Waypoint& w = a.waypoints[i];
    if (bad_id(w.id)) fail("waypoint #", i, " has an empty id or one containing , ; =");
    if (!ids.insert(w.id).second) fail("waypoint id '", w.id, "' is not unique");
    if (!field.contains(w.position)) fail("waypoint '", w.id, "' lies outside the heightfield");
    const std::string& state = w.game_state.empty() ? sc.default_game_state : w.game_state;
    if (!sc.scale_table.contains(state)) {
      fail("waypoint '", w.id, "' uses game state '", state, "' with no scale_table entry");
    }
    if (w.action == WaypointAction::kGrab) holding = true;
    if (w.action == WaypointAction::kDrop) {
      if (!holding) fail("waypoint '", w.id, "' drops an object that was never grabbed");
      holding = false;
    }
  }

  std::set<std::string> poi_ids;
  for (const PointOfInterest& p : sc.pois) {
    if (bad_id(p.id)) fail("POI with empty id or one containing , ; =");
    if (!poi_ids.insert(p.id).second) fail("POI id '", p.id, "' is not unique");
    if (!(p.aabb.max.x > p.aabb.min.x && p.aabb.max.y > p.aabb.min.y && p.aabb.max.z > p.aabb.min.z)) {
      fail("POI '", p.id, "' has a degenerate bounding box");
    }
    if (!p.aabb.contains_xz(horizontal(p.anchor))) fail("POI '", p.id, "' anchor lies outside its box");
    if (!field.contains(horizontal(p.anchor)) || !field.contains(p.aabb.min.x, p.aabb.min.z) ||
        !field.contains(p.aabb.max.x, p.aabb.max.z)) {
      fail("POI '", p.id, "' lies outside the heightfield");
    }
  }

  const TransitionSettings& t = sc.transition;
  if (!t.instant && !(t.duration > 0.0 && t.duration <= kMaxTransitionSeconds)) {
    fail("transition.duration must lie in (0, ", kMaxTransitionSeconds, "] s unless instant");
  }
  if (!(t.max_pitch > 0.0 && t.max_pitch < std::numbers::pi / 2.0)) {
    fail("transition.max_pitch_deg must lie in (0, 90)");
  }
  if (!(sc.teleport.launch_speed > 0.0)) fail("teleport.launch_speed must be positive");
  if (!(sc.teleport.gravity > 0.0)) fail("teleport.gravity must be positive");
  if (!(sc.teleport.aim_time >= 0.0)) fail("teleport.aim_time must be >= 0");

  for (std::size_t i = 0; i < sc.targets.size(); ++i) {
    const TargetSpec& target = sc.targets[i];
    if (!field.contains(target.center)) fail("target #", i, " lies outside the heightfield");
    if (!(target.radius > 0.0)) fail("target #", i, " radius must be positive");
    if (target.max_attempts_per_target < 1) fail("target #", i, " needs at least one attempt");
  }
  if (!(sc.targeting_gm_scale > 1.0)) fail("targeting.gm_scale must exceed 1");
  if (!(sc.dt > 0.0)) fail("tick_hz must be positive");
  if (!(sc.physical_ipd > 0.0)) fail("physical_ipd must be positive");
  if (!(sc.foot_smooth_coeff >= 0.0)) fail("foot_smooth_coeff must be >= 0");
  if (sc.tick_cap == 0) fail("tick_cap must be positive");
  return v;
}

ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigValidationError({std::string("not valid JSON: ") + e.what()});
  }
  if (!doc.is_object()) throw ConfigValidationError({"configuration must be a JSON object"});

  std::vector<std::string> problems;
  Reader r(problems);

  const json* version = Reader::child(doc, "schema_version");
  if (!version || !version->is_number_integer() || version->get<int>() != kConfigSchemaVersion) {
    problems.push_back("schema_version must be " + std::to_string(kConfigSchemaVersion));
  }

  // Terrain first; everything else is checked against it.
  HeightFieldSource source;
  std::optional<HeightField> field;
  const json& hf = r.section(doc, "heightfield");
  try {
    if (hf.contains("file")) {
      source.kind = HeightFieldSource::Kind::kFile;
      source.file = r.text(hf, "file", "", "heightfield");
      if (source.file.is_relative()) source.file = base_dir / source.file;
      field = load_heightfield(source.file.string());
    } else {
      source.origin = r.vec2(hf, "origin", {}, "heightfield");
      source.cell_size = r.number(hf, "cell_size", 1.0, "heightfield");
      source.nx = r.integer(hf, "nx", 0, "heightfield");
      source.nz = r.integer(hf, "nz", 0, "heightfield");
      if (hf.contains("procedural")) {
        source.kind = HeightFieldSource::Kind::kProcedural;
        const json& p = hf.at("procedural");
        source.noise.seed = r.unsigned_int(p, "seed", 1, "heightfield.procedural");
        source.noise.amplitude = r.number(p, "amplitude", 1.0, "heightfield.procedural");
        source.noise.wavelength = r.number(p, "wavelength", 32.0, "heightfield.procedural");
        field = procedural_heightfield(source.origin, source.cell_size, source.nx, source.nz,
                                       source.noise);
      } else {
        source.kind = HeightFieldSource::Kind::kFlat;
        source.flat_height = r.number(hf, "flat_height", 0.0, "heightfield");
        field = HeightField::flat(source.origin, source.cell_size, source.nx, source.nz,
                                  source.flat_height);
      }
    }
  } catch (const std::exception& e) {
    problems.push_back(std::string("heightfield: ") + e.what());
  }

  ScenarioConfig config{Scenario(field ? *field : HeightField::flat({}, 1.0, 2, 2, 0.0)), source};
  Scenario& sc = config.scenario;
  sc.id = r.text(doc, "id", "scenario", "");

  const json& ch = r.section(doc, "chaperone");
  sc.chaperone.half_x = r.number(ch, "half_x", sc.chaperone.half_x, "chaperone");
  sc.chaperone.half_z = r.number(ch, "half_z", sc.chaperone.half_z, "chaperone");

  for (const json& p : r.list(doc, "pois")) {
    PointOfInterest poi;
    poi.id = r.text(p, "id", "", "pois[]");
    const std::string where = "pois['" + poi.id + "']";
    poi.aabb.min = r.vec3(p, "min", {}, where);
    poi.aabb.max = r.vec3(p, "max", {}, where);
    poi.anchor = r.vec3(p, "anchor", {}, where);
    poi.facing = deg_to_rad(r.number(p, "facing_deg", 0.0, where));
    sc.pois.push_back(std::move(poi));
  }

  const json& table = r.section(doc, "scale_table");
  for (const auto& [state, value] : table.items()) {
    if (!value.is_number()) {
      problems.push_back("scale_table['" + state + "'] must be a number");
      continue;
    }
    sc.scale_table[state] = value.get<double>();
  }
  sc.default_game_state = r.text(doc, "default_game_state", "", "");

  const json& tr = r.section(doc, "transition");
  sc.transition.duration = r.number(tr, "duration", sc.transition.duration, "transition");
  sc.transition.instant = r.boolean(tr, "instant", false, "transition");
  sc.transition.landing = parse_enum(r, r.text(tr, "landing", "pull", "transition"), LandingMode::kPull,
                                     [](const std::string& s) {
                                       if (s == "pull") return LandingMode::kPull;
                                       if (s == "aim") return LandingMode::kAim;
                                       throw ConfigError("transition.landing must be pull or aim");
                                     });
  sc.transition.max_pitch = deg_to_rad(r.number(tr, "max_pitch_deg", 20.0, "transition"));

  const json& tp = r.section(doc, "teleport");
  sc.teleport.launch_speed = r.number(tp, "launch_speed", sc.teleport.launch_speed, "teleport");
  sc.teleport.gravity = r.number(tp, "gravity", sc.teleport.gravity, "teleport");
  sc.teleport.aim_time = r.number(tp, "aim_time", sc.teleport.aim_time, "teleport");

  const json& ag = r.section(doc, "agent");
  AgentScript& a = sc.agent;
  a.walk_speed = r.number(ag, "walk_speed", a.walk_speed, "agent");
  a.policy = parse_enum(r, r.text(ag, "policy", "gullivr", "agent"), Policy::kGullivr, parse_policy);
  a.aim_noise_sigma = r.number(ag, "aim_noise_sigma", a.aim_noise_sigma, "agent");
  a.rng_seed = r.unsigned_int(ag, "rng_seed", a.rng_seed, "agent");
  a.start_physical = r.vec2(ag, "start_physical", a.start_physical, "agent");
  a.start_virtual = r.vec2(ag, "start_virtual", a.start_virtual, "agent");
  a.start_yaw = deg_to_rad(r.number(ag, "start_yaw_deg", 0.0, "agent"));
  a.eye_height = r.number(ag, "eye_height", a.eye_height, "agent");
  a.gm_trigger_ratio = r.number(ag, "gm_trigger_ratio", a.gm_trigger_ratio, "agent");
  a.aim_reach = r.number(ag, "aim_reach", a.aim_reach, "agent");
  a.stride = r.number(ag, "stride", a.stride, "agent");
  a.wall_margin = r.number(ag, "wall_margin", a.wall_margin, "agent");
  for (const json& w : r.list(ag, "waypoints")) {
    Waypoint wp;
    wp.id = r.text(w, "id", "", "agent.waypoints[]");
    const std::string where = "agent.waypoints['" + wp.id + "']";
    if (!w.contains("position")) problems.push_back(where + ".position is required");
    wp.position = r.vec2(w, "position", {}, where);
    wp.action = parse_enum(r, r.text(w, "action", "visit", where), WaypointAction::kVisit, parse_action);
    wp.game_state = r.text(w, "game_state", "", where);
    a.waypoints.push_back(std::move(wp));
  }

  for (const json& t : r.list(doc, "targets")) {
    TargetSpec target;
    target.center = r.vec2(t, "center", {}, "targets[]");
    target.radius = r.number(t, "radius", target.radius, "targets[]");
    target.max_attempts_per_target = r.integer(t, "max_attempts", target.max_attempts_per_target, "targets[]");
    sc.targets.push_back(target);
  }
  sc.targeting_gm_scale = r.number(r.section(doc, "targeting"), "gm_scale", sc.targeting_gm_scale, "targeting");

  const double tick_hz = r.number(doc, "tick_hz", 90.0, "");
  sc.dt = tick_hz > 0.0 ? 1.0 / tick_hz : 0.0;
  sc.physical_ipd = r.number(doc, "physical_ipd", sc.physical_ipd, "");
  sc.foot_smooth_coeff = r.number(doc, "foot_smooth_coeff", sc.foot_smooth_coeff, "");
  sc.ground_kernel = parse_enum(r, r.text(doc, "ground_kernel", "gaussian", ""), SmoothKernel::kGaussian,
                                [](const std::string& s) {
                                  if (s == "gaussian") return SmoothKernel::kGaussian;
                                  if (s == "box") return SmoothKernel::kBox;
                                  throw ConfigError("ground_kernel must be gaussian or box");
                                });
  sc.gm_object_interaction = r.boolean(doc, "gm_object_interaction", false, "");
  sc.tick_cap = r.unsigned_int(doc, "tick_cap", sc.tick_cap, "");

  if (field) {
    for (std::string& v : validate_scenario(sc)) problems.push_back(std::move(v));
  }
  if (!problems.empty()) throw ConfigValidationError(std::move(problems));
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open configuration");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path());
}

}  // namespace gullivr
