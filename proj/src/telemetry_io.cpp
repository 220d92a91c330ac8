#include <cstdio>
#include <fstream>
#include <sstream>

#include "gullivr/errors.hpp"
#include "gullivr/telemetry.hpp"
#include "json.hpp"

namespace gullivr {

using nlohmann::json;

namespace {

constexpr const char* kFramesHeader = "t,px,py,pz,vx,vy,vz,scale,mode";
constexpr const char* kEventsHeader = "t,kind,tag,payload";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

Mode parse_mode(const std::string& name) {
  for (Mode m : {Mode::kNormal, Mode::kGiant, Mode::kInTransition}) {
    if (name == mode_name(m)) return m;
  }
  throw ConfigError("unknown mode '" + name + "'");
}

json vec(Vec2 v) { return json::array({v.x, v.z}); }
Vec2 vec2_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

std::filesystem::path events_csv_path(const std::filesystem::path& frames_path) {
  std::filesystem::path p = frames_path;
  p.replace_extension("events.csv");
  return p;
}

std::string frames_csv(const TelemetryLog& log) {
  std::ostringstream out;
  out << "# gullivr frames schema_version=" << kTelemetrySchemaVersion << '\n' << kFramesHeader << '\n';
  for (const Frame& f : log.frames()) {
    out << num(f.t) << ',' << num(f.physical.x) << ',' << num(f.physical.y) << ','
        << num(f.physical.z) << ',' << num(f.virtual_head.x) << ',' << num(f.virtual_head.y) << ','
        << num(f.virtual_head.z) << ',' << num(f.scale) << ',' << mode_name(f.mode) << '\n';
  }
  return out.str();
}

std::string events_csv(const TelemetryLog& log) {
  std::ostringstream out;
  out << "# gullivr events schema_version=" << kTelemetrySchemaVersion << '\n' << kEventsHeader << '\n';
  for (const Event& e : log.events()) {
    out << num(e.t) << ',' << event_kind_name(e.kind) << ',' << e.tag << ',';
    bool first = true;
    for (const auto& [key, value] : e.payload) {
      out << (first ? "" : ";") << key << '=' << num(value);
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

std::string structured_document(const TelemetryLog& source) {
  const TelemetryLog log = rounded(source);
  json doc;
  doc["schema_version"] = kTelemetrySchemaVersion;
  doc["meta"] = {{"scenario_id", log.meta.scenario_id},
                 {"seed", log.meta.seed},
                 {"policy", log.meta.policy}};

  json frames = json::array();
  for (const Frame& f : log.frames()) {
    frames.push_back({f.t, f.physical.x, f.physical.y, f.physical.z, f.virtual_head.x,
                      f.virtual_head.y, f.virtual_head.z, f.scale, mode_name(f.mode)});
  }
  doc["frame_columns"] = split(kFramesHeader, ',');
  doc["frames"] = std::move(frames);

  json events = json::array();
  for (const Event& e : log.events()) {
    events.push_back({{"t", e.t}, {"kind", event_kind_name(e.kind)}, {"tag", e.tag}, {"payload", e.payload}});
  }
  doc["events"] = std::move(events);

  json targets = json::array();
  for (const TargetRecord& r : log.targets()) {
    targets.push_back({{"target", r.target},
                       {"attempt", r.attempt},
                       {"center", vec(r.center)},
                       {"landing", vec(r.landing)},
                       {"radius", r.radius},
                       {"miss", r.miss},
                       {"zone", hit_zone_name(classify_hit(r.miss, r.radius))}});
  }
  doc["targets"] = std::move(targets);

  const Summary s = summarize(log);
  doc["summary"] = {{"duration_s", round_sig9(s.duration_s)},
                    {"physical_path_m", round_sig9(s.physical_path_m)},
                    {"virtual_path_m", round_sig9(s.virtual_path_m)},
                    {"meters_per_minute",
                     s.meters_per_minute ? json(round_sig9(*s.meters_per_minute)) : json(nullptr)},
                    {"event_counts", s.event_counts},
                    {"target_attempts", s.target_attempts},
                    {"mean_miss", s.mean_miss ? json(round_sig9(*s.mean_miss)) : json(nullptr)},
                    {"sd_miss", s.sd_miss ? json(round_sig9(*s.sd_miss)) : json(nullptr)},
                    {"hit_zones", s.hit_zones}};
  return doc.dump(1) + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

void export_log(const TelemetryLog& log, ExportFormat format, const std::filesystem::path& path) {
  if (format == ExportFormat::kCsv) {
    write_text_file(path, frames_csv(log));
    write_text_file(events_csv_path(path), events_csv(log));
  } else {
    write_text_file(path, structured_document(log));
  }
}

TelemetryLog parse_structured(const std::string& text) {
  const json doc = json::parse(text);
  if (doc.at("schema_version").get<int>() != kTelemetrySchemaVersion) {
    throw ConfigError("telemetry document: unsupported schema_version");
  }
  TelemetryLog log;
  const json& meta = doc.at("meta");
  log.meta = {meta.at("scenario_id").get<std::string>(), meta.at("seed").get<std::uint64_t>(),
              meta.at("policy").get<std::string>()};
  for (const json& f : doc.at("frames")) {
    log.add_frame({f.at(0).get<double>(),
                   {f.at(1).get<double>(), f.at(2).get<double>(), f.at(3).get<double>()},
                   {f.at(4).get<double>(), f.at(5).get<double>(), f.at(6).get<double>()},
                   f.at(7).get<double>(),
                   parse_mode(f.at(8).get<std::string>())});
  }
  for (const json& e : doc.at("events")) {
    log.add_event({e.at("t").get<double>(), parse_event_kind(e.at("kind").get<std::string>()),
                   e.at("tag").get<std::string>(),
                   e.at("payload").get<std::map<std::string, double>>()});
  }
  for (const json& r : doc.at("targets")) {
    log.add_target({r.at("target").get<int>(), r.at("attempt").get<int>(), vec2_from(r.at("center")),
                    vec2_from(r.at("landing")), r.at("radius").get<double>(),
                    r.at("miss").get<double>()});
  }
  return log;
}

TelemetryLog import_structured(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open telemetry document");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_structured(buf.str());
}

namespace {

std::vector<std::string> data_lines(const std::filesystem::path& path, const char* header) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open csv");
  std::vector<std::string> lines;
  std::string line;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!seen_header) {
      if (line != header) throw ConfigError(path.string() + ": unexpected csv header '" + line + "'");
      seen_header = true;
      continue;
    }
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

TelemetryLog import_csv(const std::filesystem::path& frames_path) {
  TelemetryLog log;
  for (const std::string& line : data_lines(frames_path, kFramesHeader)) {
    const auto c = split(line, ',');
    if (c.size() != 9) throw ConfigError(frames_path.string() + ": bad frame row '" + line + "'");
    log.add_frame({std::stod(c[0]),
                   {std::stod(c[1]), std::stod(c[2]), std::stod(c[3])},
                   {std::stod(c[4]), std::stod(c[5]), std::stod(c[6])},
                   std::stod(c[7]),
                   parse_mode(c[8])});
  }
  const auto events_path = events_csv_path(frames_path);
  if (std::filesystem::exists(events_path)) {
    for (const std::string& line : data_lines(events_path, kEventsHeader)) {
      const auto c = split(line, ',');
      if (c.size() != 4) throw ConfigError(events_path.string() + ": bad event row '" + line + "'");
      Event e{std::stod(c[0]), parse_event_kind(c[1]), c[2], {}};
      if (!c[3].empty()) {
        for (const std::string& kv : split(c[3], ';')) {
          const auto eq = kv.find('=');
          if (eq == std::string::npos) throw ConfigError("bad event payload '" + c[3] + "'");
          e.payload[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        }
      }
      log.add_event(std::move(e));
    }
  }
  return log;
}

}  // namespace gullivr
