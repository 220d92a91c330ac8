#include "gullivr/telemetry.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "gullivr/errors.hpp"

namespace gullivr {

namespace {

constexpr std::pair<EventKind, const char*> kEventNames[] = {
    {EventKind::kTransitionBegin, "transition_begin"},
    {EventKind::kTransitionEnd, "transition_end"},
    {EventKind::kTeleport, "teleport"},
    {EventKind::kReset, "reset"},
    {EventKind::kGrab, "grab"},
    {EventKind::kDrop, "drop"},
    {EventKind::kWaypointReached, "waypoint_reached"},
    {EventKind::kTargetLanded, "target_landed"},
};

}  // namespace

const char* event_kind_name(EventKind kind) {
  for (const auto& [k, name] : kEventNames) {
    if (k == kind) return name;
  }
  return "?";
}

EventKind parse_event_kind(const std::string& name) {
  for (const auto& [k, n] : kEventNames) {
    if (name == n) return k;
  }
  throw ConfigError("unknown event kind '" + name + "'");
}

void TelemetryLog::add_frame(const Frame& frame) {
  if (!frames_.empty() && !(frame.t > frames_.back().t)) {
    std::ostringstream msg;
    msg << "telemetry: frame time " << frame.t << " does not follow " << frames_.back().t;
    throw DomainError(msg.str());
  }
  frames_.push_back(frame);
}

std::size_t TelemetryLog::count(EventKind kind) const {
  std::size_t n = 0;
  for (const Event& e : events_) n += e.kind == kind;
  return n;
}

double path_length(std::span<const Frame> frames, Space space) {
  if (frames.empty()) throw DomainError("path_length: log has no frames");
  double total = 0.0;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    const Vec3 a = space == Space::kPhysical ? frames[i - 1].physical : frames[i - 1].virtual_head;
    const Vec3 b = space == Space::kPhysical ? frames[i].physical : frames[i].virtual_head;
    total += distance(horizontal(a), horizontal(b));
  }
  return total;
}

double meters_per_minute(const TelemetryLog& log) {
  const double minutes = log.duration() / 60.0;
  if (!(minutes > 0.0)) throw DomainError("meters_per_minute: log duration is zero");
  return path_length(log.frames(), Space::kPhysical) / minutes;
}

const char* hit_zone_name(HitZone zone) {
  switch (zone) {
    case HitZone::kInner:
      return "inner";
    case HitZone::kOuter:
      return "outer";
    case HitZone::kMiss:
      return "miss";
  }
  return "?";
}

HitZone classify_hit(double miss, double radius) {
  if (miss <= 0.5 * radius) return HitZone::kInner;
  if (miss <= radius) return HitZone::kOuter;
  return HitZone::kMiss;
}

Summary summarize(const TelemetryLog& log) {
  Summary s;
  s.duration_s = log.duration();
  if (!log.frames().empty()) {
    s.physical_path_m = path_length(log.frames(), Space::kPhysical);
    s.virtual_path_m = path_length(log.frames(), Space::kVirtual);
  }
  if (s.duration_s > 0.0) s.meters_per_minute = meters_per_minute(log);
  for (const auto& [kind, name] : kEventNames) s.event_counts[name] = log.count(kind);

  const auto& targets = log.targets();
  s.target_attempts = targets.size();
  if (!targets.empty()) {
    double sum = 0.0;
    for (const TargetRecord& r : targets) {
      sum += r.miss;
      ++s.hit_zones[hit_zone_name(classify_hit(r.miss, r.radius))];
    }
    const double mean = sum / static_cast<double>(targets.size());
    double sq = 0.0;
    for (const TargetRecord& r : targets) sq += (r.miss - mean) * (r.miss - mean);
    s.mean_miss = mean;
    s.sd_miss = targets.size() > 1 ? std::sqrt(sq / static_cast<double>(targets.size() - 1)) : 0.0;
  }
  return s;
}

double round_sig9(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return std::strtod(buf, nullptr);
}

TelemetryLog rounded(const TelemetryLog& log) {
  const auto r3 = [](Vec3 v) { return Vec3{round_sig9(v.x), round_sig9(v.y), round_sig9(v.z)}; };
  const auto r2 = [](Vec2 v) { return Vec2{round_sig9(v.x), round_sig9(v.z)}; };
  TelemetryLog out;
  out.meta = log.meta;
  for (const Frame& f : log.frames()) {
    out.add_frame({round_sig9(f.t), r3(f.physical), r3(f.virtual_head), round_sig9(f.scale), f.mode});
  }
  for (Event e : log.events()) {
    e.t = round_sig9(e.t);
    for (auto& [key, value] : e.payload) value = round_sig9(value);
    out.add_event(std::move(e));
  }
  for (TargetRecord r : log.targets()) {
    r.center = r2(r.center);
    r.landing = r2(r.landing);
    r.radius = round_sig9(r.radius);
    r.miss = round_sig9(r.miss);
    out.add_target(r);
  }
  return out;
}

}  // namespace gullivr
