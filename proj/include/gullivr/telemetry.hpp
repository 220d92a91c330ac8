#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gullivr/geometry.hpp"
#include "gullivr/locomotion.hpp"

namespace gullivr {

inline constexpr int kTelemetrySchemaVersion = 1;

struct Frame {
  double t = 0.0;
  Vec3 physical;
  Vec3 virtual_head;
  double scale = 1.0;
  Mode mode = Mode::kNormal;

  friend bool operator==(const Frame&, const Frame&) = default;
};

enum class EventKind {
  kTransitionBegin,
  kTransitionEnd,
  kTeleport,
  kReset,
  kGrab,
  kDrop,
  kWaypointReached,
  kTargetLanded,
};

const char* event_kind_name(EventKind kind);
EventKind parse_event_kind(const std::string& name);

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::kWaypointReached;
  std::string tag;
  std::map<std::string, double> payload;

  friend bool operator==(const Event&, const Event&) = default;
};

/// One targeting attempt: landing point versus target centre, room-scale metres.
struct TargetRecord {
  int target = 0;
  int attempt = 0;
  Vec2 center;
  Vec2 landing;
  double radius = 0.0;
  double miss = 0.0;

  friend bool operator==(const TargetRecord&, const TargetRecord&) = default;
};

struct LogMeta {
  std::string scenario_id;
  std::uint64_t seed = 0;
  std::string policy;

  friend bool operator==(const LogMeta&, const LogMeta&) = default;
};

class TelemetryLog {
 public:
  LogMeta meta;

  /// Throws DomainError unless t is strictly after the previous frame.
  void add_frame(const Frame& frame);
  void add_event(Event event) { events_.push_back(std::move(event)); }
  void add_target(const TargetRecord& record) { targets_.push_back(record); }

  const std::vector<Frame>& frames() const { return frames_; }
  const std::vector<Event>& events() const { return events_; }
  const std::vector<TargetRecord>& targets() const { return targets_; }

  double duration() const {
    return frames_.size() < 2 ? 0.0 : frames_.back().t - frames_.front().t;
  }
  std::size_t count(EventKind kind) const;

  friend bool operator==(const TelemetryLog&, const TelemetryLog&) = default;

 private:
  std::vector<Frame> frames_;
  std::vector<Event> events_;
  std::vector<TargetRecord> targets_;
};

enum class Space { kPhysical, kVirtual };

/// Sum of horizontal step lengths. Throws DomainError on an empty span.
double path_length(std::span<const Frame> frames, Space space);

/// Physical path length per minute of logged time. Throws DomainError for a
/// zero-length log.
double meters_per_minute(const TelemetryLog& log);

enum class HitZone { kInner, kOuter, kMiss };

const char* hit_zone_name(HitZone zone);

/// inner: miss <= radius / 2, outer: miss <= radius, otherwise miss.
HitZone classify_hit(double miss, double radius);

struct Summary {
  double duration_s = 0.0;
  double physical_path_m = 0.0;
  double virtual_path_m = 0.0;
  std::optional<double> meters_per_minute;
  std::map<std::string, std::size_t> event_counts;
  std::size_t target_attempts = 0;
  std::optional<double> mean_miss;
  std::optional<double> sd_miss;
  std::map<std::string, std::size_t> hit_zones;
};

Summary summarize(const TelemetryLog& log);

/// Rounds to the 9 significant digits used by every export.
double round_sig9(double value);

/// Copy of the log with every number rounded as export would.
TelemetryLog rounded(const TelemetryLog& log);

enum class ExportFormat { kCsv, kStructured };

/// csv: frames at `path`, events next to it (see events_csv_path).
/// structured: one JSON document with meta, frames, events, targets and summary.
/// Throws IoError on write failure.
void export_log(const TelemetryLog& log, ExportFormat format, const std::filesystem::path& path);

std::filesystem::path events_csv_path(const std::filesystem::path& frames_path);

std::string frames_csv(const TelemetryLog& log);
std::string events_csv(const TelemetryLog& log);
std::string structured_document(const TelemetryLog& log);

TelemetryLog import_structured(const std::filesystem::path& path);
TelemetryLog parse_structured(const std::string& text);
TelemetryLog import_csv(const std::filesystem::path& frames_path);

/// Writes `text` to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace gullivr
