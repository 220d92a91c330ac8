#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gullivr/geometry.hpp"
#include "gullivr/heightfield.hpp"
#include "gullivr/rig.hpp"

namespace gullivr {

// Transition timing: durations never exceed kSecondsPerScale * max scale and
// never exceed kMaxTransitionSeconds.
inline constexpr double kSecondsPerScale = 0.005;
inline constexpr double kMaxTransitionSeconds = 1.0;
inline constexpr double kDefaultTransitionSeconds = 0.5;

enum class Mode { kNormal, kGiant, kInTransition };

const char* mode_name(Mode mode);

/// An in-flight scale change. The player's ground point is held at
/// anchor_fixpoint + u * pull_offset while the scale moves linearly from
/// scale_from to scale_to and the world yaw moves by u * yaw_delta.
struct TransitionSpec {
  double scale_from = 1.0;
  double scale_to = 1.0;
  double start_time = 0.0;
  double duration = 0.0;
  Vec2 pull_offset;
  Vec2 anchor_fixpoint;
  double yaw_from = 0.0;
  double yaw_delta = 0.0;
};

struct ModeState {
  Mode mode = Mode::kNormal;
  double current_scale = 1.0;
  std::optional<TransitionSpec> transition;
  double held_object_scale = 1.0;
  bool holding = false;
};

struct TransitionRequest {
  double target_scale = 1.0;
  double now = 0.0;
  std::optional<Vec2> pull;
  bool instant = false;
  double requested_duration = kDefaultTransitionSeconds;
  /// Player's ground-projected virtual position at the moment of the request.
  Vec2 player_ground;
  /// Current world yaw and the rotation to blend in over the transition.
  double yaw_from = 0.0;
  double yaw_delta = 0.0;
};

struct TransitionStart {
  ModeState state;
  TransitionSpec spec;
};

/// Largest duration permitted between two scales.
double max_transition_duration(double scale_from, double scale_to);

/// Starts a scale change. Instant requests come back already completed (the
/// caller still re-anchors with step_transition at `now`).
/// Throws StateError if a transition is in flight, DomainError if
/// target_scale is not positive or equals the current scale.
TransitionStart begin_transition(const ModeState& state, const TransitionRequest& request);

struct TransitionStep {
  double scale = 1.0;
  RigMapping mapping;
  double progress = 0.0;
  bool complete = false;
};

/// Advances a transition to `now` for a player standing at `physical_xz`.
TransitionStep step_transition(const TransitionSpec& spec, const RigMapping& mapping,
                               Vec2 physical_xz, double now);

/// Folds a step into the mode state; on completion the mode settles to NM
/// (scale 1) or GM and the transition is cleared.
ModeState apply_step(const ModeState& state, const TransitionStep& step);

struct Aabb {
  Vec3 min;
  Vec3 max;

  bool contains_xz(Vec2 p) const {
    return p.x >= min.x && p.x <= max.x && p.z >= min.z && p.z <= max.z;
  }
};

struct PointOfInterest {
  std::string id;
  Aabb aabb;
  Vec3 anchor;
  double facing = 0.0;
};

struct PullTarget {
  std::string poi_id;
  Vec2 anchor;
  Vec2 pull_offset;
};

/// POI whose box contains the player, pulling toward its anchor. Several
/// candidates: nearest anchor, ties broken by smaller id.
std::optional<PullTarget> resolve_pull(const std::vector<PointOfInterest>& pois,
                                       Vec2 player_virtual_xz);

/// Gaze direction for a virtual yaw and pitch.
Vec3 gaze_direction(double yaw, double pitch);

/// Crosshair on the terrain when the player looks down past max_pitch.
std::optional<Vec2> resolve_aim(const PhysicalPose& pose, const RigMapping& mapping,
                                const HeightField& field, double max_pitch);

/// Physical play area: rectangle centred on the tracked-space origin.
struct Chaperone {
  double half_x = 1.0;
  double half_z = 1.0;

  bool contains(Vec2 p) const { return std::abs(p.x) <= half_x && std::abs(p.z) <= half_z; }
  /// Distance from an interior point to the boundary along `heading`.
  double distance_to_boundary(Vec2 p, double heading) const;
};

/// Heading (1 degree steps, ties to the smallest angle) with the longest
/// walk to the chaperone boundary. Returned in [0, 2 pi).
double best_physical_heading(Vec2 physical_xz, const Chaperone& chaperone);

/// Change to yaw_offset that makes `desired_virtual_heading` line up with
/// best_physical_heading. Wrapped to (-pi, pi]. Throws DomainError if the
/// point is outside the chaperone.
double compute_reset_rotation(Vec2 physical_xz, const Chaperone& chaperone,
                              double desired_virtual_heading, const RigMapping& mapping);

/// Arc-time step used when tracing a teleport arc.
inline constexpr double kArcTimeStep = 0.01;

/// Ballistic pointer p(t) = origin + speed * dir * t - (0, g t^2 / 2, 0).
/// Returns the first terrain contact, or nullopt if the arc leaves the field.
std::optional<Vec3> teleport_arc(Vec3 origin, Vec3 dir, double launch_speed, double gravity,
                                 const HeightField& field);

/// Re-anchors an NM mapping so the current physical position lands on
/// `landing`. Throws StateError when scale != 1.
RigMapping apply_teleport(const RigMapping& mapping, const PhysicalPose& pose, Vec3 landing);

using ScaleTable = std::map<std::string, double>;

/// GM scale configured for a game state. Throws ConfigError when missing.
double scale_for_state(const std::string& game_state, const ScaleTable& table);

enum class ObjectEvent { kGrab, kDrop, kTransitionComplete };

/// Held items follow the body scale; a dropped item keeps the scale it had
/// when released. Throws StateError on drop without grab.
ModeState handle_object_event(const ModeState& state, ObjectEvent event);

inline double held_object_scale(const ModeState& state, ObjectEvent event) {
  return handle_object_event(state, event).held_object_scale;
}

}  // namespace gullivr
