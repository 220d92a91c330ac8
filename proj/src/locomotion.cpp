#include "gullivr/locomotion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gullivr/errors.hpp"

namespace gullivr {

const char* mode_name(Mode mode) {
  switch (mode) {
    case Mode::kNormal:
      return "NM";
    case Mode::kGiant:
      return "GM";
    case Mode::kInTransition:
      return "transition";
  }
  return "?";
}

double max_transition_duration(double scale_from, double scale_to) {
  return std::min(kSecondsPerScale * std::max(scale_from, scale_to), kMaxTransitionSeconds);
}

namespace {

ModeState settle(ModeState state, double scale) {
  state.current_scale = scale;
  state.mode = scale == 1.0 ? Mode::kNormal : Mode::kGiant;
  state.transition.reset();
  if (state.holding) state.held_object_scale = scale;
  return state;
}

}  // namespace

TransitionStart begin_transition(const ModeState& state, const TransitionRequest& request) {
  if (state.mode == Mode::kInTransition) {
    throw StateError("begin_transition: a transition is already in flight");
  }
  if (!(request.target_scale > 0.0) || !std::isfinite(request.target_scale)) {
    throw DomainError("begin_transition: target scale must be positive");
  }
  if (request.target_scale == state.current_scale) {
    throw DomainError("begin_transition: target scale equals the current scale");
  }
  if (!request.instant && !(request.requested_duration > 0.0)) {
    throw DomainError("begin_transition: requested duration must be positive");
  }

  TransitionSpec spec;
  spec.scale_from = state.current_scale;
  spec.scale_to = request.target_scale;
  spec.start_time = request.now;
  spec.duration =
      request.instant
          ? 0.0
          : std::min(request.requested_duration,
                     max_transition_duration(state.current_scale, request.target_scale));
  spec.pull_offset = request.pull.value_or(Vec2{});
  spec.anchor_fixpoint = request.player_ground;
  spec.yaw_from = request.yaw_from;
  spec.yaw_delta = request.yaw_delta;

  if (request.instant) return {settle(state, spec.scale_to), spec};

  ModeState next = state;
  next.mode = Mode::kInTransition;
  next.transition = spec;
  return {next, spec};
}

TransitionStep step_transition(const TransitionSpec& spec, const RigMapping& mapping,
                               Vec2 physical_xz, double now) {
  const bool done = now >= spec.start_time + spec.duration;
  double u = 1.0;
  if (!done) u = std::clamp((now - spec.start_time) / spec.duration, 0.0, 1.0);

  TransitionStep step;
  step.progress = u;
  step.complete = done || u >= 1.0;
  // Linear in scale; the endpoint is pinned so the settled state is exact.
  step.scale = step.complete ? spec.scale_to : spec.scale_from + u * (spec.scale_to - spec.scale_from);

  RigMapping next = mapping;
  next.scale = step.scale;
  next.yaw_offset = step.complete ? spec.yaw_from + spec.yaw_delta : spec.yaw_from + u * spec.yaw_delta;
  const Vec2 ground = step.complete ? spec.anchor_fixpoint + spec.pull_offset
                                    : spec.anchor_fixpoint + u * spec.pull_offset;
  step.mapping = next.anchored_at(physical_xz, ground);
  return step;
}

ModeState apply_step(const ModeState& state, const TransitionStep& step) {
  if (step.complete) return settle(state, step.scale);
  ModeState next = state;
  next.current_scale = step.scale;
  if (next.holding) next.held_object_scale = step.scale;
  return next;
}

std::optional<PullTarget> resolve_pull(const std::vector<PointOfInterest>& pois,
                                       Vec2 player_virtual_xz) {
  const PointOfInterest* best = nullptr;
  double best_distance = std::numeric_limits<double>::infinity();
  for (const PointOfInterest& poi : pois) {
    if (!poi.aabb.contains_xz(player_virtual_xz)) continue;
    const double d = distance(horizontal(poi.anchor), player_virtual_xz);
    if (d < best_distance || (d == best_distance && best && poi.id < best->id)) {
      best = &poi;
      best_distance = d;
    }
  }
  if (!best) return std::nullopt;
  const Vec2 anchor = horizontal(best->anchor);
  return PullTarget{best->id, anchor, anchor - player_virtual_xz};
}

Vec3 gaze_direction(double yaw, double pitch) {
  const double c = std::cos(pitch);
  return {c * std::cos(yaw), std::sin(pitch), c * std::sin(yaw)};
}

std::optional<Vec2> resolve_aim(const PhysicalPose& pose, const RigMapping& mapping,
                                const HeightField& field, double max_pitch) {
  if (!(pose.head_pitch < -max_pitch)) return std::nullopt;
  const VirtualHeadPose head = map_pose(mapping, field, pose);
  const std::optional<Vec3> hit =
      raycast(field, head.position, gaze_direction(head.yaw, head.pitch));
  if (!hit) return std::nullopt;
  return horizontal(*hit);
}

double Chaperone::distance_to_boundary(Vec2 p, double heading) const {
  const Vec2 d = heading_vector(heading);
  double t = std::numeric_limits<double>::infinity();
  if (d.x > 0.0) t = std::min(t, (half_x - p.x) / d.x);
  if (d.x < 0.0) t = std::min(t, (-half_x - p.x) / d.x);
  if (d.z > 0.0) t = std::min(t, (half_z - p.z) / d.z);
  if (d.z < 0.0) t = std::min(t, (-half_z - p.z) / d.z);
  return std::max(t, 0.0);
}

double best_physical_heading(Vec2 physical_xz, const Chaperone& chaperone) {
  constexpr int kSamples = 360;
  constexpr double kTieTolerance = 1e-9;
  double best_heading = 0.0;
  double best_distance = -1.0;
  for (int k = 0; k < kSamples; ++k) {
    const double heading = deg_to_rad(k);
    const double d = chaperone.distance_to_boundary(physical_xz, heading);
    if (d > best_distance + kTieTolerance) {
      best_distance = d;
      best_heading = heading;
    }
  }
  return best_heading;
}

double compute_reset_rotation(Vec2 physical_xz, const Chaperone& chaperone,
                              double desired_virtual_heading, const RigMapping& mapping) {
  if (!chaperone.contains(physical_xz)) {
    std::ostringstream msg;
    msg << "compute_reset_rotation: physical point (" << physical_xz.x << ", " << physical_xz.z
        << ") is outside the chaperone";
    throw DomainError(msg.str());
  }
  const double physical = best_physical_heading(physical_xz, chaperone);
  return wrap_angle(desired_virtual_heading - physical - mapping.yaw_offset);
}

double scale_for_state(const std::string& game_state, const ScaleTable& table) {
  const auto it = table.find(game_state);
  if (it == table.end()) {
    throw ConfigError("no GM scale configured for game state '" + game_state + "'");
  }
  return it->second;
}

ModeState handle_object_event(const ModeState& state, ObjectEvent event) {
  ModeState next = state;
  switch (event) {
    case ObjectEvent::kGrab:
      next.holding = true;
      next.held_object_scale = state.current_scale;
      break;
    case ObjectEvent::kDrop:
      if (!state.holding) throw StateError("drop without a held object");
      next.holding = false;
      break;
    case ObjectEvent::kTransitionComplete:
      if (next.holding) next.held_object_scale = state.current_scale;
      break;
  }
  return next;
}

}  // namespace gullivr
