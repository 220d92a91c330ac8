#include <algorithm>
#include <cmath>

#include "gullivr/errors.hpp"
#include "gullivr/tracking_sim.hpp"

namespace gullivr {

const char* policy_name(Policy policy) {
  return policy == Policy::kGullivr ? "gullivr" : "teleport";
}

Policy parse_policy(const std::string& name) {
  if (name == "gullivr") return Policy::kGullivr;
  if (name == "teleport") return Policy::kTeleport;
  throw ConfigError("unknown policy '" + name + "' (expected gullivr or teleport)");
}

const char* action_name(WaypointAction action) {
  switch (action) {
    case WaypointAction::kVisit:
      return "visit";
    case WaypointAction::kGrab:
      return "grab";
    case WaypointAction::kDrop:
      return "drop";
    case WaypointAction::kTriggerNav:
      return "trigger_nav";
  }
  return "?";
}

WaypointAction parse_action(const std::string& name) {
  for (WaypointAction a : {WaypointAction::kVisit, WaypointAction::kGrab, WaypointAction::kDrop,
                           WaypointAction::kTriggerNav}) {
    if (name == action_name(a)) return a;
  }
  throw ConfigError("unknown waypoint action '" + name + "'");
}

namespace {

Vec2 clamp_into(const HeightField& field, Vec2 p) {
  const Vec2 lo = field.origin();
  const Vec2 hi = field.max_corner();
  return {std::clamp(p.x, lo.x, hi.x), std::clamp(p.z, lo.z, hi.z)};
}

}  // namespace

Agent::Agent(const Scenario& scenario, std::uint64_t seed) : scenario_(&scenario), rng_(seed) {}

Vec2 Agent::noise() {
  const double sigma = scenario_->agent.aim_noise_sigma;
  if (sigma <= 0.0) return {};
  std::normal_distribution<double> gauss(0.0, sigma);
  const double x = gauss(rng_);
  const double z = gauss(rng_);
  return {x, z};
}

double Agent::gm_scale_for(const Waypoint& waypoint) const {
  const std::string& state =
      waypoint.game_state.empty() ? scenario_->default_game_state : waypoint.game_state;
  return scale_for_state(state, scenario_->scale_table);
}

PlanResult Agent::plan_step(const ModeState& mode, const RigMapping& mapping,
                            const PhysicalPose& pose, double now, double dt) {
  if (!(dt > 0.0)) throw DomainError("plan_step: dt must be positive");
  const Scenario& sc = *scenario_;
  const AgentScript& script = sc.agent;
  PlanResult out{pose, {}};
  out.pose.t = now;

  if (!queued_.empty()) {
    const QueuedTransition q = queued_.front();
    queued_.pop_front();
    out.events.emplace_back(BeginTransitionIntent{q.target_scale, std::nullopt, q.yaw_delta, q.reason});
    return out;
  }

  const Vec2 phys = horizontal(pose.head_pos);
  const Vec2 here = mapping.to_virtual(phys);

  if (retreating_) {
    // Walk back to the middle of the room, then teleport to where we left off.
    const Vec2 to_centre = Vec2{} - phys;
    const double dist = length(to_centre);
    if (dist <= kArrivalTolerance) {
      retreating_ = false;
      out.events.emplace_back(TeleportIntent{{retreat_return_point_.x, 0.0, retreat_return_point_.z}, "reset"});
      return out;
    }
    const double step = std::min(script.walk_speed * dt, dist);
    const Vec2 next = step >= dist ? Vec2{} : phys + (step / dist) * to_centre;
    out.pose.head_pos = {next.x, script.eye_height, next.z};
    out.pose.head_yaw = heading_of(to_centre);
    out.pose.head_pitch = 0.0;
    return out;
  }

  if (teleport_aim_ticks_ > 0) {
    if (--teleport_aim_ticks_ == 0) {
      if (auto teleport = aim_teleport(mapping, pose)) out.events.emplace_back(std::move(*teleport));
    }
    return out;
  }

  if (finished()) return out;
  const Waypoint& wp = script.waypoints[next_waypoint_];
  if (!sc.field.contains(wp.position)) {
    throw ScenarioError("waypoint '" + wp.id + "' lies outside the heightfield", {});
  }
  const double d = distance(here, wp.position);

  if (mode.mode == Mode::kNormal) {
    if (d <= kArrivalTolerance) return complete_waypoint(mode, pose);
    const Vec2 target = mapping.to_physical(wp.position);
    if (script.policy == Policy::kGullivr) {
      const Vec2 delta = target - phys;
      const double heading = heading_of(delta);
      const double room = sc.chaperone.distance_to_boundary(phys, heading);
      if (length(delta) > script.gm_trigger_ratio * room) {
        const double yaw_delta = compute_reset_rotation(phys, sc.chaperone,
                                                        heading + mapping.yaw_offset, mapping);
        out.events.emplace_back(BeginTransitionIntent{gm_scale_for(wp), std::nullopt, yaw_delta, "grow"});
        return out;
      }
    } else if (d > script.stride) {
      teleport_aim_ticks_ = std::max(1, static_cast<int>(std::lround(sc.teleport.aim_time / dt)));
      out.pose.head_yaw = heading_of(target - phys);
      return out;
    }
    return walk_or_reset(mode, mapping, pose, target, dt);
  }

  // Giant mode.
  const bool object_waypoint =
      wp.action == WaypointAction::kGrab || wp.action == WaypointAction::kDrop;
  if (sc.gm_object_interaction && object_waypoint && d <= kArrivalTolerance) {
    return complete_waypoint(mode, pose);
  }
  if (!assisted_descent_used_) {
    if (sc.transition.landing == LandingMode::kPull) {
      if (const auto pull = resolve_pull(sc.pois, here)) {
        const auto poi = std::find_if(sc.pois.begin(), sc.pois.end(),
                                      [&](const PointOfInterest& p) { return p.id == pull->poi_id; });
        if (poi->aabb.contains_xz(wp.position)) {
          assisted_descent_used_ = true;
          out.events.emplace_back(BeginTransitionIntent{1.0, pull->pull_offset, 0.0, "shrink_pull:" + pull->poi_id});
          return out;
        }
      }
    } else if (d <= script.aim_reach * mapping.scale) {
      PhysicalPose aim = out.pose;
      const Vec3 head = map_pose(mapping, sc.field, aim).position;
      const double ground = sample_height(sc.field, wp.position.x, wp.position.z);
      const Vec2 offset = wp.position - here;
      const double virtual_yaw =
          length(offset) > 0.0 ? heading_of(offset) : pose.head_yaw + mapping.yaw_offset;
      aim.head_yaw = virtual_yaw - mapping.yaw_offset;
      aim.head_pitch = -std::atan2(head.y - ground, length(offset));
      if (const auto crosshair = resolve_aim(aim, mapping, sc.field, sc.transition.max_pitch)) {
        const Vec2 landing = clamp_into(sc.field, *crosshair + noise());
        assisted_descent_used_ = true;
        out.pose = aim;
        out.events.emplace_back(BeginTransitionIntent{1.0, landing - here, 0.0, "shrink_aim"});
        return out;
      }
    }
  }
  if (d <= kArrivalTolerance) {
    out.events.emplace_back(BeginTransitionIntent{1.0, std::nullopt, 0.0, "shrink"});
    return out;
  }
  return walk_or_reset(mode, mapping, pose, mapping.to_physical(wp.position), dt);
}

PlanResult Agent::complete_waypoint(const ModeState& mode, const PhysicalPose& pose) {
  const Scenario& sc = *scenario_;
  const Waypoint& wp = sc.agent.waypoints[next_waypoint_];
  PlanResult out{pose, {}};
  switch (wp.action) {
    case WaypointAction::kGrab:
      out.events.emplace_back(ObjectIntent{ObjectEvent::kGrab, wp.id});
      break;
    case WaypointAction::kDrop:
      out.events.emplace_back(ObjectIntent{ObjectEvent::kDrop, wp.id});
      break;
    case WaypointAction::kTriggerNav:
      if (sc.agent.policy == Policy::kGullivr && mode.mode == Mode::kNormal) {
        queued_.push_back({gm_scale_for(wp), 0.0, "nav_grow"});
        queued_.push_back({1.0, 0.0, "nav_shrink"});
      }
      break;
    case WaypointAction::kVisit:
      break;
  }
  out.events.emplace_back(WaypointIntent{next_waypoint_, wp.id, wp.position});
  ++next_waypoint_;
  assisted_descent_used_ = false;
  return out;
}

PlanResult Agent::walk_or_reset(const ModeState& mode, const RigMapping& mapping,
                                const PhysicalPose& pose, Vec2 physical_target, double dt) {
  const Scenario& sc = *scenario_;
  PlanResult out{pose, {}};
  out.pose.head_pitch = 0.0;
  const Vec2 phys = horizontal(pose.head_pos);
  const Vec2 delta = physical_target - phys;
  const double dist = length(delta);
  if (dist == 0.0) return out;
  const double heading = heading_of(delta);
  const double step = std::min(sc.agent.walk_speed * dt, dist);
  const bool arrives = step >= dist;
  const Vec2 next = arrives ? physical_target : phys + (step / dist) * delta;
  const bool safe = sc.chaperone.contains(next) &&
                    (arrives || sc.chaperone.distance_to_boundary(next, heading) >= sc.agent.wall_margin);
  if (!safe) return start_reset(mode, mapping, pose);
  out.pose.head_pos = {next.x, sc.agent.eye_height, next.z};
  out.pose.head_yaw = heading;
  return out;
}

PlanResult Agent::start_reset(const ModeState& mode, const RigMapping& mapping,
                              const PhysicalPose& pose) {
  const Scenario& sc = *scenario_;
  PlanResult out{pose, {}};
  const Vec2 phys = horizontal(pose.head_pos);
  const Vec2 here = mapping.to_virtual(phys);
  if (sc.agent.policy == Policy::kTeleport) {
    out.events.emplace_back(ResetIntent{0.0});
    retreating_ = true;
    retreat_return_point_ = here;
    return out;
  }
  const Waypoint& wp = sc.agent.waypoints[next_waypoint_];
  const double desired = heading_of(wp.position - here);
  const double yaw_delta = compute_reset_rotation(phys, sc.chaperone, desired, mapping);
  out.events.emplace_back(ResetIntent{yaw_delta});
  if (mode.mode == Mode::kNormal) {
    out.events.emplace_back(BeginTransitionIntent{gm_scale_for(wp), std::nullopt, yaw_delta, "reset_grow"});
    queued_.push_back({1.0, 0.0, "reset_shrink"});
  } else {
    out.events.emplace_back(BeginTransitionIntent{1.0, std::nullopt, yaw_delta, "reset_shrink"});
    queued_.push_back({mode.current_scale, 0.0, "reset_grow"});
  }
  return out;
}

std::optional<TeleportIntent> Agent::aim_teleport(const RigMapping& mapping,
                                                  const PhysicalPose& pose) {
  const Scenario& sc = *scenario_;
  const Waypoint& wp = sc.agent.waypoints[next_waypoint_];
  const Vec3 head = map_pose(mapping, sc.field, pose).position;
  const Vec2 target = clamp_into(sc.field, wp.position + noise());
  const Vec2 to_target = target - horizontal(head);
  const double wanted = length(to_target);
  const double azimuth = heading_of(to_target);

  struct Shot {
    double range;
    Vec3 landing;
  };
  const auto shoot = [&](double pitch) -> std::optional<Shot> {
    const auto hit = teleport_arc(head, gaze_direction(azimuth, pitch), sc.teleport.launch_speed,
                                  sc.teleport.gravity, sc.field);
    if (!hit) return std::nullopt;
    return Shot{distance(horizontal(*hit), horizontal(head)), *hit};
  };

  // Range grows with pitch on open ground; bisect for the shot that lands
  // on (or just short of) the target.
  double lo = deg_to_rad(-89.0);
  double hi = deg_to_rad(45.0);
  const auto longest = shoot(hi);
  if (longest && longest->range <= wanted) return TeleportIntent{longest->landing, "teleport"};
  auto best = shoot(lo);
  if (!best) return std::nullopt;
  if (best->range >= wanted) return TeleportIntent{best->landing, "teleport"};
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    const auto shot = shoot(mid);
    if (!shot || shot->range > wanted) {
      hi = mid;
    } else {
      lo = mid;
      best = shot;
    }
  }
  return TeleportIntent{best->landing, "teleport"};
}

}  // namespace gullivr
