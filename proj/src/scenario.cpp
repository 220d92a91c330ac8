#include <sstream>

#include "gullivr/errors.hpp"
#include "gullivr/tracking_sim.hpp"

namespace gullivr {

namespace {

class Simulation {
 public:
  Simulation(const Scenario& scenario, std::uint64_t seed)
      : sc_(scenario), agent_(scenario, seed) {
    log_.meta = {sc_.id, seed, policy_name(sc_.agent.policy)};
    mapping_.foot_smooth_coeff = sc_.foot_smooth_coeff;
    mapping_.ground_kernel = sc_.ground_kernel;
    mapping_ = mapping_.anchored_at(sc_.agent.start_physical, sc_.agent.start_virtual);
    pose_.head_pos = {sc_.agent.start_physical.x, sc_.agent.eye_height, sc_.agent.start_physical.z};
    pose_.head_yaw = sc_.agent.start_yaw;
  }

  TelemetryLog run() {
    if (sc_.agent.waypoints.empty()) return std::move(log_);
    try {
      check_chaperone();
      record(0.0);
      std::uint64_t tick = 0;
      while (!(agent_.finished() && agent_.idle() && state_.mode != Mode::kInTransition)) {
        if (++tick > sc_.tick_cap) {
          std::ostringstream msg;
          msg << "scenario '" << sc_.id << "': tick cap " << sc_.tick_cap << " exceeded with "
              << agent_.next_waypoint() << " of " << sc_.agent.waypoints.size()
              << " waypoints reached";
          throw ScenarioError(msg.str(), log_);
        }
        const double now = static_cast<double>(tick) * sc_.dt;
        pose_.t = now;
        if (state_.mode == Mode::kInTransition) {
          advance_transition(now);
        } else {
          PlanResult plan = agent_.plan_step(state_, mapping_, pose_, now, sc_.dt);
          pose_ = plan.pose;
          pose_.t = now;
          for (const NavEvent& event : plan.events) {
            std::visit([&](const auto& e) { apply(e, now); }, event);
          }
        }
        check_chaperone();
        record(now);
      }
    } catch (const ScenarioError& e) {
      if (e.log().frames().empty() && !log_.frames().empty()) throw ScenarioError(e.what(), log_);
      throw;
    } catch (const std::logic_error& e) {
      // DomainError, StateError: the scenario drove the kernel out of bounds.
      throw ScenarioError(std::string("scenario '") + sc_.id + "': " + e.what(), log_);
    } catch (const ConfigError& e) {
      throw ScenarioError(std::string("scenario '") + sc_.id + "': " + e.what(), log_);
    }
    return std::move(log_);
  }

 private:
  Vec2 physical() const { return horizontal(pose_.head_pos); }
  Vec2 ground_point() const { return mapping_.to_virtual(physical()); }

  void record(double t) {
    log_.add_frame({t, pose_.head_pos, map_pose(mapping_, sc_.field, pose_).position,
                    mapping_.scale, state_.mode});
  }

  void check_chaperone() {
    if (!sc_.chaperone.contains(physical())) {
      std::ostringstream msg;
      msg << "agent left the chaperone at (" << pose_.head_pos.x << ", " << pose_.head_pos.z << ")";
      throw ScenarioError(msg.str(), log_);
    }
  }

  void log_event(double t, EventKind kind, std::string tag, std::map<std::string, double> payload) {
    log_.add_event({t, kind, std::move(tag), std::move(payload)});
  }

  void finish_transition(const TransitionStep& step, double now) {
    const Vec2 p = ground_point();
    log_event(now, EventKind::kTransitionEnd, mode_name(state_.mode),
              {{"scale", step.scale}, {"x", p.x}, {"z", p.z}});
  }

  void advance_transition(double now) {
    const TransitionStep step = step_transition(*state_.transition, mapping_, physical(), now);
    mapping_ = step.mapping;
    state_ = apply_step(state_, step);
    if (step.complete) finish_transition(step, now);
  }

  void apply(const BeginTransitionIntent& intent, double now) {
    TransitionRequest request;
    request.target_scale = intent.target_scale;
    request.now = now;
    request.pull = intent.pull;
    request.instant = sc_.transition.instant;
    request.requested_duration = sc_.transition.duration;
    request.player_ground = ground_point();
    request.yaw_from = mapping_.yaw_offset;
    request.yaw_delta = intent.yaw_delta;
    const TransitionStart start = begin_transition(state_, request);
    const Vec2 pull = intent.pull.value_or(Vec2{});
    log_event(now, EventKind::kTransitionBegin, intent.reason,
              {{"from", state_.current_scale},
               {"to", intent.target_scale},
               {"duration", start.spec.duration},
               {"pull_x", pull.x},
               {"pull_z", pull.z},
               {"yaw_delta", intent.yaw_delta}});
    state_ = start.state;
    if (state_.mode != Mode::kInTransition) {
      const TransitionStep step = step_transition(start.spec, mapping_, physical(), now);
      mapping_ = step.mapping;
      finish_transition(step, now);
    }
  }

  void apply(const TeleportIntent& intent, double now) {
    const Vec2 from = ground_point();
    mapping_ = apply_teleport(mapping_, pose_, intent.landing);
    const Vec2 to = ground_point();
    log_event(now, EventKind::kTeleport, intent.reason,
              {{"from_x", from.x}, {"from_z", from.z}, {"x", to.x}, {"z", to.z},
               {"distance", distance(from, to)}});
  }

  void apply(const ResetIntent& intent, double now) {
    log_event(now, EventKind::kReset, policy_name(sc_.agent.policy), {{"yaw_delta", intent.yaw_delta}});
  }

  void apply(const ObjectIntent& intent, double now) {
    state_ = handle_object_event(state_, intent.event);
    log_event(now, intent.event == ObjectEvent::kGrab ? EventKind::kGrab : EventKind::kDrop,
              intent.waypoint_id, {{"object_scale", state_.held_object_scale}});
  }

  void apply(const WaypointIntent& intent, double now) {
    const Vec2 p = ground_point();
    log_event(now, EventKind::kWaypointReached, intent.waypoint_id,
              {{"index", static_cast<double>(intent.index)},
               {"x", p.x},
               {"z", p.z},
               {"error", distance(p, intent.position)}});
  }

  const Scenario& sc_;
  Agent agent_;
  TelemetryLog log_;
  RigMapping mapping_;
  PhysicalPose pose_;
  ModeState state_;
};

}  // namespace

TelemetryLog run_scenario(const Scenario& scenario, std::uint64_t seed) {
  if (!(scenario.dt > 0.0)) throw DomainError("run_scenario: dt must be positive");
  return Simulation(scenario, seed).run();
}

}  // namespace gullivr
