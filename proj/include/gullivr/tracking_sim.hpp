#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "gullivr/heightfield.hpp"
#include "gullivr/locomotion.hpp"
#include "gullivr/rig.hpp"
#include "gullivr/telemetry.hpp"

namespace gullivr {

enum class Policy { kGullivr, kTeleport };
const char* policy_name(Policy policy);
Policy parse_policy(const std::string& name);

enum class WaypointAction { kVisit, kGrab, kDrop, kTriggerNav };
const char* action_name(WaypointAction action);
WaypointAction parse_action(const std::string& name);

/// How a GM->NM descent picks its landing point.
enum class LandingMode { kPull, kAim };

struct Waypoint {
  std::string id;
  Vec2 position;
  WaypointAction action = WaypointAction::kVisit;
  /// Quest state that selects the GM scale; empty means the scenario default.
  std::string game_state;
};

struct AgentScript {
  std::vector<Waypoint> waypoints;
  double walk_speed = 1.0;
  Policy policy = Policy::kGullivr;
  double aim_noise_sigma = 0.0;
  std::uint64_t rng_seed = 1;

  Vec2 start_physical;
  Vec2 start_virtual;
  double start_yaw = 0.0;
  double eye_height = 1.7;
  /// Grow to GM when the physical walk exceeds this share of the free room.
  double gm_trigger_ratio = 0.8;
  /// Aiming starts once the waypoint is this close (physical metres at GM).
  double aim_reach = 0.3;
  /// Teleport agent walks targets closer than this instead of teleporting.
  double stride = 0.75;
  /// Steps that would leave less than this to the boundary trigger a reset.
  double wall_margin = 0.2;
};

struct TransitionSettings {
  double duration = kDefaultTransitionSeconds;
  bool instant = false;
  LandingMode landing = LandingMode::kPull;
  double max_pitch = deg_to_rad(20.0);
};

struct TeleportSettings {
  double launch_speed = 10.0;
  double gravity = 9.81;
  /// Time the agent stands still pointing before each teleport.
  double aim_time = 1.0;
};

struct TargetSpec {
  Vec2 center;
  double radius = 0.25;
  int max_attempts_per_target = 2;
};

struct Scenario {
  explicit Scenario(HeightField terrain) : field(std::move(terrain)) {}

  std::string id = "scenario";
  HeightField field;
  Chaperone chaperone;
  std::vector<PointOfInterest> pois;
  ScaleTable scale_table;
  std::string default_game_state;
  TransitionSettings transition;
  TeleportSettings teleport;
  AgentScript agent;
  std::vector<TargetSpec> targets;
  double targeting_gm_scale = 100.0;
  double dt = 1.0 / 90.0;
  double physical_ipd = kDefaultPhysicalIpd;
  double foot_smooth_coeff = kDefaultFootSmoothCoeff;
  SmoothKernel ground_kernel = SmoothKernel::kGaussian;
  bool gm_object_interaction = false;
  std::uint64_t tick_cap = 2'000'000;
};

/// Scenario could not be completed; carries the log recorded so far.
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(const std::string& what, TelemetryLog partial)
      : std::runtime_error(what), log_(std::move(partial)) {}
  const TelemetryLog& log() const noexcept { return log_; }

 private:
  TelemetryLog log_;
};

// Intents emitted by the agent and carried out by the simulation loop.
struct BeginTransitionIntent {
  double target_scale = 1.0;
  std::optional<Vec2> pull;
  double yaw_delta = 0.0;
  std::string reason;
};
struct TeleportIntent {
  Vec3 landing;
  std::string reason;
};
struct ResetIntent {
  double yaw_delta = 0.0;
};
struct ObjectIntent {
  ObjectEvent event = ObjectEvent::kGrab;
  std::string waypoint_id;
};
struct WaypointIntent {
  std::size_t index = 0;
  std::string waypoint_id;
  Vec2 position;
};
using NavEvent =
    std::variant<BeginTransitionIntent, TeleportIntent, ResetIntent, ObjectIntent, WaypointIntent>;

struct PlanResult {
  PhysicalPose pose;
  std::vector<NavEvent> events;
};

/// Scripted player. Walks toward the physical preimage of the current
/// waypoint and decides when to change scale, teleport or reset. Policy
/// heuristics live here; the locomotion kernel stays free of them.
class Agent {
 public:
  Agent(const Scenario& scenario, std::uint64_t seed);

  /// Next physical pose and any navigation events. Not called while a
  /// transition is in flight. Throws ScenarioError (with an empty log) on
  /// an unreachable waypoint.
  PlanResult plan_step(const ModeState& mode, const RigMapping& mapping, const PhysicalPose& pose,
                       double now, double dt);

  bool finished() const { return next_waypoint_ >= scenario_->agent.waypoints.size(); }
  /// No queued transitions, pending teleport or reset walk.
  bool idle() const { return queued_.empty() && teleport_aim_ticks_ == 0 && !retreating_; }
  std::size_t next_waypoint() const { return next_waypoint_; }

 private:
  struct QueuedTransition {
    double target_scale;
    double yaw_delta;
    std::string reason;
  };

  PlanResult complete_waypoint(const ModeState& mode, const PhysicalPose& pose);
  PlanResult walk_or_reset(const ModeState& mode, const RigMapping& mapping,
                           const PhysicalPose& pose, Vec2 physical_target, double dt);
  PlanResult start_reset(const ModeState& mode, const RigMapping& mapping,
                         const PhysicalPose& pose);
  std::optional<TeleportIntent> aim_teleport(const RigMapping& mapping, const PhysicalPose& pose);
  double gm_scale_for(const Waypoint& waypoint) const;
  Vec2 noise();

  const Scenario* scenario_;
  std::mt19937_64 rng_;
  std::size_t next_waypoint_ = 0;
  std::deque<QueuedTransition> queued_;
  bool assisted_descent_used_ = false;
  int teleport_aim_ticks_ = 0;
  bool retreating_ = false;
  Vec2 retreat_return_point_;
};

/// Virtual distance at which a waypoint counts as reached.
inline constexpr double kArrivalTolerance = 1e-6;

/// Runs the agent at the scenario's tick until every waypoint is visited.
/// Deterministic in (scenario, seed). Throws ScenarioError when tick_cap is
/// exceeded or the agent leaves the chaperone.
TelemetryLog run_scenario(const Scenario& scenario, std::uint64_t seed);

struct TargetingSetup {
  double eye_height = 1.7;
  double max_pitch = deg_to_rad(20.0);
  double transition_duration = kDefaultTransitionSeconds;
  double dt = 1.0 / 90.0;
  double foot_smooth_coeff = kDefaultFootSmoothCoeff;
  /// Terrain for the task; a flat field around the targets when absent.
  std::optional<HeightField> field;
};

/// For each target and attempt: stand in GM over the target, aim with
/// isotropic Gaussian noise, shrink to NM and record the landing.
/// Throws DomainError unless gm_scale > 1.
std::vector<TargetRecord> targeting_trial(const std::vector<TargetSpec>& targets, double gm_scale,
                                          double aim_noise_sigma, std::uint64_t seed,
                                          const TargetingSetup& setup = {});

/// Convenience wrapper building a log of target_landed events and records.
TelemetryLog run_targeting(const Scenario& scenario, std::uint64_t seed, double aim_noise_sigma);

}  // namespace gullivr
