#include <algorithm>
#include <cmath>
#include <numbers>

#include "gullivr/errors.hpp"
#include "gullivr/tracking_sim.hpp"

namespace gullivr {

namespace {

HeightField flat_field_around(const std::vector<TargetSpec>& targets, double margin) {
  Vec2 lo{0.0, 0.0};
  Vec2 hi{0.0, 0.0};
  if (!targets.empty()) lo = hi = targets.front().center;
  for (const TargetSpec& t : targets) {
    lo = {std::min(lo.x, t.center.x), std::min(lo.z, t.center.z)};
    hi = {std::max(hi.x, t.center.x), std::max(hi.z, t.center.z)};
  }
  const Vec2 origin{std::floor(lo.x - margin), std::floor(lo.z - margin)};
  const int nx = static_cast<int>(std::ceil(hi.x + margin - origin.x)) + 1;
  const int nz = static_cast<int>(std::ceil(hi.z + margin - origin.z)) + 1;
  return HeightField::flat(origin, 1.0, nx, nz, 0.0);
}

}  // namespace

std::vector<TargetRecord> targeting_trial(const std::vector<TargetSpec>& targets, double gm_scale,
                                          double aim_noise_sigma, std::uint64_t seed,
                                          const TargetingSetup& setup) {
  if (!(gm_scale > 1.0)) throw DomainError("targeting_trial: GM scale must exceed 1");
  if (!(aim_noise_sigma >= 0.0)) throw DomainError("targeting_trial: sigma must be >= 0");
  if (!(setup.dt > 0.0)) throw DomainError("targeting_trial: dt must be positive");

  const HeightField field =
      setup.field ? *setup.field : flat_field_around(targets, 10.0 + 10.0 * aim_noise_sigma);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, aim_noise_sigma > 0.0 ? aim_noise_sigma : 1.0);
  const Vec2 standing{0.0, 0.0};

  std::vector<TargetRecord> records;
  for (std::size_t ti = 0; ti < targets.size(); ++ti) {
    const TargetSpec& target = targets[ti];
    if (!(target.radius > 0.0)) throw DomainError("targeting_trial: target radius must be positive");
    for (int attempt = 1; attempt <= target.max_attempts_per_target; ++attempt) {
      RigMapping mapping;
      mapping.scale = gm_scale;
      mapping.foot_smooth_coeff = setup.foot_smooth_coeff;
      mapping = mapping.anchored_at(standing, target.center);
      const Vec2 here = mapping.to_virtual(standing);

      // Straight down over the target centre.
      const PhysicalPose pose{0.0, {standing.x, setup.eye_height, standing.z}, 0.0,
                              -std::numbers::pi / 2.0};
      const Vec2 crosshair = resolve_aim(pose, mapping, field, setup.max_pitch).value_or(here);
      Vec2 jitter;
      if (aim_noise_sigma > 0.0) {
        jitter.x = gauss(rng);
        jitter.z = gauss(rng);
      }

      ModeState state{Mode::kGiant, gm_scale, std::nullopt, 1.0, false};
      TransitionRequest request;
      request.target_scale = 1.0;
      request.pull = crosshair + jitter - here;
      request.requested_duration = setup.transition_duration;
      request.player_ground = here;
      const TransitionStart start = begin_transition(state, request);
      state = start.state;
      for (long k = 0; state.mode == Mode::kInTransition; ++k) {
        const TransitionStep step =
            step_transition(start.spec, mapping, standing, static_cast<double>(k) * setup.dt);
        mapping = step.mapping;
        state = apply_step(state, step);
      }
      const Vec2 landed = mapping.to_virtual(standing);
      records.push_back({static_cast<int>(ti), attempt, target.center, landed, target.radius,
                         distance(landed, target.center)});
    }
  }
  return records;
}

TelemetryLog run_targeting(const Scenario& scenario, std::uint64_t seed, double aim_noise_sigma) {
  TargetingSetup setup;
  setup.eye_height = scenario.agent.eye_height;
  setup.max_pitch = scenario.transition.max_pitch;
  setup.transition_duration = scenario.transition.duration;
  setup.dt = scenario.dt;
  setup.foot_smooth_coeff = scenario.foot_smooth_coeff;
  setup.field = scenario.field;

  TelemetryLog log;
  log.meta = {scenario.id, seed, "targeting"};
  const auto records =
      targeting_trial(scenario.targets, scenario.targeting_gm_scale, aim_noise_sigma, seed, setup);
  const double per_attempt = std::max(setup.transition_duration, setup.dt);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const TargetRecord& r = records[i];
    log.add_target(r);
    log.add_event({static_cast<double>(i + 1) * per_attempt, EventKind::kTargetLanded,
                   "target" + std::to_string(r.target),
                   {{"attempt", static_cast<double>(r.attempt)},
                    {"x", r.landing.x},
                    {"z", r.landing.z},
                    {"miss", r.miss}}});
  }
  return log;
}

}  // namespace gullivr
