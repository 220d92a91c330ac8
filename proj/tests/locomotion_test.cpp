#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gullivr/errors.hpp"
#include "gullivr/locomotion.hpp"

using namespace gullivr;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  ModeState state;
  RigMapping mapping;
};

// Runs a whole transition for a stationary player in `steps` equal ticks.
Outcome run_transition(ModeState state, RigMapping mapping, Vec2 physical, double target,
                       std::optional<Vec2> pull, int steps, double requested = 0.5) {
  TransitionRequest req;
  req.target_scale = target;
  req.now = 3.0;
  req.pull = pull;
  req.requested_duration = requested;
  req.player_ground = mapping.to_virtual(physical);
  req.yaw_from = mapping.yaw_offset;
  const TransitionStart start = begin_transition(state, req);
  state = start.state;
  for (int k = 1; k <= steps; ++k) {
    const double now = start.spec.start_time + start.spec.duration * k / steps;
    const TransitionStep step = step_transition(start.spec, mapping, physical, now);
    mapping = step.mapping;
    state = apply_step(state, step);
  }
  return {state, mapping};
}

}  // namespace

TEST_CASE("begin_transition timing") {
  ModeState nm;
  SUBCASE("scale 100 with 0.5 s is accepted as is") {
    TransitionRequest req;
    req.target_scale = 100;
    req.requested_duration = 0.5;
    const auto s = begin_transition(nm, req);
    CHECK(s.spec.duration == 0.5);
    CHECK(s.state.mode == Mode::kInTransition);
  }
  SUBCASE("scale 30 is clamped to 0.15 s") {
    TransitionRequest req;
    req.target_scale = 30;
    req.requested_duration = 0.5;
    CHECK(begin_transition(nm, req).spec.duration == doctest::Approx(0.15).epsilon(1e-15));
  }
  SUBCASE("instant lands in GM at the same time") {
    TransitionRequest req;
    req.target_scale = 100;
    req.now = 7.25;
    req.instant = true;
    const auto s = begin_transition(nm, req);
    CHECK(s.state.mode == Mode::kGiant);
    CHECK(s.state.current_scale == 100);
    CHECK(s.spec.duration == 0.0);
    CHECK(s.spec.start_time == 7.25);
    CHECK_FALSE(s.state.transition);
  }
  SUBCASE("errors") {
    TransitionRequest req;
    req.target_scale = 100;
    const auto s = begin_transition(nm, req);
    CHECK_THROWS_AS(begin_transition(s.state, req), StateError);
    req.target_scale = 0.0;
    CHECK_THROWS_AS(begin_transition(nm, req), DomainError);
    req.target_scale = -4.0;
    CHECK_THROWS_AS(begin_transition(nm, req), DomainError);
  }
  SUBCASE("randomised requests never break the rule") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> scale(2, 200);
    std::uniform_real_distribution<double> dur(0.001, 3.0);
    for (int i = 0; i < 2000; ++i) {
      TransitionRequest req;
      req.target_scale = scale(rng);
      req.requested_duration = dur(rng);
      const auto s = begin_transition(nm, req);
      CHECK(s.spec.duration <= kSecondsPerScale * req.target_scale);
      CHECK(s.spec.duration <= 1.0);
      CHECK(s.spec.duration > 0.0);
    }
  }
}

TEST_CASE("step_transition") {
  TransitionSpec spec;
  spec.scale_from = 1;
  spec.scale_to = 100;
  spec.start_time = 2.0;
  spec.duration = 0.5;
  spec.anchor_fixpoint = {10, -4};
  RigMapping m;
  const Vec2 physical{0.3, 0.2};
  m = m.anchored_at(physical, spec.anchor_fixpoint);

  SUBCASE("u = 0 holds the start") {
    const auto s = step_transition(spec, m, physical, 2.0);
    CHECK(s.scale == 1.0);
    CHECK(distance(s.mapping.to_virtual(physical), spec.anchor_fixpoint) <= 1e-12);
  }
  SUBCASE("midpoint scale") {
    CHECK(step_transition(spec, m, physical, 2.25).scale == doctest::Approx(50.5).epsilon(1e-15));
  }
  SUBCASE("pull (3, 0) displaces the endpoint by exactly 3 m") {
    spec.pull_offset = {3, 0};
    const auto s = step_transition(spec, m, physical, 2.5);
    CHECK(s.complete);
    const Vec2 g = s.mapping.to_virtual(physical);
    CHECK(std::abs(g.x - 13.0) <= 1e-9);
    CHECK(std::abs(g.z + 4.0) <= 1e-9);
  }
}

TEST_CASE("fixpoint and pull hold for any step partition") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> gm(2.0, 200.0);
  for (int trial = 0; trial < 50; ++trial) {
    RigMapping m;
    m.anchor = {100 * unit(rng), 100 * unit(rng)};
    m.yaw_offset = kPi * unit(rng);
    const Vec2 physical{unit(rng), unit(rng)};
    const Vec2 start = m.to_virtual(physical);
    const double scale = gm(rng);
    const Vec2 pull{5 * unit(rng), 5 * unit(rng)};
    for (int steps : {1, 7, 90}) {
      const Outcome up = run_transition({}, m, physical, scale, std::nullopt, steps);
      CHECK(up.state.mode == Mode::kGiant);
      CHECK(up.state.current_scale == scale);
      CHECK(distance(up.mapping.to_virtual(physical), start) <= 1e-9);

      const Outcome down = run_transition(up.state, up.mapping, physical, 1.0, std::nullopt, steps);
      CHECK(down.state.mode == Mode::kNormal);
      CHECK(down.mapping.scale == 1.0);
      CHECK(distance(down.mapping.to_virtual(physical), start) <= 1e-9);

      const Outcome pulled = run_transition(up.state, up.mapping, physical, 1.0, pull, steps);
      CHECK(distance(pulled.mapping.to_virtual(physical), start + pull) <= 1e-9);
    }
  }
}

TEST_CASE("resolve_pull") {
  PointOfInterest castle{"castle", {{0, 0, 0}, {20, 10, 20}}, {13, 0, 10}, 0};
  PointOfInterest a{"alpha", {{-10, 0, -10}, {10, 5, 10}}, {0, 0, 3}, 0};
  PointOfInterest b{"beta", {{-10, 0, -10}, {10, 5, 10}}, {0, 0, -3}, 0};
  SUBCASE("inside one box") {
    const auto p = resolve_pull({castle}, {10, 10});
    REQUIRE(p);
    CHECK(p->poi_id == "castle");
    CHECK(length(p->pull_offset) == doctest::Approx(3.0));
    CHECK(p->pull_offset == Vec2{3, 0});
  }
  SUBCASE("outside everything") { CHECK_FALSE(resolve_pull({castle}, {-5, 30})); }
  SUBCASE("equidistant overlap picks the smaller id") {
    CHECK(resolve_pull({b, a}, {0, 0})->poi_id == "alpha");
    CHECK(resolve_pull({a, b}, {0, 0})->poi_id == "alpha");
  }
  SUBCASE("nearest anchor wins") { CHECK(resolve_pull({a, b}, {0, -1})->poi_id == "beta"); }
}

TEST_CASE("resolve_aim") {
  const auto f = HeightField::flat({-500, -500}, 5.0, 201, 201, 0.0);
  RigMapping m;
  m.scale = 100;
  m.anchor = {10, 20};
  const PhysicalPose base{0, {0, 1.7, 0}, 0, 0};
  SUBCASE("straight down") {
    PhysicalPose p = base;
    p.head_pitch = -kPi / 2;
    const auto c = resolve_aim(p, m, f, deg_to_rad(20));
    REQUIRE(c);
    CHECK(c->x == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(c->z == doctest::Approx(20.0).epsilon(1e-12));
  }
  SUBCASE("45 degrees down from 170 m lands 170 m ahead") {
    PhysicalPose p = base;
    p.head_pitch = -kPi / 4;
    p.head_yaw = kPi / 2;
    const auto c = resolve_aim(p, m, f, deg_to_rad(20));
    REQUIRE(c);
    CHECK(c->x == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(c->z - 20.0 == doctest::Approx(170.0).epsilon(1e-9));
  }
  SUBCASE("shallow pitch is gated") {
    PhysicalPose p = base;
    p.head_pitch = deg_to_rad(-5);
    CHECK_FALSE(resolve_aim(p, m, f, deg_to_rad(20)));
  }
}

TEST_CASE("aiming transition lands exactly on the crosshair") {
  const auto f = procedural_heightfield({-400, -400}, 2.0, 401, 401, {5, 4.0, 30.0});
  RigMapping m;
  m.scale = 100;
  m.anchor = {30, -20};
  PhysicalPose p{0, {0.2, 1.7, -0.1}, 0.7, deg_to_rad(-60)};
  const auto c = resolve_aim(p, m, f, deg_to_rad(20));
  REQUIRE(c);
  ModeState gm;
  gm.mode = Mode::kGiant;
  gm.current_scale = 100;
  const Vec2 here = m.to_virtual(horizontal(p.head_pos));
  const Outcome out = run_transition(gm, m, horizontal(p.head_pos), 1.0, *c - here, 45);
  CHECK(distance(out.mapping.to_virtual(horizontal(p.head_pos)), *c) <= 1e-9);
}

TEST_CASE("reset rotation") {
  const RigMapping m;
  SUBCASE("square room centre picks a diagonal") {
    const Chaperone room{2, 2};
    const double h = best_physical_heading({0, 0}, room);
    CHECK(h == doctest::Approx(kPi / 4).epsilon(1e-12));
    const double delta = compute_reset_rotation({0, 0}, room, 0.0, m);
    CHECK(delta == doctest::Approx(-kPi / 4).epsilon(1e-12));
    // Applying the delta maps the desired heading onto the chosen physical one.
    CHECK(wrap_angle(h + m.yaw_offset + delta) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("against the -x wall facing +x stays pointed into the room") {
    const Chaperone room{2, 2};
    const Vec2 p{-1.99, 0};
    const double h = best_physical_heading(p, room);
    CHECK(std::cos(h) > 0.0);
    // Aligned already: no rotation needed.
    CHECK(compute_reset_rotation(p, room, h, m) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("4 x 2 room picks a far-corner diagonal, not an axis") {
    const Chaperone room{2, 1};
    const double h = best_physical_heading({0, 0}, room);
    const double diag = std::atan2(1.0, 2.0);
    const double d = std::abs(std::remainder(h - diag, kPi / 2));
    CHECK(d <= deg_to_rad(1.0) + 1e-12);
  }
  SUBCASE("outside the chaperone") {
    CHECK_THROWS_AS(compute_reset_rotation({3, 0}, {2, 2}, 0.0, m), DomainError);
  }
  SUBCASE("never worse than the four cardinal headings") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> half(0.5, 4.0);
    std::uniform_real_distribution<double> t(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
      const Chaperone room{half(rng), half(rng)};
      const Vec2 p{room.half_x * t(rng), room.half_z * t(rng)};
      const double best = room.distance_to_boundary(p, best_physical_heading(p, room));
      for (double c : {0.0, kPi / 2, kPi, 3 * kPi / 2}) {
        CHECK(best >= room.distance_to_boundary(p, c) - 1e-12);
      }
      // Brute force over the same sample grid.
      for (int k = 0; k < 360; ++k) {
        CHECK(best >= room.distance_to_boundary(p, deg_to_rad(k)) - 1e-9);
      }
    }
  }
}

TEST_CASE("teleport_arc") {
  const auto f = HeightField::flat({-50, -50}, 1.0, 101, 101, 0.0);
  const double s = std::sqrt(0.5);
  SUBCASE("45 degrees up at 7 m/s from 1 m") {
    const auto hit = teleport_arc({0, 1, 0}, {s, s, 0}, 7.0, 9.81, f);
    REQUIRE(hit);
    CHECK(std::abs(hit->x - 5.848894188000882) <= 1e-4);
    CHECK(std::abs(hit->y) <= 1e-6);
    CHECK(hit->z == 0.0);
  }
  SUBCASE("straight down") {
    const auto hit = teleport_arc({3, 1.5, -2}, {0, -1, 0}, 5.0, 9.81, f);
    REQUIRE(hit);
    CHECK(hit->x == 3.0);
    CHECK(hit->z == -2.0);
  }
  SUBCASE("beyond the edge") { CHECK_FALSE(teleport_arc({45, 1, 0}, {s, s, 0}, 20.0, 9.81, f)); }
  SUBCASE("bad parameters") {
    CHECK_THROWS_AS(teleport_arc({0, 1, 0}, {s, s, 0}, 0.0, 9.81, f), DomainError);
    CHECK_THROWS_AS(teleport_arc({0, 1, 0}, {s, s, 0}, 5.0, 0.0, f), DomainError);
  }
  SUBCASE("matches the analytic range") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> speed(2.0, 12.0);
    std::uniform_real_distribution<double> pitch(deg_to_rad(-40), deg_to_rad(75));
    std::uniform_real_distribution<double> yaw(-kPi, kPi);
    std::uniform_real_distribution<double> height(0.3, 2.5);
    for (int i = 0; i < 100; ++i) {
      const double v = speed(rng);
      const double th = pitch(rng);
      const double ph = yaw(rng);
      const double h = height(rng);
      const double g = 9.81;
      const auto hit = teleport_arc({0, h, 0}, gaze_direction(ph, th), v, g, f);
      REQUIRE(hit);
      const double vs = v * std::sin(th);
      const double range = v * std::cos(th) / g * (vs + std::sqrt(vs * vs + 2 * g * h));
      CHECK(std::abs(std::hypot(hit->x, hit->z) - range) <= 1e-4);
    }
  }
}

TEST_CASE("apply_teleport") {
  const auto f = HeightField::flat({-100, -100}, 1.0, 201, 201, 0.0);
  const PhysicalPose p{0, {0, 1.7, 0}, 0, 0};
  const RigMapping m = apply_teleport({}, p, {50, 0, 30});
  const auto v = map_pose(m, f, p);
  CHECK(v.position.x == 50);
  CHECK(v.position.z == 30);
  const PhysicalPose walked{1, {1, 1.7, 0}, 0, 0};
  CHECK(map_pose(m, f, walked).position.x == doctest::Approx(51.0).epsilon(1e-15));

  RigMapping gm;
  gm.scale = 100;
  CHECK_THROWS_AS(apply_teleport(gm, p, {1, 0, 1}), StateError);
}

TEST_CASE("scale_for_state") {
  const ScaleTable table{{"pre_Q3", 100.0}, {"Q4", 30.0}};
  CHECK(scale_for_state("pre_Q3", table) == 100.0);
  CHECK(scale_for_state("Q4", table) == 30.0);
  CHECK_THROWS_AS(scale_for_state("Q4", ScaleTable{}), ConfigError);
}

TEST_CASE("held objects") {
  const RigMapping m;
  SUBCASE("held through a grow follows the body") {
    ModeState s = handle_object_event({}, ObjectEvent::kGrab);
    s = run_transition(s, m, {0, 0}, 100.0, std::nullopt, 10).state;
    CHECK(held_object_scale(s, ObjectEvent::kTransitionComplete) == 100.0);
  }
  SUBCASE("dropped in GM stays big") {
    ModeState s = handle_object_event({}, ObjectEvent::kGrab);
    const Outcome up = run_transition(s, m, {0, 0}, 100.0, std::nullopt, 10);
    s = handle_object_event(up.state, ObjectEvent::kDrop);
    CHECK(s.held_object_scale == 100.0);
    s = run_transition(s, up.mapping, {0, 0}, 1.0, std::nullopt, 10).state;
    CHECK(s.held_object_scale == 100.0);
  }
  SUBCASE("grab and drop in NM") {
    ModeState s = handle_object_event({}, ObjectEvent::kGrab);
    CHECK(s.held_object_scale == 1.0);
    CHECK(held_object_scale(s, ObjectEvent::kDrop) == 1.0);
  }
  SUBCASE("drop without grab") {
    CHECK_THROWS_AS(handle_object_event({}, ObjectEvent::kDrop), StateError);
  }
}
