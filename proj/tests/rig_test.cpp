#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gullivr/errors.hpp"
#include "gullivr/rig.hpp"

using namespace gullivr;

namespace {

const HeightField& flat_zero() {
  static const HeightField f = HeightField::flat({-2000, -2000}, 10.0, 401, 401, 0.0);
  return f;
}

PhysicalPose pose_at(double x, double y, double z, double yaw = 0.0) {
  return {0.0, {x, y, z}, yaw, 0.0};
}

}  // namespace

TEST_CASE("map_pose") {
  SUBCASE("identity in NM on flat ground") {
    const auto v = map_pose({}, flat_zero(), pose_at(1, 1.7, 2));
    CHECK(v.position == Vec3{1, 1.7, 2});
  }
  SUBCASE("scale 30 turns a 0.5 m step into 15 m") {
    RigMapping m;
    m.scale = 30;
    const auto a = map_pose(m, flat_zero(), pose_at(0, 1.7, 0));
    const auto b = map_pose(m, flat_zero(), pose_at(0.5, 1.7, 0));
    CHECK(b.position.x - a.position.x == doctest::Approx(15.0).epsilon(1e-15));
    CHECK(b.position.z == a.position.z);
  }
  SUBCASE("scale 100 over 12 m ground puts the head at 182 m") {
    const auto raised = HeightField::flat({-500, -500}, 5.0, 201, 201, 12.0);
    RigMapping m;
    m.scale = 100;
    CHECK(map_pose(m, raised, pose_at(0.3, 1.7, -0.2)).position.y ==
          doctest::Approx(182.0).epsilon(1e-14));
  }
  SUBCASE("outside the field") {
    RigMapping m;
    m.scale = 100;
    CHECK_THROWS_AS(map_pose(m, flat_zero(), pose_at(25, 1.7, 0)), DomainError);
  }
  SUBCASE("yaw offset rotates both position and heading") {
    RigMapping m;
    m.yaw_offset = std::numbers::pi / 2;
    const auto v = map_pose(m, flat_zero(), pose_at(1, 1.7, 0, 0.25));
    CHECK(v.position.x == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(v.position.z == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(v.yaw == doctest::Approx(0.25 + std::numbers::pi / 2));
  }
}

TEST_CASE("eye_poses") {
  SUBCASE("NM separation is the physical ipd") {
    CHECK(eye_poses({}, flat_zero(), pose_at(0, 1.7, 0), 0.064).modeled_eye_sep == 0.064);
  }
  SUBCASE("scale 100") {
    RigMapping m;
    m.scale = 100;
    CHECK(eye_poses(m, flat_zero(), pose_at(0, 1.7, 0), 0.064).modeled_eye_sep == 100 * 0.064);
    CHECK(100 * 0.064 == doctest::Approx(6.4).epsilon(1e-15));
  }
  SUBCASE("scale 30, yaw 90 degrees: eyes 0.9 m either side along -x") {
    RigMapping m;
    m.scale = 30;
    const auto e = eye_poses(m, flat_zero(), pose_at(0, 1.7, 0, std::numbers::pi / 2), 0.060);
    // Right axis for yaw 90 degrees is (-1, 0, 0).
    CHECK(e.right_eye.x == doctest::Approx(-0.9).epsilon(1e-12));
    CHECK(e.left_eye.x == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(std::abs(e.right_eye.z) < 1e-12);
    CHECK(std::abs(e.left_eye.z) < 1e-12);
  }
  SUBCASE("non-positive ipd") {
    CHECK_THROWS_AS(eye_poses({}, flat_zero(), pose_at(0, 1.7, 0), 0.0), DomainError);
    CHECK_THROWS_AS(eye_poses({}, flat_zero(), pose_at(0, 1.7, 0), -0.06), DomainError);
  }
}

TEST_CASE("ground_height_under") {
  SUBCASE("flat ground at any scale") {
    const auto f = HeightField::flat({-500, -500}, 5.0, 201, 201, 3.0);
    for (double s : {1.0, 30.0, 100.0, 200.0}) {
      RigMapping m;
      m.scale = s;
      CHECK(ground_height_under(m, f, pose_at(0.4, 1.7, 0.1)) == doctest::Approx(3.0).epsilon(1e-14));
    }
  }
  SUBCASE("zero coefficient samples the raw terrain") {
    const auto f = procedural_heightfield({-50, -50}, 0.5, 201, 201, {8, 2.0, 5.0});
    RigMapping m;
    m.scale = 100;
    m.foot_smooth_coeff = 0.0;
    m.anchor = {3.3, -7.1};
    const auto p = pose_at(0.123, 1.7, -0.077);
    const Vec2 v = m.to_virtual({0.123, -0.077});
    CHECK(ground_height_under(m, f, p) == sample_height(f, v.x, v.z));
  }
  SUBCASE("larger scales contract toward the mean on a symmetric field") {
    // Checkerboard with zero mean: every kernel pulls toward 0.
    std::vector<double> h;
    for (int iz = 0; iz < 41; ++iz)
      for (int ix = 0; ix < 41; ++ix) h.push_back(((ix + iz) % 2 == 0) ? 1.0 : -1.0);
    const HeightField f({-4, -4}, 0.2, 41, 41, h);
    RigMapping small;
    RigMapping big;
    big.scale = 100;
    for (double x : {-0.6, 0.0, 0.2, 0.41}) {
      const double g1 = ground_height_at(small, f, {x, 0.2});
      const double g100 = ground_height_at(big, f, {x, 0.2});
      CHECK(std::abs(g100) <= std::abs(g1));
    }
  }
}

TEST_CASE("mapping properties over random poses") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> scale(1.0, 200.0);
  const HeightField field = procedural_heightfield({-1000, -1000}, 4.0, 501, 501, {3, 8.0, 40.0});
  for (int i = 0; i < 300; ++i) {
    RigMapping m;
    m.scale = scale(rng);
    m.yaw_offset = std::numbers::pi * unit(rng);
    m.anchor = {50 * unit(rng), 50 * unit(rng)};
    const PhysicalPose a = pose_at(2 * unit(rng), 1.5 + 0.3 * unit(rng), 2 * unit(rng));
    const PhysicalPose b = pose_at(a.head_pos.x + 0.01 * unit(rng), a.head_pos.y,
                                   a.head_pos.z + 0.01 * unit(rng));
    const auto va = map_pose(m, field, a);
    const auto vb = map_pose(m, field, b);

    // Floor alignment.
    const double above = va.position.y - ground_height_under(m, field, a);
    CHECK(std::abs(above - m.scale * a.head_pos.y) <= 1e-9 * m.scale * a.head_pos.y);

    // Velocity sync.
    const double dv = distance(horizontal(va.position), horizontal(vb.position));
    const double dp = distance(horizontal(a.head_pos), horizontal(b.head_pos));
    CHECK(std::abs(dv - m.scale * dp) <= 1e-9 * m.scale * dp);

    // Injectivity: distinct physical points stay distinct.
    if (dp > 0.0) CHECK(dv > 0.0);

    // Eye law and midpoint.
    const auto eyes = eye_poses(m, field, a, 0.064);
    CHECK(eyes.modeled_eye_sep == m.scale * 0.064);
    CHECK(length(eyes.right_eye - eyes.left_eye) ==
          doctest::Approx(eyes.modeled_eye_sep).epsilon(1e-12));
    const Vec3 mid = 0.5 * (eyes.left_eye + eyes.right_eye);
    CHECK(length(mid - va.position) <= 1e-9 * std::max(1.0, length(va.position)));

    // Round trip through the inverse map.
    const Vec2 back = m.to_physical(horizontal(va.position));
    CHECK(distance(back, horizontal(a.head_pos)) <= 1e-9);
  }
}
