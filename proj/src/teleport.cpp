#include <algorithm>
#include <cmath>
#include <limits>

#include "gullivr/errors.hpp"
#include "gullivr/locomotion.hpp"

namespace gullivr {

namespace {

bool clip_axis(double o, double v, double lo, double hi, double& t0, double& t1) {
  if (v == 0.0) return o >= lo && o <= hi;
  double ta = (lo - o) / v;
  double tb = (hi - o) / v;
  if (ta > tb) std::swap(ta, tb);
  t0 = std::max(t0, ta);
  t1 = std::min(t1, tb);
  return t0 <= t1;
}

}  // namespace

std::optional<Vec3> teleport_arc(Vec3 origin, Vec3 dir, double launch_speed, double gravity,
                                 const HeightField& field) {
  if (!(launch_speed > 0.0)) throw DomainError("teleport_arc: launch speed must be positive");
  if (!(gravity > 0.0)) throw DomainError("teleport_arc: gravity must be positive");

  const Vec3 velocity = launch_speed * dir;
  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
  const Vec2 lo = field.origin();
  const Vec2 hi = field.max_corner();
  if (!clip_axis(origin.x, velocity.x, lo.x, hi.x, t0, t1)) return std::nullopt;
  if (!clip_axis(origin.z, velocity.z, lo.z, hi.z, t0, t1)) return std::nullopt;

  // Past this time the arc is below the lowest terrain, so a contact exists
  // before it whenever the arc is still over the field.
  const double drop = origin.y - field.min_height() + 1.0;
  const double disc = velocity.y * velocity.y + 2.0 * gravity * drop;
  const double t_floor = disc > 0.0 ? (velocity.y + std::sqrt(disc)) / gravity : 0.0;
  t1 = std::min(t1, std::max(t_floor, 0.0));
  if (t0 > t1) return std::nullopt;

  const auto arc = [&](double t) {
    return Vec3{origin.x + velocity.x * t, origin.y + velocity.y * t - 0.5 * gravity * t * t,
                origin.z + velocity.z * t};
  };
  const std::optional<double> t_hit =
      first_ground_contact(field, arc, t0, t1, kArcTimeStep, 1e-10);
  if (!t_hit) return std::nullopt;
  return arc(*t_hit);
}

RigMapping apply_teleport(const RigMapping& mapping, const PhysicalPose& pose, Vec3 landing) {
  if (mapping.scale != 1.0) throw StateError("apply_teleport: teleporting is only allowed in NM");
  return mapping.anchored_at(horizontal(pose.head_pos), horizontal(landing));
}

}  // namespace gullivr
