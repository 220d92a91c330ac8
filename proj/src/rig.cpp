#include "gullivr/rig.hpp"

#include <cmath>
#include <sstream>

#include "gullivr/errors.hpp"

namespace gullivr {

namespace {

Vec2 mapped_ground_point(const RigMapping& mapping, const HeightField& field,
                         const PhysicalPose& pose) {
  if (!(mapping.scale > 0.0)) throw DomainError("rig: scale must be positive");
  const Vec2 v = mapping.to_virtual(horizontal(pose.head_pos));
  if (!field.contains(v)) {
    std::ostringstream msg;
    msg << "rig: physical (" << pose.head_pos.x << ", " << pose.head_pos.z
        << ") maps to virtual (" << v.x << ", " << v.z << ") outside the heightfield";
    throw DomainError(msg.str());
  }
  return v;
}

}  // namespace

double ground_height_at(const RigMapping& mapping, const HeightField& field, Vec2 virtual_xz) {
  return smoothed_sample(field, mapping.ground_radius(), mapping.ground_kernel, virtual_xz.x,
                         virtual_xz.z);
}

double ground_height_under(const RigMapping& mapping, const HeightField& field,
                           const PhysicalPose& pose) {
  return ground_height_at(mapping, field, mapped_ground_point(mapping, field, pose));
}

VirtualHeadPose map_pose(const RigMapping& mapping, const HeightField& field,
                         const PhysicalPose& pose) {
  const Vec2 v = mapped_ground_point(mapping, field, pose);
  const double ground = ground_height_at(mapping, field, v);
  return {{v.x, mapping.scale * pose.head_pos.y + ground, v.z},
          pose.head_yaw + mapping.yaw_offset,
          pose.head_pitch};
}

Vec3 right_axis(double yaw) { return {-std::sin(yaw), 0.0, std::cos(yaw)}; }

EyePoses eye_poses(const RigMapping& mapping, const HeightField& field, const PhysicalPose& pose,
                   double physical_ipd) {
  if (!(physical_ipd > 0.0)) throw DomainError("eye_poses: physical_ipd must be positive");
  const VirtualHeadPose head = map_pose(mapping, field, pose);
  const double sep = mapping.scale * physical_ipd;
  const Vec3 half_offset = (0.5 * sep) * right_axis(head.yaw);
  return {head.position - half_offset, head.position + half_offset, sep};
}

}  // namespace gullivr
