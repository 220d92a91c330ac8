#pragma once

#include "gullivr/geometry.hpp"
#include "gullivr/heightfield.hpp"

namespace gullivr {

inline constexpr double kDefaultPhysicalIpd = 0.064;
inline constexpr double kDefaultFootSmoothCoeff = 0.003;

/// Tracked head pose. head_pos.y is the height above the physical floor;
/// yaw follows the ground-plane heading convention of geometry.hpp and
/// pitch is positive looking up.
struct PhysicalPose {
  double t = 0.0;
  Vec3 head_pos;
  double head_yaw = 0.0;
  double head_pitch = 0.0;
};

/// Physical-to-virtual similarity transform plus the ground-relative vertical
/// rule:
///   virtual_xz = anchor + scale * R(yaw_offset) * physical_xz
///   virtual_y  = scale * physical_y + G(virtual_xz)
/// where G is the terrain smoothed with radius foot_smooth_coeff * scale.
/// scale == 1 is normal mode.
struct RigMapping {
  Vec2 anchor;
  double yaw_offset = 0.0;
  double scale = 1.0;
  double foot_smooth_coeff = kDefaultFootSmoothCoeff;
  SmoothKernel ground_kernel = SmoothKernel::kGaussian;

  Vec2 to_virtual(Vec2 physical_xz) const {
    return anchor + scale * rotate(physical_xz, yaw_offset);
  }
  Vec2 to_physical(Vec2 virtual_xz) const {
    return (1.0 / scale) * rotate(virtual_xz - anchor, -yaw_offset);
  }
  /// Smoothing radius of the "giant foot" at the current scale.
  double ground_radius() const { return foot_smooth_coeff * scale; }

  /// Returns a copy re-anchored so that `physical_xz` maps onto `virtual_xz`.
  RigMapping anchored_at(Vec2 physical_xz, Vec2 virtual_xz) const {
    RigMapping m = *this;
    m.anchor = virtual_xz - scale * rotate(physical_xz, yaw_offset);
    return m;
  }
};

struct VirtualHeadPose {
  Vec3 position;
  double yaw = 0.0;
  double pitch = 0.0;
};

struct EyePoses {
  Vec3 left_eye;
  Vec3 right_eye;
  double modeled_eye_sep = 0.0;
};

/// Throws DomainError if the mapped point falls outside the field.
VirtualHeadPose map_pose(const RigMapping& mapping, const HeightField& field,
                         const PhysicalPose& pose);

/// Eyes sit symmetrically about the mapped head point along the head's right
/// axis (yaw only), separated by scale * physical_ipd.
EyePoses eye_poses(const RigMapping& mapping, const HeightField& field, const PhysicalPose& pose,
                   double physical_ipd = kDefaultPhysicalIpd);

/// Right axis for a virtual yaw: (-sin yaw, 0, cos yaw).
Vec3 right_axis(double yaw);

/// Smoothed ground elevation under the player's mapped position.
double ground_height_under(const RigMapping& mapping, const HeightField& field,
                           const PhysicalPose& pose);

/// Same as above for an arbitrary virtual ground point.
double ground_height_at(const RigMapping& mapping, const HeightField& field, Vec2 virtual_xz);

}  // namespace gullivr
