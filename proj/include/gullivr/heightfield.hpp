#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gullivr/geometry.hpp"

namespace gullivr {

/// Regular grid of terrain elevations. Node (ix, iz) sits at
/// origin + (ix, iz) * cell_size; heights are stored row-major with x
/// varying fastest. Immutable after construction.
class HeightField {
 public:
  HeightField(Vec2 origin, double cell_size, int nx, int nz, std::vector<double> heights);

  /// Constant field, handy for tests and flat scenarios.
  static HeightField flat(Vec2 origin, double cell_size, int nx, int nz, double height);

  Vec2 origin() const { return origin_; }
  Vec2 max_corner() const {
    return {origin_.x + (nx_ - 1) * cell_size_, origin_.z + (nz_ - 1) * cell_size_};
  }
  double cell_size() const { return cell_size_; }
  int nx() const { return nx_; }
  int nz() const { return nz_; }

  double at(int ix, int iz) const { return heights_[index(ix, iz)]; }
  std::span<const double> heights() const { return heights_; }

  double min_height() const { return min_height_; }
  double max_height() const { return max_height_; }

  /// Closed-rectangle containment test.
  bool contains(double x, double z) const;
  bool contains(Vec2 p) const { return contains(p.x, p.z); }

  friend bool operator==(const HeightField&, const HeightField&) = default;

 private:
  std::size_t index(int ix, int iz) const {
    return static_cast<std::size_t>(iz) * static_cast<std::size_t>(nx_) +
           static_cast<std::size_t>(ix);
  }

  Vec2 origin_;
  double cell_size_;
  int nx_;
  int nz_;
  std::vector<double> heights_;
  double min_height_ = 0.0;
  double max_height_ = 0.0;
};

enum class SmoothKernel { kGaussian, kBox };

/// Bilinear height at (x, z). Throws DomainError outside the field.
double sample_height(const HeightField& field, double x, double z);

/// Bilinear interpolant of one specific cell, evaluated at (x, z) without
/// bounds checks. Exposed so continuity across cell edges can be checked.
double sample_in_cell(const HeightField& field, int ix, int iz, double x, double z);

/// One-dimensional kernel taps for `radius`, spaced at the grid's cell size.
/// Gaussian: sigma = radius / 2, truncated at 3 sigma. Box: uniform weights
/// out to `radius`. Always odd length, centre tap first index = size/2.
std::vector<double> kernel_taps(double radius, double cell_size, SmoothKernel kind);

/// Convolves the heights with the chosen kernel. Weights are renormalised
/// over the taps that fall on the grid, so no heights are invented past the
/// edges. radius 0 returns an identical copy.
HeightField smooth(const HeightField& field, double radius, SmoothKernel kind);

/// Equivalent to sample_height(smooth(field, radius, kind), x, z) but only
/// convolves the four nodes around the query point.
double smoothed_sample(const HeightField& field, double radius, SmoothKernel kind, double x,
                       double z);

/// First intersection of the ray with the terrain surface, or nullopt if the
/// ray leaves the field first. `dir` must be unit length.
std::optional<Vec3> raycast(const HeightField& field, Vec3 origin, Vec3 dir);

/// Smallest t in [t0, t1] at which curve(t) touches the terrain, found by
/// marching with `step` and bisecting the first bracket down to `tolerance`.
/// The curve must stay over the field for all t in [t0, t1].
std::optional<double> first_ground_contact(const HeightField& field,
                                           const std::function<Vec3(double)>& curve, double t0,
                                           double t1, double step, double tolerance);

struct ValueNoiseParams {
  std::uint64_t seed = 1;
  double amplitude = 1.0;
  double wavelength = 32.0;
};

/// Seeded value-noise terrain, heights in [-amplitude, amplitude].
HeightField procedural_heightfield(Vec2 origin, double cell_size, int nx, int nz,
                                   const ValueNoiseParams& params);

/// Text format:
///   heightfield 1
///   origin <x> <z>
///   cell_size <m>
///   nx <n>
///   nz <n>
///   heights
///   <nx*nz values, row-major, x fastest>
HeightField read_heightfield(std::istream& in);
HeightField load_heightfield(const std::string& path);
void write_heightfield(std::ostream& out, const HeightField& field);

}  // namespace gullivr
