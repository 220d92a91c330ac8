#include "gullivr/heightfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "gullivr/errors.hpp"

namespace gullivr {

HeightField::HeightField(Vec2 origin, double cell_size, int nx, int nz, std::vector<double> heights)
    : origin_(origin), cell_size_(cell_size), nx_(nx), nz_(nz), heights_(std::move(heights)) {
  if (!(cell_size_ > 0.0) || !std::isfinite(cell_size_)) {
    throw DomainError("heightfield: cell_size must be positive and finite");
  }
  if (nx_ < 2 || nz_ < 2) throw DomainError("heightfield: nx and nz must be at least 2");
  if (heights_.size() != static_cast<std::size_t>(nx_) * static_cast<std::size_t>(nz_)) {
    std::ostringstream msg;
    msg << "heightfield: expected " << nx_ * nz_ << " heights, got " << heights_.size();
    throw DomainError(msg.str());
  }
  if (!std::isfinite(origin_.x) || !std::isfinite(origin_.z)) {
    throw DomainError("heightfield: origin must be finite");
  }
  for (double h : heights_) {
    if (!std::isfinite(h)) throw DomainError("heightfield: non-finite height");
  }
  const auto [lo, hi] = std::minmax_element(heights_.begin(), heights_.end());
  min_height_ = *lo;
  max_height_ = *hi;
}

HeightField HeightField::flat(Vec2 origin, double cell_size, int nx, int nz, double height) {
  return HeightField(origin, cell_size, nx, nz,
                     std::vector<double>(static_cast<std::size_t>(nx) * nz, height));
}

bool HeightField::contains(double x, double z) const {
  const Vec2 hi = max_corner();
  return x >= origin_.x && x <= hi.x && z >= origin_.z && z <= hi.z;
}

namespace {

struct CellCoord {
  int ix;
  int iz;
  double tx;
  double tz;
};

// Assumes (x, z) is inside the field (or within rounding of its edge).
CellCoord locate(const HeightField& f, double x, double z) {
  const double fx = (x - f.origin().x) / f.cell_size();
  const double fz = (z - f.origin().z) / f.cell_size();
  const int ix = std::clamp(static_cast<int>(std::floor(fx)), 0, f.nx() - 2);
  const int iz = std::clamp(static_cast<int>(std::floor(fz)), 0, f.nz() - 2);
  return {ix, iz, std::clamp(fx - ix, 0.0, 1.0), std::clamp(fz - iz, 0.0, 1.0)};
}

// Weighted form so t = 0 and t = 1 reproduce the node values exactly.
double bilerp(double h00, double h10, double h01, double h11, double tx, double tz) {
  const double near_row = (1.0 - tx) * h00 + tx * h10;
  const double far_row = (1.0 - tx) * h01 + tx * h11;
  return (1.0 - tz) * near_row + tz * far_row;
}

double sample_unchecked(const HeightField& f, double x, double z) {
  const CellCoord c = locate(f, x, z);
  return bilerp(f.at(c.ix, c.iz), f.at(c.ix + 1, c.iz), f.at(c.ix, c.iz + 1),
                f.at(c.ix + 1, c.iz + 1), c.tx, c.tz);
}

double clamped_sample(const HeightField& f, double x, double z) {
  const Vec2 lo = f.origin();
  const Vec2 hi = f.max_corner();
  return sample_unchecked(f, std::clamp(x, lo.x, hi.x), std::clamp(z, lo.z, hi.z));
}

// Renormalised 1-D convolution along x of row iz at column ix.
double convolve_row(const HeightField& f, const std::vector<double>& taps, int ix, int iz) {
  const int half = static_cast<int>(taps.size() / 2);
  const int lo = std::max(0, ix - half);
  const int hi = std::min(f.nx() - 1, ix + half);
  double sum = 0.0;
  double weight = 0.0;
  for (int i = lo; i <= hi; ++i) {
    const double w = taps[static_cast<std::size_t>(i - ix + half)];
    sum += w * f.at(i, iz);
    weight += w;
  }
  return sum / weight;
}

// Second (z) pass at a single node. `row_value(j)` supplies the x-pass result
// at (ix, j).
template <typename RowValue>
double convolve_column(const HeightField& f, const std::vector<double>& taps, int iz,
                       RowValue row_value) {
  const int half = static_cast<int>(taps.size() / 2);
  const int lo = std::max(0, iz - half);
  const int hi = std::min(f.nz() - 1, iz + half);
  double sum = 0.0;
  double weight = 0.0;
  for (int j = lo; j <= hi; ++j) {
    const double w = taps[static_cast<std::size_t>(j - iz + half)];
    sum += w * row_value(j);
    weight += w;
  }
  return sum / weight;
}

double smoothed_node(const HeightField& f, const std::vector<double>& taps, int ix, int iz) {
  return convolve_column(f, taps, iz, [&](int j) { return convolve_row(f, taps, ix, j); });
}

std::string coord_message(const char* what, double x, double z, const HeightField& f) {
  std::ostringstream msg;
  msg << what << ": (" << x << ", " << z << ") outside heightfield [" << f.origin().x << ", "
      << f.max_corner().x << "] x [" << f.origin().z << ", " << f.max_corner().z << "]";
  return msg.str();
}

// Narrows [t0, t1] to where origin + t * d stays within [lo, hi].
bool clip_axis(double o, double d, double lo, double hi, double& t0, double& t1) {
  if (d == 0.0) return o >= lo && o <= hi;
  double ta = (lo - o) / d;
  double tb = (hi - o) / d;
  if (ta > tb) std::swap(ta, tb);
  t0 = std::max(t0, ta);
  t1 = std::min(t1, tb);
  return t0 <= t1;
}

}  // namespace

double sample_height(const HeightField& field, double x, double z) {
  if (!field.contains(x, z)) throw DomainError(coord_message("sample_height", x, z, field));
  return sample_unchecked(field, x, z);
}

double sample_in_cell(const HeightField& field, int ix, int iz, double x, double z) {
  const double tx = (x - field.origin().x) / field.cell_size() - ix;
  const double tz = (z - field.origin().z) / field.cell_size() - iz;
  return bilerp(field.at(ix, iz), field.at(ix + 1, iz), field.at(ix, iz + 1),
                field.at(ix + 1, iz + 1), tx, tz);
}

std::vector<double> kernel_taps(double radius, double cell_size, SmoothKernel kind) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) {
    throw DomainError("smooth: radius must be a finite non-negative length");
  }
  if (radius == 0.0) return {1.0};
  if (kind == SmoothKernel::kGaussian) {
    const double sigma = radius / 2.0;
    const int half = static_cast<int>(std::floor(3.0 * sigma / cell_size + 1e-9));
    std::vector<double> taps(static_cast<std::size_t>(2 * half + 1));
    for (int k = -half; k <= half; ++k) {
      const double d = k * cell_size;
      taps[static_cast<std::size_t>(k + half)] = std::exp(-(d * d) / (2.0 * sigma * sigma));
    }
    return taps;
  }
  const int half = static_cast<int>(std::floor(radius / cell_size + 1e-9));
  return std::vector<double>(static_cast<std::size_t>(2 * half + 1), 1.0);
}

HeightField smooth(const HeightField& field, double radius, SmoothKernel kind) {
  const std::vector<double> taps = kernel_taps(radius, field.cell_size(), kind);
  if (taps.size() == 1) return field;

  const int nx = field.nx();
  const int nz = field.nz();
  std::vector<double> rows(static_cast<std::size_t>(nx) * nz);
  for (int iz = 0; iz < nz; ++iz) {
    for (int ix = 0; ix < nx; ++ix) {
      rows[static_cast<std::size_t>(iz) * nx + ix] = convolve_row(field, taps, ix, iz);
    }
  }
  std::vector<double> out(rows.size());
  for (int iz = 0; iz < nz; ++iz) {
    for (int ix = 0; ix < nx; ++ix) {
      out[static_cast<std::size_t>(iz) * nx + ix] = convolve_column(
          field, taps, iz, [&](int j) { return rows[static_cast<std::size_t>(j) * nx + ix]; });
    }
  }
  return HeightField(field.origin(), field.cell_size(), nx, nz, std::move(out));
}

double smoothed_sample(const HeightField& field, double radius, SmoothKernel kind, double x,
                       double z) {
  if (!field.contains(x, z)) throw DomainError(coord_message("smoothed_sample", x, z, field));
  const std::vector<double> taps = kernel_taps(radius, field.cell_size(), kind);
  if (taps.size() == 1) return sample_unchecked(field, x, z);
  const CellCoord c = locate(field, x, z);
  return bilerp(smoothed_node(field, taps, c.ix, c.iz), smoothed_node(field, taps, c.ix + 1, c.iz),
                smoothed_node(field, taps, c.ix, c.iz + 1),
                smoothed_node(field, taps, c.ix + 1, c.iz + 1), c.tx, c.tz);
}

std::optional<double> first_ground_contact(const HeightField& field,
                                           const std::function<Vec3(double)>& curve, double t0,
                                           double t1, double step, double tolerance) {
  const auto clearance = [&](double t) {
    const Vec3 p = curve(t);
    return p.y - clamped_sample(field, p.x, p.z);
  };
  double lo = t0;
  double g_lo = clearance(lo);
  if (g_lo <= 0.0) return lo;
  while (lo < t1) {
    const double hi = std::min(lo + step, t1);
    const double g_hi = clearance(hi);
    if (g_hi <= 0.0) {
      double a = lo;
      double b = hi;
      double g_a = g_lo;
      double g_b = g_hi;
      while (b - a > tolerance) {
        const double mid = 0.5 * (a + b);
        const double g_mid = clearance(mid);
        if (g_mid <= 0.0) {
          b = mid;
          g_b = g_mid;
        } else {
          a = mid;
          g_a = g_mid;
        }
      }
      // One secant step inside the final bracket; exact for planar ground.
      const double denom = g_a - g_b;
      return denom > 0.0 ? std::clamp(a + (b - a) * g_a / denom, a, b) : b;
    }
    lo = hi;
    g_lo = g_hi;
  }
  return std::nullopt;
}

std::optional<Vec3> raycast(const HeightField& field, Vec3 origin, Vec3 dir) {
  double t0 = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
  const Vec2 lo = field.origin();
  const Vec2 hi = field.max_corner();
  if (!clip_axis(origin.x, dir.x, lo.x, hi.x, t0, t1)) return std::nullopt;
  if (!clip_axis(origin.z, dir.z, lo.z, hi.z, t0, t1)) return std::nullopt;

  // Only the slab between the lowest and highest terrain can contain a hit.
  const double top = field.max_height();
  const double bottom = field.min_height();
  if (dir.y > 0.0) {
    if (origin.y > top) return std::nullopt;
    t1 = std::min(t1, (top - origin.y) / dir.y);
  } else if (dir.y < 0.0) {
    if (origin.y > top) t0 = std::max(t0, (origin.y - top) / -dir.y);
    t1 = std::min(t1, std::max(0.0, (origin.y - bottom) / -dir.y));
  } else if (origin.y > top) {
    return std::nullopt;
  }
  if (t0 > t1 || !std::isfinite(t1)) return std::nullopt;

  const auto along = [&](double t) { return origin + t * dir; };
  const std::optional<double> t_hit =
      first_ground_contact(field, along, t0, t1, 0.5 * field.cell_size(), 1e-7);
  if (!t_hit) return std::nullopt;
  Vec3 hit = along(*t_hit);
  if (*t_hit == t0 && hit.y < clamped_sample(field, hit.x, hit.z)) {
    // Ray starts (or enters the field) underground: report the surface above.
    hit.y = clamped_sample(field, hit.x, hit.z);
  }
  return hit;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double lattice_value(std::uint64_t seed, std::int64_t i, std::int64_t j) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ static_cast<std::uint64_t>(i));
  h = splitmix64(h ^ static_cast<std::uint64_t>(j));
  return static_cast<double>(h >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

double fade(double t) { return t * t * (3.0 - 2.0 * t); }

}  // namespace

HeightField procedural_heightfield(Vec2 origin, double cell_size, int nx, int nz,
                                   const ValueNoiseParams& params) {
  if (!(params.wavelength > 0.0)) throw DomainError("procedural: wavelength must be positive");
  if (!(params.amplitude >= 0.0)) throw DomainError("procedural: amplitude must be >= 0");
  if (nx < 2 || nz < 2) throw DomainError("procedural: nx and nz must be at least 2");
  std::vector<double> heights(static_cast<std::size_t>(nx) * nz);
  for (int iz = 0; iz < nz; ++iz) {
    for (int ix = 0; ix < nx; ++ix) {
      const double u = ix * cell_size / params.wavelength;
      const double v = iz * cell_size / params.wavelength;
      const auto i0 = static_cast<std::int64_t>(std::floor(u));
      const auto j0 = static_cast<std::int64_t>(std::floor(v));
      const double fu = fade(u - static_cast<double>(i0));
      const double fv = fade(v - static_cast<double>(j0));
      const double value =
          bilerp(lattice_value(params.seed, i0, j0), lattice_value(params.seed, i0 + 1, j0),
                 lattice_value(params.seed, i0, j0 + 1),
                 lattice_value(params.seed, i0 + 1, j0 + 1), fu, fv);
      heights[static_cast<std::size_t>(iz) * nx + ix] = params.amplitude * value;
    }
  }
  return HeightField(origin, cell_size, nx, nz, std::move(heights));
}

}  // namespace gullivr
