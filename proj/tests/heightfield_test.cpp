#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "gullivr/errors.hpp"
#include "gullivr/heightfield.hpp"

using namespace gullivr;

namespace {

HeightField random_field(std::mt19937_64& rng, int nx, int nz, double cell = 1.0) {
  std::uniform_real_distribution<double> h(-5.0, 5.0);
  std::vector<double> heights(static_cast<std::size_t>(nx) * nz);
  for (double& v : heights) v = h(rng);
  return HeightField({-3.0, 2.0}, cell, nx, nz, std::move(heights));
}

// Direct 2-D convolution over the whole grid, renormalised over in-grid taps.
// Deliberately shares nothing with the separable implementation.
HeightField brute_force_smooth(const HeightField& f, double radius, SmoothKernel kind) {
  const double cs = f.cell_size();
  const double sigma = radius / 2.0;
  const double reach = kind == SmoothKernel::kGaussian ? 3.0 * sigma : radius;
  const double limit = std::floor(reach / cs + 1e-9) * cs + 1e-12;
  std::vector<double> out;
  for (int iz = 0; iz < f.nz(); ++iz) {
    for (int ix = 0; ix < f.nx(); ++ix) {
      double sum = 0.0;
      double weight = 0.0;
      for (int jz = 0; jz < f.nz(); ++jz) {
        for (int jx = 0; jx < f.nx(); ++jx) {
          const double dx = (jx - ix) * cs;
          const double dz = (jz - iz) * cs;
          if (std::abs(dx) > limit || std::abs(dz) > limit) continue;
          const double w = kind == SmoothKernel::kGaussian
                               ? std::exp(-(dx * dx + dz * dz) / (2.0 * sigma * sigma))
                               : 1.0;
          sum += w * f.at(jx, jz);
          weight += w;
        }
      }
      out.push_back(sum / weight);
    }
  }
  return HeightField(f.origin(), cs, f.nx(), f.nz(), std::move(out));
}

}  // namespace

TEST_CASE("construction rejects malformed grids") {
  CHECK_THROWS_AS(HeightField({}, 0.0, 2, 2, {0, 0, 0, 0}), DomainError);
  CHECK_THROWS_AS(HeightField({}, 1.0, 1, 2, {0, 0}), DomainError);
  CHECK_THROWS_AS(HeightField({}, 1.0, 2, 2, {0, 0, 0}), DomainError);
  CHECK_THROWS_AS(HeightField({}, 1.0, 2, 2, {0, 0, NAN, 0}), DomainError);
}

TEST_CASE("sample_height") {
  SUBCASE("constant field") {
    const auto f = HeightField::flat({-2, -2}, 0.5, 9, 9, 2.0);
    CHECK(sample_height(f, 0.3, -1.1) == 2.0);
    CHECK(sample_height(f, 2.0, 2.0) == 2.0);
  }
  SUBCASE("exact at a node") {
    std::vector<double> h(16, 0.0);
    h[1 * 4 + 2] = 5.3;
    const HeightField f({0, 0}, 1.0, 4, 4, h);
    CHECK(sample_height(f, 2.0, 1.0) == 5.3);
  }
  SUBCASE("cell centre is the corner average") {
    const HeightField f({0, 0}, 1.0, 2, 2, {0, 0, 0, 4});
    CHECK(sample_height(f, 0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("out of bounds names the coordinate") {
    const auto f = HeightField::flat({0, 0}, 1.0, 3, 3, 0.0);
    try {
      (void)sample_height(f, 2.5, 7.25);
      FAIL("expected DomainError");
    } catch (const DomainError& e) {
      CHECK(std::string(e.what()).find("7.25") != std::string::npos);
    }
  }
}

TEST_CASE("bilinear sampling is exact at nodes and continuous across cells") {
  std::mt19937_64 rng(11);
  const HeightField f = random_field(rng, 12, 9, 0.5);
  double max_abs = 0.0;
  for (double h : f.heights()) max_abs = std::max(max_abs, std::abs(h));
  for (int iz = 0; iz < f.nz(); ++iz) {
    for (int ix = 0; ix < f.nx(); ++ix) {
      CHECK(sample_height(f, f.origin().x + ix * 0.5, f.origin().z + iz * 0.5) == f.at(ix, iz));
    }
  }
  std::uniform_real_distribution<double> t(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    // Shared vertical edge between cell (ix-1, iz) and (ix, iz).
    const int ix = 1 + static_cast<int>(t(rng) * (f.nx() - 2));
    const int iz = static_cast<int>(t(rng) * (f.nz() - 1)) % (f.nz() - 1);
    const double x = f.origin().x + ix * 0.5;
    const double z = f.origin().z + (iz + t(rng)) * 0.5;
    CHECK(std::abs(sample_in_cell(f, ix - 1, iz, x, z) - sample_in_cell(f, ix, iz, x, z)) <=
          1e-12 * max_abs);
  }
}

TEST_CASE("smooth") {
  std::mt19937_64 rng(5);
  SUBCASE("zero radius is bit-identical") {
    const HeightField f = random_field(rng, 10, 7);
    CHECK(smooth(f, 0.0, SmoothKernel::kGaussian) == f);
    CHECK(smooth(f, 0.0, SmoothKernel::kBox) == f);
  }
  SUBCASE("constants survive any radius") {
    const auto f = HeightField::flat({0, 0}, 1.0, 8, 6, 3.25);
    for (double r : {0.5, 2.0, 7.0, 40.0}) {
      for (auto kind : {SmoothKernel::kGaussian, SmoothKernel::kBox}) {
        const HeightField s = smooth(f, r, kind);
        for (double h : s.heights()) CHECK(h == doctest::Approx(3.25).epsilon(1e-14));
      }
    }
  }
  SUBCASE("impulse response at the centre equals the central kernel weight") {
    std::vector<double> h(81, 0.0);
    h[4 * 9 + 4] = 1.0;
    const HeightField f({0, 0}, 1.0, 9, 9, h);
    const HeightField s = smooth(f, 2.0, SmoothKernel::kGaussian);
    const double oracle = brute_force_smooth(f, 2.0, SmoothKernel::kGaussian).at(4, 4);
    CHECK(s.at(4, 4) == doctest::Approx(oracle).epsilon(1e-12));
    // 1 / (sum over the 7x7 truncated kernel) with sigma = one cell.
    CHECK(s.at(4, 4) == doctest::Approx(0.15924112569070242).epsilon(1e-12));
  }
  SUBCASE("negative radius") {
    const auto f = HeightField::flat({0, 0}, 1.0, 3, 3, 0.0);
    CHECK_THROWS_AS(smooth(f, -0.1, SmoothKernel::kBox), DomainError);
  }
}

TEST_CASE("smooth matches the direct convolution oracle and stays within the range") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> radius(0.0, 6.0);
  std::uniform_int_distribution<int> dim(2, 24);
  for (int trial = 0; trial < 30; ++trial) {
    const HeightField f = random_field(rng, dim(rng), dim(rng), 0.75);
    const double r = radius(rng);
    for (auto kind : {SmoothKernel::kGaussian, SmoothKernel::kBox}) {
      const HeightField s = smooth(f, r, kind);
      const HeightField oracle = brute_force_smooth(f, r, kind);
      for (std::size_t i = 0; i < s.heights().size(); ++i) {
        const double expect = oracle.heights()[i];
        CHECK(std::abs(s.heights()[i] - expect) <= 1e-9 * std::max(1.0, std::abs(expect)));
        CHECK(s.heights()[i] >= f.min_height() - 1e-12);
        CHECK(s.heights()[i] <= f.max_height() + 1e-12);
      }
    }
  }
}

TEST_CASE("smoothed_sample agrees with smoothing the whole field") {
  std::mt19937_64 rng(3);
  const HeightField f = random_field(rng, 20, 16, 1.0);
  std::uniform_real_distribution<double> ux(f.origin().x, f.max_corner().x);
  std::uniform_real_distribution<double> uz(f.origin().z, f.max_corner().z);
  for (double r : {0.0, 0.2, 1.3, 4.0}) {
    const HeightField s = smooth(f, r, SmoothKernel::kGaussian);
    for (int i = 0; i < 50; ++i) {
      const double x = ux(rng);
      const double z = uz(rng);
      CHECK(smoothed_sample(f, r, SmoothKernel::kGaussian, x, z) == sample_height(s, x, z));
    }
  }
}

TEST_CASE("raycast") {
  const auto flat = HeightField::flat({-20, -20}, 1.0, 41, 41, 0.0);
  SUBCASE("straight down") {
    const auto hit = raycast(flat, {0, 10, 0}, {0, -1, 0});
    REQUIRE(hit);
    CHECK(hit->x == 0.0);
    CHECK(hit->y == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(hit->z == 0.0);
  }
  SUBCASE("45 degrees down along +x hits at x = 10") {
    const double c = std::sqrt(0.5);
    const auto hit = raycast(flat, {0, 10, 0}, {c, -c, 0});
    REQUIRE(hit);
    CHECK(hit->x == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(std::abs(hit->y) <= 1e-9);
    CHECK(hit->z == 0.0);
  }
  SUBCASE("upward ray misses") {
    CHECK_FALSE(raycast(flat, {0, 10, 0}, normalized(Vec3{0.3, 1.0, 0.1})));
  }
  SUBCASE("ray leaving the field before reaching the ground misses") {
    CHECK_FALSE(raycast(flat, {0, 10, 0}, normalized(Vec3{1.0, -0.1, 0.0})));
  }
  SUBCASE("hits lie on the surface of random terrain") {
    std::mt19937_64 rng(17);
    const HeightField f = procedural_heightfield({-30, -30}, 0.5, 121, 121, {4, 6.0, 8.0});
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int hits = 0;
    for (int i = 0; i < 300; ++i) {
      const Vec3 origin{u(rng) * 20, 10.0 + 5 * u(rng), u(rng) * 20};
      const Vec3 dir = normalized(Vec3{u(rng), -1.0 + 0.5 * u(rng), u(rng)});
      if (const auto hit = raycast(f, origin, dir)) {
        ++hits;
        CHECK(std::abs(hit->y - sample_height(f, hit->x, hit->z)) <= 1e-5);
      }
    }
    CHECK(hits > 200);
  }
}

TEST_CASE("heightfield text format round-trips") {
  const HeightField f = procedural_heightfield({-1.5, 2.25}, 0.5, 5, 4, {9, 2.0, 3.0});
  std::stringstream buf;
  write_heightfield(buf, f);
  CHECK(read_heightfield(buf) == f);

  std::istringstream bad("heightfield 1\norigin 0 0\ncell_size 1\nnx 2\nnz 2\nheights\n1 2 3\n");
  CHECK_THROWS_AS(read_heightfield(bad), ConfigError);
}

TEST_CASE("procedural terrain is deterministic and bounded") {
  const auto a = procedural_heightfield({0, 0}, 1.0, 30, 30, {42, 3.0, 10.0});
  const auto b = procedural_heightfield({0, 0}, 1.0, 30, 30, {42, 3.0, 10.0});
  const auto c = procedural_heightfield({0, 0}, 1.0, 30, 30, {43, 3.0, 10.0});
  CHECK(a == b);
  CHECK_FALSE(a == c);
  CHECK(a.max_height() <= 3.0);
  CHECK(a.min_height() >= -3.0);
}
