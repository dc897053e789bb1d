#include <doctest.h>

#include <cmath>
#include <vector>

#include "sublorentz/errors.hpp"
#include "sublorentz/nonholonomy.hpp"

using namespace sublorentz;

TEST_CASE("frame brackets vanish for the zero potential") {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Vec5 b = frame_bracket(zero_potential(), {1, 2, 3, 4}, i, j);
      for (double v : b) CHECK(v == 0.0);
    }
}

TEST_CASE("constant magnetic field: [e2,e3] points up the fiber") {
  const PotentialField mag = constant_magnetic_potential(1.0);
  const Vec4 x{0.0, 0.0, 0.7, -0.2};
  const Vec5 b = frame_bracket(mag, x, 2, 3);
  for (int c = 0; c < 4; ++c) CHECK(b[c] == 0.0);
  CHECK(b[4] == doctest::Approx(1.0));  // -F_23 = phi
}

TEST_CASE("bracket antisymmetry and agreement of the two computations") {
  PotentialField pot;
  pot.eval = [](const Vec4& x) {
    return Vec4{x[1] * x[1], std::sin(x[2]), x[0] * x[3], std::cos(x[1])};
  };
  const Vec4 x{0.4, -0.8, 1.2, 0.3};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const Vec5 b = frame_bracket(pot, x, i, j);
      const Vec5 m = frame_bracket(pot, x, j, i);
      CHECK(b[4] == -m[4]);
      const Vec5 fd = frame_bracket_fd(pot, x, i, j);
      CHECK(std::abs(b[4] - fd[4]) < 1e-10);
    }
}

TEST_CASE("growth vector with and without field") {
  const GrowthVector mag =
      growth_vector(constant_magnetic_potential(1.0), {0, 0, 0, 0.5});
  CHECK(mag.dims == std::vector<int>{4, 5});
  CHECK(mag.degree == 2);

  const GrowthVector zero = growth_vector(zero_potential(), {0, 0, 0, 0});
  CHECK(zero.dims == std::vector<int>{4});
  CHECK(zero.degree == 1);
}

TEST_CASE("growth vector is gauge invariant") {
  const PotentialField base = constant_magnetic_potential(1.0);
  // A + grad(x0*x1 + 0.5*x2^2) evaluated by hand.
  PotentialField shifted;
  shifted.eval = [](const Vec4& x) {
    return Vec4{x[1], x[0], 1.0 * x[3] + x[2], 0.0};
  };
  const Vec4 x{0.3, 0.6, -0.1, 0.9};
  const GrowthVector a = growth_vector(base, x);
  const GrowthVector b = growth_vector(shifted, x);
  CHECK(a.dims == b.dims);
  CHECK(a.degree == b.degree);
}

TEST_CASE("box exponents from growth vectors") {
  GrowthVector full;
  full.dims = {4, 5};
  full.degree = 2;
  CHECK(box_exponents(full).phi == std::vector<int>{1, 1, 1, 1, 2});

  GrowthVector planar;
  planar.dims = {2, 3};
  planar.degree = 2;
  CHECK(box_exponents(planar).phi == std::vector<int>{1, 1, 2});

  GrowthVector flat;
  flat.dims = {4};
  flat.degree = 1;
  CHECK(box_exponents(flat).phi == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("box exponents match growth vector at field/no-field points") {
  // Piecewise potential: magnetic for x0 > 0, zero well away from it.
  PotentialField piecewise;
  piecewise.eval = [](const Vec4& x) {
    if (x[0] > 0.0) return Vec4{0.0, 0.0, x[3], 0.0};
    return Vec4{};
  };
  const BoxExponents on =
      box_exponents(growth_vector(piecewise, {5.0, 0, 0, 0.4}));
  CHECK(on.phi == std::vector<int>{1, 1, 1, 1, 2});
  const BoxExponents off =
      box_exponents(growth_vector(piecewise, {-5.0, 0, 0, 0.4}));
  CHECK(off.phi == std::vector<int>{1, 1, 1, 1});
}

TEST_CASE("box_check: fiber reach scales like eps^2, base like eps") {
  FramedDistribution dist{constant_magnetic_potential(1.0), minkowski_metric()};
  ParticleParams particle{1.0, 0.0};
  const std::vector<double> eps = {0.4, 0.2, 0.1, 0.05};
  const BoxCheckReport r = box_check(dist, particle, eps, 81);
  CHECK(!r.exact_containment);
  CHECK(r.fiber_slope >= 1.95);
  CHECK(r.fiber_slope <= 2.3);
  CHECK(r.base_slope == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("box_check: zero potential keeps the fiber exactly at zero") {
  FramedDistribution dist{zero_potential(), minkowski_metric()};
  ParticleParams particle{1.0, 0.0};
  const std::vector<double> eps = {0.4, 0.2};
  const BoxCheckReport r = box_check(dist, particle, eps, 16);
  CHECK(r.exact_containment);
  for (double v : r.max_fiber) CHECK(v == 0.0);
}

TEST_CASE("box_check input validation") {
  FramedDistribution dist{zero_potential(), minkowski_metric()};
  ParticleParams particle{1.0, 0.0};
  const std::vector<double> increasing = {0.1, 0.2};
  CHECK_THROWS_AS(box_check(dist, particle, increasing, 16), SpecError);
  const std::vector<double> single = {0.1};
  CHECK_THROWS_AS(box_check(dist, particle, single, 16), SpecError);
}

TEST_CASE("frame index validation") {
  CHECK_THROWS_AS(frame_bracket(zero_potential(), {0, 0, 0, 0}, 0, 4),
                  SpecError);
  CHECK_THROWS_AS(frame_bracket_fd(zero_potential(), {0, 0, 0, 0}, -1, 2),
                  SpecError);
}
