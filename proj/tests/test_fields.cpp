#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "sublorentz/errors.hpp"
#include "sublorentz/fields.hpp"

using namespace sublorentz;

namespace {

// Test-side central-difference oracle for dA_k/dx^j, independent of the
// library's derivative path.
Mat4 fd_jacobian_oracle(const PotentialField& pot, const Vec4& x, double h0) {
  Mat4 jac{};
  for (int j = 0; j < 4; ++j) {
    const double h = h0 * std::max(1.0, std::abs(x[j]));
    Vec4 xp = x, xm = x;
    xp[j] += h;
    xm[j] -= h;
    const Vec4 ap = pot.eval(xp);
    const Vec4 am = pot.eval(xm);
    for (int k = 0; k < 4; ++k) jac[k][j] = (ap[k] - am[k]) / (2.0 * h);
  }
  return jac;
}

// Random metric with guaranteed (+,-,-,-) signature: congruence transform
// of the diagonal by a near-identity factor.
DistributionMetric random_signature_metric(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-0.3, 0.3);
  Mat4 l = identity4();
  for (auto& row : l)
    for (double& v : row) v += d(rng);
  Mat4 eta{};
  eta[0][0] = 1.0;
  eta[1][1] = eta[2][2] = eta[3][3] = -1.0;
  const Mat4 g = matmul4(transpose4(l), matmul4(eta, l));
  return constant_metric(g);
}

}  // namespace

TEST_CASE("faraday of the zero potential vanishes") {
  const FaradayTensor f = faraday(zero_potential(), {0.3, -0.7, 0.1, 2.0});
  CHECK(f.max_abs() == 0.0);
}

TEST_CASE("faraday of the constant magnetic potential") {
  const FaradayTensor f =
      faraday(constant_magnetic_potential(1.0), {0.0, 0.0, 0.5, -1.2});
  CHECK(f.f[2][3] == doctest::Approx(-1.0));
  CHECK(f.f[3][2] == doctest::Approx(1.0));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!((i == 2 && j == 3) || (i == 3 && j == 2))) CHECK(f.f[i][j] == 0.0);
}

TEST_CASE("faraday of A = (x1, 0, 0, 0) against the finite-difference oracle") {
  PotentialField pot;
  pot.eval = [](const Vec4& x) { return Vec4{x[1], 0.0, 0.0, 0.0}; };
  const Vec4 x{0.3, -0.7, 0.1, 2.0};
  const FaradayTensor f = faraday(pot, x);
  CHECK(f.f[0][1] == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(f.f[1][0] == doctest::Approx(1.0).epsilon(1e-9));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!((i == 0 && j == 1) || (i == 1 && j == 0)))
        CHECK(f.f[i][j] == doctest::Approx(0.0).epsilon(1e-9));
  // Every entry against the oracle at a different step.
  const Mat4 jac = fd_jacobian_oracle(pot, x, 1e-5);
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      CHECK(f.f[j][k] ==
            doctest::Approx(jac[k][j] - jac[j][k]).epsilon(1e-8));
}

TEST_CASE("faraday is exactly antisymmetric for arbitrary fields") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  PotentialField pot;
  pot.eval = [](const Vec4& x) {
    return Vec4{std::sin(x[1] * x[2]), std::exp(0.1 * x[0]),
                x[3] * x[3] * x[1], std::cos(x[0] + x[2])};
  };
  for (int trial = 0; trial < 20; ++trial) {
    const Vec4 x{d(rng), d(rng), d(rng), d(rng)};
    const FaradayTensor f = faraday(pot, x);
    for (int i = 0; i < 4; ++i) {
      CHECK(f.f[i][i] == 0.0);
      for (int j = 0; j < 4; ++j) CHECK(f.f[i][j] == -f.f[j][i]);
    }
  }
}

TEST_CASE("gauge invariance of faraday within 10*fd_step^2") {
  // Adding grad f leaves F unchanged; checked here at an fd_step where the
  // truncation term dominates rounding.
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const double fd_step = 1e-5;

  PotentialField base;
  base.eval = [](const Vec4& x) {
    return Vec4{x[1] * x[2], -x[0], 0.5 * x[3] * x[3], x[0] * x[1]};
  };
  base.fd_step = fd_step;

  for (int trial = 0; trial < 10; ++trial) {
    // A random cubic gauge function.
    std::vector<MonomialTerm> terms;
    for (int t = 0; t < 5; ++t) {
      MonomialTerm m{d(rng), {0, 0, 0, 0}};
      m.exps[static_cast<int>(std::abs(d(rng)) * 3.99)] = 1 + (t % 3);
      terms.push_back(m);
    }
    const Polynomial4 f{terms};

    PotentialField shifted;
    shifted.fd_step = fd_step;
    shifted.eval = [&base, f](const Vec4& x) {
      Vec4 a = base.eval(x);
      const Vec4 g = f.gradient_at(x);
      for (int i = 0; i < 4; ++i) a[i] += g[i];
      return a;
    };

    const Vec4 x{d(rng), d(rng), d(rng), d(rng)};
    const FaradayTensor fa = faraday(base, x);
    const FaradayTensor fb = faraday(shifted, x);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(std::abs(fa.f[i][j] - fb.f[i][j]) <= 10.0 * fd_step * fd_step);
  }
}

TEST_CASE("analytic vs finite-difference jacobian: halving fd_step cuts the "
          "error ~4x") {
  // Cubic component so the third derivative (the truncation constant) is
  // nonzero and the ratio is clean.
  Polynomial4 cubic{{MonomialTerm{1.0, {0, 0, 0, 3}}}};
  std::array<Polynomial4, 4> comp;
  comp[2] = cubic;
  const PotentialField analytic = polynomial_potential(comp);

  PotentialField fd = analytic;
  fd.jacobian = nullptr;

  const Vec4 x{0.0, 0.0, 0.0, 0.7};
  const Mat4 exact = analytic.jacobian_at(x);

  const auto err_at = [&](double h) {
    PotentialField probe = fd;
    probe.fd_step = h;
    const Mat4 jac = probe.jacobian_at(x);
    double worst = 0.0;
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j)
        worst = std::max(worst, std::abs(jac[k][j] - exact[k][j]));
    return worst;
  };

  const double e1 = err_at(1e-3);
  const double e2 = err_at(5e-4);
  CHECK(e1 > 1e-9);  // truncation-dominated regime
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("non-finite potential derivative raises EvaluationError naming the "
          "component") {
  PotentialField pot;
  pot.eval = [](const Vec4& x) {
    return Vec4{0.0, 0.0, x[3] > 0.5 ? std::numeric_limits<double>::quiet_NaN()
                                     : 0.0,
                0.0};
  };
  try {
    faraday(pot, {0.0, 0.0, 0.0, 0.5});
    FAIL("expected EvaluationError");
  } catch (const EvaluationError& e) {
    CHECK(std::string(e.what()).find("dA_2") != std::string::npos);
  }
}

TEST_CASE("horizontality defect examples") {
  Event5 at;
  CHECK(horizontality_defect(zero_potential(), at, {1, 0, 0, 0, 0}) == 0.0);

  const PotentialField mag = constant_magnetic_potential(1.0);
  at.base = {0.0, 0.0, 0.0, 2.0};  // x3 = 2
  CHECK(horizontality_defect(mag, at, {0, 0, 1, 0, -2}) == 0.0);
  CHECK(horizontality_defect(mag, at, {0, 0, 1, 0, 0}) == 2.0);
}

TEST_CASE("lift_velocity makes the 5-velocity horizontal") {
  CHECK(lift_velocity(zero_potential(), {1, 2, 3, 4}, {5, 6, 7, 8}) == 0.0);

  const PotentialField mag = constant_magnetic_potential(1.0);
  CHECK(lift_velocity(mag, {0, 0, 0, 0.5}, {0, 0, 1, 0}) ==
        doctest::Approx(-0.5));

  PotentialField ones;
  ones.eval = [](const Vec4&) { return Vec4{1, 1, 1, 1}; };
  CHECK(lift_velocity(ones, {0, 0, 0, 0}, {1, 1, 1, 1}) == doctest::Approx(-4.0));

  // Property: the lifted defect vanishes to a few ulps for random fields.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  PotentialField pot;
  pot.eval = [](const Vec4& x) {
    return Vec4{x[0] * x[1], std::sin(x[2]), x[3], std::cos(x[0])};
  };
  for (int trial = 0; trial < 50; ++trial) {
    Event5 ev;
    ev.base = {d(rng), d(rng), d(rng), d(rng)};
    const Vec4 u{d(rng), d(rng), d(rng), d(rng)};
    const double v4 = lift_velocity(pot, ev.base, u);
    const double defect =
        horizontality_defect(pot, ev, {u[0], u[1], u[2], u[3], v4});
    double scale = std::abs(v4);
    for (int i = 0; i < 4; ++i) scale = std::max(scale, std::abs(u[i]));
    CHECK(std::abs(defect) <=
          4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale));
  }
}

TEST_CASE("pseudonorm on the diagonal metric") {
  const DistributionMetric g = minkowski_metric();
  CHECK(pseudonorm(g, {0, 0, 0, 0}, {1, 0, 0, 0}) == doctest::Approx(1.0));
  CHECK(pseudonorm(g, {0, 0, 0, 0}, {1, 1, 0, 0}) == doctest::Approx(0.0));
  CHECK(pseudonorm(g, {0, 0, 0, 0}, {2, 1, 1, 1}) == doctest::Approx(1.0));
}

TEST_CASE("pseudonorm symmetry and polarization identity") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    const DistributionMetric g = random_signature_metric(rng);
    const Vec4 x{};
    const Vec4 u{d(rng), d(rng), d(rng), d(rng)};
    const Vec4 v{d(rng), d(rng), d(rng), d(rng)};
    const Vec4 mu{-u[0], -u[1], -u[2], -u[3]};
    CHECK(pseudonorm(g, x, u) == pseudonorm(g, x, mu));

    // B(u,v) two ways: polarization of Q vs direct bilinear evaluation.
    Vec4 upv, umv;
    for (int i = 0; i < 4; ++i) {
      upv[i] = u[i] + v[i];
      umv[i] = u[i] - v[i];
    }
    const double via_polarization =
        0.25 * (pseudonorm(g, x, upv) - pseudonorm(g, x, umv));
    const Mat4 gm = g.eval(x);
    double direct = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) direct += gm[i][j] * u[i] * v[j];
    CHECK(via_polarization == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("cone classification") {
  const DistributionMetric g = minkowski_metric();
  const Vec4 x{};
  CHECK(cone_membership(g, x, {1, 0, 0, 0}) == ConeClass::timelike_future);
  CHECK(cone_membership(g, x, {1, 1, 0, 0}) == ConeClass::null_future);
  CHECK(cone_membership(g, x, {-1, 0, 0, 0}) == ConeClass::past);
  CHECK(cone_membership(g, x, {0, 1, 0, 0}) == ConeClass::spacelike);
  CHECK(cone_membership(g, x, {0.5, 2, 0, 0}) == ConeClass::spacelike);
  CHECK(cone_membership(g, x, {0, 0, 0, 0}) == ConeClass::zero);
  CHECK(cone_membership(g, x, {-1, -1, 0, 0}) == ConeClass::past);
}

TEST_CASE("signature validation rejects wrong signatures and asymmetry") {
  Mat4 twoplus{};
  twoplus[0][0] = 1.0;
  twoplus[1][1] = 1.0;
  twoplus[2][2] = -1.0;
  twoplus[3][3] = -1.0;
  CHECK_THROWS_AS(constant_metric(twoplus), MetricError);

  Mat4 asym{};
  asym[0][0] = 1.0;
  asym[1][1] = asym[2][2] = asym[3][3] = -1.0;
  asym[0][1] = 0.25;  // no mirror entry
  CHECK_THROWS_AS(constant_metric(asym), MetricError);

  Mat4 degenerate{};
  degenerate[0][0] = 1.0;
  degenerate[1][1] = degenerate[2][2] = -1.0;  // g_33 = 0
  CHECK_THROWS_AS(constant_metric(degenerate), MetricError);
}

TEST_CASE("named potential keys") {
  CHECK(named_potential("zero", 0.0).eval(Vec4{1, 2, 3, 4})[2] == 0.0);
  CHECK(named_potential("constant-magnetic", 2.0).eval(Vec4{0, 0, 0, 3})[2] ==
        doctest::Approx(6.0));
  CHECK(named_potential("constant-electric", 2.0).eval(Vec4{0, 5, 0, 0})[0] ==
        doctest::Approx(-10.0));
  CHECK_THROWS_AS(named_potential("warp-field", 1.0), SpecError);
}
