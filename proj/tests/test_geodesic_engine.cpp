#include <doctest.h>

#include <cmath>
#include <random>

#include "sublorentz/errors.hpp"
#include "sublorentz/geodesic_engine.hpp"
#include "sublorentz/magnetic_analytic.hpp"

using namespace sublorentz;

namespace {

FramedDistribution magnetic_dist(double phi) {
  return {constant_magnetic_potential(phi), minkowski_metric()};
}

// Metric with x-dependence and guaranteed signature: g = L(x)^T eta L(x).
DistributionMetric wavy_metric(unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-0.15, 0.15);
  Mat4 r0{}, r1{};
  for (auto& row : r0)
    for (double& v : row) v = d(rng);
  for (auto& row : r1)
    for (double& v : row) v = d(rng);
  DistributionMetric m;
  m.eval = [r0, r1](const Vec4& x) {
    Mat4 l = identity4();
    const double wobble = std::sin(x[0] + 0.3 * x[1] - 0.7 * x[3]);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) l[i][j] += r0[i][j] + r1[i][j] * wobble;
    Mat4 eta{};
    eta[0][0] = 1.0;
    eta[1][1] = eta[2][2] = eta[3][3] = -1.0;
    return matmul4(transpose4(l), matmul4(eta, l));
  };
  return m;
}

// Test-side oracle: assemble Gamma^k_ij from scratch with its own
// finite-difference step and its own index raising.
std::array<Mat4, 4> christoffel_oracle(const DistributionMetric& metric,
                                       const Vec4& x, double h0) {
  Ten3 dg{};
  for (int k = 0; k < 4; ++k) {
    const double h = h0 * std::max(1.0, std::abs(x[k]));
    Vec4 xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const Mat4 gp = metric.eval(xp);
    const Mat4 gm = metric.eval(xm);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) dg[k][i][j] = (gp[i][j] - gm[i][j]) / (2 * h);
  }
  const auto ginv = inverse4(metric.eval(x));
  REQUIRE(ginv.has_value());
  std::array<Mat4, 4> gamma{};
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int l = 0; l < 4; ++l)
          s += (*ginv)[k][l] * 0.5 *
               (dg[i][l][j] + dg[j][l][i] - dg[l][i][j]);
        gamma[k][i][j] = s;
      }
  return gamma;
}

}  // namespace

TEST_CASE("christoffel symbols vanish for a constant metric") {
  const auto gamma = christoffel(minkowski_metric(), {0.4, -1.0, 2.0, 0.1});
  for (const auto& plane : gamma)
    for (const auto& row : plane)
      for (double v : row) CHECK(v == 0.0);
}

TEST_CASE("christoffel of diag(1, -e^{2x1}, -1, -1) vs the FD oracle") {
  DistributionMetric m;
  m.eval = [](const Vec4& x) {
    Mat4 g{};
    g[0][0] = 1.0;
    g[1][1] = -std::exp(2.0 * x[1]);
    g[2][2] = -1.0;
    g[3][3] = -1.0;
    return g;
  };
  const Vec4 x{0.0, 0.2, 0.0, 0.0};
  const auto gamma = christoffel(m, x);
  // Only nonzero raised symbol: Gamma^1_11 = 1 (independent of x1).
  CHECK(gamma[1][1][1] == doctest::Approx(1.0).epsilon(1e-7));
  const auto oracle = christoffel_oracle(m, x, 1e-5);
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        CHECK(gamma[k][i][j] ==
              doctest::Approx(oracle[k][i][j]).epsilon(1e-6).scale(1.0));
}

TEST_CASE("christoffel symmetry in the lower pair for random metrics/points") {
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  for (unsigned seed = 0; seed < 100; ++seed) {
    const DistributionMetric m = wavy_metric(seed);
    std::mt19937_64 rng(seed * 7919 + 13);
    const Vec4 x{d(rng), d(rng), d(rng), d(rng)};
    const auto gamma = christoffel(m, x);
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          CHECK(gamma[k][i][j] == gamma[k][j][i]);
  }
}

TEST_CASE("christoffel raises a degeneracy error") {
  DistributionMetric m;
  m.eval = [](const Vec4& x) {
    Mat4 g{};
    g[0][0] = 1.0;
    g[1][1] = -x[1];  // degenerates at x1 = 0
    g[2][2] = g[3][3] = -1.0;
    return g;
  };
  CHECK_THROWS_AS(christoffel(m, {0.0, 0.0, 0.0, 0.0}), MetricError);
}

TEST_CASE("eom_rhs: free particle moves in a straight line") {
  FramedDistribution dist{zero_potential(), minkowski_metric()};
  ParticleParams particle{1.0, 0.0};
  GeodesicState s;
  s.velocity = {1.0, 0.5, -0.25, 0.0};
  const StateVector dy = eom_rhs(dist, particle, s);
  for (int k = 0; k < 4; ++k) CHECK(dy[k] == s.velocity[k]);
  CHECK(dy[4] == 0.0);
  for (int k = 5; k < 9; ++k) CHECK(dy[k] == 0.0);
}

TEST_CASE("eom_rhs: constant magnetic field gives the cyclotron equations") {
  // du2 = p u3, du3 = -p u2, dx4 = -phi x3 u2 with p = q phi / m.
  const double phi = 1.0, q = 2.0, m = 1.0;
  FramedDistribution dist = magnetic_dist(phi);
  ParticleParams particle{m, q};
  GeodesicState s;
  s.position.base = {0.0, 0.0, 0.3, -0.4};
  s.velocity = {0.7, 0.1, 0.6, 0.8};
  const double p = q * phi / m;
  const StateVector dy = eom_rhs(dist, particle, s);
  CHECK(dy[5] == doctest::Approx(0.0));
  CHECK(dy[6] == doctest::Approx(0.0));
  CHECK(dy[7] == doctest::Approx(p * s.velocity[3]));
  CHECK(dy[8] == doctest::Approx(-p * s.velocity[2]));
  CHECK(dy[4] == doctest::Approx(-phi * s.position.base[3] * s.velocity[2]));
}

TEST_CASE("eom_rhs: velocity in ker F feels no force") {
  FramedDistribution dist = magnetic_dist(1.0);
  ParticleParams particle{1.0, 3.0};
  GeodesicState s;
  s.position.base = {0, 0, 0, 1.0};
  s.velocity = {1.0, 0.0, 0.0, 0.0};
  const StateVector dy = eom_rhs(dist, particle, s);
  for (int k = 5; k < 9; ++k) CHECK(dy[k] == 0.0);
}

TEST_CASE("integrate: free particle is exact to round-off") {
  FramedDistribution dist{zero_potential(), minkowski_metric()};
  ParticleParams particle{1.0, 0.0};
  GeodesicState start;
  start.position.base = {0.1, -0.2, 0.0, 0.5};
  start.velocity = {1.0, 0.5, 0.0, 0.0};
  IntegratorConfig cfg{1e-3, 1.0, 100};
  const Trajectory traj = integrate(dist, particle, start, cfg);
  for (const auto& s : traj.samples) {
    for (int k = 0; k < 4; ++k) {
      CHECK(std::abs(s.state.position.base[k] -
                     (start.position.base[k] + s.t * start.velocity[k])) <=
            1e-12);
      CHECK(s.state.velocity[k] == start.velocity[k]);
    }
    CHECK(s.state.position.fiber == start.position.fiber);
    CHECK(std::abs(s.horizontality_defect) <= 1e-15);
  }
}

TEST_CASE("integrate: magnetic scenario matches the closed form") {
  // phi = 1, rate p = 2 via charge 2 on unit mass, alpha = 0.
  FramedDistribution dist = magnetic_dist(1.0);
  ParticleParams particle{1.0, 2.0};
  GeodesicState start;
  start.velocity = {0.0, 0.0, 0.0, 1.0};
  IntegratorConfig cfg{1e-3, 1.0, 10};
  const Trajectory traj = integrate(dist, particle, start, cfg);

  const auto params = MagneticGeodesicParams::canonical(0.0, 2.0, 1.0);
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    const PlanePoint ref = closed_form(params, s.t);
    worst = std::max(worst, std::abs(s.state.position.base[2] - ref.x2));
    worst = std::max(worst, std::abs(s.state.position.base[3] - ref.x3));
    worst = std::max(worst, std::abs(s.state.position.fiber - ref.x4));
  }
  CHECK(worst < 1e-10);

  // Pseudonorm is conserved along the flow.
  const double pn0 = traj.front().pseudonorm;
  for (const auto& s : traj.samples)
    CHECK(std::abs(s.pseudonorm - pn0) < 1e-10);
}

TEST_CASE("integrate: config validation") {
  FramedDistribution dist{zero_potential(), minkowski_metric()};
  ParticleParams particle{1.0, 0.0};
  GeodesicState start;
  start.velocity = {1, 0, 0, 0};
  CHECK_THROWS_AS(integrate(dist, particle, start, {0.0, 1.0, 1}), SpecError);
  CHECK_THROWS_AS(integrate(dist, particle, start, {2.0, 1.0, 1}), SpecError);
  CHECK_THROWS_AS(integrate(dist, particle, start, {1e-3, 1.0, 0}), SpecError);
  ParticleParams bad_mass{0.0, 0.0};
  CHECK_THROWS_AS(integrate(dist, bad_mass, start, {1e-3, 1.0, 1}), SpecError);
}

TEST_CASE("integrate: runaway boost reports divergence with the last good t") {
  // A strong constant electric field on a huge charge overflows cosh-like
  // growth within t < 1.
  FramedDistribution dist{constant_electric_potential(1.0), minkowski_metric()};
  ParticleParams particle{1.0, 2000.0};
  GeodesicState start;
  start.velocity = {1.0, 0.1, 0.0, 0.0};
  try {
    integrate(dist, particle, start, {1e-3, 1.0, 10});
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.last_good_t > 0.0);
    CHECK(e.last_good_t < 1.0);
  }
}

TEST_CASE("lagrange_rhs with a0=1, lambda=q matches eom_rhs componentwise") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    // Random linear potential -> random constant F.
    std::array<Polynomial4, 4> comp;
    for (int i = 0; i < 4; ++i) {
      std::vector<MonomialTerm> terms;
      for (int j = 0; j < 4; ++j) {
        MonomialTerm t{d(rng), {0, 0, 0, 0}};
        t.exps[j] = 1;
        terms.push_back(t);
      }
      comp[i] = Polynomial4{terms};
    }
    FramedDistribution dist{polynomial_potential(comp),
                            trial % 3 == 0 ? DistributionMetric(wavy_metric(trial))
                                           : minkowski_metric()};
    ParticleParams particle{0.5 + std::abs(d(rng)), d(rng)};
    GeodesicState s;
    for (int c = 0; c < 4; ++c) {
      s.position.base[c] = d(rng);
      s.velocity[c] = d(rng);
    }
    const StateVector a = eom_rhs(dist, particle, s);
    const LagrangeRhs b = lagrange_rhs(dist, particle, s, 1.0, particle.charge);
    CHECK(b.lambda_dot == 0.0);
    for (int c = 0; c < 9; ++c)
      CHECK(a[c] == doctest::Approx(b.state_dot[c]).epsilon(1e-11).scale(1.0));
  }
}

TEST_CASE("lagrange_rhs abnormal branch") {
  FramedDistribution dist = magnetic_dist(1.0);
  ParticleParams particle{1.0, 1.0};
  GeodesicState s;
  s.velocity = {1.0, 0.0, 0.0, 0.0};  // in ker F

  const LagrangeRhs ok = lagrange_rhs(dist, particle, s, 0.0, 1.0);
  CHECK(ok.lambda_dot == 0.0);
  for (int c = 5; c < 9; ++c) CHECK(ok.state_dot[c] == 0.0);
  CHECK(ok.state_dot[0] == 1.0);

  s.velocity = {0.0, 0.0, 1.0, 0.0};  // not in ker F
  CHECK_THROWS_AS(lagrange_rhs(dist, particle, s, 0.0, 1.0), AbnormalityError);
  CHECK_THROWS_AS(lagrange_rhs(dist, particle, s, 0.5, 1.0), SpecError);
}

TEST_CASE("abnormal_kernel: zero field has a full kernel") {
  const AbnormalKernel k = abnormal_kernel(FaradayTensor{});
  CHECK(k.rank_f == 0);
  CHECK(k.basis.size() == 4);
}

TEST_CASE("abnormal_kernel: constant magnetic field -> rank 2, span{e0,e1}") {
  const FaradayTensor f =
      faraday(constant_magnetic_potential(1.5), {0, 0, 0, 2.0});
  const AbnormalKernel k = abnormal_kernel(f);
  CHECK(k.rank_f == 2);
  REQUIRE(k.basis.size() == 2);
  for (const auto& v : k.basis) {
    CHECK(std::hypot(v[2], v[3]) < 1e-12);
    CHECK(norm4(v) == doctest::Approx(1.0));
  }
  // Orthonormality of the reported basis.
  CHECK(std::abs(dot4(k.basis[0], k.basis[1])) < 1e-12);
}

TEST_CASE("abnormal_kernel: generic E,H with E.H != 0 has trivial kernel") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::array<double, 3> e{d(rng), d(rng), d(rng)};
    const std::array<double, 3> h{d(rng), d(rng), d(rng)};
    const double eh = e[0] * h[0] + e[1] * h[1] + e[2] * h[2];
    Mat4 f{Vec4{0, e[0], e[1], e[2]}, Vec4{-e[0], 0, -h[2], h[1]},
           Vec4{-e[1], h[2], 0, -h[0]}, Vec4{-e[2], -h[1], h[0], 0}};
    // Determinant oracle: det F = (E.H)^2 for this layout.
    CHECK(det4(f) == doctest::Approx(eh * eh).epsilon(1e-10).scale(1.0));
    if (std::abs(eh) < 0.05) continue;
    const AbnormalKernel k = abnormal_kernel(FaradayTensor{f});
    CHECK(k.rank_f == 4);
    CHECK(k.basis.empty());
  }
}

TEST_CASE("abnormal_kernel property: residual bound and rank count") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Mat4 f{};
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) {
        f[i][j] = d(rng);
        f[j][i] = -f[i][j];
      }
    // Half the trials get an exactly singular F (magnetic-like block).
    if (trial % 2 == 0) {
      for (int j = 0; j < 4; ++j) f[0][j] = f[j][0] = f[1][j] = f[j][1] = 0.0;
    }
    const FaradayTensor far{f};
    const AbnormalKernel k = abnormal_kernel(far);
    CHECK(k.rank_f + static_cast<int>(k.basis.size()) == 4);
    const Svd4 svd = svd4(f);
    for (const auto& v : k.basis) {
      Vec4 r{};
      for (int kk = 0; kk < 4; ++kk)
        for (int j = 0; j < 4; ++j) r[kk] += f[j][kk] * v[j];
      CHECK(norm4(r) <= 1e-12 * svd.sigma[0] * norm4(v) + 1e-300);
    }
  }
}

TEST_CASE("action_values: straight timelike line and zero potential") {
  FramedDistribution dist{zero_potential(), minkowski_metric()};
  ParticleParams particle{1.5, 0.7};
  GeodesicState start;
  start.velocity = {1.0, 0.0, 0.0, 0.0};  // unit pseudonorm
  IntegratorConfig cfg{1e-3, 1.0, 10};
  const Trajectory traj = integrate(dist, particle, start, cfg);
  const ActionValues av = action_values(dist, particle, traj, 2.0);
  CHECK(av.length_part == doctest::Approx(-1.5 * 2.0 * 1.0).epsilon(1e-12));
  CHECK(av.coupling_part == doctest::Approx(0.0));
}

TEST_CASE("action_values: magnetic coupling vs a dense quadrature oracle") {
  const double phi = 1.0, q = 2.0, m = 1.0, c = 1.0;
  FramedDistribution dist = magnetic_dist(phi);
  ParticleParams particle{m, q};
  GeodesicState start;
  start.velocity = {2.0, 0.0, 0.0, 1.0};  // timelike: pseudonorm = 3
  IntegratorConfig cfg{1e-3, 1.0, 1};
  const Trajectory traj = integrate(dist, particle, start, cfg);
  const ActionValues av = action_values(dist, particle, traj, c);

  // Dense oracle: 10^6-point trapezoid of phi * x3(t) * u2(t) from the
  // closed form (in-plane motion is independent of u0).
  const auto params = MagneticGeodesicParams::canonical(0.0, q * phi / m, phi);
  const int n = 1000000;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    const double x3 = closed_form(params, t).x3;
    const double u2 = closed_form_velocity(params, t)[0];
    const double w = (i == 0 || i == n) ? 0.5 : 1.0;
    acc += w * phi * x3 * u2;
  }
  acc /= n;
  const double expected = -(q / c) * acc;
  CHECK(std::abs(av.coupling_part - expected) < 1e-6);
}

TEST_CASE("action_values rejects non-timelike samples with the index") {
  FramedDistribution dist{zero_potential(), minkowski_metric()};
  ParticleParams particle{1.0, 0.0};
  GeodesicState start;
  start.velocity = {0.0, 1.0, 0.0, 0.0};  // spacelike
  IntegratorConfig cfg{0.5, 1.0, 1};
  const Trajectory traj = integrate(dist, particle, start, cfg);
  try {
    action_values(dist, particle, traj, 1.0);
    FAIL("expected CausalityError");
  } catch (const CausalityError& e) {
    CHECK(e.sample_index == 0);
  }
}

TEST_CASE("gauge_transform_check: constant f leaves everything unchanged") {
  FramedDistribution dist = magnetic_dist(1.0);
  ParticleParams particle{1.0, 2.0};
  GeodesicState start;
  start.velocity = {0.0, 0.0, 0.0, 1.0};
  IntegratorConfig cfg{1e-3, 0.5, 25};
  const GaugeReport r = gauge_transform_check(dist, particle, start, cfg,
                                              Polynomial4::constant(3.5));
  CHECK(r.max_base_deviation == 0.0);
  CHECK(r.max_fiber_relation_deviation == 0.0);
}

TEST_CASE("gauge_transform_check: f = x2 on the magnetic scenario") {
  FramedDistribution dist = magnetic_dist(1.0);
  ParticleParams particle{1.0, 2.0};
  GeodesicState start;
  start.velocity = {0.0, 0.0, 0.0, 1.0};
  IntegratorConfig cfg{1e-3, 1.0, 10};
  const GaugeReport r = gauge_transform_check(dist, particle, start, cfg,
                                              Polynomial4::coordinate(2));
  CHECK(r.max_base_deviation < 1e-10);
  CHECK(r.max_fiber_relation_deviation < 1e-9);
}

TEST_CASE("gauge_transform_check: f = x0*x1 on a free particle") {
  FramedDistribution dist{zero_potential(), minkowski_metric()};
  ParticleParams particle{1.0, 0.0};
  GeodesicState start;
  start.velocity = {1.0, 0.5, 0.25, 0.0};
  IntegratorConfig cfg{1e-3, 1.0, 10};
  Polynomial4 f{{MonomialTerm{1.0, {1, 1, 0, 0}}}};
  const GaugeReport r = gauge_transform_check(dist, particle, start, cfg, f);
  CHECK(r.max_base_deviation < 1e-10);
  CHECK(r.max_fiber_relation_deviation < 1e-9);
}

TEST_CASE("momentum covector on a timelike state") {
  FramedDistribution dist{zero_potential(), minkowski_metric()};
  ParticleParams particle{2.0, 0.0};
  GeodesicState s;
  s.velocity = {1.0, 0.0, 0.0, 0.0};
  const auto mom = momentum_covector(dist, particle, s);
  REQUIRE(mom.has_value());
  CHECK((*mom)[0] == doctest::Approx(2.0));
  CHECK((*mom)[1] == doctest::Approx(0.0));

  s.velocity = {0.0, 1.0, 0.0, 0.0};
  CHECK(!momentum_covector(dist, particle, s).has_value());
}

TEST_CASE("trajectory sample times are strictly increasing") {
  FramedDistribution dist = magnetic_dist(1.0);
  ParticleParams particle{1.0, 1.0};
  GeodesicState start;
  start.velocity = {0, 0, 1, 0};
  IntegratorConfig cfg{1e-3, 1.0, 7};  // record stride not dividing n_steps
  const Trajectory traj = integrate(dist, particle, start, cfg);
  for (std::size_t i = 1; i < traj.samples.size(); ++i)
    CHECK(traj.samples[i].t > traj.samples[i - 1].t);
  CHECK(traj.back().t == doctest::Approx(1.0));
}
