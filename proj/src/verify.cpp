#include "sublorentz/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "sublorentz/errors.hpp"
#include "sublorentz/export.hpp"
#include "sublorentz/fields.hpp"
#include "sublorentz/geodesic_engine.hpp"
#include "sublorentz/magnetic_analytic.hpp"
#include "sublorentz/nonholonomy.hpp"

namespace sublorentz {

namespace {

constexpr double kPi = std::numbers::pi;

struct MagneticScenario {
  FramedDistribution dist;
  ParticleParams particle;
  GeodesicState start;
};

// Flat metric, A = (0,0,phi*x3,0), start at the origin with the in-plane
// unit velocity of phase alpha; the cyclotron rate is realized through the
// charge: rate = q*phi/m.
MagneticScenario magnetic_scenario(double phi, double rate, double alpha) {
  MagneticScenario sc;
  sc.dist.potential = constant_magnetic_potential(phi);
  sc.dist.metric = minkowski_metric();
  sc.particle.mass = 1.0;
  sc.particle.charge = rate * sc.particle.mass / phi;
  sc.start.velocity = {0.0, 0.0, std::sin(alpha), std::cos(alpha)};
  return sc;
}

// Max componentwise deviation of a recorded trajectory from the closed form
// with the same (alpha, rate, phi): positions x2,x3,x4 and velocities u2,u3.
double max_error_vs_closed_form(const Trajectory& traj, double alpha,
                                double rate, double phi) {
  const auto params = MagneticGeodesicParams::canonical(alpha, rate, phi);
  double worst = 0.0;
  for (const auto& s : traj.samples) {
    const PlanePoint ref = closed_form(params, s.t);
    const auto vel = closed_form_velocity(params, s.t);
    worst = std::max(worst, std::abs(s.state.position.base[2] - ref.x2));
    worst = std::max(worst, std::abs(s.state.position.base[3] - ref.x3));
    worst = std::max(worst, std::abs(s.state.position.fiber - ref.x4));
    worst = std::max(worst, std::abs(s.state.velocity[2] - vel[0]));
    worst = std::max(worst, std::abs(s.state.velocity[3] - vel[1]));
  }
  return worst;
}

struct GridCase {
  double alpha;
  double rate;
};

std::vector<GridCase> oracle_grid() {
  std::vector<GridCase> cases;
  for (int ia = 0; ia < 5; ++ia) {
    const double alpha = -kPi + ia * (2.0 * kPi / 4.0);
    for (int ip = 0; ip < 5; ++ip) {
      const double rate = -2.0 * kPi + ip * kPi;
      if (std::abs(rate) < 1e-3) continue;  // closed form degenerates slower
      cases.push_back({alpha, rate});
    }
  }
  return cases;
}

CheckResult make(const std::string& name, bool pass, double measured,
                 double threshold, const std::string& relation,
                 int criterion) {
  return CheckResult{name, pass, measured, threshold, relation, criterion};
}

CheckResult upper(const std::string& name, double measured, double threshold,
                  int criterion) {
  return make(name, measured < threshold, measured, threshold, "<", criterion);
}

// Random potential linear in the coordinates: A_i = sum_j M_ij x^j, so F is
// a random constant antisymmetric tensor.
PotentialField random_linear_potential(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  std::array<Polynomial4, 4> comp;
  for (int i = 0; i < 4; ++i) {
    std::vector<MonomialTerm> terms;
    for (int j = 0; j < 4; ++j) {
      MonomialTerm t{coef(rng), {0, 0, 0, 0}};
      t.exps[j] = 1;
      terms.push_back(t);
    }
    comp[i] = Polynomial4{std::move(terms)};
  }
  return polynomial_potential(comp);
}

Mat4 faraday_from_eh(const std::array<double, 3>& e,
                     const std::array<double, 3>& h) {
  return Mat4{Vec4{0.0, e[0], e[1], e[2]},   //
              Vec4{-e[0], 0.0, -h[2], h[1]},  //
              Vec4{-e[1], h[2], 0.0, -h[0]},  //
              Vec4{-e[2], -h[1], h[0], 0.0}};
}

}  // namespace

std::vector<CheckResult> verify_oracle() {
  std::vector<CheckResult> out;

  // RK4 against the closed form over the (alpha, rate) grid.
  const auto t0 = std::chrono::steady_clock::now();
  const auto cases = oracle_grid();
  std::vector<double> errs(cases.size(), 0.0);
  const long n = static_cast<long>(cases.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const auto& c = cases[static_cast<std::size_t>(i)];
    const auto sc = magnetic_scenario(1.0, c.rate, c.alpha);
    IntegratorConfig cfg{1e-3, 1.0, 10};
    const Trajectory traj = integrate(sc.dist, sc.particle, sc.start, cfg);
    errs[static_cast<std::size_t>(i)] =
        max_error_vs_closed_form(traj, c.alpha, c.rate, 1.0);
  }
  const double grid_err = *std::max_element(errs.begin(), errs.end());
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  out.push_back(upper("rk4-vs-closed-form-grid", grid_err, 1e-8, 1));
  out.push_back(upper("oracle-grid-runtime-s", elapsed, 5.0, 1));

  // Pontryagin vs multiplier assembly on randomized constant-F scenarios.
  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_real_distribution<double> small(-1.0, 1.0);
  double form_err = 0.0;
  for (int k = 0; k < 20; ++k) {
    FramedDistribution dist{random_linear_potential(rng), minkowski_metric()};
    ParticleParams particle{1.0, 0.5 * small(rng)};
    GeodesicState start;
    for (int c = 0; c < 4; ++c) start.velocity[c] = small(rng);
    IntegratorConfig cfg{1e-3, 1.0, 50};
    const Trajectory a =
        integrate(dist, particle, start, cfg, Formulation::pontryagin);
    const Trajectory b =
        integrate(dist, particle, start, cfg, Formulation::lagrange);
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
      for (int c = 0; c < 4; ++c) {
        form_err = std::max(form_err,
                            std::abs(a.samples[i].state.position.base[c] -
                                     b.samples[i].state.position.base[c]));
        form_err = std::max(form_err, std::abs(a.samples[i].state.velocity[c] -
                                               b.samples[i].state.velocity[c]));
      }
      form_err = std::max(form_err, std::abs(a.samples[i].state.position.fiber -
                                             b.samples[i].state.position.fiber));
    }
  }
  out.push_back(upper("formulation-equivalence", form_err, 1e-8, 3));
  return out;
}

std::vector<CheckResult> verify_conservation() {
  std::vector<CheckResult> out;
  const auto cases = oracle_grid();
  std::vector<double> drift(cases.size(), 0.0), defect(cases.size(), 0.0);
  const long n = static_cast<long>(cases.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const auto& c = cases[static_cast<std::size_t>(i)];
    const auto sc = magnetic_scenario(1.0, c.rate, c.alpha);
    IntegratorConfig cfg{1e-3, 1.0, 10};
    const Trajectory traj = integrate(sc.dist, sc.particle, sc.start, cfg);
    const double pn0 = traj.front().pseudonorm;
    double d = 0.0, hd = 0.0;
    for (const auto& s : traj.samples) {
      d = std::max(d, std::abs(s.pseudonorm - pn0));
      hd = std::max(hd, std::abs(s.horizontality_defect));
    }
    drift[static_cast<std::size_t>(i)] = d;
    defect[static_cast<std::size_t>(i)] = hd;
  }
  out.push_back(upper("pseudonorm-drift",
                      *std::max_element(drift.begin(), drift.end()), 1e-9, 2));
  out.push_back(upper("horizontality-defect",
                      *std::max_element(defect.begin(), defect.end()), 1e-12,
                      2));

  // The multiplier never moves: dlambda is identically zero.
  std::mt19937_64 rng(0xabcdefULL);
  std::uniform_real_distribution<double> small(-1.0, 1.0);
  double dl = 0.0;
  for (int k = 0; k < 100; ++k) {
    FramedDistribution dist{random_linear_potential(rng), minkowski_metric()};
    ParticleParams particle{1.0, small(rng)};
    GeodesicState state;
    for (int c = 0; c < 4; ++c) {
      state.position.base[c] = small(rng);
      state.velocity[c] = small(rng);
    }
    const auto r = lagrange_rhs(dist, particle, state, 1.0, particle.charge);
    dl = std::max(dl, std::abs(r.lambda_dot));
  }
  out.push_back(make("charge-conserved", dl == 0.0, dl, 0.0, "==", 2));
  return out;
}

std::vector<CheckResult> verify_gauge() {
  std::vector<CheckResult> out;

  const auto sc = magnetic_scenario(1.0, 2.0, 0.0);
  IntegratorConfig cfg{1e-3, 1.0, 10};
  const GaugeReport mag = gauge_transform_check(sc.dist, sc.particle, sc.start,
                                                cfg, Polynomial4::coordinate(2));
  out.push_back(upper("gauge-base-deviation", mag.max_base_deviation, 1e-10, 4));
  out.push_back(
      upper("gauge-fiber-relation", mag.max_fiber_relation_deviation, 1e-9, 4));

  FramedDistribution free_dist{zero_potential(), minkowski_metric()};
  ParticleParams particle{1.0, 0.0};
  GeodesicState start;
  start.velocity = {1.0, 0.5, 0.0, 0.0};
  Polynomial4 x0x1{{MonomialTerm{1.0, {1, 1, 0, 0}}}};
  const GaugeReport fr =
      gauge_transform_check(free_dist, particle, start, cfg, x0x1);
  out.push_back(upper("gauge-free-base-deviation", fr.max_base_deviation,
                      1e-10, 4));
  out.push_back(upper("gauge-free-fiber-relation",
                      fr.max_fiber_relation_deviation, 1e-9, 4));
  return out;
}

std::vector<CheckResult> verify_abnormal() {
  std::vector<CheckResult> out;

  const PotentialField mag = constant_magnetic_potential(1.0);
  const FaradayTensor f_mag = faraday(mag, {0.2, -0.4, 1.0, 1.5});
  const AbnormalKernel k_mag = abnormal_kernel(f_mag);
  out.push_back(make("magnetic-kernel-dim",
                     k_mag.basis.size() == 2 && k_mag.rank_f == 2,
                     static_cast<double>(k_mag.basis.size()), 2.0, "==", 7));

  // ker F must be span{e0, e1}: out-of-plane components bound the subspace
  // angle.
  double angle = 0.0;
  for (const auto& v : k_mag.basis)
    angle = std::max(angle, std::hypot(v[2], v[3]));
  out.push_back(upper("magnetic-kernel-span-angle", angle, 1e-10, 7));

  double residual = 0.0;
  const Svd4 svd_mag = svd4(f_mag.f);
  for (const auto& v : k_mag.basis) {
    Vec4 r{};
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) r[k] += f_mag.f[j][k] * v[j];
    residual = std::max(residual, norm4(r) / svd_mag.sigma[0]);
  }
  out.push_back(make("magnetic-kernel-residual", residual <= 1e-12, residual,
                     1e-12, "<=", 7));

  const Mat4 f_generic =
      faraday_from_eh({1.0, 0.2, -0.3}, {0.5, -1.0, 0.7});
  const AbnormalKernel k_gen = abnormal_kernel(FaradayTensor{f_generic});
  out.push_back(make("generic-kernel-empty",
                     k_gen.basis.empty() && k_gen.rank_f == 4,
                     static_cast<double>(k_gen.basis.size()), 0.0, "==", 7));
  // det F = (E.H)^2 for this construction; the full-rank claim cross-check.
  const double eh = 1.0 * 0.5 + 0.2 * -1.0 + -0.3 * 0.7;
  out.push_back(upper("generic-det-eh-identity",
                      std::abs(det4(f_generic) - eh * eh), 1e-12, 7));
  return out;
}

std::vector<CheckResult> verify_asymptotics() {
  std::vector<CheckResult> out;

  // The length must be generic: at s = 1 every chosen p is an exact
  // axis-return rate 2*pi*k and the leading residual vanishes identically,
  // leaving nothing to fit. s = 11/12 also keeps the residual amplitude
  // constant across the doubling grid (the phase p*s mod 2pi alternates
  // between 2pi/3 and 4pi/3, which carry equal amplitude), so the fit sees
  // the pure 1/p^2 scaling.
  const double s = 11.0 / 12.0, phi = 1.0;
  const std::array<double, 4> p_values = {16.0 * kPi, 32.0 * kPi, 64.0 * kPi,
                                          128.0 * kPi};
  const ConeBoundReport cone = cone_bound_check(s, phi, p_values);
  out.push_back(make("cone-residual-slope",
                     cone.residual_slope >= -2.1 && cone.residual_slope <= -1.9,
                     cone.residual_slope, -2.0, "= +-0.1", 6));
  out.push_back(make("cone-containment", cone.inside_cone, cone.min_axis_ratio,
                     cone.cone_ratio_bound * 0.95, ">=", 6));

  // Exact agreement of the return-distance expansion with the closed form at
  // theta = 0.
  double ret_err = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const double p = 2.0 * kPi * k;  // s = 1 here
    const auto params = MagneticGeodesicParams::canonical(0.37, p, 1.0);
    const double closed = closed_form(params, 1.0).x4;
    const double expansion = x4_return_distance(1.0, 1.0, k, 0.0);
    ret_err = std::max(ret_err, std::abs(closed - expansion));
  }
  out.push_back(make("x4-return-distance-exact", ret_err <= 1e-14, ret_err,
                     1e-14, "<=", 6));

  // Ball-box exponents from integrated fans.
  MagneticScenario sc = magnetic_scenario(1.0, 0.0, 0.0);
  const std::array<double, 4> epsilons = {0.4, 0.2, 0.1, 0.05};
  const BoxCheckReport box = box_check(sc.dist, sc.particle, epsilons, 81);
  out.push_back(make("ballbox-fiber-slope",
                     box.fiber_slope >= 1.95 && box.fiber_slope <= 2.3,
                     box.fiber_slope, 1.95, ">=", 6));
  out.push_back(make("ballbox-base-slope", std::abs(box.base_slope - 1.0) <= 0.05,
                     box.base_slope, 1.0, "= +-0.05", 6));
  return out;
}

std::vector<CheckResult> verify_nonholonomy() {
  std::vector<CheckResult> out;

  const PotentialField mag = constant_magnetic_potential(1.0);
  const GrowthVector gv_mag = growth_vector(mag, {0.0, 0.0, 0.3, -0.8});
  const BoxExponents be_mag = box_exponents(gv_mag);
  const bool mag_ok = gv_mag.dims == std::vector<int>{4, 5} &&
                      gv_mag.degree == 2 &&
                      be_mag.phi == std::vector<int>{1, 1, 1, 1, 2};
  out.push_back(make("growth-magnetic", mag_ok,
                     static_cast<double>(gv_mag.degree), 2.0, "==", 8));

  const GrowthVector gv_zero = growth_vector(zero_potential(), {0, 0, 0, 0});
  const BoxExponents be_zero = box_exponents(gv_zero);
  const bool zero_ok = gv_zero.dims == std::vector<int>{4} &&
                       gv_zero.degree == 1 &&
                       be_zero.phi == std::vector<int>{1, 1, 1, 1};
  out.push_back(make("growth-zero-field", zero_ok,
                     static_cast<double>(gv_zero.degree), 1.0, "==", 8));

  // Reference values for the 2-dimensional distribution in dimension 3.
  GrowthVector planar;
  planar.dims = {2, 3};
  planar.degree = 2;
  const BoxExponents be_planar = box_exponents(planar);
  out.push_back(make("exponents-2-in-3",
                     be_planar.phi == std::vector<int>{1, 1, 2},
                     static_cast<double>(be_planar.phi.back()), 2.0, "==", 8));
  return out;
}

std::vector<CheckResult> verify_figures() {
  std::vector<CheckResult> out;

  const auto circle_defect = [](const PointCloud& cloud) {
    double worst = 0.0;
    for (const auto& pt : cloud.points) {
      if (std::abs(pt.p) < 0.5) continue;  // the straight-line rows
      const double b2 = std::cos(pt.alpha) / pt.p;
      const double b3 = -std::sin(pt.alpha) / pt.p;
      const double r2 = (pt.x2 - b2) * (pt.x2 - b2) + (pt.x3 - b3) * (pt.x3 - b3);
      worst = std::max(worst, std::abs(r2 - 1.0 / (pt.p * pt.p)));
    }
    return worst;
  };

  SphereSpec right{1.0, 65, 9, 0.0, 2.0 * kPi, 1.0};
  SphereSpec left{1.0, 65, 9, -2.0 * kPi, 0.0, 1.0};
  const PointCloud sphere_r = sphere_sample(right);
  const PointCloud sphere_l = sphere_sample(left);
  out.push_back(upper("sphere-circle-invariant",
                      std::max(circle_defect(sphere_r), circle_defect(sphere_l)),
                      1e-12, 5));

  // Wavefront grids hit the axis-return rates 2*pi*k exactly.
  SphereSpec wf_right{1.0, 65, 8, kPi, 8.0 * kPi, 1.0};
  SphereSpec wf_left{1.0, 65, 8, -8.0 * kPi, -kPi, 1.0};
  const PointCloud wave_r = wavefront_sample(wf_right);
  const PointCloud wave_l = wavefront_sample(wf_left);
  out.push_back(upper("wavefront-circle-invariant",
                      std::max(circle_defect(wave_r), circle_defect(wave_l)),
                      1e-12, 5));

  double spread = 0.0, height_err = 0.0, axis_rho = 0.0;
  bool found_all = true;
  const auto collapse = [&](const PointCloud& cloud, int k) {
    const double target_p = 2.0 * kPi * k;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    bool found = false;
    for (const auto& pt : cloud.points) {
      if (std::abs(pt.p - target_p) > 1e-6) continue;
      found = true;
      lo = std::min(lo, pt.x4);
      hi = std::max(hi, pt.x4);
      axis_rho = std::max(axis_rho, std::hypot(pt.x2, pt.x3));
      height_err = std::max(
          height_err, std::abs(pt.x4 - (-1.0 / (4.0 * kPi * k))));
    }
    if (!found) found_all = false;
    if (found) spread = std::max(spread, hi - lo);
  };
  for (int k = 1; k <= 4; ++k) collapse(wave_r, k);
  for (int k = 1; k <= 4; ++k) collapse(wave_l, -k);
  out.push_back(make("axis-collapse-rows-present", found_all,
                     found_all ? 8.0 : 0.0, 8.0, "==", 5));
  out.push_back(upper("axis-collapse-alpha-spread", spread, 1e-12, 5));
  out.push_back(make("axis-collapse-height", height_err <= 1e-12, height_err,
                     1e-12, "<=", 5));
  out.push_back(upper("axis-collapse-planar-radius", axis_rho, 1e-12, 5));
  return out;
}

std::vector<CheckResult> verify_hygiene() {
  std::vector<CheckResult> out;

  // RK4 order: halving the step shrinks the closed-form error ~16x.
  const auto sc = magnetic_scenario(1.0, 2.0 * kPi, 0.0);
  IntegratorConfig coarse{1e-3, 1.0, 100};
  IntegratorConfig fine{5e-4, 1.0, 200};
  const double err_coarse = max_error_vs_closed_form(
      integrate(sc.dist, sc.particle, sc.start, coarse), 0.0, 2.0 * kPi, 1.0);
  const double err_fine = max_error_vs_closed_form(
      integrate(sc.dist, sc.particle, sc.start, fine), 0.0, 2.0 * kPi, 1.0);
  const double ratio = err_coarse / err_fine;
  out.push_back(
      make("rk4-halving-ratio", ratio >= 14.0 && ratio <= 18.0, ratio, 16.0,
           "in [14,18]", 9));

  // Series / exact handoff at the branch cutoff.
  double branch = 0.0;
  for (int ia = 0; ia < 32; ++ia) {
    const double alpha = -kPi + 2.0 * kPi * (ia + 0.5) / 32.0;
    for (const double t : {1.0, 0.5, 2.0}) {
      const double p = 1e-4 / t;
      const auto params = MagneticGeodesicParams::canonical(alpha, p, 1.0);
      const PlanePoint a = closed_form_series(params, t);
      const PlanePoint b = closed_form_exact(params, t);
      branch = std::max({branch, std::abs(a.x2 - b.x2), std::abs(a.x3 - b.x3),
                         std::abs(a.x4 - b.x4)});
    }
  }
  out.push_back(make("series-exact-branch", branch <= 1e-12, branch, 1e-12,
                     "<=", 9));

  // 17-significant-digit text round-trips doubles exactly.
  namespace fs = std::filesystem;
  const fs::path dir =
      fs::temp_directory_path() / ("sublorentz-verify-" +
                                   std::to_string(static_cast<unsigned>(
                                       std::random_device{}())));
  fs::create_directories(dir);
  double rt_err = -1.0;
  {
    SphereSpec spec{1.0, 9, 9, 0.0, 2.0 * kPi, 1.0};
    const PointCloud cloud = sphere_sample(spec);
    const std::string path = (dir / "cloud.csv").string();
    write_cloud_csv(path, cloud);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);  // header
    rt_err = 0.0;
    std::size_t row = 0;
    while (std::getline(in, line) && row < cloud.points.size()) {
      std::replace(line.begin(), line.end(), ',', ' ');
      std::stringstream ss(line);
      double x2, x3, x4, alpha, p;
      ss >> x2 >> x3 >> x4 >> alpha >> p;
      const auto& pt = cloud.points[row];
      rt_err = std::max({rt_err, std::abs(x2 - pt.x2), std::abs(x3 - pt.x3),
                         std::abs(x4 - pt.x4), std::abs(alpha - pt.alpha),
                         std::abs(p - pt.p)});
      ++row;
    }
    if (row != cloud.points.size()) rt_err = 1.0;  // short file
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
  out.push_back(make("csv-roundtrip-lossless", rt_err == 0.0, rt_err, 0.0,
                     "==", 9));
  return out;
}

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names = {
      "conservation", "oracle",  "gauge",   "abnormal",
      "asymptotics",  "nonholonomy", "all"};
  return names;
}

std::vector<CheckResult> run_verify_suite(const std::string& name) {
  if (name == "conservation") return verify_conservation();
  if (name == "oracle") return verify_oracle();
  if (name == "gauge") return verify_gauge();
  if (name == "abnormal") return verify_abnormal();
  if (name == "asymptotics") return verify_asymptotics();
  if (name == "nonholonomy") return verify_nonholonomy();
  if (name == "all") {
    std::vector<CheckResult> all;
    for (auto fn : {verify_oracle, verify_conservation, verify_gauge,
                    verify_abnormal, verify_asymptotics, verify_nonholonomy,
                    verify_figures, verify_hygiene}) {
      auto part = fn();
      all.insert(all.end(), part.begin(), part.end());
    }
    return all;
  }
  throw SpecError("unknown verify suite '" + name +
                  "'; expected one of: conservation, oracle, gauge, abnormal, "
                  "asymptotics, nonholonomy, all");
}

}  // namespace sublorentz
