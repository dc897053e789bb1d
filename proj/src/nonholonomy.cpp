#include "sublorentz/nonholonomy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sublorentz/errors.hpp"

namespace sublorentz {

namespace {

void check_frame_index(int i) {
  if (i < 0 || i > 3) throw SpecError("frame index must be in 0..3");
}

}  // namespace

Vec5 frame_bracket(const PotentialField& potential, const Vec4& x, int i,
                   int j) {
  check_frame_index(i);
  check_frame_index(j);
  const FaradayTensor far = faraday(potential, x);
  return {0.0, 0.0, 0.0, 0.0, -far.f[i][j]};
}

Vec5 frame_bracket_fd(const PotentialField& potential, const Vec4& x, int i,
                      int j) {
  check_frame_index(i);
  check_frame_index(j);
  // [e_i, e_j] applied to x^4 gives dA_i/dx^j - dA_j/dx^i; differentiate the
  // evaluator directly, bypassing any supplied jacobian.
  const auto partial = [&](int comp, int axis) {
    const double h = potential.fd_step * std::max(1.0, std::abs(x[axis]));
    Vec4 xp = x, xm = x;
    xp[axis] += h;
    xm[axis] -= h;
    return (potential.eval(xp)[comp] - potential.eval(xm)[comp]) / (2.0 * h);
  };
  const double fifth = partial(i, j) - partial(j, i);
  return {0.0, 0.0, 0.0, 0.0, fifth};
}

GrowthVector growth_vector(const PotentialField& potential, const Vec4& x) {
  const Mat4 jac = potential.jacobian_at(x);
  const FaradayTensor far = faraday(potential, x);
  double jac_scale = 0.0;
  for (const auto& row : jac)
    for (double v : row) jac_scale = std::max(jac_scale, std::abs(v));
  const double threshold = 1e-12 * std::max(1.0, jac_scale);

  GrowthVector gv;
  if (far.max_abs() > threshold) {
    gv.dims = {4, 5};
    gv.degree = 2;
  } else {
    gv.dims = {4};
    gv.degree = 1;
  }
  return gv;
}

BoxExponents box_exponents(const GrowthVector& gv) {
  if (gv.dims.empty()) throw SpecError("growth vector must not be empty");
  BoxExponents out;
  int prev = 0;
  for (std::size_t layer = 0; layer < gv.dims.size(); ++layer) {
    const int n = gv.dims[layer];
    if (n < prev) throw SpecError("growth vector must be non-decreasing");
    for (int i = prev; i < n; ++i)
      out.phi.push_back(static_cast<int>(layer) + 1);
    prev = n;
  }
  return out;
}

BoxCheckReport box_check(const FramedDistribution& dist,
                         const ParticleParams& params,
                         std::span<const double> epsilons,
                         int samples_per_eps) {
  if (epsilons.size() < 2)
    throw SpecError("box check needs at least two epsilon values");
  for (std::size_t i = 0; i + 1 < epsilons.size(); ++i)
    if (!(epsilons[i] > epsilons[i + 1]) || !(epsilons[i + 1] > 0.0))
      throw SpecError("epsilons must be positive and strictly decreasing");
  if (samples_per_eps < 4) throw SpecError("need at least 4 samples per eps");

  const int n_alpha = std::max(3, static_cast<int>(std::sqrt(samples_per_eps)));
  const int n_rate = std::max(3, samples_per_eps / n_alpha);
  const double pi = std::numbers::pi;
  // One fixed fan of cyclotron rates for all eps; a full turn is reached
  // exactly at the largest eps.
  const double rate_max = 2.0 * pi / epsilons[0];

  BoxCheckReport report;
  report.epsilons.assign(epsilons.begin(), epsilons.end());
  report.max_fiber.assign(epsilons.size(), 0.0);
  report.max_base.assign(epsilons.size(), 0.0);

  const long n_eps = static_cast<long>(epsilons.size());
#pragma omp parallel for schedule(static)
  for (long e = 0; e < n_eps; ++e) {
    const double eps = epsilons[static_cast<std::size_t>(e)];
    double worst_fiber = 0.0, worst_base = 0.0;
    for (int ia = 0; ia < n_alpha; ++ia) {
      const double alpha = -pi + 2.0 * pi * (ia + 0.5) / n_alpha;
      for (int ir = 0; ir < n_rate; ++ir) {
        const double rate = -rate_max + 2.0 * rate_max * ir / (n_rate - 1);
        ParticleParams fan_particle = params;
        // u = (0, 0, sin a, cos a); rate = q phi / m is swept via the charge.
        fan_particle.charge = 0.0;
        GeodesicState start;
        start.velocity = {0.0, 0.0, std::sin(alpha), std::cos(alpha)};
        IntegratorConfig cfg;
        cfg.step = eps / 64.0;
        cfg.t_end = eps;
        cfg.record_every = 64;
        // Recover the charge that realizes this cyclotron rate from the
        // field strength implied by the potential at the origin.
        const FaradayTensor far = faraday(dist.potential, start.position.base);
        const double phi_here = -far.f[2][3];
        if (phi_here != 0.0) fan_particle.charge = rate * params.mass / phi_here;
        const Trajectory traj = integrate(dist, fan_particle, start, cfg);
        const auto& last = traj.back().state;
        worst_fiber = std::max(worst_fiber, std::abs(last.position.fiber));
        for (int c = 0; c < 4; ++c)
          worst_base = std::max(worst_base, std::abs(last.position.base[c]));
      }
    }
    report.max_fiber[static_cast<std::size_t>(e)] = worst_fiber;
    report.max_base[static_cast<std::size_t>(e)] = worst_base;
  }

  const double fiber_floor = 1e-300;
  bool fiber_all_zero = true;
  for (double v : report.max_fiber)
    if (v > fiber_floor) fiber_all_zero = false;
  report.exact_containment = fiber_all_zero;

  std::vector<double> lx, ly;
  if (!fiber_all_zero) {
    for (std::size_t i = 0; i < report.epsilons.size(); ++i) {
      lx.push_back(std::log(report.epsilons[i]));
      ly.push_back(std::log(report.max_fiber[i]));
    }
    report.fiber_slope =
        linear_fit_slope(lx.data(), ly.data(), static_cast<int>(lx.size()));
  }
  lx.clear();
  ly.clear();
  for (std::size_t i = 0; i < report.epsilons.size(); ++i) {
    lx.push_back(std::log(report.epsilons[i]));
    ly.push_back(std::log(report.max_base[i]));
  }
  report.base_slope =
      linear_fit_slope(lx.data(), ly.data(), static_cast<int>(lx.size()));
  return report;
}

}  // namespace sublorentz
