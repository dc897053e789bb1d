#include "sublorentz/geodesic_engine.hpp"

#include <cmath>
#include <string>

#include "sublorentz/errors.hpp"

namespace sublorentz {

namespace {

Mat4 checked_metric(const DistributionMetric& metric, const Vec4& x) {
  const Mat4 g = metric.eval(x);
  if (std::abs(det4(g)) <= degeneracy_tolerance(g))
    throw MetricError("metric degenerate at queried point");
  return g;
}

std::array<Mat4, 4> lower_symbols(const DistributionMetric& metric,
                                  const Vec4& x) {
  const Ten3 dg = metric.jacobian_at(x);
  std::array<Mat4, 4> low{};
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        low[k][i][j] = 0.5 * (dg[i][k][j] + dg[j][k][i] - dg[k][i][j]);
  return low;
}

StateVector pack(const GeodesicState& s) {
  return {s.position.base[0], s.position.base[1], s.position.base[2],
          s.position.base[3], s.position.fiber,   s.velocity[0],
          s.velocity[1],      s.velocity[2],      s.velocity[3]};
}

GeodesicState unpack(const StateVector& y) {
  GeodesicState s;
  s.position.base = {y[0], y[1], y[2], y[3]};
  s.position.fiber = y[4];
  s.velocity = {y[5], y[6], y[7], y[8]};
  return s;
}

bool finite9(const StateVector& y) {
  for (double v : y)
    if (!std::isfinite(v)) return false;
  return true;
}

double frobenius(const Mat4& m) {
  double s = 0.0;
  for (const auto& row : m)
    for (double e : row) s += e * e;
  return std::sqrt(s);
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(step > 0.0)) throw SpecError("integrator step must be positive");
  if (!(t_end > 0.0)) throw SpecError("integrator t_end must be positive");
  if (step > t_end) throw SpecError("integrator step exceeds t_end");
  if (record_every < 1) throw SpecError("record_every must be >= 1");
  if (!std::isfinite(step) || !std::isfinite(t_end))
    throw SpecError("integrator config must be finite");
}

std::array<Mat4, 4> christoffel_lower(const DistributionMetric& metric,
                                      const Vec4& x) {
  checked_metric(metric, x);
  return lower_symbols(metric, x);
}

std::array<Mat4, 4> christoffel(const DistributionMetric& metric,
                                const Vec4& x) {
  const Mat4 g = checked_metric(metric, x);
  const auto ginv = inverse4(g);
  if (!ginv) throw MetricError("metric not invertible at queried point");
  const auto low = lower_symbols(metric, x);
  std::array<Mat4, 4> gamma{};
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int l = 0; l < 4; ++l) s += (*ginv)[k][l] * low[l][i][j];
        gamma[k][i][j] = s;
      }
  return gamma;
}

StateVector eom_rhs(const FramedDistribution& dist, const ParticleParams& p,
                    const GeodesicState& state) {
  const Vec4& x = state.position.base;
  const Vec4& u = state.velocity;
  const Mat4 g = checked_metric(dist.metric, x);
  const auto ginv = inverse4(g);
  if (!ginv) throw MetricError("metric not invertible at queried point");

  const FaradayTensor far = faraday(dist.potential, x);
  const double qm = p.charge / p.mass;

  Vec4 du{};
  if (!dist.metric.constant) {
    const auto low = lower_symbols(dist.metric, x);
    for (int k = 0; k < 4; ++k) {
      double s = 0.0;
      for (int l = 0; l < 4; ++l) {
        double quad = 0.0;
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) quad += low[l][i][j] * u[i] * u[j];
        s += (*ginv)[k][l] * quad;
      }
      du[k] = -s;
    }
  }
  // Lorentz term (q/m) F^k_j u^j with the first index raised by g.
  for (int k = 0; k < 4; ++k) {
    double s = 0.0;
    for (int l = 0; l < 4; ++l) {
      double fl = 0.0;
      for (int j = 0; j < 4; ++j) fl += far.f[l][j] * u[j];
      s += (*ginv)[k][l] * fl;
    }
    du[k] += qm * s;
  }

  StateVector out{};
  for (int k = 0; k < 4; ++k) out[k] = u[k];
  out[4] = lift_velocity(dist.potential, x, u);
  for (int k = 0; k < 4; ++k) out[5 + k] = du[k];
  return out;
}

LagrangeRhs lagrange_rhs(const FramedDistribution& dist,
                         const ParticleParams& p, const GeodesicState& state,
                         double a0, double lambda) {
  if (a0 != 0.0 && a0 != 1.0)
    throw SpecError("lagrange_rhs expects a0 normalized to 0 or 1");
  const Vec4& x = state.position.base;
  const Vec4& u = state.velocity;
  const FaradayTensor far = faraday(dist.potential, x);

  LagrangeRhs out;
  out.lambda_dot = 0.0;  // <.,d4> = 0 makes the multiplier a constant

  if (a0 == 0.0) {
    // Abnormal branch: velocity must solve sum_j F_jk u^j = 0.
    Vec4 residual{};
    double worst = 0.0;
    for (int k = 0; k < 4; ++k) {
      double r = 0.0;
      for (int j = 0; j < 4; ++j) r += far.f[j][k] * u[j];
      residual[k] = r;
      worst = std::max(worst, std::abs(r));
    }
    const double tol = 1e-12 * frobenius(far.f) * norm4(u);
    if (worst > tol)
      throw AbnormalityError(
          "abnormal velocity not in ker F: max residual " +
          std::to_string(worst));
    for (int k = 0; k < 4; ++k) out.state_dot[k] = u[k];
    out.state_dot[4] = lift_velocity(dist.potential, x, u);
    for (int k = 0; k < 4; ++k) out.state_dot[5 + k] = residual[k];
    return out;
  }

  // Normal branch: m(g_ik dv^k + Gamma_{i,lm} v^l v^m) + lambda c^4_ij v^j = 0
  // with c^4_ij = F_ji; solve the 4x4 system for dv.
  const Mat4 g = checked_metric(dist.metric, x);
  const auto low = lower_symbols(dist.metric, x);
  Vec4 rhs{};
  for (int i = 0; i < 4; ++i) {
    double quad = 0.0;
    for (int l = 0; l < 4; ++l)
      for (int m = 0; m < 4; ++m) quad += low[i][l][m] * u[l] * u[m];
    double lorentz = 0.0;
    for (int j = 0; j < 4; ++j) lorentz += far.f[j][i] * u[j];
    rhs[i] = -quad - (lambda / p.mass) * lorentz;
  }
  const auto dv = solve4(g, rhs);
  if (!dv) throw MetricError("metric not invertible at queried point");

  for (int k = 0; k < 4; ++k) out.state_dot[k] = u[k];
  out.state_dot[4] = lift_velocity(dist.potential, x, u);
  for (int k = 0; k < 4; ++k) out.state_dot[5 + k] = (*dv)[k];
  return out;
}

Trajectory integrate(const FramedDistribution& dist, const ParticleParams& p,
                     const GeodesicState& start, const IntegratorConfig& cfg,
                     Formulation form) {
  cfg.validate();
  if (!(p.mass > 0.0)) throw SpecError("particle mass must be positive");
  if (!all_finite(start.velocity) || !all_finite(start.position.base) ||
      !std::isfinite(start.position.fiber))
    throw SpecError("start state must be finite");

  const auto rhs = [&](const StateVector& y) -> StateVector {
    const GeodesicState s = unpack(y);
    if (form == Formulation::pontryagin) return eom_rhs(dist, p, s);
    return lagrange_rhs(dist, p, s, 1.0, p.charge).state_dot;
  };

  const long n_steps =
      std::max<long>(1, static_cast<long>(std::ceil(cfg.t_end / cfg.step - 1e-9)));
  const double h = cfg.t_end / static_cast<double>(n_steps);

  Trajectory traj;
  traj.samples.reserve(static_cast<std::size_t>(n_steps / cfg.record_every) + 2);

  StateVector y = pack(start);
  const auto record = [&](long k) {
    const GeodesicState s = unpack(y);
    TrajectorySample sample;
    sample.t = static_cast<double>(k) * h;
    sample.state = s;
    sample.pseudonorm = pseudonorm(dist.metric, s.position.base, s.velocity);
    const double v4 = lift_velocity(dist.potential, s.position.base, s.velocity);
    sample.horizontality_defect = horizontality_defect(
        dist.potential, s.position,
        {s.velocity[0], s.velocity[1], s.velocity[2], s.velocity[3], v4});
    traj.samples.push_back(sample);
  };

  // For a constant metric one signature check covers every step start.
  if (dist.metric.constant) validate_signature(dist.metric.eval(start.position.base));

  record(0);
  for (long k = 0; k < n_steps; ++k) {
    if (!dist.metric.constant)
      validate_signature(dist.metric.eval(unpack(y).position.base));

    StateVector k1 = rhs(y);
    StateVector ytmp;
    for (int i = 0; i < 9; ++i) ytmp[i] = y[i] + 0.5 * h * k1[i];
    StateVector k2 = rhs(ytmp);
    for (int i = 0; i < 9; ++i) ytmp[i] = y[i] + 0.5 * h * k2[i];
    StateVector k3 = rhs(ytmp);
    for (int i = 0; i < 9; ++i) ytmp[i] = y[i] + h * k3[i];
    StateVector k4 = rhs(ytmp);
    for (int i = 0; i < 9; ++i)
      y[i] += (h / 6.0) * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);

    if (!finite9(y))
      throw DivergenceError("integration diverged (non-finite state) after t = " +
                                std::to_string(static_cast<double>(k) * h),
                            static_cast<double>(k) * h);

    const long done = k + 1;
    if (done == n_steps || done % cfg.record_every == 0) record(done);
  }
  return traj;
}

AbnormalKernel abnormal_kernel(const FaradayTensor& faraday_tensor) {
  const Svd4 svd = svd4(faraday_tensor.f);
  const double sigma_max = svd.sigma[0];
  const double threshold = 1e-12 * sigma_max;
  AbnormalKernel out;
  for (int i = 0; i < 4; ++i) {
    if (svd.sigma[i] > threshold)
      ++out.rank_f;
    else
      out.basis.push_back(svd.right[i]);
  }
  return out;
}

ActionValues action_values(const FramedDistribution& dist,
                           const ParticleParams& p, const Trajectory& traj,
                           double light_speed) {
  const auto& samples = traj.samples;
  if (samples.size() < 2) throw SpecError("action needs at least two samples");

  std::vector<double> speed(samples.size());
  std::vector<double> coupling(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const double q =
        pseudonorm(dist.metric, s.state.position.base, s.state.velocity);
    if (!(q > 0.0))
      throw CausalityError("non-timelike sample " + std::to_string(i) +
                               " (pseudonorm " + std::to_string(q) + ")",
                           i);
    speed[i] = std::sqrt(q);
    coupling[i] =
        -lift_velocity(dist.potential, s.state.position.base, s.state.velocity);
  }
  double len = 0.0, coup = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    const double dt = samples[i + 1].t - samples[i].t;
    len += 0.5 * dt * (speed[i] + speed[i + 1]);
    coup += 0.5 * dt * (coupling[i] + coupling[i + 1]);
  }
  ActionValues out;
  out.length_part = -p.mass * light_speed * len;
  out.coupling_part = -(p.charge / light_speed) * coup;
  return out;
}

GaugeReport gauge_transform_check(const FramedDistribution& dist,
                                  const ParticleParams& p,
                                  const GeodesicState& start,
                                  const IntegratorConfig& cfg,
                                  const Polynomial4& f) {
  const PotentialField& base_pot = dist.potential;
  std::array<std::array<Polynomial4, 4>, 4> hess;
  for (int k = 0; k < 4; ++k) {
    const Polynomial4 dk = f.derivative(k);
    for (int j = 0; j < 4; ++j) hess[k][j] = dk.derivative(j);
  }
  PotentialField shifted;
  shifted.fd_step = base_pot.fd_step;
  shifted.eval = [&base_pot, f](const Vec4& x) {
    Vec4 a = base_pot.eval(x);
    const Vec4 grad = f.gradient_at(x);
    for (int i = 0; i < 4; ++i) a[i] += grad[i];
    return a;
  };
  shifted.jacobian = [&base_pot, hess](const Vec4& x) {
    Mat4 j = base_pot.jacobian_at(x);
    for (int k = 0; k < 4; ++k)
      for (int c = 0; c < 4; ++c) j[k][c] += hess[k][c](x);
    return j;
  };

  FramedDistribution shifted_dist{shifted, dist.metric};
  const Trajectory a = integrate(dist, p, start, cfg);
  const Trajectory b = integrate(shifted_dist, p, start, cfg);

  GaugeReport report;
  const double f0 = f(start.position.base);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const auto& sa = a.samples[i].state;
    const auto& sb = b.samples[i].state;
    for (int k = 0; k < 4; ++k) {
      report.max_base_deviation =
          std::max(report.max_base_deviation,
                   std::abs(sa.position.base[k] - sb.position.base[k]));
      report.max_base_deviation = std::max(
          report.max_base_deviation, std::abs(sa.velocity[k] - sb.velocity[k]));
    }
    const double expected_fiber =
        sa.position.fiber - (f(sa.position.base) - f0);
    report.max_fiber_relation_deviation =
        std::max(report.max_fiber_relation_deviation,
                 std::abs(sb.position.fiber - expected_fiber));
  }
  return report;
}

std::optional<Vec4> momentum_covector(const FramedDistribution& dist,
                                      const ParticleParams& p,
                                      const GeodesicState& state) {
  const Vec4& x = state.position.base;
  const Vec4& u = state.velocity;
  const double q = pseudonorm(dist.metric, x, u);
  if (!(q > 0.0)) return std::nullopt;
  const Mat4 g = dist.metric.eval(x);
  const Vec4 a = dist.potential.eval(x);
  Vec4 mom{};
  const double inv_speed = 1.0 / std::sqrt(q);
  for (int k = 0; k < 4; ++k) {
    double gk = 0.0;
    for (int j = 0; j < 4; ++j) gk += g[k][j] * u[j];
    mom[k] = p.mass * gk * inv_speed + p.charge * a[k];
  }
  return mom;
}

}  // namespace sublorentz
