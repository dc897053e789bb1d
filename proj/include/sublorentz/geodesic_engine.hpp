// Horizontal-geodesic dynamics for the framed distribution: the velocity
// obeys the charged-particle equation
//
//     du^k/dt = -Gamma^k_ij u^i u^j + (q/m) g^{kl} F_lj u^j,
//
// the base moves with dx^k/dt = u^k, and the fiber is carried along by the
// horizontality lift dx^4/dt = -sum_j A_j u^j. Two algebraically independent
// assemblies of the same flow are provided (index raising with an explicit
// inverse vs. a multiplier formulation solved per step) plus the abnormal
// branch, which is the algebraic kernel condition sum_j F_jk u^j = 0.
#pragma once

#include <array>
#include <optional>
#include <vector>

#include "sublorentz/fields.hpp"
#include "sublorentz/linalg.hpp"

namespace sublorentz {

struct ParticleParams {
  double mass = 1.0;    // m > 0
  double charge = 0.0;  // q; conserved along every geodesic
};

struct GeodesicState {
  Event5 position;
  Vec4 velocity{};  // u^0..u^3, frame components
};

struct TrajectorySample {
  double t = 0.0;
  GeodesicState state;
  double pseudonorm = 0.0;            // recomputed at the sample
  double horizontality_defect = 0.0;  // recomputed, never assumed zero
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  const TrajectorySample& front() const { return samples.front(); }
  const TrajectorySample& back() const { return samples.back(); }
};

struct IntegratorConfig {
  double step = 1e-3;     // fixed RK4 step (upper bound; evenly divides t_end)
  double t_end = 1.0;
  int record_every = 1;   // record every n-th step; final state always kept
  void validate() const;  // throws SpecError
};

enum class Formulation { pontryagin, lagrange };

// State packing used by the right-hand sides: (x0..x3, x4, u0..u3).
using StateVector = std::array<double, 9>;

// Gamma^k_ij of the restricted 4x4 metric, gamma[k][i][j], symmetric in
// (i,j). Lower-index symbols 0.5*(d_i g_kj + d_j g_ki - d_k g_ij) raised
// with the inverse metric. Throws MetricError when degenerate.
std::array<Mat4, 4> christoffel(const DistributionMetric& metric,
                                const Vec4& x);
// The lower-index symbols gamma[k][i][j] = Gamma_{k,ij} themselves.
std::array<Mat4, 4> christoffel_lower(const DistributionMetric& metric,
                                      const Vec4& x);

StateVector eom_rhs(const FramedDistribution& dist, const ParticleParams& p,
                    const GeodesicState& state);

struct LagrangeRhs {
  StateVector state_dot{};
  double lambda_dot = 0.0;  // identically zero: the multiplier is conserved
};

// a0 = 1: multiplier formulation of the same flow, charge replaced by
// lambda; assembled from lower-index symbols and the frame structure
// constants c^4_ij = F_ji, solved against g per step. a0 = 0: abnormal
// branch; the du slots carry the kernel residual sum_j F_jk u^j and a
// velocity outside ker F raises AbnormalityError.
LagrangeRhs lagrange_rhs(const FramedDistribution& dist,
                         const ParticleParams& p, const GeodesicState& state,
                         double a0, double lambda);

// Classical fixed-step RK4 on the 9-dimensional state. Monitors are
// recomputed at every recorded sample. Throws DivergenceError (with the
// last good t) if the state leaves the finite range, MetricError if the
// signature degenerates at a step start.
Trajectory integrate(const FramedDistribution& dist, const ParticleParams& p,
                     const GeodesicState& start, const IntegratorConfig& cfg,
                     Formulation form = Formulation::pontryagin);

struct AbnormalKernel {
  std::vector<Vec4> basis;  // orthonormal; size = 4 - rank_f
  int rank_f = 0;
};

// Numerical-rank kernel of F via SVD, threshold 1e-12 * sigma_max.
AbnormalKernel abnormal_kernel(const FaradayTensor& faraday_tensor);

struct ActionValues {
  double length_part = 0.0;    // -m c * integral of sqrt(<u,u>)
  double coupling_part = 0.0;  // -(q/c) * integral of sum_i A_i u^i
};

// Trapezoidal quadrature along the recorded samples. Throws CausalityError
// (with the sample index) on a non-timelike sample.
ActionValues action_values(const FramedDistribution& dist,
                           const ParticleParams& p, const Trajectory& traj,
                           double light_speed);

struct GaugeReport {
  double max_base_deviation = 0.0;      // x^0..x^3 and u between the two runs
  double max_fiber_relation_deviation = 0.0;
};

// Integrates with A and with A + grad f and checks that the base flow is
// unchanged while the fiber shifts by -(f(x(t)) - f(x(0))).
GaugeReport gauge_transform_check(const FramedDistribution& dist,
                                  const ParticleParams& p,
                                  const GeodesicState& start,
                                  const IntegratorConfig& cfg,
                                  const Polynomial4& f);

// Covector momenta p_k = m g_kj u^j / sqrt(<u,u>) + q A_k, defined for
// timelike states only.
std::optional<Vec4> momentum_covector(const FramedDistribution& dist,
                                      const ParticleParams& p,
                                      const GeodesicState& state);

}  // namespace sublorentz
