// Closed-form geodesics in a constant magnetic field Hx = phi on the flat
// metric, and the surfaces built from them: the geodesic sphere (optimal
// arcs, |p t| <= 2pi) and the nonholonomic wavefront (no optimality cut).
//
// With the unit-speed convention (u2)^2 + (u3)^2 = 1 and the canonical
// integration constants b2 = cos(alpha)/p, b3 = -sin(alpha)/p, b4 fixed by
// x4(0) = 0, the curve of phase alpha and signed cyclotron rate p = q phi/m
// is
//
//     x2(t) = (cos(alpha) - cos(alpha + p t)) / p
//     x3(t) = (sin(alpha + p t) - sin(alpha)) / p
//     x4(t) = phi/(4 p^2) (-2 p t + sin(2 alpha + 2 p t) - sin(2 alpha))
//           + phi/p^2 sin(alpha) (cos(alpha) - cos(alpha + p t)),
//
// a circle of radius 1/|p| about (b2, b3) in the plane, with the fiber
// drifting by the swept area. The 1/p singularities are removable; below
// |p t| = 1e-4 a 6th-order series branch takes over (p = 0 included).
#pragma once

#include <span>
#include <vector>

#include "sublorentz/linalg.hpp"

namespace sublorentz {

struct MagneticGeodesicParams {
  double alpha = 0.0;  // initial phase: u2(0) = sin(alpha), u3(0) = cos(alpha)
  double p = 0.0;      // signed cyclotron rate q*phi/m
  double phi = 0.0;    // field strength
  double b2 = 0.0, b3 = 0.0, b4 = 0.0;  // integration constants

  // Canonical normalization: circle through the origin, x4(0) = 0.
  // For |p| below the series cutoff the b's are unused and left zero.
  static MagneticGeodesicParams canonical(double alpha, double p, double phi);
};

struct PlanePoint {
  double x2 = 0.0, x3 = 0.0, x4 = 0.0;
};

PlanePoint closed_form(const MagneticGeodesicParams& params, double t);

// The two evaluation routes behind closed_form, exposed so the branch
// handoff at |p t| = 1e-4 can be cross-checked directly.
PlanePoint closed_form_series(const MagneticGeodesicParams& params, double t);
PlanePoint closed_form_exact(const MagneticGeodesicParams& params, double t);

// In-plane velocity along the same curve: u2 = sin(alpha + p t),
// u3 = cos(alpha + p t).
std::array<double, 2> closed_form_velocity(const MagneticGeodesicParams& params,
                                           double t);

struct SphereSpec {
  double radius_s = 1.0;
  int alpha_count = 2;  // >= 2, inclusive grid over [-pi, pi]
  int p_count = 2;      // >= 2, inclusive grid over [p_min, p_max]
  double p_min = 0.0;
  double p_max = 0.0;
  double phi = 1.0;
};

enum class CloudKind { sphere, wavefront };

struct CloudPoint {
  double x2 = 0.0, x3 = 0.0, x4 = 0.0;
  double alpha = 0.0, p = 0.0, t = 0.0;
};

struct PointCloud {
  std::vector<CloudPoint> points;  // indexed alpha-major: ai * p_count + pi
  CloudKind kind = CloudKind::sphere;
  SphereSpec meta;
};

enum class ExecutionPolicy { serial, parallel };

// Uniform (alpha, p) grid evaluated at t = radius_s. The sphere enforces
// |p| * s <= 2pi over the whole range (throws SpecError otherwise); the
// wavefront applies no optimality cut. Grid cells are independent and the
// parallel kernel writes into pre-sized storage, so results are identical
// across policies and thread counts.
PointCloud sphere_sample(const SphereSpec& spec,
                         ExecutionPolicy policy = ExecutionPolicy::parallel);
PointCloud wavefront_sample(const SphereSpec& spec,
                            ExecutionPolicy policy = ExecutionPolicy::parallel);

struct ConeBoundReport {
  std::vector<double> p_values;
  std::vector<double> residuals;  // max over alpha of |x4(s) + phi s/(2p)|
  double residual_slope = 0.0;    // log-log fit; ~ -2 for generic p s
  double min_axis_ratio = 0.0;    // min over samples of |x4| / rho
  double cone_ratio_bound = 0.0;  // (|phi|/4) s
  bool inside_cone = false;       // min ratio >= bound * (1 - 0.05)
  bool slope_ok = false;          // slope <= -2 + 0.1
};

// Asymptotic checks for large |p|: the endpoint height approaches
// -phi s / (2p) with an O(1/p^2) residual, and the endpoints stay inside
// the cone |x4| >= (|phi|/4) s * rho around the fiber axis (points on the
// axis are trivially inside). Requires |p| * s >= 4pi for every p.
ConeBoundReport cone_bound_check(double s, double phi,
                                 std::span<const double> p_values);

// Two-term expansion of the height over the start point after k full
// turns, at cyclotron rate p = 2 pi k / s + theta:
//     -phi s^2/(4 pi k) + phi s^3 theta/(4 pi^2 k^2).
// Throws SpecError for k = 0.
double x4_return_distance(double s, double phi, int k, double theta);

}  // namespace sublorentz
