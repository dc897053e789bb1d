// The 4-potential, the field-strength tensor it generates, and the metric of
// the 4-dimensional velocity distribution on the 5-manifold.
//
// The distribution is the kernel of the contact form
//     omega = A_0 dx^0 + A_1 dx^1 + A_2 dx^2 + A_3 dx^3 + dx^4,
// spanned by the frame e_i = d/dx^i - A_i d/dx^4 (i = 0..3). All fields are
// functions of the base coordinates x^0..x^3 only; independence of the fiber
// coordinate x^4 is enforced by the type (evaluators never see x^4).
//
// Sign convention for the field-strength tensor, fixed here and used
// everywhere in this project (conventions in the literature differ):
//
//     F_jk = dA_k/dx^j - dA_j/dx^k,
//
//             (  0    Ex    Ey    Ez )
//     F   =   ( -Ex   0    -Hz    Hy )
//             ( -Ey   Hz    0    -Hx )
//             ( -Ez  -Hy    Hx    0  )
//
// so F_01 = Ex and F_23 = -Hx. In particular A = (0, 0, phi*x3, 0) gives
// F_23 = -phi, i.e. a constant magnetic field Hx = phi.
#pragma once

#include <functional>
#include <string>

#include "sublorentz/linalg.hpp"
#include "sublorentz/polynomial.hpp"

namespace sublorentz {

// Event on the 5-manifold: base coordinates plus the fiber coordinate x^4.
struct Event5 {
  Vec4 base{};
  double fiber = 0.0;
};

// Covector field A(x0..x3). `jacobian`, when set, must return
// jac[k][j] = dA_k/dx^j; otherwise central differences of `eval` are used
// with per-axis step fd_step * max(1, |x^j|).
struct PotentialField {
  std::function<Vec4(const Vec4&)> eval;
  std::function<Mat4(const Vec4&)> jacobian;  // optional
  double fd_step = 1e-6;

  Vec4 operator()(const Vec4& x) const;
  // Analytic jacobian when present, else central differences.
  // Throws EvaluationError naming the offending component on non-finite
  // values.
  Mat4 jacobian_at(const Vec4& x) const;
};

// Antisymmetric by construction: entries above the diagonal are computed,
// the rest mirrored.
struct FaradayTensor {
  Mat4 f{};
  double max_abs() const { return max_abs4(f); }
};

// Metric of the distribution, signature (+,-,-,-), nondegenerate at every
// queried point. `jacobian`, when set, returns jac[k][i][j] = dg_ij/dx^k.
struct DistributionMetric {
  std::function<Mat4(const Vec4&)> eval;
  std::function<Ten3(const Vec4&)> jacobian;  // optional
  double fd_step = 1e-6;
  bool constant = false;

  Mat4 operator()(const Vec4& x) const;
  Ten3 jacobian_at(const Vec4& x) const;
};

struct FramedDistribution {
  PotentialField potential;
  DistributionMetric metric;
};

enum class ConeClass { timelike_future, null_future, spacelike, past, zero };
std::string to_string(ConeClass c);

// F_jk = dA_k/dx^j - dA_j/dx^k at x, antisymmetrized exactly.
FaradayTensor faraday(const PotentialField& potential, const Vec4& x);

// omega(v5) = sum_i A_i(x) v^i + v^4; zero means horizontal.
double horizontality_defect(const PotentialField& potential, const Event5& x,
                            const Vec5& v5);

// The unique fiber velocity -sum_j A_j(x) u^j making (u, v4) horizontal.
double lift_velocity(const PotentialField& potential, const Vec4& x,
                     const Vec4& u);

// Quadratic form g_ij(x) u^i u^j (signed; no square root, no mass factor).
double pseudonorm(const DistributionMetric& metric, const Vec4& x,
                  const Vec4& u);

// Classification by the sign of the quadratic form and of u^0.
ConeClass cone_membership(const DistributionMetric& metric, const Vec4& x,
                          const Vec4& u);

// Throws MetricError unless g is symmetric-finite with one positive and
// three negative eigenvalues and |det g| above the degeneracy cutoff.
void validate_signature(const Mat4& g);
double degeneracy_tolerance(const Mat4& g);

// ---- factories ------------------------------------------------------------

PotentialField zero_potential();
// A = (0, 0, phi*x3, 0): constant magnetic field Hx = phi.
PotentialField constant_magnetic_potential(double phi);
// A = (-E*x1, 0, 0, 0): constant electric field Ex = E.
PotentialField constant_electric_potential(double e_strength);
PotentialField polynomial_potential(std::array<Polynomial4, 4> components);
// Keys: "zero", "constant-magnetic" (param phi), "constant-electric"
// (param E). Throws SpecError for unknown keys.
PotentialField named_potential(const std::string& key, double param);

DistributionMetric minkowski_metric();
DistributionMetric constant_metric(const Mat4& g);
// Entries g_ij given for i <= j as polynomials; validated at sample points.
DistributionMetric polynomial_metric(
    const std::array<Polynomial4, 10>& upper_entries);

}  // namespace sublorentz
