// Bracket structure of the distribution frame and what it implies for
// accessibility: growth vector, degree of nonholonomy, and the box-exponent
// function behind the ball-box accessibility bounds |x^i| <= eps^phi(i).
#pragma once

#include <span>
#include <vector>

#include "sublorentz/fields.hpp"
#include "sublorentz/geodesic_engine.hpp"
#include "sublorentz/linalg.hpp"

namespace sublorentz {

// [e_i, e_j] = -F_ij d/dx^4 in the frame (e_0..e_3, d4): components
// (0, 0, 0, 0, -F_ij(x)).
Vec5 frame_bracket(const PotentialField& potential, const Vec4& x, int i,
                   int j);

// Independent route: central differences of the frame coefficients
// themselves, never consulting an analytic jacobian. For validation.
Vec5 frame_bracket_fd(const PotentialField& potential, const Vec4& x, int i,
                      int j);

struct GrowthVector {
  std::vector<int> dims;  // n_1, n_2, ... up to stabilization
  int degree = 0;         // index of stabilization
};

// n_1 = 4 always; the brackets add the fiber direction exactly when F does
// not vanish at x (scale-aware threshold), so dims is (4, 5) with degree 2
// for F != 0 and (4) with degree 1 otherwise.
GrowthVector growth_vector(const PotentialField& potential, const Vec4& x);

struct BoxExponents {
  std::vector<int> phi;  // phi(i) = j iff n_{j-1} < i <= n_j (n_0 = 0)
};

BoxExponents box_exponents(const GrowthVector& gv);

struct BoxCheckReport {
  std::vector<double> epsilons;
  std::vector<double> max_fiber;  // max |x^4| over the fan, per epsilon
  std::vector<double> max_base;   // max |x^i|, i <= 3, over the fan
  double fiber_slope = 0.0;       // log-log fit; ~2 when F != 0
  double base_slope = 0.0;        // ~1
  bool exact_containment = false; // fiber identically zero (F = 0 case)
};

// Integrates fans of geodesics of length eps (uniform alpha grid, cyclotron
// rates filling |p|*eps <= 2pi at the largest eps) and fits the growth of
// the reached coordinates against eps. Fans for distinct eps run
// independently. Meant for the flat-metric constant-field scenario.
BoxCheckReport box_check(const FramedDistribution& dist,
                         const ParticleParams& params,
                         std::span<const double> epsilons,
                         int samples_per_eps);

}  // namespace sublorentz
