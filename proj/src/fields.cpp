#include "sublorentz/fields.hpp"

#include <cmath>

#include "sublorentz/errors.hpp"

namespace sublorentz {

namespace {

double fd_axis_step(double base_step, double coord) {
  return base_step * std::max(1.0, std::abs(coord));
}

}  // namespace

Vec4 PotentialField::operator()(const Vec4& x) const { return eval(x); }

Mat4 PotentialField::jacobian_at(const Vec4& x) const {
  Mat4 jac{};
  if (jacobian) {
    jac = jacobian(x);
  } else {
    for (int j = 0; j < 4; ++j) {
      const double h = fd_axis_step(fd_step, x[j]);
      Vec4 xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      const Vec4 ap = eval(xp);
      const Vec4 am = eval(xm);
      for (int k = 0; k < 4; ++k) jac[k][j] = (ap[k] - am[k]) / (2.0 * h);
    }
  }
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j)
      if (!std::isfinite(jac[k][j]))
        throw EvaluationError("potential derivative dA_" + std::to_string(k) +
                              "/dx^" + std::to_string(j) + " is not finite");
  return jac;
}

Mat4 DistributionMetric::operator()(const Vec4& x) const { return eval(x); }

Ten3 DistributionMetric::jacobian_at(const Vec4& x) const {
  if (jacobian) return jacobian(x);
  Ten3 out{};
  if (constant) return out;
  for (int k = 0; k < 4; ++k) {
    const double h = fd_axis_step(fd_step, x[k]);
    Vec4 xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const Mat4 gp = eval(xp);
    const Mat4 gm = eval(xm);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out[k][i][j] = (gp[i][j] - gm[i][j]) / (2.0 * h);
  }
  return out;
}

std::string to_string(ConeClass c) {
  switch (c) {
    case ConeClass::timelike_future: return "timelike-future";
    case ConeClass::null_future: return "null-future";
    case ConeClass::spacelike: return "spacelike";
    case ConeClass::past: return "past";
    case ConeClass::zero: return "zero";
  }
  return "?";
}

FaradayTensor faraday(const PotentialField& potential, const Vec4& x) {
  const Mat4 jac = potential.jacobian_at(x);
  FaradayTensor out;
  for (int j = 0; j < 4; ++j) {
    for (int k = j + 1; k < 4; ++k) {
      const double v = jac[k][j] - jac[j][k];
      out.f[j][k] = v;
      out.f[k][j] = -v;
    }
  }
  return out;
}

double horizontality_defect(const PotentialField& potential, const Event5& x,
                            const Vec5& v5) {
  const Vec4 a = potential.eval(x.base);
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += a[i] * v5[i];
  return s + v5[4];
}

double lift_velocity(const PotentialField& potential, const Vec4& x,
                     const Vec4& u) {
  const Vec4 a = potential.eval(x);
  double s = 0.0;
  for (int j = 0; j < 4; ++j) s += a[j] * u[j];
  return -s;
}

double pseudonorm(const DistributionMetric& metric, const Vec4& x,
                  const Vec4& u) {
  const Mat4 g = metric.eval(x);
  double q = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) q += g[i][j] * u[i] * u[j];
  return q;
}

ConeClass cone_membership(const DistributionMetric& metric, const Vec4& x,
                          const Vec4& u) {
  if (u[0] == 0.0 && u[1] == 0.0 && u[2] == 0.0 && u[3] == 0.0)
    return ConeClass::zero;
  const Mat4 g = metric.eval(x);
  double q = 0.0;
  double scale = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      q += g[i][j] * u[i] * u[j];
      scale += std::abs(g[i][j] * u[i] * u[j]);
    }
  }
  const double null_band = 1e-12 * scale;
  if (q > null_band) return u[0] > 0.0 ? ConeClass::timelike_future
                                       : ConeClass::past;
  if (q >= -null_band) {
    if (u[0] > 0.0) return ConeClass::null_future;
    if (u[0] < 0.0) return ConeClass::past;
    return ConeClass::spacelike;  // degenerate: null with u0 = 0
  }
  return ConeClass::spacelike;
}

double degeneracy_tolerance(const Mat4& g) {
  const double s = std::max(1.0, max_abs4(g));
  return 1e-12 * s * s * s * s;
}

void validate_signature(const Mat4& g) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (!std::isfinite(g[i][j]))
        throw MetricError("metric entry g_" + std::to_string(i) +
                          std::to_string(j) + " is not finite");
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (g[i][j] != g[j][i])
        throw MetricError("metric not symmetric at entry g_" +
                          std::to_string(i) + std::to_string(j));
  if (std::abs(det4(g)) <= degeneracy_tolerance(g))
    throw MetricError("metric degenerate: |det g| below tolerance");
  const SymEigen4 eig = symmetric_eigen4(g);
  int pos = 0, neg = 0;
  for (double v : eig.values) {
    if (v > 0.0) ++pos;
    if (v < 0.0) ++neg;
  }
  if (pos != 1 || neg != 3)
    throw MetricError("metric signature is not (+,-,-,-): " +
                      std::to_string(pos) + " positive / " +
                      std::to_string(neg) + " negative eigenvalues");
}

PotentialField zero_potential() {
  PotentialField p;
  p.eval = [](const Vec4&) { return Vec4{}; };
  p.jacobian = [](const Vec4&) { return Mat4{}; };
  return p;
}

PotentialField constant_magnetic_potential(double phi) {
  PotentialField p;
  p.eval = [phi](const Vec4& x) { return Vec4{0.0, 0.0, phi * x[3], 0.0}; };
  p.jacobian = [phi](const Vec4&) {
    Mat4 j{};
    j[2][3] = phi;  // dA_2/dx^3
    return j;
  };
  return p;
}

PotentialField constant_electric_potential(double e_strength) {
  PotentialField p;
  p.eval = [e_strength](const Vec4& x) {
    return Vec4{-e_strength * x[1], 0.0, 0.0, 0.0};
  };
  p.jacobian = [e_strength](const Vec4&) {
    Mat4 j{};
    j[0][1] = -e_strength;  // dA_0/dx^1
    return j;
  };
  return p;
}

PotentialField polynomial_potential(std::array<Polynomial4, 4> components) {
  std::array<std::array<Polynomial4, 4>, 4> deriv;
  for (int k = 0; k < 4; ++k)
    for (int j = 0; j < 4; ++j) deriv[k][j] = components[k].derivative(j);
  PotentialField p;
  p.eval = [components](const Vec4& x) {
    Vec4 a{};
    for (int k = 0; k < 4; ++k) a[k] = components[k](x);
    return a;
  };
  p.jacobian = [deriv](const Vec4& x) {
    Mat4 j{};
    for (int k = 0; k < 4; ++k)
      for (int c = 0; c < 4; ++c) j[k][c] = deriv[k][c](x);
    return j;
  };
  return p;
}

PotentialField named_potential(const std::string& key, double param) {
  if (key == "zero") return zero_potential();
  if (key == "constant-magnetic") return constant_magnetic_potential(param);
  if (key == "constant-electric") return constant_electric_potential(param);
  throw SpecError("unknown potential kind '" + key + "'");
}

DistributionMetric minkowski_metric() {
  Mat4 g{};
  g[0][0] = 1.0;
  g[1][1] = -1.0;
  g[2][2] = -1.0;
  g[3][3] = -1.0;
  return constant_metric(g);
}

DistributionMetric constant_metric(const Mat4& g) {
  validate_signature(g);
  DistributionMetric m;
  m.eval = [g](const Vec4&) { return g; };
  m.jacobian = [](const Vec4&) { return Ten3{}; };
  m.constant = true;
  return m;
}

DistributionMetric polynomial_metric(
    const std::array<Polynomial4, 10>& upper_entries) {
  // upper_entries holds g_ij for (i,j) = (0,0),(0,1),(0,2),(0,3),(1,1),...
  std::array<std::array<Polynomial4, 4>, 4> g;
  int n = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i; j < 4; ++j) {
      g[i][j] = upper_entries[n];
      g[j][i] = upper_entries[n];
      ++n;
    }
  std::array<std::array<std::array<Polynomial4, 4>, 4>, 4> dg;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) dg[k][i][j] = g[i][j].derivative(k);
  DistributionMetric m;
  m.eval = [g](const Vec4& x) {
    Mat4 out{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) out[i][j] = g[i][j](x);
    return out;
  };
  m.jacobian = [dg](const Vec4& x) {
    Ten3 out{};
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) out[k][i][j] = dg[k][i][j](x);
    return out;
  };
  // Construction-time signature samples; the integrator re-validates at
  // every step start.
  const Vec4 probes[] = {{0, 0, 0, 0}, {0.5, 0, 0, 0}, {0, 0.5, 0, 0},
                         {0, 0, 0.5, 0}, {0, 0, 0, 0.5}};
  for (const Vec4& x : probes) validate_signature(m.eval(x));
  return m;
}

}  // namespace sublorentz
