#include "sublorentz/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace sublorentz {

Mat4 identity4() {
  Mat4 m{};
  for (int i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

double dot4(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

double norm4(const Vec4& a) { return std::sqrt(dot4(a, a)); }

Vec4 matvec4(const Mat4& m, const Vec4& v) {
  Vec4 r{};
  for (int i = 0; i < 4; ++i) r[i] = dot4(m[i], v);
  return r;
}

Mat4 matmul4(const Mat4& a, const Mat4& b) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int k = 0; k < 4; ++k)
      for (int j = 0; j < 4; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Mat4 transpose4(const Mat4& m) {
  Mat4 r{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) r[i][j] = m[j][i];
  return r;
}

double max_abs4(const Mat4& m) {
  double v = 0.0;
  for (const auto& row : m)
    for (double e : row) v = std::max(v, std::abs(e));
  return v;
}

bool all_finite(const Vec4& v) {
  for (double e : v)
    if (!std::isfinite(e)) return false;
  return true;
}

bool all_finite(const Mat4& m) {
  for (const auto& row : m)
    if (!all_finite(row)) return false;
  return true;
}

double det4(const Mat4& m) {
  // LU with partial pivoting; the product of pivots.
  Mat4 a = m;
  double det = 1.0;
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return 0.0;
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (int r = c + 1; r < 4; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int j = c; j < 4; ++j) a[r][j] -= f * a[c][j];
    }
  }
  return det;
}

namespace {

// Forward-eliminates [a | rhs] with partial pivoting; false when singular.
bool gauss(Mat4& a, Mat4& rhs) {
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return false;
    std::swap(a[piv], a[c]);
    std::swap(rhs[piv], rhs[c]);
    const double inv = 1.0 / a[c][c];
    for (int r = 0; r < 4; ++r) {
      if (r == c) continue;
      const double f = a[r][c] * inv;
      for (int j = 0; j < 4; ++j) {
        a[r][j] -= f * a[c][j];
        rhs[r][j] -= f * rhs[c][j];
      }
    }
  }
  for (int c = 0; c < 4; ++c) {
    const double inv = 1.0 / a[c][c];
    for (int j = 0; j < 4; ++j) rhs[c][j] *= inv;
  }
  return true;
}

}  // namespace

std::optional<Mat4> inverse4(const Mat4& m) {
  Mat4 a = m;
  Mat4 rhs = identity4();
  if (!gauss(a, rhs)) return std::nullopt;
  return rhs;
}

std::optional<Vec4> solve4(const Mat4& m, const Vec4& b) {
  Mat4 a = m;
  Mat4 rhs{};
  for (int i = 0; i < 4; ++i) rhs[i][0] = b[i];
  if (!gauss(a, rhs)) return std::nullopt;
  Vec4 x{};
  for (int i = 0; i < 4; ++i) x[i] = rhs[i][0];
  return x;
}

SymEigen4 symmetric_eigen4(const Mat4& a) {
  Mat4 d = a;
  Mat4 v = identity4();
  // Cyclic Jacobi sweeps; 4x4 converges in a handful of passes.
  for (int sweep = 0; sweep < 32; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 4; ++p)
      for (int q = p + 1; q < 4; ++q) off += d[p][q] * d[p][q];
    if (off < 1e-300) break;
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        const double apq = d[p][q];
        if (apq == 0.0) continue;
        const double app = d[p][p];
        const double aqq = d[q][q];
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < 4; ++k) {
          const double dkp = d[k][p], dkq = d[k][q];
          d[k][p] = c * dkp - s * dkq;
          d[k][q] = s * dkp + c * dkq;
        }
        for (int k = 0; k < 4; ++k) {
          const double dpk = d[p][k], dqk = d[q][k];
          d[p][k] = c * dpk - s * dqk;
          d[q][k] = s * dpk + c * dqk;
          const double vpk = v[p][k], vqk = v[q][k];
          v[p][k] = c * vpk - s * vqk;
          v[q][k] = s * vpk + c * vqk;
        }
      }
    }
  }
  SymEigen4 out;
  std::array<int, 4> order = {0, 1, 2, 3};
  Vec4 vals = {d[0][0], d[1][1], d[2][2], d[3][3]};
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return vals[i] > vals[j]; });
  for (int i = 0; i < 4; ++i) {
    out.values[i] = vals[order[i]];
    out.vectors[i] = v[order[i]];
  }
  return out;
}

Svd4 svd4(const Mat4& a) {
  // One-sided Jacobi: orthogonalize the columns of `work` by right
  // rotations, accumulating them into v. Column norms become sigma.
  Mat4 work = a;
  Mat4 v = identity4();
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        double app = 0.0, aqq = 0.0, apq = 0.0;
        for (int k = 0; k < 4; ++k) {
          app += work[k][p] * work[k][p];
          aqq += work[k][q] * work[k][q];
          apq += work[k][p] * work[k][q];
        }
        if (std::abs(apq) <= 1e-30 * std::sqrt(app * aqq) || apq == 0.0)
          continue;
        rotated = true;
        const double tau = (aqq - app) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < 4; ++k) {
          const double wkp = work[k][p], wkq = work[k][q];
          work[k][p] = c * wkp - s * wkq;
          work[k][q] = s * wkp + c * wkq;
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
    if (!rotated) break;
  }
  Vec4 sig{};
  for (int j = 0; j < 4; ++j) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += work[k][j] * work[k][j];
    sig[j] = std::sqrt(s);
  }
  std::array<int, 4> order = {0, 1, 2, 3};
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return sig[i] > sig[j]; });
  Svd4 out;
  for (int i = 0; i < 4; ++i) {
    out.sigma[i] = sig[order[i]];
    for (int k = 0; k < 4; ++k) out.right[i][k] = v[k][order[i]];
    // Deterministic sign: largest-magnitude component positive.
    int big = 0;
    for (int k = 1; k < 4; ++k)
      if (std::abs(out.right[i][k]) > std::abs(out.right[i][big])) big = k;
    if (out.right[i][big] < 0.0)
      for (int k = 0; k < 4; ++k) out.right[i][k] = -out.right[i][k];
  }
  return out;
}

double linear_fit_slope(const double* x, const double* y, int n) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace sublorentz
