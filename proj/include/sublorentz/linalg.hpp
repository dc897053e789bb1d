// Small dense linear algebra on 4x4 matrices: determinants, inverses,
// symmetric eigenvalues (cyclic Jacobi) and singular values (one-sided
// Jacobi). Everything is stack-allocated and deterministic.
#pragma once

#include <array>
#include <optional>

namespace sublorentz {

using Vec4 = std::array<double, 4>;
using Vec5 = std::array<double, 5>;
using Mat4 = std::array<Vec4, 4>;  // row-major: m[i][j]
using Ten3 = std::array<Mat4, 4>;  // t[k][i][j], k = derivative direction

Mat4 identity4();
double dot4(const Vec4& a, const Vec4& b);
double norm4(const Vec4& a);
Vec4 matvec4(const Mat4& m, const Vec4& v);
Mat4 matmul4(const Mat4& a, const Mat4& b);
Mat4 transpose4(const Mat4& m);
double max_abs4(const Mat4& m);
bool all_finite(const Vec4& v);
bool all_finite(const Mat4& m);

double det4(const Mat4& m);

// Gauss-Jordan with partial pivoting; nullopt when a pivot vanishes.
std::optional<Mat4> inverse4(const Mat4& m);

// Solve m x = b in place of forming the inverse; nullopt when singular.
std::optional<Vec4> solve4(const Mat4& m, const Vec4& b);

// Eigen-decomposition of a symmetric matrix. values sorted descending,
// vectors[i] is the unit eigenvector for values[i].
struct SymEigen4 {
  Vec4 values;
  Mat4 vectors;
};
SymEigen4 symmetric_eigen4(const Mat4& a);

// Singular values (descending) and right singular vectors, right[i]
// matching sigma[i]. One-sided Jacobi, accurate for tiny sigma.
struct Svd4 {
  Vec4 sigma;
  Mat4 right;
};
Svd4 svd4(const Mat4& a);

// Least-squares slope of y against x.
double linear_fit_slope(const double* x, const double* y, int n);

}  // namespace sublorentz
