#pragma once

// Small dense linear algebra on evaluated data. All rank decisions use
// singular values against a threshold relative to the largest one.

#include <vector>

#include <Eigen/Dense>

namespace alab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultRankTol = 1e-8;

/// Numeric rank: number of singular values above tol * sigma_max.
int numeric_rank(const Matrix& m, double tol = kDefaultRankTol);

/// Orthonormal basis (as columns) of the null space of `m`.
Matrix null_space(const Matrix& m, double tol = kDefaultRankTol);

/// Orthonormal basis (as columns) of the column space of `m`.
Matrix range_basis(const Matrix& m, double tol = kDefaultRankTol);

/// Stacks vectors of equal length as the columns of a matrix. An empty
/// family yields a `rows` x 0 matrix.
Matrix columns(const std::vector<Vector>& vecs, Eigen::Index rows);

struct LeastSquares {
  Vector coeffs;
  double residual = 0.0;  // ||A x - b||
};

/// Minimum-norm least-squares solution of A x = b.
LeastSquares least_squares(const Matrix& a, const Vector& b,
                           double tol = kDefaultRankTol);

/// Dimension of the affine hull of a point cloud; zero for fewer than two
/// points.
int affine_rank(const std::vector<Vector>& pts, double tol = kDefaultRankTol);

/// True when the column spans of `a` and `b` coincide.
bool same_span(const Matrix& a, const Matrix& b, double tol = kDefaultRankTol);

}  // namespace alab
