#include "alab/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace alab {
namespace {

// Threshold below which singular values count as zero. A matrix whose
// largest singular value is itself tiny in absolute terms is treated as zero.
double cutoff(const Vector& sv, double tol) {
  if (sv.size() == 0) return 0.0;
  return std::max(tol * sv(0), 1e-300);
}

}  // namespace

int numeric_rank(const Matrix& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  double cut = cutoff(sv, tol);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++r;
  }
  return r;
}

Matrix null_space(const Matrix& m, double tol) {
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0) return Matrix::Identity(cols, cols);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
  int r = numeric_rank(m, tol);
  return svd.matrixV().rightCols(cols - r);
}

Matrix range_basis(const Matrix& m, double tol) {
  if (m.cols() == 0) return Matrix(m.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU);
  int r = numeric_rank(m, tol);
  return svd.matrixU().leftCols(r);
}

Matrix columns(const std::vector<Vector>& vecs, Eigen::Index rows) {
  Matrix out(rows, static_cast<Eigen::Index>(vecs.size()));
  for (std::size_t j = 0; j < vecs.size(); ++j) {
    out.col(static_cast<Eigen::Index>(j)) = vecs[j];
  }
  return out;
}

LeastSquares least_squares(const Matrix& a, const Vector& b, double tol) {
  LeastSquares out;
  if (a.cols() == 0) {
    out.coeffs = Vector(0);
    out.residual = b.norm();
    return out;
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(tol);
  cod.compute(a);
  out.coeffs = cod.solve(b);
  out.residual = (a * out.coeffs - b).norm();
  return out;
}

int affine_rank(const std::vector<Vector>& pts, double tol) {
  if (pts.size() < 2) return 0;
  Vector mean = Vector::Zero(pts.front().size());
  for (const Vector& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Matrix centered(mean.size(), static_cast<Eigen::Index>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) {
    centered.col(static_cast<Eigen::Index>(j)) = pts[j] - mean;
  }
  return numeric_rank(centered, tol);
}

bool same_span(const Matrix& a, const Matrix& b, double tol) {
  int ra = numeric_rank(a, tol);
  int rb = numeric_rank(b, tol);
  if (ra != rb) return false;
  Matrix both(a.rows(), a.cols() + b.cols());
  both << a, b;
  return numeric_rank(both, tol) == ra;
}

}  // namespace alab
