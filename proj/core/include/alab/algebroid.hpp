#pragma once

// Lie algebroids in local coordinates: anchor rho^i_a(x) and structure
// functions C^g_ab(x) over a chart with coordinates x^1..x^n and a local
// fiber basis e_1..e_l.

#include <cstddef>
#include <string>
#include <vector>

#include "alab/expr.hpp"
#include "alab/linalg.hpp"

namespace alab {

/// Dense row-major matrix of expressions.
class ExprMatrix {
 public:
  ExprMatrix() = default;
  ExprMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ExprMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Expr& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Expr& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  Matrix eval(PointEvaluator& ev) const;
  Matrix eval(const Point& p) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Expr> data_;
};

ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b);

/// Components of a section in the fiber basis, or of a covector section in
/// the dual basis.
template <class Tag>
class FiberVector {
 public:
  FiberVector() = default;
  explicit FiberVector(std::size_t size) : comps_(size) {}
  explicit FiberVector(std::vector<Expr> comps) : comps_(std::move(comps)) {}

  static FiberVector basis(std::size_t size, std::size_t index) {
    FiberVector v(size);
    v.comps_[index] = Expr(1.0);
    return v;
  }

  std::size_t size() const { return comps_.size(); }
  const Expr& operator[](std::size_t a) const { return comps_[a]; }
  Expr& operator[](std::size_t a) { return comps_[a]; }
  const std::vector<Expr>& comps() const { return comps_; }

  /// True when every component is the literal constant 0.
  bool is_zero() const {
    for (const Expr& c : comps_) {
      if (!c.is_zero()) return false;
    }
    return true;
  }

  Vector eval(PointEvaluator& ev) const {
    Vector v(static_cast<Eigen::Index>(comps_.size()));
    for (std::size_t a = 0; a < comps_.size(); ++a) {
      v(static_cast<Eigen::Index>(a)) = ev(comps_[a]);
    }
    return v;
  }
  Vector eval(const Point& p) const {
    PointEvaluator ev(p);
    return eval(ev);
  }

  friend FiberVector operator+(const FiberVector& a, const FiberVector& b) {
    FiberVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.comps_[i] = a[i] + b[i];
    return r;
  }
  friend FiberVector operator-(const FiberVector& a, const FiberVector& b) {
    FiberVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.comps_[i] = a[i] - b[i];
    return r;
  }
  friend FiberVector operator-(const FiberVector& a) {
    FiberVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.comps_[i] = -a[i];
    return r;
  }
  friend FiberVector operator*(const Expr& f, const FiberVector& a) {
    FiberVector r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r.comps_[i] = f * a[i];
    return r;
  }

 private:
  std::vector<Expr> comps_;
};

struct SectionTag {};
struct CovectorTag {};
using Section = FiberVector<SectionTag>;
using CovectorSection = FiberVector<CovectorTag>;

/// One prescribed basis bracket [e_left, e_right] = value^g e_g.
struct BracketEntry {
  std::size_t left = 0;
  std::size_t right = 0;
  std::vector<Expr> value;
};

class LieAlgebroid {
 public:
  /// `anchor` is n x l. Brackets not listed are zero; listing both (a,b)
  /// and (b,a) or a diagonal pair is an error. `orbit_dimension` is the
  /// dimension of the anchor's orbit through the analysis points; it
  /// defaults to n (transitive algebroids).
  LieAlgebroid(std::vector<std::string> coords, std::vector<std::string> fibers,
               ExprMatrix anchor, const std::vector<BracketEntry>& brackets,
               std::size_t orbit_dimension = static_cast<std::size_t>(-1));

  std::size_t n() const { return coords_.size(); }
  std::size_t ell() const { return fibers_.size(); }
  std::size_t orbit_dimension() const { return orbit_dim_; }
  const std::vector<std::string>& coord_names() const { return coords_; }
  const std::vector<std::string>& fiber_names() const { return fibers_; }

  const ExprMatrix& anchor() const { return rho_; }
  const Expr& anchor(std::size_t i, std::size_t a) const { return rho_(i, a); }
  /// C^g_ab.
  const Expr& structure(std::size_t g, std::size_t a, std::size_t b) const {
    return c_[(g * ell() + a) * ell() + b];
  }
  bool has_structure() const { return has_c_; }

  Matrix anchor_at(const Point& p) const { return rho_.eval(p); }

 private:
  std::vector<std::string> coords_;
  std::vector<std::string> fibers_;
  ExprMatrix rho_;
  std::vector<Expr> c_;
  std::size_t orbit_dim_;
  bool has_c_ = false;
};

/// rho(sigma(p)) in R^n.
Vector anchor_apply(const LieAlgebroid& A, const Section& s, const Point& p);

/// The vector field rho(sigma) as n expressions.
std::vector<Expr> anchor_field(const LieAlgebroid& A, const Section& s);

/// Derivative of f along the vector field with components `field`.
Expr derivative_along(const std::vector<Expr>& field, const Expr& f);

/// rho(sigma) applied to a function: sum_i rho^i_a sigma^a dF/dx^i.
Expr anchor_derivative(const LieAlgebroid& A, const Section& s, const Expr& f);

Section lie_bracket(const LieAlgebroid& A, const Section& s, const Section& t);

/// Largest absolute residual of the anchor-compatibility and cyclic
/// structure equations over the given points.
double check_structure(const LieAlgebroid& A, const std::vector<Point>& pts);

/// Orthonormal basis of ker rho(p), as columns of an l x k matrix.
Matrix ker_anchor(const LieAlgebroid& A, const Point& p,
                  double tol = kDefaultRankTol);

int rank_of_family(const std::vector<Vector>& vecs,
                   double tol = kDefaultRankTol);

/// rank rho(p) reaches the orbit dimension.
bool is_locally_transitive(const LieAlgebroid& A, const Point& p,
                           double tol = kDefaultRankTol);

}  // namespace alab
