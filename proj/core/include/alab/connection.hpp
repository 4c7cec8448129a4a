#pragma once

// Linear E-connections, bundle metrics and constraint projectors.
//
// Index convention: Gamma^g_ab is the coefficient of e_g in
// nabla_{e_a} e_b, so the first lower index is the direction of
// differentiation.

#include <cstddef>
#include <vector>

#include "alab/algebroid.hpp"

namespace alab {

class Connection {
 public:
  Connection() = default;
  explicit Connection(std::size_t ell)
      : ell_(ell), gamma_(ell * ell * ell) {}

  /// The connection with all coefficients zero.
  static Connection flat(std::size_t ell) { return Connection(ell); }

  std::size_t ell() const { return ell_; }
  const Expr& operator()(std::size_t g, std::size_t a, std::size_t b) const {
    return gamma_[(g * ell_ + a) * ell_ + b];
  }
  Expr& operator()(std::size_t g, std::size_t a, std::size_t b) {
    return gamma_[(g * ell_ + a) * ell_ + b];
  }

 private:
  std::size_t ell_ = 0;
  std::vector<Expr> gamma_;
};

/// Symmetric l x l metric G_ab(x). Construction checks symmetry
/// structurally; positive definiteness is checked by `check_positive`.
class BundleMetric {
 public:
  explicit BundleMetric(ExprMatrix g);

  static BundleMetric identity(std::size_t ell) {
    return BundleMetric(ExprMatrix::identity(ell));
  }

  std::size_t ell() const { return g_.rows(); }
  const ExprMatrix& matrix() const { return g_; }
  const Expr& operator()(std::size_t a, std::size_t b) const { return g_(a, b); }

  /// Inverse metric G^ab. Symbolic for l <= 4 or constant metrics.
  const ExprMatrix& inverse() const { return inv_; }

  /// Throws std::domain_error unless G is positive definite at every point.
  void check_positive(const std::vector<Point>& pts) const;

  double inner(const Point& p, const Vector& u, const Vector& v) const;

 private:
  ExprMatrix g_;
  ExprMatrix inv_;
};

/// Projector P onto a subbundle D; Q = I - P.
class Projector {
 public:
  explicit Projector(ExprMatrix p);

  std::size_t ell() const { return p_.rows(); }
  const ExprMatrix& matrix() const { return p_; }
  ExprMatrix complement() const;
  Section apply(const Section& s) const;
  CovectorSection apply_transpose(const CovectorSection& s) const;

  /// max |P P - P| over the points.
  double idempotency_residual(const std::vector<Point>& pts) const;
  /// Numeric rank of P(p), the fiber dimension of D there.
  int rank_at(const Point& p, double tol = kDefaultRankTol) const;

 private:
  ExprMatrix p_;
};

/// Symbolic inverse via the adjugate (l <= 4), or numeric for constant
/// matrices of any size. Throws std::domain_error otherwise.
ExprMatrix symbolic_inverse(const ExprMatrix& m);

Section covariant_derivative(const LieAlgebroid& A, const Connection& c,
                             const Section& s, const Section& t);
Section torsion(const LieAlgebroid& A, const Connection& c, const Section& s,
                const Section& t);
Section symmetric_product(const LieAlgebroid& A, const Connection& c,
                          const Section& s, const Section& t);

/// Levi-Civita connection from the Koszul formula.
Connection levi_civita(const LieAlgebroid& A, const BundleMetric& g);

/// nabla-check_s t = P(nabla_s t) + nabla_s(Q t).
Connection constrained_connection(const LieAlgebroid& A, const Connection& c,
                                  const Projector& p);

/// G^ab rho^i_b dV/dx^i.
Section gradient(const LieAlgebroid& A, const BundleMetric& g, const Expr& v);

/// Index raising G^ab theta_b.
Section sharp(const BundleMetric& g, const CovectorSection& theta);

/// max over points and basis triples of |T(e_a, e_b)|.
double torsion_residual(const LieAlgebroid& A, const Connection& c,
                        const std::vector<Point>& pts);

/// max over points and basis triples of
/// |rho(e_a) G_bc - G(nabla_a e_b, e_c) - G(e_b, nabla_a e_c)|.
double metric_residual(const LieAlgebroid& A, const BundleMetric& g,
                       const Connection& c, const std::vector<Point>& pts);

struct InvarianceResult {
  bool invariant = true;
  double worst_residual = 0.0;
};

/// Whether span{d_basis} is closed under the symmetric product of `c` at
/// the points. Throws std::domain_error if the basis is rank deficient.
InvarianceResult is_geodesically_invariant(const LieAlgebroid& A,
                                           const Connection& c,
                                           const std::vector<Section>& d_basis,
                                           const std::vector<Point>& pts,
                                           double tol);

}  // namespace alab
