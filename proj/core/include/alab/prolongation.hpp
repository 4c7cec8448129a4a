#pragma once

// The prolongation T^E E of a Lie algebroid E, realized as an ordinary Lie
// algebroid with base coordinates (x^1..x^n, y^1..y^l) and fiber basis
// (X_1..X_l, V_1..V_l).

#include <optional>
#include <utility>
#include <vector>

#include "alab/connection.hpp"

namespace alab {

class Prolongation {
 public:
  explicit Prolongation(const LieAlgebroid& parent);

  const LieAlgebroid& parent() const { return parent_; }
  const LieAlgebroid& as_algebroid() const { return prol_; }
  std::size_t n() const { return parent_.n(); }
  std::size_t ell() const { return parent_.ell(); }

  /// Coordinate expression y^a.
  Expr y(std::size_t a) const { return Expr::coord(n() + a); }
  /// Basis sections X_a and V_a.
  Section X(std::size_t a) const { return Section::basis(2 * ell(), a); }
  Section V(std::size_t a) const { return Section::basis(2 * ell(), ell() + a); }

  /// The point (x, y) of the prolongation base.
  Point lift_point(const Point& x, const Vector& y) const;
  Point zero_point(const Point& x) const {
    return lift_point(x, Vector::Zero(static_cast<Eigen::Index>(ell())));
  }

 private:
  LieAlgebroid parent_;
  LieAlgebroid prol_;
};

/// sigma^V = sigma^a V_a.
Section vertical_lift(const Prolongation& P, const Section& s);

/// Delta = y^a V_a.
Section liouville(const Prolongation& P);

/// s in [s_min, s_max] with [Delta, Z] = s Z at every point (in (x, y)
/// coordinates) to within `tol`, if any.
std::optional<int> homogeneity_degree(const Prolongation& P, const Section& z,
                                      const std::vector<Point>& pts,
                                      int s_min = -1, int s_max = 3,
                                      double tol = 1e-10);

/// y^a X_a - 1/2 (Gamma^a_bc + Gamma^a_cb) y^b y^c V_a.
Section spray_of(const Prolongation& P, const Connection& c);

/// The section <s:t> with <s:t>^V = [s^V, [spray, t^V]]. The X-components
/// of the double bracket are checked to vanish at `check_pts` (parent base
/// points, paired with a few fiber samples); a violation of 1e-9 or more
/// throws std::domain_error.
Section symmetric_product_from_spray(const Prolongation& P, const Section& spray,
                                     const Section& s, const Section& t,
                                     const std::vector<Point>& check_pts);

/// Horizontal (X) and vertical (V) parts of a coefficient vector at a
/// zero-section point.
std::pair<Vector, Vector> hor_ver_split(const Prolongation& P, const Vector& z);

/// Restricts an expression on (x, y) to the zero section y = 0.
Expr restrict_to_zero_section(const Prolongation& P, const Expr& e);

}  // namespace alab
