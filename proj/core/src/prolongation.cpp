#include "alab/prolongation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace alab {
namespace {

LieAlgebroid build_prolongation(const LieAlgebroid& A) {
  const std::size_t n = A.n();
  const std::size_t l = A.ell();
  std::vector<std::string> coords = A.coord_names();
  std::vector<std::string> fibers;
  for (std::size_t a = 0; a < l; ++a) coords.push_back("y" + std::to_string(a + 1));
  for (std::size_t a = 0; a < l; ++a) fibers.push_back("X" + std::to_string(a + 1));
  for (std::size_t a = 0; a < l; ++a) fibers.push_back("V" + std::to_string(a + 1));
  // Fiber coordinate names must not collide with the parent's.
  for (std::size_t a = 0; a < l; ++a) {
    std::string& name = coords[n + a];
    while (std::count(coords.begin(), coords.end(), name) > 1) name += "_";
  }

  ExprMatrix rho(n + l, 2 * l);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < l; ++a) rho(i, a) = A.anchor(i, a);
  }
  for (std::size_t a = 0; a < l; ++a) rho(n + a, l + a) = Expr(1.0);

  std::vector<BracketEntry> brackets;
  if (A.has_structure()) {
    for (std::size_t a = 0; a < l; ++a) {
      for (std::size_t b = a + 1; b < l; ++b) {
        BracketEntry e{a, b, std::vector<Expr>(2 * l)};
        bool any = false;
        for (std::size_t g = 0; g < l; ++g) {
          e.value[g] = A.structure(g, a, b);
          any = any || !e.value[g].is_zero();
        }
        if (any) brackets.push_back(std::move(e));
      }
    }
  }
  return LieAlgebroid(std::move(coords), std::move(fibers), std::move(rho),
                      brackets, A.orbit_dimension() + l);
}

}  // namespace

Prolongation::Prolongation(const LieAlgebroid& parent)
    : parent_(parent), prol_(build_prolongation(parent)) {}

Point Prolongation::lift_point(const Point& x, const Vector& y) const {
  Point p(static_cast<Eigen::Index>(n() + ell()));
  p << x, y;
  return p;
}

Section vertical_lift(const Prolongation& P, const Section& s) {
  const std::size_t l = P.ell();
  if (s.size() != l) throw std::invalid_argument("vertical_lift: size mismatch");
  Section out(2 * l);
  for (std::size_t a = 0; a < l; ++a) out[l + a] = s[a];
  return out;
}

Section liouville(const Prolongation& P) {
  const std::size_t l = P.ell();
  Section out(2 * l);
  for (std::size_t a = 0; a < l; ++a) out[l + a] = P.y(a);
  return out;
}

std::optional<int> homogeneity_degree(const Prolongation& P, const Section& z,
                                      const std::vector<Point>& pts,
                                      int s_min, int s_max, double tol) {
  const LieAlgebroid& A = P.as_algebroid();
  Section dz = lie_bracket(A, liouville(P), z);
  std::vector<std::pair<Vector, Vector>> samples;
  for (const Point& p : pts) {
    PointEvaluator ev(p);
    samples.emplace_back(dz.eval(ev), z.eval(ev));
  }
  for (int s = s_min; s <= s_max; ++s) {
    bool ok = true;
    for (const auto& [d, v] : samples) {
      if ((d - static_cast<double>(s) * v).cwiseAbs().maxCoeff() > tol) {
        ok = false;
        break;
      }
    }
    if (ok) return s;
  }
  return std::nullopt;
}

Section spray_of(const Prolongation& P, const Connection& c) {
  const std::size_t l = P.ell();
  Section out(2 * l);
  for (std::size_t a = 0; a < l; ++a) {
    out[a] = P.y(a);
    Expr acc;
    for (std::size_t b = 0; b < l; ++b) {
      for (std::size_t g = b; g < l; ++g) {
        Expr s = c(a, b, g) + c(a, g, b);
        if (s.is_zero()) continue;
        // Off-diagonal pairs appear twice in the full double sum.
        Expr coeff = b == g ? Expr(0.5) * s : s;
        acc += coeff * P.y(b) * P.y(g);
      }
    }
    out[l + a] = -acc;
  }
  return out;
}

Section symmetric_product_from_spray(const Prolongation& P, const Section& spray,
                                     const Section& s, const Section& t,
                                     const std::vector<Point>& check_pts) {
  const LieAlgebroid& A = P.as_algebroid();
  const std::size_t l = P.ell();
  Section inner = lie_bracket(A, spray, vertical_lift(P, t));
  Section outer = lie_bracket(A, vertical_lift(P, s), inner);

  // Fiber samples at which the X-components must vanish.
  std::vector<Vector> ys{Vector::Zero(static_cast<Eigen::Index>(l))};
  Vector y1(static_cast<Eigen::Index>(l));
  for (std::size_t a = 0; a < l; ++a) {
    y1(static_cast<Eigen::Index>(a)) = 0.7 - 0.3 * static_cast<double>(a);
  }
  ys.push_back(y1);
  for (const Point& x : check_pts) {
    for (const Vector& y : ys) {
      PointEvaluator ev(P.lift_point(x, y));
      for (std::size_t a = 0; a < l; ++a) {
        double v = ev(outer[a]);
        if (std::abs(v) >= 1e-9) {
          throw std::domain_error(
              "double bracket has a horizontal component; input is not a spray");
        }
      }
    }
  }
  Section out(l);
  for (std::size_t a = 0; a < l; ++a) {
    out[a] = restrict_to_zero_section(P, outer[l + a]);
  }
  return out;
}

std::pair<Vector, Vector> hor_ver_split(const Prolongation& P, const Vector& z) {
  const auto l = static_cast<Eigen::Index>(P.ell());
  if (z.size() != 2 * l) throw std::invalid_argument("hor_ver_split: size");
  return {z.head(l), z.tail(l)};
}

Expr restrict_to_zero_section(const Prolongation& P, const Expr& e) {
  const std::size_t n = P.n();
  return substitute(e, [n](std::size_t i) {
    return i < n ? Expr::coord(i) : Expr();
  });
}

}  // namespace alab
