#include "alab/morphism.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace alab {
namespace {

Eigen::Index ix(std::size_t v) { return static_cast<Eigen::Index>(v); }

// d Psi^b_a / dx^i, indexed [i][b][a].
std::vector<Expr> fiber_map_derivatives(const BundleMap& f) {
  const std::size_t n = f.source.n();
  const std::size_t l = f.source.ell();
  const std::size_t lb = f.target.ell();
  std::vector<Expr> d(n * lb * l);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t b = 0; b < lb; ++b) {
      for (std::size_t a = 0; a < l; ++a) {
        d[(i * lb + b) * l + a] = diff(f.fiber_map(b, a), i);
      }
    }
  }
  return d;
}

// rho^i_a dPsi^b_d / dx^i at a point, indexed [a][b][d].
std::vector<double> anchored_fiber_derivative(const BundleMap& f,
                                              const std::vector<Expr>& d,
                                              PointEvaluator& ev,
                                              const Matrix& rho) {
  const std::size_t n = f.source.n();
  const std::size_t l = f.source.ell();
  const std::size_t lb = f.target.ell();
  std::vector<double> out(l * lb * l, 0.0);
  for (std::size_t a = 0; a < l; ++a) {
    for (std::size_t b = 0; b < lb; ++b) {
      for (std::size_t e = 0; e < l; ++e) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const Expr& di = d[(i * lb + b) * l + e];
          if (di.is_zero()) continue;
          acc += rho(ix(i), ix(a)) * ev(di);
        }
        out[(a * lb + b) * l + e] = acc;
      }
    }
  }
  return out;
}

}  // namespace

BundleMap::BundleMap(LieAlgebroid src, LieAlgebroid tgt, ExprMatrix psi_fiber,
                     std::vector<Expr> psi_base, bool is_open)
    : source(std::move(src)),
      target(std::move(tgt)),
      fiber_map(std::move(psi_fiber)),
      base_map(std::move(psi_base)),
      open(is_open) {
  if (fiber_map.rows() != target.ell() || fiber_map.cols() != source.ell()) {
    throw std::invalid_argument("fiber map must be " +
                                std::to_string(target.ell()) + " x " +
                                std::to_string(source.ell()));
  }
  if (base_map.size() != target.n()) {
    throw std::invalid_argument("base map must have " +
                                std::to_string(target.n()) + " components");
  }
}

Point BundleMap::map_point(const Point& p) const {
  PointEvaluator ev(p);
  Point q(ix(base_map.size()));
  for (std::size_t i = 0; i < base_map.size(); ++i) q(ix(i)) = ev(base_map[i]);
  return q;
}

Matrix BundleMap::base_jacobian(const Point& p) const {
  PointEvaluator ev(p);
  Matrix j(ix(base_map.size()), ix(source.n()));
  for (std::size_t r = 0; r < base_map.size(); ++r) {
    for (std::size_t i = 0; i < source.n(); ++i) {
      j(ix(r), ix(i)) = ev(diff(base_map[r], i));
    }
  }
  return j;
}

double check_admissible(const BundleMap& f, const std::vector<Point>& pts) {
  double worst = 0.0;
  for (const Point& p : pts) {
    Matrix lhs = f.base_jacobian(p) * f.source.anchor_at(p);
    Matrix rhs = f.target.anchor_at(f.map_point(p)) * f.fiber_at(p);
    worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
  }
  return worst;
}

double check_morphism(const BundleMap& f, const std::vector<Point>& pts) {
  const std::size_t l = f.source.ell();
  const std::size_t lb = f.target.ell();
  std::vector<Expr> d = fiber_map_derivatives(f);
  double worst = 0.0;
  for (const Point& p : pts) {
    PointEvaluator ev(p);
    PointEvaluator evb(f.map_point(p));
    Matrix rho = f.source.anchor().eval(ev);
    Matrix psi = f.fiber_map.eval(ev);
    std::vector<double> rd = anchored_fiber_derivative(f, d, ev, rho);
    for (std::size_t b = 0; b < lb; ++b) {
      for (std::size_t a = 0; a < l; ++a) {
        for (std::size_t e = a + 1; e < l; ++e) {
          double lhs = 0.0;
          for (std::size_t g = 0; g < l; ++g) {
            lhs += psi(ix(b), ix(g)) * ev(f.source.structure(g, a, e));
          }
          double rhs = rd[(a * lb + b) * l + e] - rd[(e * lb + b) * l + a];
          for (std::size_t t = 0; t < lb; ++t) {
            for (std::size_t s = 0; s < lb; ++s) {
              const Expr& cb = f.target.structure(b, t, s);
              if (cb.is_zero()) continue;
              rhs += evb(cb) * psi(ix(t), ix(a)) * psi(ix(s), ix(e));
            }
          }
          worst = std::max(worst, std::abs(lhs - rhs));
        }
      }
    }
  }
  return worst;
}

double check_maps_connection(const BundleMap& f, const Connection& c,
                             const Connection& cbar,
                             const std::vector<Point>& pts) {
  const std::size_t l = f.source.ell();
  const std::size_t lb = f.target.ell();
  std::vector<Expr> d = fiber_map_derivatives(f);
  double worst = 0.0;
  for (const Point& p : pts) {
    PointEvaluator ev(p);
    PointEvaluator evb(f.map_point(p));
    Matrix rho = f.source.anchor().eval(ev);
    Matrix psi = f.fiber_map.eval(ev);
    std::vector<double> rd = anchored_fiber_derivative(f, d, ev, rho);
    for (std::size_t b = 0; b < lb; ++b) {
      for (std::size_t a = 0; a < l; ++a) {
        for (std::size_t e = 0; e < l; ++e) {
          double lhs = 0.0;
          for (std::size_t g = 0; g < l; ++g) {
            if (c(g, a, e).is_zero()) continue;
            lhs += psi(ix(b), ix(g)) * ev(c(g, a, e));
          }
          double rhs = rd[(a * lb + b) * l + e];
          for (std::size_t t = 0; t < lb; ++t) {
            for (std::size_t s = 0; s < lb; ++s) {
              const Expr& gb = cbar(b, t, s);
              if (gb.is_zero()) continue;
              rhs += evb(gb) * psi(ix(t), ix(a)) * psi(ix(s), ix(e));
            }
          }
          worst = std::max(worst, std::abs(lhs - rhs));
        }
      }
    }
  }
  return worst;
}

BundleMap prolong_map(const BundleMap& f) {
  Prolongation src(f.source);
  Prolongation tgt(f.target);
  const std::size_t n = f.source.n();
  const std::size_t l = f.source.ell();
  const std::size_t lb = f.target.ell();
  auto y = [n](std::size_t b) { return Expr::coord(n + b); };

  ExprMatrix m(2 * lb, 2 * l);
  for (std::size_t a = 0; a < l; ++a) {
    std::vector<Expr> field = anchor_field(f.source, Section::basis(l, a));
    for (std::size_t b = 0; b < lb; ++b) {
      m(b, a) = f.fiber_map(b, a);
      m(lb + b, l + a) = f.fiber_map(b, a);
      // rho^i_a dPsi^g_b/dx^i y^b in the Vbar_g row of the X_a column
      Expr acc;
      for (std::size_t e = 0; e < l; ++e) {
        Expr dpsi = derivative_along(field, f.fiber_map(b, e));
        if (!dpsi.is_zero()) acc += dpsi * y(e);
      }
      m(lb + b, a) = acc;
    }
  }
  std::vector<Expr> base = f.base_map;
  for (std::size_t b = 0; b < lb; ++b) {
    Expr acc;
    for (std::size_t a = 0; a < l; ++a) acc += f.fiber_map(b, a) * y(a);
    base.push_back(acc);
  }
  return BundleMap(src.as_algebroid(), tgt.as_algebroid(), std::move(m),
                   std::move(base), f.open);
}

Relatedness check_weakly_related(const BundleMap& f, const GeneralSystem& s,
                                 const GeneralSystem& sbar,
                                 const std::vector<Point>& pts, double tol) {
  Relatedness out;
  const Eigen::Index lb = ix(f.target.ell());
  for (const Point& p : pts) {
    PointEvaluator ev(p);
    PointEvaluator evb(f.map_point(p));
    Matrix psi = f.fiber_map.eval(ev);
    std::vector<Vector> cols;
    for (const Section& e : sbar.inputs) cols.push_back(e.eval(evb));
    Matrix h = columns(cols, lb);

    Vector rhs = psi * s.drift.eval(ev) - sbar.drift.eval(evb);
    LeastSquares ls = least_squares(h, rhs, tol);
    out.drift_coeffs.push_back(ls.coeffs);
    double worst = ls.residual;

    Matrix c(h.cols(), ix(s.inputs.size()));
    for (std::size_t i = 0; i < s.inputs.size(); ++i) {
      LeastSquares li = least_squares(h, psi * s.inputs[i].eval(ev), tol);
      c.col(ix(i)) = li.coeffs;
      worst = std::max(worst, li.residual);
    }
    out.input_coeffs.push_back(c);
    out.worst_residual = std::max(out.worst_residual, worst);
    if (worst >= tol) out.related = false;
  }
  return out;
}

const char* claim_kind_name(ClaimKind k) {
  switch (k) {
    case ClaimKind::kNone: return "none";
    case ClaimKind::kForward: return "forward";
    case ClaimKind::kEquivalence: return "equivalence";
  }
  return "none";
}

namespace {

bool one_of(const std::string& s, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (s == n) return true;
  }
  return false;
}

double pushforward_residual(const BundleMap& f, const Section& s, const Section& sbar,
                            const std::vector<Point>& pts) {
  double worst = 0.0;
  for (const Point& p : pts) {
    Vector d = f.fiber_at(p) * s.eval(p) - sbar.eval(f.map_point(p));
    if (d.size() > 0) worst = std::max(worst, d.cwiseAbs().maxCoeff());
  }
  return worst;
}

}  // namespace

double mech_related_residual(const BundleMap& f, const MechSystem& s,
                             const MechSystem& sbar, const std::vector<Point>& pts) {
  const auto& in = s.effective_inputs();
  const auto& inb = sbar.effective_inputs();
  if (in.size() != inb.size()) {
    throw std::invalid_argument("related systems need the same number of inputs");
  }
  double worst = pushforward_residual(f, s.potential_gradient(), sbar.potential_gradient(), pts);
  for (std::size_t i = 0; i < in.size(); ++i) {
    worst = std::max(worst, pushforward_residual(f, in[i], inb[i], pts));
  }
  return std::max(worst, check_maps_connection(f, s.connection(), sbar.connection(), pts));
}

double general_related_residual(const BundleMap& f, const GeneralSystem& s,
                                const GeneralSystem& sbar,
                                const std::vector<Point>& pts) {
  if (s.inputs.size() != sbar.inputs.size()) {
    throw std::invalid_argument("related systems need the same number of inputs");
  }
  double worst = pushforward_residual(f, s.drift, sbar.drift, pts);
  for (std::size_t i = 0; i < s.inputs.size(); ++i) {
    worst = std::max(worst, pushforward_residual(f, s.inputs[i], sbar.inputs[i], pts));
  }
  return worst;
}

Claim propagate_verdict(const BundleMap& f, const Verdict& v, Relation rel,
                        double tol, bool require_iso) {
  Claim c;
  c.property = v.name;
  c.target_point = f.map_point(v.point);
  bool iso = false;
  if (f.source.ell() == f.target.ell()) {
    iso = std::abs(f.fiber_at(v.point).determinant()) > tol;
  }
  if (require_iso && !iso) {
    throw std::domain_error("fiber map is not an isomorphism at the point");
  }
  if (iso && rel == Relation::kRelated &&
      one_of(v.name, {"base-access", "zero-access", "zero-control"}) &&
      v.outcome != Outcome::kPreconditionFailed) {
    c.kind = ClaimKind::kEquivalence;
    c.outcome = v.outcome;
    c.provenance =
        "fiberwise isomorphism between related systems: the sufficient "
        "condition holds on both sides or on neither";
    return c;
  }
  if (f.open && rel != Relation::kUnrelated && v.sufficient() &&
      one_of(v.name, {"base-access", "base-control", "general-access", "general-control"})) {
    c.kind = ClaimKind::kForward;
    c.outcome = Outcome::kSufficient;
    c.provenance = "open base map: the property holds at the image point";
    return c;
  }
  c.provenance = "no transfer for this test, relation and verdict";
  return c;
}

}  // namespace alab
