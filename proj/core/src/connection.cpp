#include "alab/connection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace alab {
namespace {

Eigen::Index ix(std::size_t v) { return static_cast<Eigen::Index>(v); }

bool all_constant(const ExprMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!m(i, j).is_constant()) return false;
    }
  }
  return true;
}

// Determinant of the submatrix with the given rows and columns, by
// cofactor expansion along the first row.
Expr minor_det(const ExprMatrix& m, const std::vector<std::size_t>& rows,
               const std::vector<std::size_t>& cols) {
  if (rows.size() == 1) return m(rows[0], cols[0]);
  Expr acc;
  std::vector<std::size_t> sub_rows(rows.begin() + 1, rows.end());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const Expr& head = m(rows[0], cols[k]);
    if (head.is_zero()) continue;
    std::vector<std::size_t> sub_cols;
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (j != k) sub_cols.push_back(cols[j]);
    }
    Expr term = head * minor_det(m, sub_rows, sub_cols);
    acc = (k % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

}  // namespace

ExprMatrix symbolic_inverse(const ExprMatrix& m) {
  const std::size_t l = m.rows();
  if (m.cols() != l) throw std::invalid_argument("inverse of non-square matrix");
  ExprMatrix inv(l, l);
  if (all_constant(m)) {
    Matrix num = m.eval(Point(0));
    Eigen::FullPivLU<Matrix> lu(num);
    if (!lu.isInvertible()) throw std::domain_error("singular matrix");
    Matrix r = lu.inverse();
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t j = 0; j < l; ++j) inv(i, j) = Expr(r(ix(i), ix(j)));
    }
    return inv;
  }
  if (l > 4) {
    throw std::domain_error(
        "symbolic inverse is limited to rank 4 for nonconstant matrices");
  }
  std::vector<std::size_t> all(l);
  for (std::size_t i = 0; i < l; ++i) all[i] = i;
  Expr det = minor_det(m, all, all);
  if (det.is_zero()) throw std::domain_error("singular matrix");
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      // inv(i,j) = (-1)^(i+j) M_ji / det
      std::vector<std::size_t> rows;
      std::vector<std::size_t> cols;
      for (std::size_t k = 0; k < l; ++k) {
        if (k != j) rows.push_back(k);
        if (k != i) cols.push_back(k);
      }
      Expr cof = l == 1 ? Expr(1.0) : minor_det(m, rows, cols);
      if ((i + j) % 2 == 1) cof = -cof;
      inv(i, j) = cof / det;
    }
  }
  return inv;
}

BundleMetric::BundleMetric(ExprMatrix g) : g_(std::move(g)) {
  if (g_.rows() != g_.cols()) {
    throw std::invalid_argument("metric must be square");
  }
  for (std::size_t a = 0; a < g_.rows(); ++a) {
    for (std::size_t b = a + 1; b < g_.cols(); ++b) {
      if (!structurally_equal(g_(a, b), g_(b, a))) {
        throw std::invalid_argument("metric is not symmetric at entry (" +
                                    std::to_string(a + 1) + "," +
                                    std::to_string(b + 1) + ")");
      }
    }
  }
  inv_ = symbolic_inverse(g_);
}

void BundleMetric::check_positive(const std::vector<Point>& pts) const {
  for (const Point& p : pts) {
    Eigen::LLT<Matrix> llt(g_.eval(p));
    if (llt.info() != Eigen::Success) {
      throw std::domain_error("metric is not positive definite at a sample point");
    }
  }
}

double BundleMetric::inner(const Point& p, const Vector& u,
                           const Vector& v) const {
  return u.dot(g_.eval(p) * v);
}

Projector::Projector(ExprMatrix p) : p_(std::move(p)) {
  if (p_.rows() != p_.cols()) {
    throw std::invalid_argument("projector must be square");
  }
}

ExprMatrix Projector::complement() const {
  ExprMatrix q(ell(), ell());
  for (std::size_t a = 0; a < ell(); ++a) {
    for (std::size_t b = 0; b < ell(); ++b) {
      q(a, b) = (a == b ? Expr(1.0) : Expr()) - p_(a, b);
    }
  }
  return q;
}

Section Projector::apply(const Section& s) const {
  Section r(ell());
  for (std::size_t a = 0; a < ell(); ++a) {
    Expr acc;
    for (std::size_t b = 0; b < ell(); ++b) acc += p_(a, b) * s[b];
    r[a] = acc;
  }
  return r;
}

CovectorSection Projector::apply_transpose(const CovectorSection& s) const {
  CovectorSection r(ell());
  for (std::size_t a = 0; a < ell(); ++a) {
    Expr acc;
    for (std::size_t b = 0; b < ell(); ++b) acc += p_(b, a) * s[b];
    r[a] = acc;
  }
  return r;
}

double Projector::idempotency_residual(const std::vector<Point>& pts) const {
  double worst = 0.0;
  for (const Point& pt : pts) {
    Matrix m = p_.eval(pt);
    worst = std::max(worst, (m * m - m).cwiseAbs().maxCoeff());
  }
  return worst;
}

int Projector::rank_at(const Point& p, double tol) const {
  return numeric_rank(p_.eval(p), tol);
}

Section covariant_derivative(const LieAlgebroid& A, const Connection& c,
                             const Section& s, const Section& t) {
  const std::size_t l = A.ell();
  std::vector<Expr> field = anchor_field(A, s);
  Section out(l);
  for (std::size_t g = 0; g < l; ++g) {
    Expr acc = derivative_along(field, t[g]);
    for (std::size_t a = 0; a < l; ++a) {
      if (s[a].is_zero()) continue;
      for (std::size_t b = 0; b < l; ++b) {
        const Expr& k = c(g, a, b);
        if (k.is_zero() || t[b].is_zero()) continue;
        acc += k * s[a] * t[b];
      }
    }
    out[g] = acc;
  }
  return out;
}

Section torsion(const LieAlgebroid& A, const Connection& c, const Section& s,
                const Section& t) {
  return covariant_derivative(A, c, s, t) - covariant_derivative(A, c, t, s) -
         lie_bracket(A, s, t);
}

Section symmetric_product(const LieAlgebroid& A, const Connection& c,
                          const Section& s, const Section& t) {
  return covariant_derivative(A, c, s, t) + covariant_derivative(A, c, t, s);
}

Connection levi_civita(const LieAlgebroid& A, const BundleMetric& g) {
  const std::size_t l = A.ell();
  if (g.ell() != l) throw std::invalid_argument("metric rank mismatch");
  // dG[b][c] along rho(e_a)
  std::vector<Expr> rg(l * l * l);
  for (std::size_t a = 0; a < l; ++a) {
    Section ea = Section::basis(l, a);
    std::vector<Expr> field = anchor_field(A, ea);
    for (std::size_t b = 0; b < l; ++b) {
      for (std::size_t c = 0; c < l; ++c) {
        rg[(a * l + b) * l + c] = derivative_along(field, g(b, c));
      }
    }
  }
  auto RG = [&](std::size_t a, std::size_t b, std::size_t c) -> const Expr& {
    return rg[(a * l + b) * l + c];
  };
  // G(C(x,y), z) with x = e_a, y = e_b, z = e_c
  auto CG = [&](std::size_t a, std::size_t b, std::size_t c) {
    Expr acc;
    for (std::size_t m = 0; m < l; ++m) {
      const Expr& k = A.structure(m, a, b);
      if (!k.is_zero()) acc += k * g(m, c);
    }
    return acc;
  };

  // 2 G(nabla_b e_c, e_v) =
  //   rho_b G_cv + rho_c G_bv - rho_v G_bc
  //   + G([e_b,e_c], e_v) - G([e_b,e_v], e_c) - G([e_c,e_v], e_b)
  std::vector<Expr> lowered(l * l * l);  // [b][c][v]
  for (std::size_t b = 0; b < l; ++b) {
    for (std::size_t c = 0; c < l; ++c) {
      for (std::size_t v = 0; v < l; ++v) {
        Expr k = RG(b, c, v) + RG(c, b, v) - RG(v, b, c);
        if (A.has_structure()) k += CG(b, c, v) - CG(b, v, c) - CG(c, v, b);
        lowered[(b * l + c) * l + v] = Expr(0.5) * k;
      }
    }
  }
  Connection out(l);
  const ExprMatrix& ginv = g.inverse();
  for (std::size_t a = 0; a < l; ++a) {
    for (std::size_t b = 0; b < l; ++b) {
      for (std::size_t c = 0; c < l; ++c) {
        Expr acc;
        for (std::size_t v = 0; v < l; ++v) {
          const Expr& low = lowered[(b * l + c) * l + v];
          if (low.is_zero() || ginv(a, v).is_zero()) continue;
          acc += ginv(a, v) * low;
        }
        out(a, b, c) = acc;
      }
    }
  }
  return out;
}

Connection constrained_connection(const LieAlgebroid& A, const Connection& c,
                                  const Projector& p) {
  const std::size_t l = A.ell();
  const ExprMatrix& P = p.matrix();
  ExprMatrix Q = p.complement();
  Connection out(l);
  for (std::size_t a = 0; a < l; ++a) {
    std::vector<Expr> field = anchor_field(A, Section::basis(l, a));
    for (std::size_t b = 0; b < l; ++b) {
      for (std::size_t g = 0; g < l; ++g) {
        Expr acc = derivative_along(field, Q(g, b));
        for (std::size_t v = 0; v < l; ++v) {
          if (!P(g, v).is_zero() && !c(v, a, b).is_zero()) {
            acc += P(g, v) * c(v, a, b);
          }
          if (!c(g, a, v).is_zero() && !Q(v, b).is_zero()) {
            acc += c(g, a, v) * Q(v, b);
          }
        }
        out(g, a, b) = acc;
      }
    }
  }
  return out;
}

Section gradient(const LieAlgebroid& A, const BundleMetric& g, const Expr& v) {
  const std::size_t l = A.ell();
  CovectorSection dv(l);
  for (std::size_t b = 0; b < l; ++b) {
    dv[b] = anchor_derivative(A, Section::basis(l, b), v);
  }
  return sharp(g, dv);
}

Section sharp(const BundleMetric& g, const CovectorSection& theta) {
  const std::size_t l = g.ell();
  const ExprMatrix& inv = g.inverse();
  Section out(l);
  for (std::size_t a = 0; a < l; ++a) {
    Expr acc;
    for (std::size_t b = 0; b < l; ++b) {
      if (theta[b].is_zero() || inv(a, b).is_zero()) continue;
      acc += inv(a, b) * theta[b];
    }
    out[a] = acc;
  }
  return out;
}

double torsion_residual(const LieAlgebroid& A, const Connection& c,
                        const std::vector<Point>& pts) {
  const std::size_t l = A.ell();
  double worst = 0.0;
  for (std::size_t a = 0; a < l; ++a) {
    for (std::size_t b = a + 1; b < l; ++b) {
      Section t = torsion(A, c, Section::basis(l, a), Section::basis(l, b));
      for (const Point& p : pts) {
        worst = std::max(worst, t.eval(p).cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

double metric_residual(const LieAlgebroid& A, const BundleMetric& g,
                       const Connection& c, const std::vector<Point>& pts) {
  const std::size_t l = A.ell();
  double worst = 0.0;
  for (std::size_t a = 0; a < l; ++a) {
    std::vector<Expr> field = anchor_field(A, Section::basis(l, a));
    for (std::size_t b = 0; b < l; ++b) {
      for (std::size_t d = b; d < l; ++d) {
        // rho(e_a) G_bd - Gamma^m_ab G_md - Gamma^m_ad G_bm
        Expr r = derivative_along(field, g(b, d));
        for (std::size_t m = 0; m < l; ++m) {
          r -= c(m, a, b) * g(m, d) + c(m, a, d) * g(b, m);
        }
        for (const Point& p : pts) worst = std::max(worst, std::abs(eval(r, p)));
      }
    }
  }
  return worst;
}

InvarianceResult is_geodesically_invariant(const LieAlgebroid& A,
                                           const Connection& c,
                                           const std::vector<Section>& d_basis,
                                           const std::vector<Point>& pts,
                                           double tol) {
  InvarianceResult out;
  std::vector<Section> products;
  for (std::size_t i = 0; i < d_basis.size(); ++i) {
    for (std::size_t j = i; j < d_basis.size(); ++j) {
      products.push_back(symmetric_product(A, c, d_basis[i], d_basis[j]));
    }
  }
  for (const Point& p : pts) {
    PointEvaluator ev(p);
    std::vector<Vector> cols;
    for (const Section& s : d_basis) cols.push_back(s.eval(ev));
    Matrix basis = columns(cols, ix(A.ell()));
    if (numeric_rank(basis) < static_cast<int>(d_basis.size())) {
      throw std::domain_error("subbundle basis is rank deficient at a point");
    }
    for (const Section& s : products) {
      Vector v = s.eval(ev);
      double r = least_squares(basis, v).residual;
      out.worst_residual = std::max(out.worst_residual, r);
      if (r >= tol * (1.0 + v.norm())) out.invariant = false;
    }
  }
  return out;
}

}  // namespace alab
