#include "alab/algebroid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace alab {

ExprMatrix ExprMatrix::identity(std::size_t n) {
  ExprMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Expr(1.0);
  return m;
}

Matrix ExprMatrix::eval(PointEvaluator& ev) const {
  Matrix m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          ev((*this)(i, j));
    }
  }
  return m;
}

Matrix ExprMatrix::eval(const Point& p) const {
  PointEvaluator ev(p);
  return eval(ev);
}

ExprMatrix operator*(const ExprMatrix& a, const ExprMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("ExprMatrix product: dimension mismatch");
  }
  ExprMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Expr acc;
      for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
      r(i, j) = acc;
    }
  }
  return r;
}

LieAlgebroid::LieAlgebroid(std::vector<std::string> coords,
                           std::vector<std::string> fibers, ExprMatrix anchor,
                           const std::vector<BracketEntry>& brackets,
                           std::size_t orbit_dimension)
    : coords_(std::move(coords)),
      fibers_(std::move(fibers)),
      rho_(std::move(anchor)),
      orbit_dim_(orbit_dimension == static_cast<std::size_t>(-1)
                     ? coords_.size()
                     : orbit_dimension) {
  const std::size_t l = fibers_.size();
  if (rho_.rows() != coords_.size() || rho_.cols() != l) {
    throw std::invalid_argument("anchor must be " +
                                std::to_string(coords_.size()) + " x " +
                                std::to_string(l));
  }
  if (orbit_dim_ > coords_.size()) {
    throw std::invalid_argument("orbit dimension exceeds base dimension");
  }
  c_.assign(l * l * l, Expr());
  std::vector<bool> seen(l * l, false);
  for (const BracketEntry& b : brackets) {
    if (b.left >= l || b.right >= l) {
      throw std::invalid_argument("bracket entry refers to unknown fiber");
    }
    if (b.left == b.right) {
      throw std::invalid_argument("bracket of a basis section with itself");
    }
    if (b.value.size() != l) {
      throw std::invalid_argument("bracket value must have " +
                                  std::to_string(l) + " components");
    }
    std::size_t lo = std::min(b.left, b.right);
    std::size_t hi = std::max(b.left, b.right);
    if (seen[lo * l + hi]) {
      throw std::invalid_argument("bracket [" + fibers_[lo] + ", " +
                                  fibers_[hi] + "] given twice");
    }
    seen[lo * l + hi] = true;
    for (std::size_t g = 0; g < l; ++g) {
      const Expr& v = b.value[g];
      c_[(g * l + b.left) * l + b.right] = v;
      c_[(g * l + b.right) * l + b.left] = -v;
      if (!v.is_zero()) has_c_ = true;
    }
  }
}

Vector anchor_apply(const LieAlgebroid& A, const Section& s, const Point& p) {
  PointEvaluator ev(p);
  return A.anchor().eval(ev) * s.eval(ev);
}

std::vector<Expr> anchor_field(const LieAlgebroid& A, const Section& s) {
  std::vector<Expr> field(A.n());
  for (std::size_t i = 0; i < A.n(); ++i) {
    Expr acc;
    for (std::size_t a = 0; a < A.ell(); ++a) acc += A.anchor(i, a) * s[a];
    field[i] = acc;
  }
  return field;
}

Expr derivative_along(const std::vector<Expr>& field, const Expr& f) {
  if (f.is_constant()) return Expr();
  Expr acc;
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i].is_zero() || !depends_on(f, i)) continue;
    acc += field[i] * diff(f, i);
  }
  return acc;
}

Expr anchor_derivative(const LieAlgebroid& A, const Section& s, const Expr& f) {
  return derivative_along(anchor_field(A, s), f);
}

Section lie_bracket(const LieAlgebroid& A, const Section& s, const Section& t) {
  const std::size_t l = A.ell();
  if (s.size() != l || t.size() != l) {
    throw std::invalid_argument("section length does not match fiber rank");
  }
  std::vector<Expr> xs = anchor_field(A, s);
  std::vector<Expr> xt = anchor_field(A, t);
  Section out(l);
  for (std::size_t a = 0; a < l; ++a) {
    Expr acc = derivative_along(xs, t[a]) - derivative_along(xt, s[a]);
    if (A.has_structure()) {
      for (std::size_t b = 0; b < l; ++b) {
        if (s[b].is_zero()) continue;
        for (std::size_t g = 0; g < l; ++g) {
          const Expr& c = A.structure(a, b, g);
          if (c.is_zero() || t[g].is_zero()) continue;
          acc += c * s[b] * t[g];
        }
      }
    }
    out[a] = acc;
  }
  return out;
}

double check_structure(const LieAlgebroid& A, const std::vector<Point>& pts) {
  if (pts.empty()) throw std::invalid_argument("check_structure: no points");
  const std::size_t n = A.n();
  const std::size_t l = A.ell();
  // Symbolic first derivatives, shared across points.
  std::vector<Expr> drho(n * n * l);  // [j][i][a] = d rho^i_a / dx^j
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < l; ++a) {
        drho[(j * n + i) * l + a] = diff(A.anchor(i, a), j);
      }
    }
  }
  std::vector<Expr> dc(n * l * l * l);  // [i][g][a][b]
  if (A.has_structure()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t g = 0; g < l; ++g) {
        for (std::size_t a = 0; a < l; ++a) {
          for (std::size_t b = 0; b < l; ++b) {
            dc[((i * l + g) * l + a) * l + b] = diff(A.structure(g, a, b), i);
          }
        }
      }
    }
  }

  double worst = 0.0;
  for (const Point& p : pts) {
    PointEvaluator ev(p);
    Matrix rho = A.anchor().eval(ev);
    auto dr = [&](std::size_t j, std::size_t i, std::size_t a) {
      return ev(drho[(j * n + i) * l + a]);
    };
    std::vector<double> c(l * l * l);
    for (std::size_t k = 0; k < c.size(); ++k) {
      std::size_t g = k / (l * l);
      std::size_t a = (k / l) % l;
      std::size_t b = k % l;
      c[k] = ev(A.structure(g, a, b));
    }
    auto C = [&](std::size_t g, std::size_t a, std::size_t b) {
      return c[(g * l + a) * l + b];
    };
    auto X = [](std::size_t v) { return static_cast<Eigen::Index>(v); };

    // rho^j_a d_j rho^i_b - rho^j_b d_j rho^i_a = rho^i_g C^g_ab
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t a = 0; a < l; ++a) {
        for (std::size_t b = a + 1; b < l; ++b) {
          double r = 0.0;
          for (std::size_t j = 0; j < n; ++j) {
            r += rho(X(j), X(a)) * dr(j, i, b) - rho(X(j), X(b)) * dr(j, i, a);
          }
          for (std::size_t g = 0; g < l; ++g) r -= rho(X(i), X(g)) * C(g, a, b);
          worst = std::max(worst, std::abs(r));
        }
      }
    }

    // sum over cyclic (a,b,g) of rho^i_a d_i C^v_bg + C^v_am C^m_bg = 0
    if (!A.has_structure()) continue;
    auto term = [&](std::size_t v, std::size_t a, std::size_t b,
                    std::size_t g) {
      double t = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        t += rho(X(i), X(a)) * ev(dc[((i * l + v) * l + b) * l + g]);
      }
      for (std::size_t m = 0; m < l; ++m) t += C(v, a, m) * C(m, b, g);
      return t;
    };
    for (std::size_t v = 0; v < l; ++v) {
      for (std::size_t a = 0; a < l; ++a) {
        for (std::size_t b = a + 1; b < l; ++b) {
          for (std::size_t g = b + 1; g < l; ++g) {
            double r = term(v, a, b, g) + term(v, b, g, a) + term(v, g, a, b);
            worst = std::max(worst, std::abs(r));
          }
        }
      }
    }
  }
  return worst;
}

Matrix ker_anchor(const LieAlgebroid& A, const Point& p, double tol) {
  return null_space(A.anchor_at(p), tol);
}

int rank_of_family(const std::vector<Vector>& vecs, double tol) {
  if (vecs.empty()) return 0;
  return numeric_rank(columns(vecs, vecs.front().size()), tol);
}

bool is_locally_transitive(const LieAlgebroid& A, const Point& p, double tol) {
  return static_cast<std::size_t>(numeric_rank(A.anchor_at(p), tol)) >=
         A.orbit_dimension();
}

}  // namespace alab
