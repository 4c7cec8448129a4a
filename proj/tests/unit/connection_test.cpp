#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "alab/connection.hpp"
#include "alab/model.hpp"
#include "fixtures.hpp"
#include "random_expr.hpp"

namespace alab {
namespace {

LieAlgebroid frame_algebroid() { return testing::rotating_frame_map().source; }

BundleMetric wobbly_metric() {
  const Expr x1 = Expr::coord(0), x2 = Expr::coord(1);
  ExprMatrix g(2, 2);
  g(0, 0) = Expr(2.0) + sin(x1);
  g(0, 1) = Expr(0.3) * x2;
  g(1, 0) = Expr(0.3) * x2;
  g(1, 1) = Expr(1.0) + x2 * x2;
  return BundleMetric(g);
}

TEST(LeviCivita, TorsionFreeAndMetricOnFrameAlgebroid) {
  LieAlgebroid A = frame_algebroid();
  BundleMetric g = wobbly_metric();
  Connection c = levi_civita(A, g);
  std::vector<Point> pts = testing::points_near(Point::Zero(2), 30, 1.0, 1);
  EXPECT_LT(torsion_residual(A, c, pts), 1e-10);
  EXPECT_LT(metric_residual(A, g, c, pts), 1e-10);
  // The flat connection is metric for G = I but has torsion -[f1, f2].
  Connection flat = Connection::flat(2);
  EXPECT_GT(torsion_residual(A, flat, pts), 0.5);
  EXPECT_LT(metric_residual(A, BundleMetric::identity(2), flat, pts), 1e-15);
}

TEST(LeviCivita, PolarChristoffelSymbols) {
  Model m = zoo_model("polar");
  Connection c = levi_civita(m.algebroid, *m.metric);
  Point p(2);
  p << 1.7, 0.2;
  EXPECT_NEAR(eval(c(0, 1, 1), p), -1.7, 1e-14);
  EXPECT_NEAR(eval(c(1, 0, 1), p), 1 / 1.7, 1e-14);
  EXPECT_NEAR(eval(c(1, 1, 0), p), 1 / 1.7, 1e-14);
  EXPECT_EQ(eval(c(0, 0, 0), p), 0.0);
  EXPECT_EQ(eval(c(0, 0, 1), p), 0.0);
  EXPECT_EQ(eval(c(1, 1, 1), p), 0.0);
}

TEST(Connection, SymmetricProductIsSymmetricAndTensorial) {
  LieAlgebroid A = frame_algebroid();
  Connection c = levi_civita(A, wobbly_metric());
  testing::RandomExpr gen(7);
  for (int trial = 0; trial < 10; ++trial) {
    Section s(2), t(2);
    for (std::size_t a = 0; a < 2; ++a) {
      s[a] = gen(2);
      t[a] = gen(2);
    }
    Expr f = gen(2);
    Section sym = symmetric_product(A, c, s, t) - symmetric_product(A, c, t, s);
    Section lin = covariant_derivative(A, c, f * s, t) - f * covariant_derivative(A, c, s, t);
    for (const Point& p : testing::points_near(Point::Zero(2), 3, 1.0, 50 + trial)) {
      EXPECT_LT(sym.eval(p).norm(), 1e-10);
      EXPECT_LT(lin.eval(p).norm(), 1e-9 * (1.0 + covariant_derivative(A, c, s, t).eval(p).norm()));
    }
  }
}

TEST(Connection, GradientAndSharp) {
  Model polar = zoo_model("polar");
  Point p(2);
  p << 2.0, 0.3;
  // V = x2 in polar coordinates: grad V = (0, 1/r^2).
  Vector grad = gradient(polar.algebroid, *polar.metric, Expr::coord(1)).eval(p);
  EXPECT_NEAR(grad(0), 0.0, 1e-15);
  EXPECT_NEAR(grad(1), 0.25, 1e-15);

  CovectorSection theta(2);
  theta[0] = Expr(3.0);
  theta[1] = Expr(1.0);
  Vector up = sharp(*polar.metric, theta).eval(p);
  EXPECT_NEAR(up(0), 3.0, 1e-15);
  EXPECT_NEAR(up(1), 0.25, 1e-15);
}

TEST(Connection, MetricMustBePositive) {
  ExprMatrix g = ExprMatrix::identity(2);
  g(1, 1) = Expr::coord(0);
  BundleMetric m(g);
  Point ok(2), bad(2);
  ok << 1.0, 0.0;
  bad << -1.0, 0.0;
  EXPECT_NO_THROW(m.check_positive({ok}));
  EXPECT_THROW(m.check_positive({ok, bad}), std::domain_error);
}

TEST(Projector, IdempotencyAndRank) {
  Model skew = zoo_model("skew_cart");
  std::vector<Point> pts = testing::model_points(skew, 10, 2);
  EXPECT_LT(skew.projector->idempotency_residual(pts), 1e-14);
  EXPECT_EQ(skew.projector->rank_at(pts[0]), 2);
  ExprMatrix twice = ExprMatrix::identity(2);
  twice(0, 0) = Expr(2.0);
  EXPECT_GT(Projector(twice).idempotency_residual(pts), 1.0);
}

TEST(Connection, ConstrainedConnectionKeepsDistributionInvariant) {
  Model skew = zoo_model("skew_cart");
  const LieAlgebroid& A = skew.algebroid;
  std::vector<Section> d = skew.inputs;  // e1 and e2 + x1 e3 span D
  std::vector<Point> pts = testing::model_points(skew, 10, 3);
  Connection lc = levi_civita(A, *skew.metric);
  // <e1 : e2 + x1 e3> = e3 leaves D for the flat connection.
  InvarianceResult flat = is_geodesically_invariant(A, lc, d, pts, 1e-9);
  EXPECT_FALSE(flat.invariant);
  Connection checked = constrained_connection(A, lc, *skew.projector);
  InvarianceResult con = is_geodesically_invariant(A, checked, d, pts, 1e-9);
  EXPECT_TRUE(con.invariant);
  EXPECT_LT(con.worst_residual, 1e-12);

  std::vector<Section> dependent = {d[0], d[0]};
  EXPECT_THROW(is_geodesically_invariant(A, checked, dependent, pts, 1e-9), std::domain_error);
}

}  // namespace
}  // namespace alab
