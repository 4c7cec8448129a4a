#include <optional>
#include <vector>

#include <gtest/gtest.h>

#include "alab/model.hpp"
#include "alab/prolongation.hpp"
#include "fixtures.hpp"

namespace alab {
namespace {

std::vector<Point> lifted_points(const Prolongation& P, const std::vector<Point>& xs) {
  std::vector<Point> out;
  Vector y = Vector::LinSpaced(static_cast<Eigen::Index>(P.ell()), 0.4, -0.9);
  for (const Point& x : xs) {
    out.push_back(P.lift_point(x, y));
    out.push_back(P.lift_point(x, -0.5 * y));
  }
  return out;
}

TEST(Prolongation, IsALieAlgebroid) {
  for (const char* name : {"rigid_body", "polar", "skew_cart"}) {
    Model m = zoo_model(name);
    Prolongation P(m.algebroid);
    EXPECT_EQ(P.as_algebroid().n(), m.algebroid.n() + m.algebroid.ell());
    EXPECT_EQ(P.as_algebroid().ell(), 2 * m.algebroid.ell());
    EXPECT_LT(check_structure(P.as_algebroid(), lifted_points(P, testing::model_points(m, 10, 1))),
              1e-10)
        << name;
  }
  Prolongation frame(testing::rotating_frame_map().source);
  EXPECT_LT(check_structure(frame.as_algebroid(),
                            lifted_points(frame, testing::points_near(Point::Zero(2), 10, 1, 2))),
            1e-10);
}

TEST(Prolongation, HomogeneityDegrees) {
  Model m = zoo_model("rigid_body");
  Prolongation P(m.algebroid);
  Connection c = levi_civita(m.algebroid, *m.metric);
  std::vector<Point> pts = lifted_points(P, testing::model_points(m, 5, 3));
  EXPECT_EQ(homogeneity_degree(P, liouville(P), pts), std::optional<int>(0));
  EXPECT_EQ(homogeneity_degree(P, vertical_lift(P, Section::basis(3, 1)), pts),
            std::optional<int>(-1));
  EXPECT_EQ(homogeneity_degree(P, spray_of(P, c), pts), std::optional<int>(1));
  // y1 V1 + V2 mixes degrees 0 and -1.
  Section mixed = P.y(0) * P.V(0) + P.V(1);
  EXPECT_EQ(homogeneity_degree(P, mixed, pts), std::nullopt);
}

TEST(Prolongation, SprayRecoversSymmetricProduct) {
  LieAlgebroid A = testing::rotating_frame_map().source;
  ExprMatrix g = ExprMatrix::identity(2);
  g(0, 0) = Expr(2.0) + sin(Expr::coord(1));
  Connection c = levi_civita(A, BundleMetric(g));
  Prolongation P(A);
  Section spray = spray_of(P, c);
  std::vector<Point> xs = testing::points_near(Point::Zero(2), 10, 1.0, 4);
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t b = 0; b < 2; ++b) {
      Section s = Section::basis(2, a);
      Section t = (Expr(1.0) + Expr::coord(0) * Expr::coord(0)) * Section::basis(2, b);
      Section direct = symmetric_product(A, c, s, t);
      Section via = symmetric_product_from_spray(P, spray, s, t, xs);
      for (const Point& p : xs) EXPECT_LT((direct.eval(p) - via.eval(p)).norm(), 1e-10);
    }
  }
}

TEST(Prolongation, NonSprayIsRejected) {
  Model m = zoo_model("tq_flat_2");
  Prolongation P(m.algebroid);
  Section quadratic_x = P.y(0) * P.y(0) * P.X(0);
  std::vector<Point> xs = {m.points.front()};
  EXPECT_THROW(symmetric_product_from_spray(P, quadratic_x, Section::basis(2, 0),
                                            Section::basis(2, 0), xs),
               std::domain_error);
}

TEST(Prolongation, SplitAndZeroSection) {
  Model m = zoo_model("tq_flat_2");
  Prolongation P(m.algebroid);
  Vector z(4);
  z << 1, 2, 3, 4;
  auto [hor, ver] = hor_ver_split(P, z);
  EXPECT_EQ(hor, Vector(Eigen::Vector2d(1, 2)));
  EXPECT_EQ(ver, Vector(Eigen::Vector2d(3, 4)));
  Expr e = Expr::coord(0) + P.y(1) * Expr::coord(1) + P.y(0);
  Expr r = restrict_to_zero_section(P, e);
  Point x(2);
  x << 0.5, 2.0;
  EXPECT_DOUBLE_EQ(eval(r, P.zero_point(x)), 0.5);
  EXPECT_FALSE(depends_on(r, 2));
  EXPECT_FALSE(depends_on(r, 3));
}

}  // namespace
}  // namespace alab
