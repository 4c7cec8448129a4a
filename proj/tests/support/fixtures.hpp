#pragma once

// Shared helpers for unit and acceptance tests.

#include <random>
#include <vector>

#include "alab/model.hpp"

namespace alab::testing {

/// Points drawn uniformly from a box of half-width `radius` around `center`.
inline std::vector<Point> points_near(const Point& center, int count, double radius,
                                      unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> d(-radius, radius);
  std::vector<Point> out;
  for (int k = 0; k < count; ++k) {
    Point p = center;
    for (Eigen::Index i = 0; i < p.size(); ++i) p(i) += d(rng);
    out.push_back(p);
  }
  return out;
}

/// Sample points for a zoo model: around its first analysis point, within a
/// radius that keeps coordinate singularities (polar r = 0) away.
inline std::vector<Point> model_points(const Model& m, int count, unsigned seed) {
  return points_near(m.points.front(), count, 0.4, seed);
}

/// Every zoo model; the quotient of the reduction pair is one of them.
inline std::vector<Model> all_zoo_models() {
  std::vector<Model> out;
  for (const std::string& name : zoo_names()) out.push_back(zoo_model(name));
  return out;
}

/// Fiber-basis change on TR^2: the source basis is the rotating frame
/// f1 = (cos x1, sin x1), f2 = (-sin x1, cos x1), so the identity on TR^2
/// read in that frame is a bundle map with non-constant fiber matrix R(x1).
inline BundleMap rotating_frame_map() {
  const Expr c = cos(Expr::coord(0));
  const Expr s = sin(Expr::coord(0));
  ExprMatrix r(2, 2);
  r(0, 0) = c;
  r(0, 1) = -s;
  r(1, 0) = s;
  r(1, 1) = c;
  // [f1, f2] = -(1, 0) = -cos x1 f1 + sin x1 f2
  LieAlgebroid frame({"x1", "x2"}, {"f1", "f2"}, r, {{0, 1, {-c, s}}});
  LieAlgebroid flat({"x1", "x2"}, {"e1", "e2"}, ExprMatrix::identity(2), {});
  return BundleMap(frame, flat, r, {Expr::coord(0), Expr::coord(1)}, true);
}

}  // namespace alab::testing
