#include <algorithm>
#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "alab/dynamics.hpp"
#include "alab/model.hpp"

namespace alab {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

TEST(Schedule, Validation) {
  EXPECT_ANY_THROW(ControlSchedule(2, {{1.0, vec({1.0})}}));
  EXPECT_ANY_THROW(ControlSchedule(1, {{-1.0, vec({1.0})}}));
  ControlSchedule s(1, {{0.5, vec({1.0})}, {0.25, vec({-1.0})}});
  EXPECT_DOUBLE_EQ(s.horizon(), 0.75);
  EXPECT_TRUE(ControlSchedule::zero(2, 0.0).pieces().empty());
}

TEST(Integrate, FlatPlaneIsExactForConstantControls) {
  Model m = zoo_model("tq_flat_2");
  MechSystem s = m.mech();
  ControlSchedule sched(2, {{1.0, vec({1.0, -2.0})}});
  Trajectory tr = integrate(s, vec({0, 0}), vec({0.5, 0}), sched, 0.1);
  ASSERT_EQ(tr.size(), 11u);
  const Vector& x = tr.x.back();
  EXPECT_NEAR(x(0), 0.5 + 0.5, 1e-14);
  EXPECT_NEAR(x(1), -1.0, 1e-14);
  EXPECT_NEAR(tr.y.back()(0), 1.5, 1e-14);
  EXPECT_DOUBLE_EQ(tr.t.back(), 1.0);
}

TEST(Integrate, SwitchesLandOnTheGrid) {
  Model m = zoo_model("oscillator");
  ControlSchedule sched(1, {{0.25, vec({1.0})}, {0.35, vec({0.0})}});
  Trajectory tr = integrate(m.mech(), vec({0}), vec({0}), sched, 0.1);
  ASSERT_EQ(tr.switches.size(), 1u);
  EXPECT_DOUBLE_EQ(tr.t[tr.switches[0]], 0.25);
  EXPECT_NEAR(tr.t.back(), 0.6, 1e-15);
  for (std::size_t k = 1; k < tr.size(); ++k) EXPECT_LE(tr.t[k] - tr.t[k - 1], 0.1 + 1e-15);
  EXPECT_EQ(tr.u[0](0), 1.0);
  EXPECT_EQ(tr.u[tr.switches[0]](0), 0.0);
}

TEST(Integrate, ZeroHorizonAndCsv) {
  Model m = zoo_model("tq_flat_2");
  Trajectory tr = integrate(m.mech(), m.points.front(), vec({0, 0}),
                            ControlSchedule::zero(2, 0.0), 0.1);
  EXPECT_EQ(trajectory_csv(tr), "t,x1,x2,y1,y2,u1,u2\n");
  tr = integrate(m.mech(), vec({0, 0}), vec({1, 0}), ControlSchedule::zero(2, 0.5), 0.5);
  std::string csv = trajectory_csv(tr);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_NE(csv.find("\n0.5,0.5,0,1,0,0,0\n"), std::string::npos) << csv;
}

TEST(Integrate, DetectsBlowup) {
  Model m = zoo_model("oscillator");
  ControlSchedule sched(1, {{1.0, vec({1e10})}});
  Trajectory tr = integrate(m.mech(), vec({0}), vec({0}), sched, 0.1);
  EXPECT_TRUE(tr.blew_up);
  EXPECT_LT(tr.size(), 12u);
}

TEST(Integrate, ProjectsInadmissibleInitialVelocity) {
  Model m = zoo_model("constrained_cart");
  Trajectory tr = integrate(m.mech(), m.points.front(), vec({1, 0, 1}),
                            ControlSchedule::zero(1, 0.1), 0.01);
  EXPECT_TRUE(tr.projected_initial);
  EXPECT_EQ(tr.y.front()(2), 0.0);
}

TEST(Integrate, GeneralSystemFollowsAnchor) {
  Model m = zoo_model("reduction_pair");
  GeneralSystem g = m.general();
  // x1' = u, x2' = sin x1; with u = 0 from x1 = pi/2 the flow is x2 = t.
  Trajectory tr = integrate(g, vec({M_PI / 2, 0}), ControlSchedule::zero(1, 1.0), 1e-2);
  EXPECT_NEAR(tr.x.back()(0), M_PI / 2, 1e-14);
  EXPECT_NEAR(tr.x.back()(1), 1.0, 1e-12);
  EXPECT_LT(admissibility_residual(g.algebroid, tr), 1e-8);
}

TEST(Residuals, EnergyAndEulerLagrange) {
  Model m = zoo_model("polar");
  MechSystem s = m.mech();
  Trajectory tr = integrate(s, vec({1.0, 0.0}), vec({0.2, 0.7}), ControlSchedule::zero(1, 3.0), 1e-3);
  double e0 = energy(s, tr.x.front(), tr.y.front());
  EXPECT_NEAR(e0, 0.5 * (0.04 + 0.49), 1e-15);
  EXPECT_NEAR(energy(s, tr.x.back(), tr.y.back()), e0, 1e-10);
  EXPECT_LT(euler_lagrange_residual(s, tr), 1e-6);

  // A controlled run stays consistent away from the switch.
  ControlSchedule sched(1, {{0.5, vec({1.0})}, {0.5, vec({-2.0})}});
  Trajectory ctl = integrate(s, vec({1.0, 0.0}), vec({0.0, 0.3}), sched, 1e-3);
  EXPECT_LT(euler_lagrange_residual(s, ctl), 1e-6);
  // Dropping the control from the record breaks it.
  Trajectory wrong = ctl;
  for (Vector& u : wrong.u) u.setZero();
  EXPECT_GT(euler_lagrange_residual(s, wrong), 0.5);

  Trajectory short_tr = tr;
  short_tr.t.resize(2);
  short_tr.x.resize(2);
  short_tr.y.resize(2);
  short_tr.u.resize(2);
  EXPECT_ANY_THROW(euler_lagrange_residual(s, short_tr));
}

TEST(Sampling, DeterministicAndValidated) {
  Model m = zoo_model("tq_flat_2");
  MechSystem s = m.mech();
  ReachableSample a = sample_reachable(s, m.points.front(), 1.0, 20, 1.0, 9);
  ReachableSample b = sample_reachable(s, m.points.front(), 1.0, 20, 1.0, 9);
  ASSERT_EQ(a.endpoints.size(), 20u);
  for (std::size_t i = 0; i < a.endpoints.size(); ++i) EXPECT_EQ(a.endpoints[i], b.endpoints[i]);
  EXPECT_EQ(a.base_rank, 2);
  EXPECT_EQ(a.full_rank, 4);
  ReachableSample c = sample_reachable(s, m.points.front(), 1.0, 20, 1.0, 10);
  EXPECT_NE(a.endpoints[0], c.endpoints[0]);
  EXPECT_ANY_THROW(sample_reachable(s, m.points.front(), 1.0, 4, 1.0, 9));
}

}  // namespace
}  // namespace alab
