#pragma once

// Fixed-step RK4 integration of controlled mechanical systems on E,
// Euler-Lagrange residuals along stored trajectories, and Monte-Carlo
// sampling of reachable sets.

#include <cstdint>
#include <string>
#include <vector>

#include "alab/system.hpp"

namespace alab {

struct ControlPiece {
  double duration = 0.0;
  Vector values;
};

/// Piecewise constant controls.
class ControlSchedule {
 public:
  ControlSchedule() = default;
  ControlSchedule(std::size_t inputs, std::vector<ControlPiece> pieces);

  /// Zero controls over [0, horizon] as a single piece (none if horizon is 0).
  static ControlSchedule zero(std::size_t inputs, double horizon);

  std::size_t inputs() const { return inputs_; }
  const std::vector<ControlPiece>& pieces() const { return pieces_; }
  double horizon() const;

 private:
  std::size_t inputs_ = 0;
  std::vector<ControlPiece> pieces_;
};

struct Trajectory {
  std::vector<double> t;
  std::vector<Vector> x;
  std::vector<Vector> y;
  std::vector<Vector> u;  // control acting on [t_k, t_k+1); last repeats
  /// Grid indices where the control switches between pieces.
  std::vector<std::size_t> switches;
  ControlSchedule schedule;
  bool blew_up = false;
  bool projected_initial = false;  // y0 was not in D and got projected

  std::size_t size() const { return t.size(); }
};

struct IntegrateOptions {
  /// Constrained systems only: re-project y onto D after every step, which
  /// holds the complement components at zero. Off integrates the full model.
  bool reproject = true;
  /// States with a component beyond this magnitude count as a blowup.
  double blowup = 1e8;
};

/// x' = rho y, y' = -1/2 S(y, y) - grad V + sum u_i eta_i, with S the
/// symmetrized connection coefficients. Each schedule piece is split into
/// an integer number of steps of size at most h so that switches fall on
/// the grid.
Trajectory integrate(const MechSystem& S, const Point& x0, const Vector& y0,
                     const ControlSchedule& sched, double h,
                     const IntegrateOptions& opt = {});

/// x' = rho(sigma + sum u_i eta_i); the stored y is the curve in E.
Trajectory integrate(const GeneralSystem& S, const Point& x0,
                     const ControlSchedule& sched, double h,
                     const IntegrateOptions& opt = {});

/// 1/2 G(y, y) + V(x).
double energy(const MechSystem& S, const Point& x, const Vector& y);

/// max |x' - rho(x) y| over interior grid points away from switches.
double admissibility_residual(const LieAlgebroid& A, const Trajectory& tr);

/// max over interior grid points (away from switches) of
/// |d/dt dL/dy + C y dL/dy - rho dL/dx - sum u theta|, projected onto D* for
/// constrained systems, together with the admissibility residual.
/// Time derivatives use a five-point central stencil.
double euler_lagrange_residual(const MechSystem& S, const Trajectory& tr);

struct ReachableSample {
  std::vector<Vector> endpoints;  // (x, y) at the horizon
  int base_rank = 0;
  int full_rank = 0;
  int dropped = 0;
};

struct SampleOptions {
  int pieces = 4;
  double h = 1e-2;
  double rank_tol = kDefaultRankTol;
};

/// Integrates from (m, 0) under random piecewise constant controls, uniform
/// in [-bound, bound]. Each sample draws from its own generator seeded with
/// (seed, index), so results do not depend on evaluation order.
ReachableSample sample_reachable(const MechSystem& S, const Point& m, double T,
                                 int nsamples, double bound, std::uint64_t seed,
                                 const SampleOptions& opt = {});

/// CSV with header t,x1..xn,y1..yl,u1..uk.
std::string trajectory_csv(const Trajectory& tr);

}  // namespace alab
