#pragma once

// Bundle maps between Lie algebroids: admissibility and morphism checks on
// sampled points, prolongation of maps, related control systems, and the
// transfer of verdicts along morphisms.

#include <string>
#include <vector>

#include "alab/controllability.hpp"

namespace alab {

/// Psi: E -> Ebar over psi: M -> Mbar. All expressions are functions of the
/// source base coordinates.
struct BundleMap {
  LieAlgebroid source;
  LieAlgebroid target;
  ExprMatrix fiber_map;         // lbar x l, Psi^b_a
  std::vector<Expr> base_map;   // nbar components of psi
  bool open = false;            // declared, never inferred

  BundleMap(LieAlgebroid source, LieAlgebroid target, ExprMatrix fiber_map,
            std::vector<Expr> base_map, bool open = false);

  Point map_point(const Point& p) const;
  Matrix fiber_at(const Point& p) const { return fiber_map.eval(p); }
  Matrix base_jacobian(const Point& p) const;
};

/// max |J psi(x) rho(x) - rhobar(psi(x)) Psi(x)|.
double check_admissible(const BundleMap& f, const std::vector<Point>& pts);

/// max residual of the coordinate morphism identity
/// Psi^b_g C^g_ad = rho^i_a dPsi^b_d - rho^i_d dPsi^b_a + Cbar^b_ts Psi^t_a Psi^s_d.
double check_morphism(const BundleMap& f, const std::vector<Point>& pts);

/// max residual of
/// Psi^b_g Gamma^g_ad = rho^i_a dPsi^b_d + Gammabar^b_ts Psi^t_a Psi^s_d.
double check_maps_connection(const BundleMap& f, const Connection& c,
                             const Connection& cbar, const std::vector<Point>& pts);

/// The induced map between prolongations, over (x, y) -> (psi(x), Psi(x) y).
BundleMap prolong_map(const BundleMap& f);

struct Relatedness {
  bool related = true;
  double worst_residual = 0.0;
  std::vector<Vector> drift_coeffs;   // b^j at each point
  std::vector<Matrix> input_coeffs;   // C^j_i at each point
};

/// Psi sigma = sigmabar(psi) + sum_j b^j etabar_j(psi) and
/// Psi eta_i = sum_j C^j_i etabar_j(psi), solved by least squares.
Relatedness check_weakly_related(const BundleMap& f, const GeneralSystem& s,
                                 const GeneralSystem& sbar,
                                 const std::vector<Point>& pts, double tol);

/// max over points of |Psi eta_i - etabar_i(psi)|, |Psi grad V - grad Vbar(psi)|
/// and the connection-mapping residual: zero when the mechanical systems
/// are Psi-related. Requires equal input counts.
double mech_related_residual(const BundleMap& f, const MechSystem& s,
                             const MechSystem& sbar, const std::vector<Point>& pts);

/// max over points of |Psi sigma - sigmabar(psi)| and |Psi eta_i - etabar_i(psi)|.
double general_related_residual(const BundleMap& f, const GeneralSystem& s,
                                const GeneralSystem& sbar,
                                const std::vector<Point>& pts);

enum class Relation { kUnrelated, kWeakly, kRelated };

enum class ClaimKind { kNone, kForward, kEquivalence };

struct Claim {
  ClaimKind kind = ClaimKind::kNone;
  std::string property;   // test name carried over
  Point target_point;
  /// For equivalence claims: the outcome the target's test must have.
  /// For forward claims: the property is asserted at the target, whatever
  /// its own sufficient test reports.
  Outcome outcome = Outcome::kInconclusive;
  std::string provenance;
};

/// Transfers a verdict computed on the source system at `v.point`.
///
/// Equivalence: Psi a fiberwise isomorphism, systems Psi-related, and a test
/// whose sufficient condition is preserved (base-access, zero-access,
/// zero-control). Forward: psi declared open, systems at least weakly
/// related, a sufficient verdict of base-access, base-control,
/// general-access or general-control; the property itself then holds at
/// psi(m). `require_iso` throws std::domain_error when |det Psi| <= tol.
Claim propagate_verdict(const BundleMap& f, const Verdict& v, Relation rel,
                        double tol, bool require_iso = false);

const char* claim_kind_name(ClaimKind k);

}  // namespace alab
