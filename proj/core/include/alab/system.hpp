#pragma once

// Control systems on a Lie algebroid.

#include <optional>
#include <vector>

#include "alab/connection.hpp"

namespace alab {

/// m' = rho(sigma(m) + sum_i u_i eta_i(m)).
struct GeneralSystem {
  LieAlgebroid algebroid;
  Section drift;
  std::vector<Section> inputs;
};

/// Mechanical control system (G, V, {eta_i}) with an optional constraint
/// projector. Inputs may be given as sections or as control forces, which
/// are raised with the metric.
class MechSystem {
 public:
  MechSystem(LieAlgebroid algebroid, BundleMetric metric, Expr potential,
             std::vector<Section> inputs,
             std::optional<Projector> constraint = std::nullopt);

  static MechSystem with_forces(LieAlgebroid algebroid, BundleMetric metric,
                                Expr potential,
                                const std::vector<CovectorSection>& forces,
                                std::optional<Projector> constraint = std::nullopt);

  const LieAlgebroid& algebroid() const { return algebroid_; }
  const BundleMetric& metric() const { return metric_; }
  const Expr& potential() const { return potential_; }
  const std::vector<Section>& inputs() const { return inputs_; }
  /// theta_i = G(eta_i, .).
  const std::vector<CovectorSection>& forces() const { return forces_; }
  const std::optional<Projector>& constraint() const { return constraint_; }
  bool constrained() const { return constraint_.has_value(); }
  bool has_potential() const { return !potential_.is_constant(); }

  const Connection& levi_civita() const { return lc_; }
  /// The connection governing the motion: Levi-Civita, or its constrained
  /// version when a projector is present.
  const Connection& connection() const { return conn_; }
  /// Inputs as they act on the motion (projected when constrained).
  const std::vector<Section>& effective_inputs() const { return eff_inputs_; }
  /// grad V, projected when constrained.
  const Section& potential_gradient() const { return grad_; }

 private:
  LieAlgebroid algebroid_;
  BundleMetric metric_;
  Expr potential_;
  std::vector<Section> inputs_;
  std::vector<CovectorSection> forces_;
  std::optional<Projector> constraint_;
  Connection lc_;
  Connection conn_;
  std::vector<Section> eff_inputs_;
  Section grad_;
};

/// G(s, .) as a covector section.
CovectorSection flat(const BundleMetric& g, const Section& s);

}  // namespace alab
