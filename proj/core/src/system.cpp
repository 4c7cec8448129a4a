#include "alab/system.hpp"

#include <stdexcept>

namespace alab {

CovectorSection flat(const BundleMetric& g, const Section& s) {
  const std::size_t l = g.ell();
  CovectorSection out(l);
  for (std::size_t a = 0; a < l; ++a) {
    Expr acc;
    for (std::size_t b = 0; b < l; ++b) acc += g(a, b) * s[b];
    out[a] = acc;
  }
  return out;
}

MechSystem::MechSystem(LieAlgebroid algebroid, BundleMetric metric,
                       Expr potential, std::vector<Section> inputs,
                       std::optional<Projector> constraint)
    : algebroid_(std::move(algebroid)),
      metric_(std::move(metric)),
      potential_(std::move(potential)),
      inputs_(std::move(inputs)),
      constraint_(std::move(constraint)) {
  const std::size_t l = algebroid_.ell();
  if (metric_.ell() != l) throw std::invalid_argument("metric rank mismatch");
  if (constraint_ && constraint_->ell() != l) {
    throw std::invalid_argument("projector rank mismatch");
  }
  for (const Section& s : inputs_) {
    if (s.size() != l) throw std::invalid_argument("input length mismatch");
    forces_.push_back(flat(metric_, s));
  }
  lc_ = alab::levi_civita(algebroid_, metric_);
  grad_ = gradient(algebroid_, metric_, potential_);
  if (constraint_) {
    conn_ = constrained_connection(algebroid_, lc_, *constraint_);
    for (const Section& s : inputs_) eff_inputs_.push_back(constraint_->apply(s));
    grad_ = constraint_->apply(grad_);
  } else {
    conn_ = lc_;
    eff_inputs_ = inputs_;
  }
}

MechSystem MechSystem::with_forces(LieAlgebroid algebroid, BundleMetric metric,
                                   Expr potential,
                                   const std::vector<CovectorSection>& forces,
                                   std::optional<Projector> constraint) {
  std::vector<Section> inputs;
  for (const CovectorSection& f : forces) inputs.push_back(sharp(metric, f));
  MechSystem s(std::move(algebroid), std::move(metric), std::move(potential),
               std::move(inputs), std::move(constraint));
  s.forces_ = forces;
  return s;
}

}  // namespace alab
