#pragma once

// Analysis reports. Serialization is canonical: reading a report back and
// writing it again yields identical bytes.

#include <string>
#include <vector>

#include "alab/controllability.hpp"
#include "alab/morphism.hpp"

namespace alab {

struct MorphismReport {
  std::string name;
  std::string target;
  double admissible = 0.0;
  double morphism = 0.0;
  double connection = -1.0;        // -1: not applicable
  double prolonged_morphism = 0.0;
  double mech_related = -1.0;      // -1: not applicable
  double general_related = -1.0;
  bool general_weakly_related = false;
  std::vector<Claim> claims;
  std::vector<Verdict> target_verdicts;  // independently computed
};

struct Report {
  std::string model;
  std::vector<Verdict> tests;
  std::vector<MorphismReport> morphisms;
};

std::string report_to_json(const Report& r);
/// Throws std::runtime_error on malformed input.
Report report_from_json(const std::string& text);

}  // namespace alab
