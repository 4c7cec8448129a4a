#pragma once

// Model files and the built-in model zoo. A model is one algebroid, an
// optional mechanical system on it, an optional general system (drift plus
// inputs), optional base map for tests relative to a manifold, bundle maps
// to other models, and the analysis requests.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "alab/controllability.hpp"
#include "alab/morphism.hpp"

namespace alab {

/// Invalid model: bad JSON, unparsable expression, inconsistent dimensions
/// or a failed structure-equation gate. `where` locates the problem (a JSON
/// pointer, or line/column for syntax errors).
class ModelError : public std::runtime_error {
 public:
  ModelError(const std::string& where, const std::string& message)
      : std::runtime_error(where.empty() ? message : where + ": " + message),
        where_(where),
        message_(message) {}
  const std::string& where() const { return where_; }
  const std::string& message() const { return message_; }

 private:
  std::string where_;
  std::string message_;
};

struct Model;

struct MorphismSpec {
  std::string name;
  std::shared_ptr<const Model> target;
  ExprMatrix fiber_map;
  std::vector<Expr> base_map;
  bool open = false;
};

struct Model {
  Model(std::string model_name, LieAlgebroid a)
      : name(std::move(model_name)), algebroid(std::move(a)) {}

  std::string name;
  LieAlgebroid algebroid;

  // Mechanical system; present when `metric` is.
  std::optional<BundleMetric> metric;
  Expr potential;
  std::vector<Section> inputs;
  std::optional<Projector> projector;

  // General system drift; inputs are shared with the mechanical system.
  std::optional<Section> drift;

  std::optional<ManifoldMap> manifold_map;
  std::vector<MorphismSpec> morphisms;

  std::vector<Point> points;
  std::vector<std::string> tests;
  int max_degree = kDefaultMechDegree;
  double tol = kDefaultRankTol;

  bool has_mech() const { return metric.has_value(); }
  MechSystem mech() const;
  GeneralSystem general() const;
  BundleMap bundle_map(const MorphismSpec& m) const;
};

/// Residual bound of the structure-equation gate applied on load.
inline constexpr double kLoadGateTol = 1e-8;

/// Parses a model from JSON text and applies the load gate. Throws
/// ModelError.
Model load_model(const std::string& json_text);

/// "zoo:<name>" or a path to a JSON model file.
Model load_model_source(const std::string& source);

/// JSON text of a model; load_model(to_json) reproduces it.
std::string model_to_json(const Model& m);

/// The structure-equation gate: residual at the model points and at
/// sampled points near them. Throws ModelError above kLoadGateTol.
void check_model(const Model& m);

/// All test names understood by run_test.
const std::vector<std::string>& known_tests();

/// Runs one named test at a point. Tests needing data the model lacks
/// report precondition-failed.
Verdict run_test(const Model& m, const std::string& test, const Point& p,
                 int max_degree, double tol);

// Zoo.

/// TR^n with G = I, V = 0 and the given input sections.
Model tq_flat(std::size_t n, const std::vector<Section>& inputs,
              const std::string& name);
/// so(3) x R^3 with rho(x) xi = x cross xi, C = epsilon, G = diag(J).
Model rigid_body(const Vector& J, const std::string& name = "rigid_body");
Model oscillator();
Model polar();
Model reduction_pair();
Model reduction_quotient();
Model constrained_cart();
Model skew_cart();

/// Names accepted after "zoo:".
std::vector<std::string> zoo_names();
Model zoo_model(const std::string& name);

}  // namespace alab
