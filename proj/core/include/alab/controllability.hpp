#pragma once

// Closures of section families under the Lie bracket or a symmetric
// product, and the accessibility / controllability tests built on them.
// Every test is a one-sided sufficient condition: a failed rank or
// membership check yields "inconclusive", never "not accessible".

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "alab/prolongation.hpp"
#include "alab/system.hpp"

namespace alab {

inline constexpr int kDefaultMechDegree = 4;
inline constexpr int kDefaultGeneralDegree = 6;

/// A generator of a closure. `weight` is its contribution to the degree of
/// the terms it enters; `degrees` records occurrences per original
/// generator and is summed over brackets.
struct Generator {
  std::string label;
  Section value;
  int weight = 1;
  std::vector<int> degrees;
};

struct Term {
  std::string label;
  std::vector<int> degrees;
  int weight = 0;
  Section value;
  Vector at;  // value at the closure's point
};

struct ClosureOptions {
  int max_degree = kDefaultMechDegree;
  double tol = kDefaultRankTol;
  /// Stop generating once rank([values | extra]) reaches `full_rank`
  /// (-1: the fiber rank of the algebroid).
  bool stop_when_full = true;
  int full_rank = -1;
  Matrix extra;
  /// Replaces the rank target when set: generation stops after the first
  /// level at which it returns true.
  std::function<bool(const std::vector<Term>&)> done;
};

struct Closure {
  std::vector<Term> terms;
  int rank = 0;              // rank of the term values alone
  bool cap_reached = false;  // degree cap hit while rank could still grow
  int degree_reached = 0;

  Matrix values(Eigen::Index rows) const;
};

/// Iterated right-normed brackets [g, B] of generators g with earlier terms,
/// up to total weight `max_degree`. Right-normed brackets span the same Lie
/// algebra as arbitrary bracket trees and preserve the multidegree.
Closure involutive_closure(const LieAlgebroid& A, const std::vector<Generator>& gens,
                           const Point& p, const ClosureOptions& opt);

/// Iterated symmetric products <a:b> of all term pairs, up to `max_degree`
/// factors.
Closure symmetric_closure(const LieAlgebroid& A, const Connection& c,
                          const std::vector<Generator>& gens, const Point& p,
                          const ClosureOptions& opt);

/// Generators labelled prefix1, prefix2, ... with unit weight.
std::vector<Generator> make_generators(const std::vector<Section>& sections,
                                       const std::string& prefix);

enum class Outcome { kSufficient, kInconclusive, kPreconditionFailed };

const char* outcome_name(Outcome o);

struct Combination {
  std::string term;
  double coeff = 0.0;
};

/// Membership check of one bad term in the span of lower-degree good terms
/// (and kernel directions, labelled "ker[k]").
struct BadTermCheck {
  std::string term;
  int degree = 0;
  double residual = 0.0;
  bool passed = false;
  std::vector<Combination> combination;
};

struct Verdict {
  std::string name;
  Point point;
  Outcome outcome = Outcome::kInconclusive;
  int rank_found = 0;
  int rank_required = 0;
  /// Terms whose values realize the rank.
  std::vector<std::string> basis;
  std::vector<BadTermCheck> bad_terms;
  int degree_cap = 0;
  bool cap_reached = false;
  double tol = kDefaultRankTol;
  std::string note;

  bool sufficient() const { return outcome == Outcome::kSufficient; }
};

Verdict accessibility_general(const GeneralSystem& S, const Point& p,
                              int max_deg = kDefaultGeneralDegree,
                              double tol = kDefaultRankTol);
Verdict controllability_general(const GeneralSystem& S, const Point& p,
                                int max_deg = kDefaultGeneralDegree,
                                double tol = kDefaultRankTol);

struct CverChor {
  Matrix cver;  // orthonormal basis columns in E_m
  Matrix chor;
  std::vector<std::string> ver_basis;
  std::vector<std::string> hor_basis;
  bool cap_reached = false;

  int rank_ver() const { return static_cast<int>(cver.cols()); }
  int rank_hor() const { return static_cast<int>(chor.cols()); }
};

/// C_ver and C_hor at m from the Lie closure of {Gamma - eta^V, eta_i^V}
/// in the prolongation, evaluated at 0_m and split into vertical and
/// horizontal parts.
CverChor cver_chor(const MechSystem& S, const Point& m,
                   int max_deg = kDefaultMechDegree, double tol = kDefaultRankTol);

/// Independent route for systems without potential: C_ver = Sym{eta_i} and
/// C_hor = Lie(Sym{eta_i}), truncated to match the prolongation degree cap
/// (a symmetric product of k factors corresponds to prolongation degree
/// 2k - 1 vertically and 2k horizontally).
CverChor cver_chor_symmetric(const MechSystem& S, const Point& m,
                             int max_deg = kDefaultMechDegree,
                             double tol = kDefaultRankTol);

enum class Mode { kBase, kZero };

Verdict accessibility_mech(const MechSystem& S, const Point& m, Mode mode,
                           int max_deg = kDefaultMechDegree,
                           double tol = kDefaultRankTol);
Verdict controllability_mech(const MechSystem& S, const Point& m, Mode mode,
                             int max_deg = kDefaultMechDegree,
                             double tol = kDefaultRankTol);

/// Base map psi: M -> N given by its components.
struct ManifoldMap {
  std::vector<Expr> components;
};

Verdict accessibility_wrt_manifold(const MechSystem& S, const ManifoldMap& psi,
                                   const Point& m, int max_deg = kDefaultMechDegree,
                                   double tol = kDefaultRankTol);
Verdict controllability_wrt_manifold(const MechSystem& S, const ManifoldMap& psi,
                                     const Point& m,
                                     int max_deg = kDefaultMechDegree,
                                     double tol = kDefaultRankTol);

/// Checks every bad term against good terms of strictly lower degree plus
/// the columns of `extra`.
std::vector<BadTermCheck> check_bad_terms(const Closure& closure,
                                          const std::vector<bool>& bad,
                                          const Matrix& extra, double tol);

}  // namespace alab
