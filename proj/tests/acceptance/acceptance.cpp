// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "alab/dynamics.hpp"
#include "alab/model.hpp"
#include "fixtures.hpp"
#include "random_expr.hpp"

namespace alab {
namespace {

using testing::all_zoo_models;
using testing::model_points;

struct Result {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Structure equations on every zoo model, and a corrupted regression.
void structure_equations(Result& r) {
  auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (const Model& m : all_zoo_models()) {
    double res = check_structure(m.algebroid, model_points(m, 100, 1));
    worst = std::max(worst, res);
    r.require(res < 1e-9, m.name + " residual " + std::to_string(res));
  }
  Model rb = zoo_model("rigid_body");
  std::vector<BracketEntry> bad = {{0, 1, {Expr(), Expr(), Expr(2.0)}},
                                   {1, 2, {Expr(1.0), Expr(), Expr()}},
                                   {0, 2, {Expr(), Expr(-1.0), Expr()}}};
  LieAlgebroid corrupt(rb.algebroid.coord_names(), rb.algebroid.fiber_names(),
                       rb.algebroid.anchor(), bad,
                       rb.algebroid.orbit_dimension());
  double cres = check_structure(corrupt, model_points(rb, 100, 2));
  r.require(cres > 0.1, "corrupted residual " + std::to_string(cres));
  double t = seconds_since(t0);
  r.require(t < 5.0, "runtime " + std::to_string(t) + " s");
  r.detail << "worst residual " << worst << ", corrupted " << cres << ", " << t << " s";
}

// 2. Levi-Civita: torsion-free, metric, and the polar Christoffel oracle.
void levi_civita_correctness(Result& r) {
  std::vector<Model> cases = {tq_flat(3, {}, "flat3"), zoo_model("polar"), zoo_model("rigid_body")};
  double worst = 0.0;
  for (const Model& m : cases) {
    Connection c = levi_civita(m.algebroid, *m.metric);
    std::vector<Point> pts = model_points(m, 100, 3);
    double tr = torsion_residual(m.algebroid, c, pts);
    double mr = metric_residual(m.algebroid, *m.metric, c, pts);
    worst = std::max({worst, tr, mr});
    r.require(tr < 1e-10 && mr < 1e-10, m.name);
  }
  // Polar coordinates: Gamma^1_22 = -r, Gamma^2_12 = Gamma^2_21 = 1/r.
  Model polar = zoo_model("polar");
  Connection c = levi_civita(polar.algebroid, *polar.metric);
  double oracle = 0.0;
  for (const Point& p : model_points(polar, 100, 4)) {
    const double rr = p(0);
    double want[2][2][2] = {{{0, 0}, {0, -rr}}, {{0, 1 / rr}, {1 / rr, 0}}};
    for (std::size_t g = 0; g < 2; ++g) {
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
          oracle = std::max(oracle, std::abs(eval(c(g, a, b), p) - want[g][a][b]));
        }
      }
    }
  }
  r.require(oracle < 1e-10, "Christoffel oracle " + std::to_string(oracle));
  r.detail << "worst torsion/metric residual " << worst << ", Christoffel deviation " << oracle;
}

// 3. Symmetric product from the spray equals the direct formula.
void spray_equivalence(Result& r) {
  double worst = 0.0;
  for (const Model& m : all_zoo_models()) {
    if (!m.has_mech()) continue;
    MechSystem s = m.mech();
    Prolongation P(m.algebroid);
    Section spray = spray_of(P, s.connection());
    std::vector<Point> pts = model_points(m, 100, 5);
    std::vector<Point> check(pts.begin(), pts.begin() + 3);
    const std::size_t l = m.algebroid.ell();
    for (std::size_t a = 0; a < l; ++a) {
      for (std::size_t b = a; b < l; ++b) {
        Section ea = Section::basis(l, a);
        Section eb = Section::basis(l, b);
        Section direct = symmetric_product(m.algebroid, s.connection(), ea, eb);
        Section via = symmetric_product_from_spray(P, spray, ea, eb, check);
        for (const Point& p : pts) {
          double d = (direct.eval(p) - via.eval(p)).cwiseAbs().maxCoeff();
          worst = std::max(worst, d);
        }
      }
    }
  }
  r.require(worst < 1e-10, "deviation " + std::to_string(worst));
  r.detail << "max deviation " << worst;
}

// 4. C_ver / C_hor from the prolongation against Sym and Lie(Sym).
void decomposition_oracle(Result& r) {
  auto t0 = std::chrono::steady_clock::now();
  int compared = 0;
  for (const char* name : {"rigid_body", "constrained_cart"}) {
    Model m = zoo_model(name);
    MechSystem s = m.mech();
    for (const Point& p : testing::points_near(m.points.front(), 5, 0.5, 6)) {
      CverChor brute = cver_chor(s, p, 4, 1e-8);
      CverChor sym = cver_chor_symmetric(s, p, 4, 1e-8);
      bool ok = brute.rank_ver() == sym.rank_ver() && brute.rank_hor() == sym.rank_hor() &&
                same_span(brute.cver, sym.cver, 1e-8) && same_span(brute.chor, sym.chor, 1e-8);
      r.require(ok, std::string(name) + " ranks ver " + std::to_string(brute.rank_ver()) +
                        "/" + std::to_string(sym.rank_ver()) + " hor " +
                        std::to_string(brute.rank_hor()) + "/" +
                        std::to_string(sym.rank_hor()));
      ++compared;
    }
  }
  double t = seconds_since(t0);
  r.require(t < 60.0, "runtime " + std::to_string(t) + " s");
  r.detail << compared << " points compared, " << t << " s";
}

// ad^dagger_xi eta = J^-1 (J eta x xi), the G-adjoint of ad_xi = xi x . on so(3).
Vector ad_dagger(const Vector& J, const Vector& xi, const Vector& eta) {
  Eigen::Vector3d je = J.cwiseProduct(eta);
  Eigen::Vector3d x = xi;
  return je.cross(x).cwiseQuotient(Eigen::Vector3d(J));
}

// Sym closure of {e1, e2} on so(3) with <a:b> = -(ad_a^dagger b + ad_b^dagger a),
// up to four factors; returns its rank.
int oracle_cver_rank(const Vector& J) {
  std::vector<std::vector<Vector>> level(5);
  level[1] = {Vector::Unit(3, 0), Vector::Unit(3, 1)};
  for (int d = 2; d <= 4; ++d) {
    for (int d1 = 1; d1 <= d / 2; ++d1) {
      for (const Vector& a : level[d1]) {
        for (const Vector& b : level[d - d1]) {
          level[d].push_back(-(ad_dagger(J, a, b) + ad_dagger(J, b, a)));
        }
      }
    }
  }
  std::vector<Vector> all;
  for (const auto& l : level) all.insert(all.end(), l.begin(), l.end());
  return numeric_rank(columns(all, 3), 1e-8);
}

// 5. Rigid-body verdicts, cross-checked against the ad-dagger oracle.
void rigid_body_matrix(Result& r) {
  Point p(3);
  p << 0, 0, 1;
  for (const char* name : {"rigid_body", "rigid_body_symmetric"}) {
    Model m = zoo_model(name);
    MechSystem s = m.mech();
    Vector J = m.metric->matrix().eval(p).diagonal();
    // Library symmetric products against the oracle on basis pairs.
    double dev = 0.0;
    for (std::size_t a = 0; a < 3; ++a) {
      for (std::size_t b = 0; b < 3; ++b) {
        Vector lib = symmetric_product(m.algebroid, s.connection(), Section::basis(3, a),
                                       Section::basis(3, b))
                         .eval(p);
        Vector ea = Vector::Unit(3, static_cast<Eigen::Index>(a));
        Vector eb = Vector::Unit(3, static_cast<Eigen::Index>(b));
        dev = std::max(dev, (lib + ad_dagger(J, ea, eb) + ad_dagger(J, eb, ea)).norm());
      }
    }
    r.require(dev < 1e-12, std::string(name) + " ad-dagger deviation");
    Verdict acc = accessibility_mech(s, p, Mode::kZero, 4, 1e-8);
    Verdict ctl = controllability_mech(s, p, Mode::kZero, 4, 1e-8);
    CverChor cc = cver_chor(s, p, 4, 1e-8);
    int oracle = oracle_cver_rank(J);
    r.require(cc.rank_ver() == oracle, std::string(name) + " C_ver rank vs oracle");
    if (std::string(name) == "rigid_body") {
      r.require(acc.sufficient() && cc.rank_ver() == 3, "diag(1,2,3) accessible at zero");
      r.require(ctl.sufficient(), "diag(1,2,3) controllable at zero");
      for (std::size_t i = 0; i < 2; ++i) {
        Vector ei = Vector::Unit(3, static_cast<Eigen::Index>(i));
        r.require(ad_dagger(J, ei, ei).norm() < 1e-14, "ad-dagger_{e_i} e_i = 0");
      }
    } else {
      r.require(acc.outcome == Outcome::kInconclusive && cc.rank_ver() == 2,
                "diag(1,1,3) inconclusive with C_ver rank 2");
    }
    r.detail << name << ": zero-access " << outcome_name(acc.outcome) << " (C_ver "
             << cc.rank_ver() << ", oracle " << oracle << "), zero-control "
             << outcome_name(ctl.outcome) << "; ";
  }
}

struct FreeRun {
  std::string name;
  Trajectory tr;
  MechSystem sys;
};

std::vector<FreeRun>& free_runs() {
  static std::vector<FreeRun> runs = [] {
    std::vector<FreeRun> out;
    for (const Model& m : all_zoo_models()) {
      if (!m.has_mech()) continue;
      MechSystem s = m.mech();
      Vector y0 = Vector::LinSpaced(static_cast<Eigen::Index>(m.algebroid.ell()), 0.3, -0.2);
      if (s.constrained()) y0 = s.constraint()->matrix().eval(m.points.front()) * y0;
      Trajectory tr = integrate(s, m.points.front(), y0,
                                ControlSchedule::zero(m.inputs.size(), 10.0), 1e-3);
      out.push_back({m.name, std::move(tr), std::move(s)});
    }
    return out;
  }();
  return runs;
}

// 6. Energy conservation and the oscillator period.
void energy_conservation(Result& r) {
  double worst = 0.0;
  for (const FreeRun& run : free_runs()) {
    if (run.sys.constrained()) continue;
    r.require(!run.tr.blew_up, run.name + " blew up");
    const double e0 = energy(run.sys, run.tr.x[0], run.tr.y[0]);
    double drift = 0.0;
    for (std::size_t k = 0; k < run.tr.size(); ++k) {
      drift = std::max(drift, std::abs(energy(run.sys, run.tr.x[k], run.tr.y[k]) - e0));
    }
    drift /= std::max(std::abs(e0), 1e-300);
    worst = std::max(worst, drift);
    r.require(drift < 1e-6, run.name + " drift " + std::to_string(drift));
  }
  // x(0) = 1, y(0) = 0: x = cos t, upward zero crossings at 3pi/2 + 2pi k.
  Model osc = zoo_model("oscillator");
  Point x0(1);
  x0 << 1.0;
  Trajectory tr = integrate(osc.mech(), x0, Vector::Zero(1), ControlSchedule::zero(1, 20.0), 1e-3);
  std::vector<double> ups;
  for (std::size_t k = 0; k + 1 < tr.size(); ++k) {
    double a = tr.x[k](0), b = tr.x[k + 1](0);
    if (a < 0.0 && b >= 0.0) ups.push_back(tr.t[k] + (tr.t[k + 1] - tr.t[k]) * (-a) / (b - a));
  }
  double period = ups.size() >= 2 ? ups[1] - ups[0] : 0.0;
  double err = std::abs(period - 2.0 * std::numbers::pi);
  r.require(err < 1e-4, "period error " + std::to_string(err));
  r.detail << "worst relative drift " << worst << ", period error " << err;
}

// 7. Euler-Lagrange residual along free trajectories, and sensitivity.
void euler_lagrange(Result& r) {
  double worst = 0.0;
  for (const FreeRun& run : free_runs()) {
    double res = euler_lagrange_residual(run.sys, run.tr);
    worst = std::max(worst, res);
    r.require(res < 1e-5, run.name + " residual " + std::to_string(res));
  }
  const FreeRun& osc = *std::find_if(free_runs().begin(), free_runs().end(),
                                     [](const FreeRun& f) { return f.name == "oscillator"; });
  Trajectory bent = osc.tr;
  for (Vector& y : bent.y) y.array() += 0.01;
  double pert = euler_lagrange_residual(osc.sys, bent);
  r.require(pert > 1e-3, "perturbed residual " + std::to_string(pert));
  r.detail << "worst residual " << worst << ", perturbed " << pert;
}

// 8. Constraint invariance in the reduced and the full model.
void constraint_invariance(Result& r) {
  double worst_full = 0.0;
  double worst_reduced = 0.0;
  for (const char* name : {"constrained_cart", "skew_cart"}) {
    Model m = zoo_model(name);
    MechSystem s = m.mech();
    ExprMatrix q = s.constraint()->complement();
    Vector y0 = s.constraint()->matrix().eval(m.points.front()) * Vector::Constant(3, 0.4);
    ControlSchedule sched(m.inputs.size(), {{2.5, Vector::Constant(static_cast<Eigen::Index>(m.inputs.size()), 0.7)},
                                           {2.5, Vector::Constant(static_cast<Eigen::Index>(m.inputs.size()), -0.5)}});
    IntegrateOptions full;
    full.reproject = false;
    Trajectory red = integrate(s, m.points.front(), y0, sched, 1e-3);
    Trajectory fm = integrate(s, m.points.front(), y0, sched, 1e-3, full);
    for (std::size_t k = 0; k < red.size(); ++k) {
      worst_reduced = std::max(worst_reduced, (q.eval(red.x[k]) * red.y[k]).norm());
    }
    for (std::size_t k = 0; k < fm.size(); ++k) {
      worst_full = std::max(worst_full, (q.eval(fm.x[k]) * fm.y[k]).norm());
    }
    if (std::string(name) == "constrained_cart") {
      bool exact = true;
      for (const Vector& y : red.y) exact = exact && y(2) == 0.0;
      r.require(exact, "constrained_cart complement component not exactly zero");
    }
  }
  r.require(worst_full < 1e-7, "full model |Qy| " + std::to_string(worst_full));
  r.require(worst_reduced < 1e-12, "reduced |Qy| " + std::to_string(worst_reduced));
  r.detail << "full-model max |Qy| " << worst_full << ", reduced " << worst_reduced;
}

// 9. Morphism suite on the reduction pair.
void morphism_suite(Result& r) {
  Model m = zoo_model("reduction_pair");
  const MorphismSpec& spec = m.morphisms.front();
  BundleMap f = m.bundle_map(spec);
  std::vector<Point> pts = model_points(m, 50, 7);
  double adm = check_admissible(f, pts);
  double mor = check_morphism(f, pts);
  double con = check_maps_connection(f, m.mech().connection(), spec.target->mech().connection(), pts);
  std::vector<Point> lifted;
  const Eigen::Index l = static_cast<Eigen::Index>(m.algebroid.ell());
  for (const Point& p : pts) {
    Point q(p.size() + l);
    q << p, Vector::LinSpaced(l, 0.7 * p(0), -0.3 + p(p.size() - 1));
    lifted.push_back(q);
  }
  double pro = check_morphism(prolong_map(f), lifted);
  r.require(adm < 1e-10 && mor < 1e-10 && con < 1e-10, "map residuals");
  r.require(pro < 1e-9, "prolonged morphism residual");
  double rel = mech_related_residual(f, m.mech(), spec.target->mech(), pts);
  r.require(rel < 1e-10, "systems not related");

  int claims = 0;
  int matched = 0;
  for (const Point& p : m.points) {
    for (const char* test : {"base-access", "zero-access", "zero-control"}) {
      Verdict v = run_test(m, test, p, m.max_degree, m.tol);
      Claim c = propagate_verdict(f, v, Relation::kRelated, m.tol);
      if (c.kind != ClaimKind::kEquivalence) continue;
      ++claims;
      Verdict t = run_test(*spec.target, test, c.target_point, m.max_degree, m.tol);
      bool ok = t.outcome == c.outcome;
      matched += ok ? 1 : 0;
      r.require(ok, std::string(test) + " claim mismatch");
    }
  }
  r.require(claims > 0, "no equivalence claims produced");
  r.detail << "residuals " << adm << "/" << mor << "/" << con << ", prolonged " << pro << ", "
           << matched << "/" << claims << " equivalence claims confirmed";
}

// 10. Reachable-set sampling against the zero-access verdicts.
void simulation_corroboration(Result& r) {
  int checked = 0;
  for (const Model& m : all_zoo_models()) {
    if (!m.has_mech()) continue;
    MechSystem s = m.mech();
    const Point& p = m.points.front();
    Verdict v = accessibility_mech(s, p, Mode::kZero, m.max_degree, m.tol);
    if (!v.sufficient()) continue;
    // Endpoints of a constrained system lie on {(x, y) : y in D(x)}, which
    // has dimension n + dim D; when D turns with x its affine hull is still
    // all of n + l, so check membership separately.
    const int n = static_cast<int>(m.algebroid.n());
    const int expect = n + static_cast<int>(m.algebroid.ell());
    ReachableSample rs = sample_reachable(s, p, 1.0, 200, 1.0, 2024);
    r.require(rs.full_rank == expect, m.name + " full rank " + std::to_string(rs.full_rank) +
                                          " expected " + std::to_string(expect));
    if (s.constrained()) {
      ExprMatrix q = s.constraint()->complement();
      double leak = 0.0;
      for (const Vector& e : rs.endpoints) {
        leak = std::max(leak, (q.eval(Point(e.head(n))) * e.tail(e.size() - n)).norm());
      }
      r.require(leak < 1e-9, m.name + " endpoint off D " + std::to_string(leak));
    }
    r.detail << m.name << " " << rs.full_rank << "/" << expect << "; ";
    ++checked;
  }
  Model single = zoo_model("tq_flat_2_single");
  ReachableSample rs = sample_reachable(single.mech(), single.points.front(), 1.0, 200, 1.0, 2024);
  r.require(rs.base_rank == 1, "single-input base rank " + std::to_string(rs.base_rank));
  r.detail << "single-input base rank " << rs.base_rank;
  r.require(checked > 0, "no accessible systems sampled");
}

// 11. Parser round trips and derivatives.
void parser_differentiator(Result& r) {
  const std::vector<std::string> xy{"x1", "x2"};
  testing::RandomExpr gen(4242);
  int round_trips = 0;
  int derivs = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Expr e = gen(4);
    if (structurally_equal(e, parse(to_string(e, xy), xy))) ++round_trips;
    std::size_t k = static_cast<std::size_t>(trial % 2);
    double p[] = {gen.real(-1, 1), gen.real(-1, 1)};
    double hi[] = {p[0], p[1]};
    double lo[] = {p[0], p[1]};
    const double h = 1e-5;
    hi[k] += h;
    lo[k] -= h;
    double fd = (eval(e, hi) - eval(e, lo)) / (2 * h);
    double exact = eval(diff(e, k), p);
    if (std::abs(fd - exact) <= 1e-5 * std::max(1.0, std::abs(exact))) ++derivs;
  }
  r.require(round_trips == 1000, std::to_string(round_trips) + " round trips");
  r.require(derivs == 1000, std::to_string(derivs) + " derivative checks");
  r.detail << round_trips << " round trips, " << derivs << " derivative checks";
}

}  // namespace
}  // namespace alab

int main() {
  using Check = std::function<void(alab::Result&)>;
  const std::vector<std::pair<const char*, Check>> criteria = {
      {"structure equations", alab::structure_equations},
      {"Levi-Civita correctness", alab::levi_civita_correctness},
      {"spray / symmetric product equivalence", alab::spray_equivalence},
      {"C_ver / C_hor decomposition oracle", alab::decomposition_oracle},
      {"rigid-body verdict matrix", alab::rigid_body_matrix},
      {"energy conservation", alab::energy_conservation},
      {"Euler-Lagrange consistency", alab::euler_lagrange},
      {"constraint invariance", alab::constraint_invariance},
      {"morphism suite", alab::morphism_suite},
      {"simulation corroboration", alab::simulation_corroboration},
      {"parser / differentiator", alab::parser_differentiator},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    alab::Result r;
    try {
      check(r);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail << " [exception: " << e.what() << "]";
    }
    failed += r.pass ? 0 : 1;
    std::printf("%s %2d %s: %s\n", r.pass ? "PASS" : "FAIL", index, name, r.detail.str().c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
