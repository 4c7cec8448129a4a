#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "alab/dynamics.hpp"
#include "alab/model.hpp"
#include "alab/report.hpp"

namespace alab::cli {
namespace {

std::vector<double> parse_csv(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = std::stod(item, &used);
    if (used != item.size() && item.find_first_not_of(' ', used) != std::string::npos) {
      throw std::invalid_argument("bad number \"" + item + "\"");
    }
    out.push_back(v);
  }
  return out;
}

Point to_point(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<Point> analysis_points(const Model& m, const std::vector<std::string>& given) {
  std::vector<Point> pts;
  for (const std::string& s : given) {
    Point p = to_point(parse_csv(s));
    if (static_cast<std::size_t>(p.size()) != m.algebroid.n()) {
      throw std::invalid_argument("--point needs " + std::to_string(m.algebroid.n()) +
                                  " coordinates");
    }
    pts.push_back(p);
  }
  if (pts.empty()) pts = m.points;
  if (pts.empty()) throw std::invalid_argument("model declares no points; pass --point");
  return pts;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

// Controls given as "d1:u,u,...;d2:u,u,...".
ControlSchedule parse_schedule(const std::string& text, std::size_t k) {
  std::vector<ControlPiece> pieces;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ';')) {
    auto colon = piece.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("control piece needs d:u1,...");
    ControlPiece p;
    p.duration = std::stod(piece.substr(0, colon));
    std::vector<double> u = parse_csv(piece.substr(colon + 1));
    p.values = to_point(u);
    pieces.push_back(std::move(p));
  }
  return ControlSchedule(k, std::move(pieces));
}

ControlSchedule random_schedule(std::size_t k, double horizon, int npieces, double bound,
                                std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  std::mt19937_64 gen(seq);
  std::uniform_real_distribution<double> d(-bound, bound);
  std::vector<ControlPiece> pieces;
  if (horizon > 0.0) {
    for (int i = 0; i < npieces; ++i) {
      Vector v(static_cast<Eigen::Index>(k));
      for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = d(gen);
      pieces.push_back({horizon / npieces, v});
    }
  }
  return ControlSchedule(k, std::move(pieces));
}

// Residual below which two systems count as related.
constexpr double kRelatedTol = 1e-8;

struct Common {
  std::string model;
  std::vector<std::string> points;
  std::vector<std::string> tests;
  int max_degree = -1;
  double tol = -1.0;
  std::uint64_t seed = 1;
  std::string out;
};

void add_common(CLI::App* cmd, Common* c) {
  cmd->add_option("model", c->model, "model file or zoo:<name>")->required();
  cmd->add_option("--point", c->points, "analysis point as comma-separated coordinates");
  cmd->add_option("--test", c->tests, "test to run (repeatable)");
  cmd->add_option("--max-degree", c->max_degree, "degree cap")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", c->tol, "rank tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c->seed, "random seed");
  cmd->add_option("--out", c->out, "output path (default stdout)");
}

int degree(const Common& c, const Model& m) { return c.max_degree > 0 ? c.max_degree : m.max_degree; }
double tolerance(const Common& c, const Model& m) { return c.tol > 0 ? c.tol : m.tol; }

std::vector<std::string> selected_tests(const Common& c, const Model& m) {
  std::vector<std::string> t = c.tests.empty() ? m.tests : c.tests;
  const auto& known = known_tests();
  for (const std::string& name : t) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw std::invalid_argument("unknown test \"" + name + "\"");
    }
  }
  return t;
}

int analyze(const Common& c, std::ostream& out) {
  Model m = load_model_source(c.model);
  Report r;
  r.model = m.name;
  for (const Point& p : analysis_points(m, c.points)) {
    for (const std::string& t : selected_tests(c, m)) {
      r.tests.push_back(run_test(m, t, p, degree(c, m), tolerance(c, m)));
    }
  }
  emit(report_to_json(r), c.out, out);
  return kExitOk;
}

int check_morphism_cmd(const Common& c, std::ostream& out) {
  Model m = load_model_source(c.model);
  if (m.morphisms.empty()) throw std::invalid_argument("model declares no morphisms");
  std::vector<Point> pts = analysis_points(m, c.points);
  const int deg = degree(c, m);
  const double tol = tolerance(c, m);
  Report r;
  r.model = m.name;
  for (const MorphismSpec& spec : m.morphisms) {
    const Model& tgt = *spec.target;
    BundleMap f = m.bundle_map(spec);
    MorphismReport mr;
    mr.name = spec.name;
    mr.target = tgt.name;
    mr.admissible = check_admissible(f, pts);
    mr.morphism = check_morphism(f, pts);
    if (m.has_mech() && tgt.has_mech()) {
      mr.connection = check_maps_connection(f, m.mech().connection(),
                                            tgt.mech().connection(), pts);
    }
    BundleMap pf = prolong_map(f);
    std::vector<Point> lifted;
    for (const Point& p : pts) {
      Vector y = Vector::LinSpaced(static_cast<Eigen::Index>(m.algebroid.ell()), 0.7, -0.3);
      Point q(p.size() + y.size());
      q << p, y;
      lifted.push_back(q);
    }
    mr.prolonged_morphism = check_morphism(pf, lifted);
    Relation mech_rel = Relation::kUnrelated;
    if (m.has_mech() && tgt.has_mech() && m.inputs.size() == tgt.inputs.size()) {
      mr.mech_related = mech_related_residual(f, m.mech(), tgt.mech(), pts);
      if (mr.mech_related < kRelatedTol) mech_rel = Relation::kRelated;
    }
    Relation gen_rel = Relation::kUnrelated;
    if (m.drift && tgt.drift) {
      if (m.inputs.size() == tgt.inputs.size()) {
        mr.general_related = general_related_residual(f, m.general(), tgt.general(), pts);
      }
      mr.general_weakly_related =
          check_weakly_related(f, m.general(), tgt.general(), pts, kRelatedTol).related;
      if (mr.general_related >= 0.0 && mr.general_related < kRelatedTol) {
        gen_rel = Relation::kRelated;
      } else if (mr.general_weakly_related) {
        gen_rel = Relation::kWeakly;
      }
    }
    for (const Point& p : pts) {
      for (const std::string& t : selected_tests(c, m)) {
        Verdict v = run_test(m, t, p, deg, tol);
        r.tests.push_back(v);
        Relation rel = t.rfind("general", 0) == 0 ? gen_rel : mech_rel;
        Claim claim = propagate_verdict(f, v, rel, tol);
        mr.target_verdicts.push_back(run_test(tgt, t, claim.target_point, deg, tol));
        mr.claims.push_back(std::move(claim));
      }
    }
    r.morphisms.push_back(std::move(mr));
  }
  emit(report_to_json(r), c.out, out);
  return kExitOk;
}

struct SimOptions {
  std::string velocity;
  double horizon = 10.0;
  double step = 1e-3;
  std::string controls;
  int random_pieces = 0;
  double bound = 1.0;
  int sample = 0;
  bool full_model = false;
};

int simulate(const Common& c, const SimOptions& s, std::ostream& out) {
  Model m = load_model_source(c.model);
  if (!m.has_mech()) throw std::invalid_argument("model has no mechanical system");
  MechSystem sys = m.mech();
  Point x0 = analysis_points(m, c.points).front();
  const std::size_t l = m.algebroid.ell();
  const std::size_t k = m.inputs.size();

  if (s.sample > 0) {
    SampleOptions opt;
    opt.h = s.step;
    opt.pieces = s.random_pieces > 0 ? s.random_pieces : 4;
    ReachableSample rs = sample_reachable(sys, x0, s.horizon, s.sample, s.bound, c.seed, opt);
    std::ostringstream csv;
    csv << "# samples=" << s.sample << " dropped=" << rs.dropped
        << " base_rank=" << rs.base_rank << " of " << m.algebroid.n()
        << " full_rank=" << rs.full_rank << " of " << m.algebroid.n() + l << "\n";
    for (std::size_t i = 1; i <= m.algebroid.n(); ++i) csv << (i > 1 ? "," : "") << "x" << i;
    for (std::size_t i = 1; i <= l; ++i) csv << ",y" << i;
    csv << "\n";
    csv.precision(17);
    for (const Vector& e : rs.endpoints) {
      for (Eigen::Index i = 0; i < e.size(); ++i) csv << (i ? "," : "") << e(i);
      csv << "\n";
    }
    if (c.out.empty()) {
      out << csv.str();
    } else {
      emit(csv.str(), c.out, out);
      out << "base_rank " << rs.base_rank << "\nfull_rank " << rs.full_rank << "\ndropped "
          << rs.dropped << "\n";
    }
    return kExitOk;
  }

  Vector y0 = Vector::Zero(static_cast<Eigen::Index>(l));
  if (!s.velocity.empty()) {
    y0 = to_point(parse_csv(s.velocity));
    if (static_cast<std::size_t>(y0.size()) != l) {
      throw std::invalid_argument("--velocity needs " + std::to_string(l) + " components");
    }
  }
  ControlSchedule sched;
  if (!s.controls.empty()) {
    sched = parse_schedule(s.controls, k);
  } else if (s.random_pieces > 0) {
    sched = random_schedule(k, s.horizon, s.random_pieces, s.bound, c.seed);
  } else {
    sched = ControlSchedule::zero(k, s.horizon);
  }
  IntegrateOptions io;
  io.reproject = !s.full_model;
  Trajectory tr = integrate(sys, x0, y0, sched, s.step, io);
  if (tr.projected_initial) std::cerr << "warning: initial velocity projected onto D\n";
  if (tr.blew_up) std::cerr << "warning: integration stopped at a nonfinite state\n";
  emit(trajectory_csv(tr), c.out, out);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Accessibility and controllability analysis on Lie algebroids",
               "algebroid-lab"};
  app.require_subcommand(1);

  Common ca, cs, cm, ce;
  CLI::App* an = app.add_subcommand("analyze", "run accessibility and controllability tests");
  add_common(an, &ca);

  CLI::App* sim = app.add_subcommand("simulate", "integrate a trajectory or sample reachable sets");
  add_common(sim, &cs);
  SimOptions so;
  sim->add_option("--velocity", so.velocity, "initial y as comma-separated components");
  sim->add_option("--horizon", so.horizon, "final time")->check(CLI::NonNegativeNumber);
  sim->add_option("--step", so.step, "integration step")->check(CLI::PositiveNumber);
  sim->add_option("--controls", so.controls, "pieces d:u1,u2;d:u1,u2");
  sim->add_option("--random-pieces", so.random_pieces, "random piecewise constant controls");
  sim->add_option("--bound", so.bound, "control bound for random schedules");
  sim->add_option("--sample-reachable", so.sample, "number of reachable-set samples");
  sim->add_flag("--full-model", so.full_model, "do not re-project onto the constraint");

  CLI::App* cmo = app.add_subcommand("check-morphism", "check bundle maps and transfer verdicts");
  add_common(cmo, &cm);

  CLI::App* ex = app.add_subcommand("export", "write a model as JSON");
  ex->add_option("model", ce.model, "model file or zoo:<name>")->required();
  ex->add_option("--out", ce.out, "output path (default stdout)");

  app.add_subcommand("list", "list zoo models");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (an->parsed()) return analyze(ca, out);
    if (sim->parsed()) return simulate(cs, so, out);
    if (cmo->parsed()) return check_morphism_cmd(cm, out);
    if (ex->parsed()) {
      emit(model_to_json(load_model_source(ce.model)), ce.out, out);
      return kExitOk;
    }
    for (const std::string& n : zoo_names()) out << n << "\n";
    return kExitOk;
  } catch (const ModelError& e) {
    err << "invalid model: " << e.what() << "\n";
    return kExitInvalidModel;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace alab::cli
