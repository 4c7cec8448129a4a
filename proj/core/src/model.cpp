#include "alab/model.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace alab {
namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

Eigen::Index ix(std::size_t v) { return static_cast<Eigen::Index>(v); }

std::vector<std::string> indexed(const std::string& stem, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

// ---- reading -------------------------------------------------------------

class Reader {
 public:
  explicit Reader(std::vector<std::string> coords) : coords_(std::move(coords)) {}

  Expr expr(const json& j, const std::string& where) const {
    if (j.is_number()) return Expr(j.get<double>());
    if (!j.is_string()) throw ModelError(where, "expected an expression string");
    const std::string text = j.get<std::string>();
    try {
      return parse(text, coords_);
    } catch (const ParseError& e) {
      throw ModelError(where, std::string(e.what()) + " at offset " +
                                  std::to_string(e.offset()) + " in \"" + text + "\"");
    }
  }

  std::vector<Expr> vec(const json& j, std::size_t len, const std::string& where) const {
    if (!j.is_array() || j.size() != len) {
      throw ModelError(where, "expected an array of " + std::to_string(len) + " expressions");
    }
    std::vector<Expr> out;
    for (std::size_t i = 0; i < len; ++i) {
      out.push_back(expr(j[i], where + "/" + std::to_string(i)));
    }
    return out;
  }

  ExprMatrix matrix(const json& j, std::size_t rows, std::size_t cols,
                    const std::string& where) const {
    if (!j.is_array() || j.size() != rows) {
      throw ModelError(where, "expected " + std::to_string(rows) + " rows");
    }
    ExprMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<Expr> row = vec(j[r], cols, where + "/" + std::to_string(r));
      for (std::size_t c = 0; c < cols; ++c) m(r, c) = row[c];
    }
    return m;
  }

 private:
  std::vector<std::string> coords_;
};

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ModelError(where, std::string("missing key \"") + key + "\"");
  }
  return j.at(key);
}

std::vector<std::string> names(const json& j, const std::string& where) {
  if (!j.is_array()) throw ModelError(where, "expected an array of names");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_string()) throw ModelError(where + "/" + std::to_string(i), "expected a name");
    out.push_back(j[i].get<std::string>());
  }
  return out;
}

std::size_t fiber_index(const std::vector<std::string>& fibers, const json& j,
                        const std::string& where) {
  if (j.is_number_unsigned() && j.get<std::size_t>() >= 1 &&
      j.get<std::size_t>() <= fibers.size()) {
    return j.get<std::size_t>() - 1;
  }
  if (j.is_string()) {
    for (std::size_t a = 0; a < fibers.size(); ++a) {
      if (fibers[a] == j.get<std::string>()) return a;
    }
  }
  throw ModelError(where, "unknown fiber basis element " + j.dump());
}

Section section(const Reader& rd, const json& j, std::size_t l, const std::string& where) {
  return Section(rd.vec(j, l, where));
}

Model read_model(const json& j, const std::string& where) {
  if (!j.is_object()) throw ModelError(where, "model must be an object");
  const std::string name =
      j.contains("name") && j["name"].is_string() ? j["name"].get<std::string>() : "model";

  const std::string aw = where + "/algebroid";
  const json& a = need(j, "algebroid", where);
  std::vector<std::string> coords = names(need(a, "coords", aw), aw + "/coords");
  std::vector<std::string> fibers = names(need(a, "fibers", aw), aw + "/fibers");
  const std::size_t n = coords.size();
  const std::size_t l = fibers.size();
  Reader rd(coords);
  ExprMatrix rho = rd.matrix(need(a, "anchor", aw), n, l, aw + "/anchor");
  std::vector<BracketEntry> brackets;
  if (a.contains("brackets")) {
    const json& bs = a["brackets"];
    if (!bs.is_array()) throw ModelError(aw + "/brackets", "expected an array");
    for (std::size_t k = 0; k < bs.size(); ++k) {
      const std::string bw = aw + "/brackets/" + std::to_string(k);
      BracketEntry e;
      e.left = fiber_index(fibers, need(bs[k], "left", bw), bw + "/left");
      e.right = fiber_index(fibers, need(bs[k], "right", bw), bw + "/right");
      e.value = rd.vec(need(bs[k], "value", bw), l, bw + "/value");
      brackets.push_back(std::move(e));
    }
  }
  std::size_t orbit = static_cast<std::size_t>(-1);
  if (a.contains("orbit_dimension")) {
    if (!a["orbit_dimension"].is_number_unsigned() || a["orbit_dimension"].get<std::size_t>() > n) {
      throw ModelError(aw + "/orbit_dimension", "expected an integer in [0, n]");
    }
    orbit = a["orbit_dimension"].get<std::size_t>();
  }
  std::optional<LieAlgebroid> alg;
  try {
    alg.emplace(coords, fibers, std::move(rho), brackets, orbit);
  } catch (const std::invalid_argument& e) {
    throw ModelError(aw, e.what());
  }
  Model m(name, std::move(*alg));

  if (j.contains("system")) {
    const std::string sw = where + "/system";
    const json& s = j["system"];
    if (!s.is_object()) throw ModelError(sw, "expected an object");
    if (s.contains("metric")) {
      try {
        m.metric.emplace(rd.matrix(s["metric"], l, l, sw + "/metric"));
      } catch (const std::invalid_argument& e) {
        throw ModelError(sw + "/metric", e.what());
      }
    }
    m.potential = s.contains("potential") ? rd.expr(s["potential"], sw + "/potential") : Expr();
    if (s.contains("inputs")) {
      const json& in = s["inputs"];
      if (!in.is_array()) throw ModelError(sw + "/inputs", "expected an array");
      for (std::size_t i = 0; i < in.size(); ++i) {
        m.inputs.push_back(section(rd, in[i], l, sw + "/inputs/" + std::to_string(i)));
      }
    }
    if (s.contains("forces")) {
      if (!m.metric) throw ModelError(sw + "/forces", "forces need a metric");
      const json& fs = s["forces"];
      if (!fs.is_array()) throw ModelError(sw + "/forces", "expected an array");
      for (std::size_t i = 0; i < fs.size(); ++i) {
        CovectorSection f(rd.vec(fs[i], l, sw + "/forces/" + std::to_string(i)));
        m.inputs.push_back(sharp(*m.metric, f));
      }
    }
    if (s.contains("projector")) {
      m.projector.emplace(rd.matrix(s["projector"], l, l, sw + "/projector"));
    }
    if (s.contains("drift")) m.drift = section(rd, s["drift"], l, sw + "/drift");
    if (m.projector && !m.metric) throw ModelError(sw, "a projector needs a metric");
  }

  if (j.contains("manifold_map")) {
    const json& mm = j["manifold_map"];
    if (!mm.is_array() || mm.empty()) {
      throw ModelError(where + "/manifold_map", "expected a non-empty array");
    }
    m.manifold_map = ManifoldMap{rd.vec(mm, mm.size(), where + "/manifold_map")};
  }

  if (j.contains("morphisms")) {
    const json& ms = j["morphisms"];
    if (!ms.is_array()) throw ModelError(where + "/morphisms", "expected an array");
    for (std::size_t k = 0; k < ms.size(); ++k) {
      const std::string mw = where + "/morphisms/" + std::to_string(k);
      MorphismSpec spec;
      spec.name = ms[k].contains("name") ? ms[k]["name"].get<std::string>()
                                         : "morphism" + std::to_string(k + 1);
      auto target = std::make_shared<Model>(read_model(need(ms[k], "target", mw), mw + "/target"));
      spec.fiber_map = rd.matrix(need(ms[k], "fiber_map", mw), target->algebroid.ell(), l,
                                 mw + "/fiber_map");
      spec.base_map = rd.vec(need(ms[k], "base_map", mw), target->algebroid.n(),
                             mw + "/base_map");
      spec.open = ms[k].value("open", false);
      spec.target = std::move(target);
      m.morphisms.push_back(std::move(spec));
    }
  }

  if (j.contains("analysis")) {
    const std::string anw = where + "/analysis";
    const json& an = j["analysis"];
    if (an.contains("points")) {
      const json& ps = an["points"];
      if (!ps.is_array()) throw ModelError(anw + "/points", "expected an array");
      for (std::size_t k = 0; k < ps.size(); ++k) {
        const std::string pw = anw + "/points/" + std::to_string(k);
        if (!ps[k].is_array() || ps[k].size() != n) {
          throw ModelError(pw, "expected " + std::to_string(n) + " coordinates");
        }
        Point p(ix(n));
        for (std::size_t i = 0; i < n; ++i) {
          if (!ps[k][i].is_number()) throw ModelError(pw, "coordinates must be numbers");
          p(ix(i)) = ps[k][i].get<double>();
        }
        m.points.push_back(p);
      }
    }
    if (an.contains("tests")) {
      m.tests = names(an["tests"], anw + "/tests");
      for (const std::string& t : m.tests) {
        const auto& known = known_tests();
        if (std::find(known.begin(), known.end(), t) == known.end()) {
          throw ModelError(anw + "/tests", "unknown test \"" + t + "\"");
        }
      }
    }
    if (an.contains("max_degree")) m.max_degree = an["max_degree"].get<int>();
    if (an.contains("tol")) m.tol = an["tol"].get<double>();
  }
  return m;
}

// ---- writing -------------------------------------------------------------

ojson write_vec(const std::vector<Expr>& v, const std::vector<std::string>& coords) {
  ojson out = ojson::array();
  for (const Expr& e : v) out.push_back(to_string(e, coords));
  return out;
}

ojson write_matrix(const ExprMatrix& m, const std::vector<std::string>& coords) {
  ojson out = ojson::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ojson row = ojson::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m(r, c), coords));
    out.push_back(row);
  }
  return out;
}

ojson write_model(const Model& m) {
  const LieAlgebroid& A = m.algebroid;
  const auto& coords = A.coord_names();
  const std::size_t l = A.ell();
  ojson j;
  j["name"] = m.name;
  ojson a;
  a["coords"] = coords;
  a["fibers"] = A.fiber_names();
  a["anchor"] = write_matrix(A.anchor(), coords);
  ojson bs = ojson::array();
  for (std::size_t p = 0; p < l; ++p) {
    for (std::size_t q = p + 1; q < l; ++q) {
      std::vector<Expr> v(l);
      bool any = false;
      for (std::size_t g = 0; g < l; ++g) {
        v[g] = A.structure(g, p, q);
        any = any || !v[g].is_zero();
      }
      if (!any) continue;
      ojson b;
      b["left"] = A.fiber_names()[p];
      b["right"] = A.fiber_names()[q];
      b["value"] = write_vec(v, coords);
      bs.push_back(b);
    }
  }
  a["brackets"] = bs;
  if (A.orbit_dimension() != A.n()) a["orbit_dimension"] = A.orbit_dimension();
  j["algebroid"] = a;

  if (m.metric || m.drift || !m.inputs.empty()) {
    ojson s;
    if (m.metric) {
      s["metric"] = write_matrix(m.metric->matrix(), coords);
      s["potential"] = to_string(m.potential, coords);
    }
    ojson in = ojson::array();
    for (const Section& e : m.inputs) in.push_back(write_vec(e.comps(), coords));
    s["inputs"] = in;
    if (m.projector) s["projector"] = write_matrix(m.projector->matrix(), coords);
    if (m.drift) s["drift"] = write_vec(m.drift->comps(), coords);
    j["system"] = s;
  }
  if (m.manifold_map) j["manifold_map"] = write_vec(m.manifold_map->components, coords);
  if (!m.morphisms.empty()) {
    ojson ms = ojson::array();
    for (const MorphismSpec& spec : m.morphisms) {
      ojson o;
      o["name"] = spec.name;
      o["fiber_map"] = write_matrix(spec.fiber_map, coords);
      o["base_map"] = write_vec(spec.base_map, coords);
      o["open"] = spec.open;
      o["target"] = write_model(*spec.target);
      ms.push_back(o);
    }
    j["morphisms"] = ms;
  }
  ojson an;
  ojson ps = ojson::array();
  for (const Point& p : m.points) {
    ojson row = ojson::array();
    for (Eigen::Index i = 0; i < p.size(); ++i) row.push_back(p(i));
    ps.push_back(row);
  }
  an["points"] = ps;
  an["tests"] = m.tests;
  an["max_degree"] = m.max_degree;
  an["tol"] = m.tol;
  j["analysis"] = an;
  return j;
}

Verdict unavailable(const std::string& name, const Point& p, int max_deg, double tol,
                    const std::string& why) {
  Verdict v;
  v.name = name;
  v.point = p;
  v.outcome = Outcome::kPreconditionFailed;
  v.degree_cap = max_deg;
  v.tol = tol;
  v.note = why;
  return v;
}

// Gate points: the declared points and deterministic perturbations of them.
std::vector<Point> gate_points(const Model& m) {
  std::vector<Point> pts = m.points;
  std::mt19937_64 gen(0x5eed);
  std::uniform_real_distribution<double> d(-0.1, 0.1);
  for (const Point& p : m.points) {
    for (int k = 0; k < 3; ++k) {
      Point q = p;
      for (Eigen::Index i = 0; i < q.size(); ++i) q(i) += d(gen);
      pts.push_back(q);
    }
  }
  return pts;
}

ExprMatrix diag(const std::vector<Expr>& d) {
  ExprMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Section sec(std::vector<Expr> v) { return Section(std::move(v)); }

Point pt(std::initializer_list<double> v) {
  Point p(ix(v.size()));
  Eigen::Index i = 0;
  for (double x : v) p(i++) = x;
  return p;
}

const std::vector<std::string> kMechTests = {"base-access", "zero-access", "base-control",
                                             "zero-control"};

}  // namespace

MechSystem Model::mech() const {
  if (!metric) throw std::logic_error("model " + name + " has no mechanical system");
  return MechSystem(algebroid, *metric, potential, inputs, projector);
}

GeneralSystem Model::general() const {
  if (!drift) throw std::logic_error("model " + name + " has no general drift");
  return GeneralSystem{algebroid, *drift, inputs};
}

BundleMap Model::bundle_map(const MorphismSpec& m) const {
  return BundleMap(algebroid, m.target->algebroid, m.fiber_map, m.base_map, m.open);
}

void check_model(const Model& m) {
  std::vector<Point> pts = gate_points(m);
  if (pts.empty()) return;
  double r = 0.0;
  try {
    r = check_structure(m.algebroid, pts);
  } catch (const DomainError& e) {
    throw ModelError("/algebroid", std::string("cannot evaluate structure: ") + e.what());
  }
  if (!(r < kLoadGateTol)) {
    std::ostringstream os;
    os << "structure-equation residual " << r << " exceeds " << kLoadGateTol;
    throw ModelError("/algebroid", os.str());
  }
  if (m.metric) {
    try {
      m.metric->check_positive(m.points);
    } catch (const std::exception& e) {
      throw ModelError("/system/metric", e.what());
    }
  }
  if (m.projector) {
    double p = m.projector->idempotency_residual(m.points);
    if (!(p < kLoadGateTol)) {
      throw ModelError("/system/projector", "projector is not idempotent");
    }
  }
  for (const MorphismSpec& spec : m.morphisms) {
    Model target = *spec.target;
    // The target is gated at the images of the source points.
    BundleMap f = m.bundle_map(spec);
    target.points.clear();
    for (const Point& p : m.points) target.points.push_back(f.map_point(p));
    try {
      check_model(target);
    } catch (const ModelError& e) {
      throw ModelError("/morphisms/" + spec.name + "/target" + e.where(), e.message());
    }
  }
}

Model load_model(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError("", e.what());
  }
  Model m = [&] {
    try {
      return read_model(j, "");
    } catch (const json::exception& e) {
      throw ModelError("", e.what());
    }
  }();
  check_model(m);
  return m;
}

Model load_model_source(const std::string& source) {
  if (source.rfind("zoo:", 0) == 0) {
    Model m = zoo_model(source.substr(4));
    check_model(m);
    return m;
  }
  std::ifstream in(source);
  if (!in) throw ModelError(source, "cannot open model file");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return load_model(ss.str());
  } catch (const ModelError& e) {
    throw ModelError(source + (e.where().empty() ? "" : ":" + e.where()), e.message());
  }
}

std::string model_to_json(const Model& m) { return write_model(m).dump(2) + "\n"; }

const std::vector<std::string>& known_tests() {
  static const std::vector<std::string> t = {
      "base-access",    "zero-access",         "base-control",
      "zero-control",   "general-access",      "general-control",
      "wrt-manifold-access", "wrt-manifold-control"};
  return t;
}

Verdict run_test(const Model& m, const std::string& test, const Point& p,
                 int max_degree, double tol) {
  if (static_cast<std::size_t>(p.size()) != m.algebroid.n()) {
    throw std::invalid_argument("point has " + std::to_string(p.size()) +
                                " coordinates, model has " +
                                std::to_string(m.algebroid.n()));
  }
  if (test == "general-access" || test == "general-control") {
    if (!m.drift) return unavailable(test, p, max_degree, tol, "model has no general drift");
    GeneralSystem g = m.general();
    return test == "general-access" ? accessibility_general(g, p, max_degree, tol)
                                    : controllability_general(g, p, max_degree, tol);
  }
  const auto& known = known_tests();
  if (std::find(known.begin(), known.end(), test) == known.end()) {
    throw std::invalid_argument("unknown test \"" + test + "\"");
  }
  if (!m.metric) return unavailable(test, p, max_degree, tol, "model has no mechanical system");
  MechSystem s = m.mech();
  if (test == "base-access") return accessibility_mech(s, p, Mode::kBase, max_degree, tol);
  if (test == "zero-access") return accessibility_mech(s, p, Mode::kZero, max_degree, tol);
  if (test == "base-control") return controllability_mech(s, p, Mode::kBase, max_degree, tol);
  if (test == "zero-control") return controllability_mech(s, p, Mode::kZero, max_degree, tol);
  if (!m.manifold_map) return unavailable(test, p, max_degree, tol, "model has no manifold map");
  if (test == "wrt-manifold-access") {
    return accessibility_wrt_manifold(s, *m.manifold_map, p, max_degree, tol);
  }
  return controllability_wrt_manifold(s, *m.manifold_map, p, max_degree, tol);
}

// ---- zoo -----------------------------------------------------------------

Model tq_flat(std::size_t n, const std::vector<Section>& inputs, const std::string& name) {
  LieAlgebroid A(indexed("x", n), indexed("e", n), ExprMatrix::identity(n), {});
  Model m(name, std::move(A));
  m.metric.emplace(BundleMetric::identity(n));
  m.inputs = inputs;
  Point p(ix(n));
  for (std::size_t i = 0; i < n; ++i) p(ix(i)) = 0.3 - 0.2 * static_cast<double>(i);
  m.points = {p};
  m.tests = kMechTests;
  return m;
}

Model rigid_body(const Vector& J, const std::string& name) {
  const Expr x1 = Expr::coord(0), x2 = Expr::coord(1), x3 = Expr::coord(2);
  ExprMatrix rho(3, 3);
  rho(0, 1) = -x3;
  rho(0, 2) = x2;
  rho(1, 0) = x3;
  rho(1, 2) = -x1;
  rho(2, 0) = -x2;
  rho(2, 1) = x1;
  std::vector<BracketEntry> br = {
      {0, 1, {Expr(), Expr(), Expr(1.0)}},
      {1, 2, {Expr(1.0), Expr(), Expr()}},
      {0, 2, {Expr(), Expr(-1.0), Expr()}},
  };
  LieAlgebroid A(indexed("x", 3), indexed("e", 3), std::move(rho), br, 2);
  Model m(name, std::move(A));
  m.metric.emplace(diag({Expr(J(0)), Expr(J(1)), Expr(J(2))}));
  m.inputs = {Section::basis(3, 0), Section::basis(3, 1)};
  m.points = {pt({0, 0, 1}), pt({0.3, -0.5, 0.8})};
  m.tests = kMechTests;
  return m;
}

Model oscillator() {
  LieAlgebroid A({"x1"}, {"e1"}, ExprMatrix::identity(1), {});
  Model m("oscillator", std::move(A));
  m.metric.emplace(BundleMetric::identity(1));
  m.potential = Expr(0.5) * pow(Expr::coord(0), 2);
  m.inputs = {Section::basis(1, 0)};
  m.points = {pt({0.0}), pt({0.5})};
  m.tests = kMechTests;
  return m;
}

Model polar() {
  LieAlgebroid A({"x1", "x2"}, {"e1", "e2"}, ExprMatrix::identity(2), {});
  Model m("polar", std::move(A));
  m.metric.emplace(diag({Expr(1.0), pow(Expr::coord(0), 2)}));
  m.inputs = {Section::basis(2, 0)};
  m.points = {pt({1.0, 0.5})};
  m.tests = kMechTests;
  return m;
}

namespace {

ExprMatrix coupled_metric() {
  const Expr c = Expr(0.5) * sin(Expr::coord(0));
  ExprMatrix g(2, 2);
  g(0, 0) = Expr(1.0);
  g(0, 1) = c;
  g(1, 0) = c;
  g(1, 1) = Expr(1.0);
  return g;
}

void coupled_system(Model* m) {
  m->metric.emplace(coupled_metric());
  m->potential = Expr(0.5) * pow(Expr::coord(0), 2);
  m->inputs = {Section::basis(2, 0)};
  m->drift = sec({Expr(), sin(Expr::coord(0))});
  m->tests = {"base-access", "zero-access", "base-control", "zero-control",
              "general-access", "general-control"};
}

}  // namespace

Model reduction_quotient() {
  ExprMatrix rho(1, 2);
  rho(0, 0) = Expr(1.0);
  LieAlgebroid A({"x1"}, {"e1", "e2"}, std::move(rho), {});
  Model m("reduction_quotient", std::move(A));
  coupled_system(&m);
  m.points = {pt({0.0}), pt({0.4})};
  return m;
}

Model reduction_pair() {
  LieAlgebroid A({"x1", "x2"}, {"e1", "e2"}, ExprMatrix::identity(2), {});
  Model m("reduction_pair", std::move(A));
  coupled_system(&m);
  m.points = {pt({0.0, -0.7}), pt({0.4, -0.7})};
  MorphismSpec spec;
  spec.name = "quotient";
  spec.target = std::make_shared<Model>(reduction_quotient());
  spec.fiber_map = ExprMatrix::identity(2);
  spec.base_map = {Expr::coord(0)};
  spec.open = true;
  m.morphisms.push_back(std::move(spec));
  return m;
}

Model constrained_cart() {
  Model m = tq_flat(3, {sec({Expr(1.0), Expr::coord(0), Expr()})}, "constrained_cart");
  m.projector.emplace(diag({Expr(1.0), Expr(1.0), Expr()}));
  m.points = {pt({0.2, -0.1, 0.3})};
  return m;
}

Model skew_cart() {
  const Expr x1 = Expr::coord(0);
  Model m = tq_flat(3, {Section::basis(3, 0), sec({Expr(), Expr(1.0), x1})}, "skew_cart");
  // P = I - n n^T / |n|^2 with n = (0, -x1, 1), so D = span{e1, e2 + x1 e3}.
  const Expr s = Expr(1.0) + x1 * x1;
  std::vector<Expr> nv = {Expr(), -x1, Expr(1.0)};
  ExprMatrix p(3, 3);
  for (std::size_t a = 0; a < 3; ++a) {
    for (std::size_t b = 0; b < 3; ++b) {
      p(a, b) = Expr(a == b ? 1.0 : 0.0) - nv[a] * nv[b] / s;
    }
  }
  m.projector.emplace(std::move(p));
  m.points = {pt({0.5, 0.2, -0.3})};
  return m;
}

std::vector<std::string> zoo_names() {
  return {"tq_flat_2",     "tq_flat_2_single",   "oscillator",        "polar",
          "rigid_body",    "rigid_body_symmetric", "reduction_pair", "reduction_quotient",
          "constrained_cart", "skew_cart"};
}

Model zoo_model(const std::string& name) {
  if (name == "tq_flat_2") {
    return tq_flat(2, {Section::basis(2, 0), Section::basis(2, 1)}, name);
  }
  if (name == "tq_flat_2_single") {
    Model m = tq_flat(2, {Section::basis(2, 0)}, name);
    m.manifold_map = ManifoldMap{{Expr::coord(0)}};
    m.tests.push_back("wrt-manifold-access");
    m.tests.push_back("wrt-manifold-control");
    return m;
  }
  if (name == "oscillator") return oscillator();
  if (name == "polar") return polar();
  if (name == "rigid_body") return rigid_body(Vector::LinSpaced(3, 1, 3), name);
  if (name == "rigid_body_symmetric") {
    Vector j(3);
    j << 1, 1, 3;
    return rigid_body(j, name);
  }
  if (name == "reduction_pair") return reduction_pair();
  if (name == "reduction_quotient") return reduction_quotient();
  if (name == "constrained_cart") return constrained_cart();
  if (name == "skew_cart") return skew_cart();
  throw ModelError("zoo:" + name, "no such zoo model");
}

}  // namespace alab
