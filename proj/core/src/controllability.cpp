#include "alab/controllability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>

namespace alab {
namespace {

Eigen::Index ix(std::size_t v) { return static_cast<Eigen::Index>(v); }

std::vector<int> add_degrees(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

std::vector<int> unit_degrees(std::size_t i, std::size_t size) {
  std::vector<int> d(size, 0);
  d[i] = 1;
  return d;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.cols() == 0) return b;
  if (b.cols() == 0) return a;
  Matrix m(a.rows(), a.cols() + b.cols());
  m << a, b;
  return m;
}

int rank_with(const Matrix& values, const Matrix& extra, double tol) {
  return numeric_rank(hstack(values, extra), tol);
}

// Labels of a subfamily, in order, whose values are independent and span
// the same space as all of them together with `extra`.
std::vector<std::string> greedy_basis(const std::vector<std::string>& labels,
                                      const std::vector<Vector>& values,
                                      const Matrix& extra, double tol) {
  std::vector<std::string> out;
  const Eigen::Index rows =
      values.empty() ? extra.rows() : values.front().size();
  Matrix chosen = extra.cols() > 0 ? extra : Matrix(rows, 0);
  for (Eigen::Index k = 0; k < extra.cols(); ++k) {
    out.push_back("ker[" + std::to_string(k + 1) + "]");
  }
  int rank = numeric_rank(chosen, tol);
  for (std::size_t i = 0; i < values.size(); ++i) {
    Matrix trial(rows, chosen.cols() + 1);
    trial << chosen, values[i];
    int r = numeric_rank(trial, tol);
    if (r > rank) {
      chosen = trial;
      rank = r;
      out.push_back(labels[i]);
    }
  }
  return out;
}

struct ClosureBuilder {
  const Point& p;
  const ClosureOptions& opt;
  Eigen::Index rows;
  Closure out;
  std::map<int, std::vector<std::size_t>> buckets;

  Matrix values() const { return out.values(rows); }

  int full_rank() const {
    return opt.full_rank >= 0 ? opt.full_rank : static_cast<int>(rows);
  }

  bool satisfied() const {
    if (opt.done) return opt.done(out.terms);
    return rank_with(values(), opt.extra, opt.tol) >= full_rank();
  }

  bool full() const {
    return (opt.stop_when_full || opt.done) && satisfied();
  }

  void add(Term t) {
    PointEvaluator ev(p);
    t.at = t.value.eval(ev);
    buckets[t.weight].push_back(out.terms.size());
    out.terms.push_back(std::move(t));
  }

  void seed(const std::vector<Generator>& gens, std::vector<int>* gen_term) {
    for (std::size_t i = 0; i < gens.size(); ++i) {
      const Generator& g = gens[i];
      std::vector<int> deg =
          g.degrees.empty() ? unit_degrees(i, gens.size()) : g.degrees;
      if (g.value.is_zero()) {
        gen_term->push_back(-1);
        continue;
      }
      gen_term->push_back(static_cast<int>(out.terms.size()));
      add(Term{g.label, deg, g.weight, g.value, Vector()});
    }
  }

  void finish(bool hit_cap, bool last_level_produced) {
    out.rank = numeric_rank(values(), opt.tol);
    out.cap_reached = hit_cap && last_level_produced && !satisfied();
  }
};

std::string bracket_label(const std::string& a, const std::string& b) {
  return "[" + a + "," + b + "]";
}

std::string product_label(const std::string& a, const std::string& b) {
  return "<" + a + ":" + b + ">";
}

}  // namespace

Matrix Closure::values(Eigen::Index rows) const {
  Matrix m(rows, ix(terms.size()));
  for (std::size_t j = 0; j < terms.size(); ++j) m.col(ix(j)) = terms[j].at;
  return m;
}

std::vector<Generator> make_generators(const std::vector<Section>& sections,
                                       const std::string& prefix) {
  std::vector<Generator> out;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    out.push_back(Generator{prefix + std::to_string(i + 1), sections[i], 1,
                            unit_degrees(i, sections.size())});
  }
  return out;
}

Closure involutive_closure(const LieAlgebroid& A, const std::vector<Generator>& gens,
                           const Point& p, const ClosureOptions& opt) {
  if (opt.max_degree < 1) throw std::invalid_argument("max degree must be >= 1");
  ClosureBuilder b{p, opt, ix(A.ell()), {}, {}};
  std::vector<int> gen_term;
  b.seed(gens, &gen_term);

  int min_w = opt.max_degree + 1;
  int max_gen_w = 0;
  for (const Generator& g : gens) {
    min_w = std::min(min_w, g.weight);
    max_gen_w = std::max(max_gen_w, g.weight);
  }
  b.out.degree_reached = std::min(min_w, opt.max_degree);
  if (b.full()) {
    b.finish(false, false);
    return b.out;
  }

  bool hit_cap = true;
  // The seed level counts as produced when no bracket level fits under the cap.
  bool produced_last = !b.out.terms.empty();
  int idle = 0;
  for (int w = min_w + 1; w <= opt.max_degree; ++w) {
    bool produced = false;
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      if (gen_term[gi] < 0) continue;
      const Generator& g = gens[gi];
      auto it = b.buckets.find(w - g.weight);
      if (it == b.buckets.end()) continue;
      std::vector<std::size_t> sources = it->second;
      for (std::size_t src : sources) {
        // [g_i, g_j] for j <= i is zero or the negative of [g_j, g_i].
        auto gj = std::find(gen_term.begin(), gen_term.end(),
                            static_cast<int>(src));
        if (gj != gen_term.end() &&
            static_cast<std::size_t>(gj - gen_term.begin()) <= gi) {
          continue;
        }
        const Term& t = b.out.terms[src];
        Section v = lie_bracket(A, g.value, t.value);
        if (v.is_zero()) continue;
        std::vector<int> deg = add_degrees(
            g.degrees.empty() ? unit_degrees(gi, gens.size()) : g.degrees,
            t.degrees);
        b.add(Term{bracket_label(g.label, t.label), deg, w, std::move(v),
                   Vector()});
        produced = true;
      }
    }
    b.out.degree_reached = w;
    produced_last = produced;
    if (b.full()) {
      hit_cap = false;
      break;
    }
    idle = produced ? 0 : idle + 1;
    if (idle >= max_gen_w) {
      // No bracket of any higher weight can be formed from here.
      hit_cap = false;
      break;
    }
  }
  b.finish(hit_cap, produced_last);
  return b.out;
}

Closure symmetric_closure(const LieAlgebroid& A, const Connection& c,
                          const std::vector<Generator>& gens, const Point& p,
                          const ClosureOptions& opt) {
  if (opt.max_degree < 1) throw std::invalid_argument("max degree must be >= 1");
  ClosureBuilder b{p, opt, ix(A.ell()), {}, {}};
  std::vector<int> gen_term;
  std::vector<Generator> unit = gens;
  for (Generator& g : unit) g.weight = 1;
  b.seed(unit, &gen_term);
  b.out.degree_reached = 1;
  if (b.full()) {
    b.finish(false, false);
    return b.out;
  }
  bool hit_cap = true;
  // The seed level counts as produced when no bracket level fits under the cap.
  bool produced_last = !b.out.terms.empty();
  for (int level = 2; level <= opt.max_degree; ++level) {
    bool produced = false;
    for (int l1 = 1; 2 * l1 <= level; ++l1) {
      int l2 = level - l1;
      auto i1 = b.buckets.find(l1);
      auto i2 = b.buckets.find(l2);
      if (i1 == b.buckets.end() || i2 == b.buckets.end()) continue;
      std::vector<std::size_t> left = i1->second;
      std::vector<std::size_t> right = i2->second;
      for (std::size_t ia = 0; ia < left.size(); ++ia) {
        for (std::size_t ib = (l1 == l2 ? ia : 0); ib < right.size(); ++ib) {
          const Term& ta = b.out.terms[left[ia]];
          const Term& tb = b.out.terms[right[ib]];
          Section v = symmetric_product(A, c, ta.value, tb.value);
          if (v.is_zero()) continue;
          Term t{product_label(ta.label, tb.label),
                 add_degrees(ta.degrees, tb.degrees), level, std::move(v),
                 Vector()};
          b.add(std::move(t));
          produced = true;
        }
      }
    }
    b.out.degree_reached = level;
    produced_last = produced;
    if (b.full()) {
      hit_cap = false;
      break;
    }
    if (!produced) {
      // Every term of the next level would need a factor from this one,
      // unless it pairs two lower levels; keep going only if those exist.
      bool more = false;
      for (int l1 = 1; 2 * l1 <= level + 1; ++l1) {
        if (b.buckets.count(l1) && b.buckets.count(level + 1 - l1)) more = true;
      }
      if (!more) {
        hit_cap = false;
        break;
      }
    }
  }
  b.finish(hit_cap, produced_last);
  return b.out;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kSufficient: return "sufficient";
    case Outcome::kInconclusive: return "inconclusive";
    case Outcome::kPreconditionFailed: return "precondition-failed";
  }
  return "inconclusive";
}

std::vector<BadTermCheck> check_bad_terms(const Closure& closure,
                                          const std::vector<bool>& bad,
                                          const Matrix& extra, double tol) {
  std::vector<BadTermCheck> out;
  for (std::size_t i = 0; i < closure.terms.size(); ++i) {
    if (!bad[i]) continue;
    const Term& t = closure.terms[i];
    std::vector<Vector> cols;
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < closure.terms.size(); ++j) {
      if (bad[j] || closure.terms[j].weight >= t.weight) continue;
      cols.push_back(closure.terms[j].at);
      labels.push_back(closure.terms[j].label);
    }
    for (Eigen::Index k = 0; k < extra.cols(); ++k) {
      cols.push_back(extra.col(k));
      labels.push_back("ker[" + std::to_string(k + 1) + "]");
    }
    Matrix a = columns(cols, t.at.size());
    LeastSquares ls = least_squares(a, t.at, tol);
    BadTermCheck chk;
    chk.term = t.label;
    chk.degree = t.weight;
    chk.residual = ls.residual;
    chk.passed = ls.residual < tol * (1.0 + t.at.norm());
    for (Eigen::Index k = 0; k < ls.coeffs.size(); ++k) {
      if (std::abs(ls.coeffs(k)) > 1e-12) {
        chk.combination.push_back({labels[static_cast<std::size_t>(k)],
                                   ls.coeffs(k)});
      }
    }
    out.push_back(std::move(chk));
  }
  return out;
}

namespace {

Verdict base_verdict(const std::string& name, const Point& p, int max_deg,
                     double tol) {
  Verdict v;
  v.name = name;
  v.point = p;
  v.degree_cap = max_deg;
  v.tol = tol;
  return v;
}

bool check_transitive(const LieAlgebroid& A, const Point& p, double tol,
                      Verdict* v) {
  if (is_locally_transitive(A, p, tol)) return true;
  v->outcome = Outcome::kPreconditionFailed;
  v->rank_found = numeric_rank(A.anchor_at(p), tol);
  v->rank_required = static_cast<int>(A.orbit_dimension());
  v->note = "anchor rank " + std::to_string(v->rank_found) +
            " below orbit dimension " + std::to_string(A.orbit_dimension()) +
            ": not locally accessible at this point";
  return false;
}

std::vector<Generator> general_generators(const GeneralSystem& S) {
  const std::size_t k = S.inputs.size();
  std::vector<Generator> gens;
  gens.push_back(Generator{"sigma", S.drift, 1, unit_degrees(0, k + 1)});
  for (std::size_t i = 0; i < k; ++i) {
    gens.push_back(Generator{"eta" + std::to_string(i + 1), S.inputs[i], 1,
                             unit_degrees(i + 1, k + 1)});
  }
  return gens;
}

std::vector<Vector> term_values(const Closure& cl) {
  std::vector<Vector> v;
  for (const Term& t : cl.terms) v.push_back(t.at);
  return v;
}

std::vector<std::string> term_labels(const Closure& cl) {
  std::vector<std::string> v;
  for (const Term& t : cl.terms) v.push_back(t.label);
  return v;
}

// Every input occurs an even number of times.
bool is_bad_product(const Term& t, std::size_t k) {
  for (std::size_t i = 0; i < k; ++i) {
    if (t.degrees[i] % 2 != 0) return false;
  }
  return true;
}

// Odd drift degree, even degree in every input.
bool is_bad_bracket(const Term& t) {
  if (t.degrees[0] % 2 == 0) return false;
  for (std::size_t i = 1; i < t.degrees.size(); ++i) {
    if (t.degrees[i] % 2 != 0) return false;
  }
  return true;
}

// Stop rule for controllability enumerations: once the good terms and the
// extra directions span `full` dimensions, every bad term of higher degree
// lies in their span.
std::function<bool(const std::vector<Term>&)> good_span_reaches(
    std::function<bool(const Term&)> bad, Matrix extra, int full, double tol) {
  return [bad = std::move(bad), extra = std::move(extra), full,
          tol](const std::vector<Term>& terms) {
    std::vector<Vector> good;
    for (const Term& t : terms) {
      if (!bad(t)) good.push_back(t.at);
    }
    if (good.empty()) return numeric_rank(extra, tol) >= full;
    return rank_with(columns(good, good.front().size()), extra, tol) >= full;
  };
}

// Symmetric closure of the effective inputs (and the potential gradient,
// when present) that stops once the good terms together with `extra`
// span `full` directions.
Closure mech_product_closure(const MechSystem& S, const Point& m, int max_deg,
                             double tol, const Matrix& extra, int full,
                             std::size_t* input_count) {
  const std::vector<Section>& inputs = S.effective_inputs();
  const std::size_t k = inputs.size();
  std::vector<Generator> gens;
  bool with_potential = S.has_potential() && !S.potential_gradient().is_zero();
  std::size_t slots = k + (with_potential ? 1 : 0);
  for (std::size_t i = 0; i < k; ++i) {
    gens.push_back(Generator{"eta" + std::to_string(i + 1), inputs[i], 1,
                             unit_degrees(i, slots)});
  }
  if (with_potential) {
    gens.push_back(Generator{"etaV", S.potential_gradient(), 1,
                             unit_degrees(k, slots)});
  }
  *input_count = k;
  ClosureOptions opt;
  opt.max_degree = max_deg;
  opt.tol = tol;
  opt.done = good_span_reaches(
      [k](const Term& t) { return is_bad_product(t, k); }, extra, full, tol);
  return symmetric_closure(S.algebroid(), S.connection(), gens, m, opt);
}

std::vector<bool> bad_products(const Closure& cl, std::size_t k) {
  std::vector<bool> bad;
  for (const Term& t : cl.terms) bad.push_back(is_bad_product(t, k));
  return bad;
}

void fill_control(Verdict* v, const Closure& cl, const std::vector<bool>& bad,
                  const Matrix& extra, double tol, int full) {
  v->bad_terms = check_bad_terms(cl, bad, extra, tol);
  int passed = 0;
  for (const BadTermCheck& c : v->bad_terms) passed += c.passed ? 1 : 0;
  v->rank_found = passed;
  v->rank_required = static_cast<int>(v->bad_terms.size());
  v->outcome = passed == v->rank_required ? Outcome::kSufficient
                                          : Outcome::kInconclusive;
  // Good terms spanning everything settle all bad terms of higher degree.
  std::vector<std::string> labels;
  std::vector<Vector> good;
  for (std::size_t i = 0; i < cl.terms.size(); ++i) {
    if (!bad[i]) {
      good.push_back(cl.terms[i].at);
      labels.push_back(cl.terms[i].label);
    }
  }
  v->basis = greedy_basis(labels, good, extra, tol);
  Matrix g = good.empty() ? Matrix(extra.rows(), 0)
                          : columns(good, good.front().size());
  bool good_full = rank_with(g, extra, tol) >= full;
  v->cap_reached = cl.cap_reached && !good_full;
  if (passed < v->rank_required) {
    v->note = std::to_string(v->rank_required - passed) + " of " +
              std::to_string(v->rank_required) +
              " bad terms not in the span of lower-degree good terms";
  } else if (good_full) {
    v->note = "good terms span the target; bad terms of higher degree are covered";
  } else {
    v->note = "all bad terms up to the degree cap are covered";
  }
}

}  // namespace

Verdict accessibility_general(const GeneralSystem& S, const Point& p,
                              int max_deg, double tol) {
  Verdict v = base_verdict("general-access", p, max_deg, tol);
  const LieAlgebroid& A = S.algebroid;
  if (!check_transitive(A, p, tol, &v)) return v;
  Matrix K = ker_anchor(A, p, tol);
  ClosureOptions opt;
  opt.max_degree = max_deg;
  opt.tol = tol;
  opt.extra = K;
  Closure cl = involutive_closure(A, general_generators(S), p, opt);
  v.rank_found = rank_with(cl.values(ix(A.ell())), K, tol);
  v.rank_required = static_cast<int>(A.ell());
  v.basis = greedy_basis(term_labels(cl), term_values(cl), K, tol);
  v.cap_reached = cl.cap_reached;
  v.outcome = v.rank_found >= v.rank_required ? Outcome::kSufficient
                                              : Outcome::kInconclusive;
  return v;
}

Verdict controllability_general(const GeneralSystem& S, const Point& p,
                                int max_deg, double tol) {
  Verdict v = base_verdict("general-control", p, max_deg, tol);
  Verdict acc = accessibility_general(S, p, max_deg, tol);
  if (!acc.sufficient()) {
    v.outcome = Outcome::kPreconditionFailed;
    v.rank_found = acc.rank_found;
    v.rank_required = acc.rank_required;
    v.note = "accessibility condition not met; " + acc.note;
    return v;
  }
  const LieAlgebroid& A = S.algebroid;
  Matrix K = ker_anchor(A, p, tol);
  const int l = static_cast<int>(A.ell());
  ClosureOptions opt;
  opt.max_degree = max_deg;
  opt.tol = tol;
  opt.done = good_span_reaches(is_bad_bracket, K, l, tol);
  Closure cl = involutive_closure(A, general_generators(S), p, opt);
  std::vector<bool> bad;
  for (const Term& t : cl.terms) bad.push_back(is_bad_bracket(t));
  fill_control(&v, cl, bad, K, tol, l);
  return v;
}

CverChor cver_chor(const MechSystem& S, const Point& m, int max_deg, double tol) {
  Prolongation P(S.algebroid());
  const std::size_t l = P.ell();
  Section spray = spray_of(P, S.connection());
  std::vector<Generator> gens;
  const std::size_t k = S.effective_inputs().size();
  if (S.has_potential()) {
    gens.push_back(Generator{"Gamma-etaV^V",
                             spray - vertical_lift(P, S.potential_gradient()), 1,
                             unit_degrees(0, k + 1)});
  } else {
    gens.push_back(Generator{"Gamma", spray, 1, unit_degrees(0, k + 1)});
  }
  for (std::size_t i = 0; i < k; ++i) {
    gens.push_back(Generator{"eta" + std::to_string(i + 1) + "^V",
                             vertical_lift(P, S.effective_inputs()[i]), 1,
                             unit_degrees(i + 1, k + 1)});
  }
  ClosureOptions opt;
  opt.max_degree = max_deg;
  opt.tol = tol;
  opt.full_rank = static_cast<int>(2 * l);
  Closure cl = involutive_closure(P.as_algebroid(), gens, P.zero_point(m), opt);

  std::vector<Vector> hor;
  std::vector<Vector> ver;
  for (const Term& t : cl.terms) {
    auto [h, v] = hor_ver_split(P, t.at);
    hor.push_back(h);
    ver.push_back(v);
  }
  CverChor out;
  Eigen::Index rows = ix(l);
  out.cver = range_basis(columns(ver, rows), tol);
  out.chor = range_basis(columns(hor, rows), tol);
  std::vector<std::string> labels = term_labels(cl);
  Matrix none(rows, 0);
  out.ver_basis = greedy_basis(labels, ver, none, tol);
  out.hor_basis = greedy_basis(labels, hor, none, tol);
  out.cap_reached = cl.cap_reached;
  return out;
}

CverChor cver_chor_symmetric(const MechSystem& S, const Point& m, int max_deg,
                             double tol) {
  if (S.has_potential()) {
    throw std::invalid_argument(
        "the symmetric-product route applies to systems without potential");
  }
  const LieAlgebroid& A = S.algebroid();
  const Eigen::Index rows = ix(A.ell());
  ClosureOptions sopt;
  sopt.max_degree = std::max(1, (max_deg + 1) / 2);
  sopt.tol = tol;
  sopt.stop_when_full = false;
  Closure sym = symmetric_closure(A, S.connection(),
                                  make_generators(S.effective_inputs(), "eta"), m,
                                  sopt);
  CverChor out;
  std::vector<Vector> vals = term_values(sym);
  out.cver = range_basis(columns(vals, rows), tol);
  out.ver_basis = greedy_basis(term_labels(sym), vals, Matrix(rows, 0), tol);

  std::vector<Generator> lie_gens;
  for (const Term& t : sym.terms) {
    if (2 * t.weight > max_deg) continue;
    lie_gens.push_back(Generator{t.label, t.value, 2 * t.weight, t.degrees});
  }
  ClosureOptions lopt;
  lopt.max_degree = max_deg;
  lopt.tol = tol;
  Closure lie = involutive_closure(A, lie_gens, m, lopt);
  std::vector<Vector> hv = term_values(lie);
  out.chor = range_basis(columns(hv, rows), tol);
  out.hor_basis = greedy_basis(term_labels(lie), hv, Matrix(rows, 0), tol);
  out.cap_reached = sym.cap_reached || lie.cap_reached;
  return out;
}

namespace {

int constrained_dim(const MechSystem& S, const Point& m, double tol) {
  return S.constrained() ? S.constraint()->rank_at(m, tol)
                         : static_cast<int>(S.algebroid().ell());
}

}  // namespace

Verdict accessibility_mech(const MechSystem& S, const Point& m, Mode mode,
                           int max_deg, double tol) {
  Verdict v = base_verdict(mode == Mode::kBase ? "base-access" : "zero-access",
                           m, max_deg, tol);
  const LieAlgebroid& A = S.algebroid();
  if (!check_transitive(A, m, tol, &v)) return v;
  const int l = static_cast<int>(A.ell());
  Matrix K = ker_anchor(A, m, tol);
  CverChor cc = cver_chor(S, m, max_deg, tol);
  int hor = rank_with(cc.chor, K, tol);
  v.cap_reached = cc.cap_reached;
  if (mode == Mode::kBase) {
    v.rank_found = hor;
    v.rank_required = l;
    v.basis = cc.hor_basis;
    for (Eigen::Index k = 0; k < K.cols(); ++k) {
      v.basis.push_back("ker[" + std::to_string(k + 1) + "]");
    }
    v.note = "C_hor + ker rho rank " + std::to_string(hor) + " of " +
             std::to_string(l);
  } else {
    int d = constrained_dim(S, m, tol);
    v.rank_found = hor + cc.rank_ver();
    v.rank_required = l + d;
    v.basis = cc.hor_basis;
    for (Eigen::Index k = 0; k < K.cols(); ++k) {
      v.basis.push_back("ker[" + std::to_string(k + 1) + "]");
    }
    for (const std::string& s : cc.ver_basis) v.basis.push_back(s);
    v.note = "C_hor + ker rho rank " + std::to_string(hor) + " of " +
             std::to_string(l) + "; C_ver rank " +
             std::to_string(cc.rank_ver()) + " of " + std::to_string(d);
    if (hor >= l && cc.rank_ver() >= d) {
      v.outcome = Outcome::kSufficient;
      return v;
    }
    v.outcome = Outcome::kInconclusive;
    return v;
  }
  v.outcome = hor >= l ? Outcome::kSufficient : Outcome::kInconclusive;
  return v;
}

Verdict controllability_mech(const MechSystem& S, const Point& m, Mode mode,
                             int max_deg, double tol) {
  Verdict v = base_verdict(mode == Mode::kBase ? "base-control" : "zero-control",
                           m, max_deg, tol);
  Verdict acc = accessibility_mech(S, m, mode, max_deg, tol);
  if (!acc.sufficient()) {
    v.outcome = Outcome::kPreconditionFailed;
    v.rank_found = acc.rank_found;
    v.rank_required = acc.rank_required;
    v.note = "accessibility condition not met; " + acc.note;
    return v;
  }
  const LieAlgebroid& A = S.algebroid();
  Matrix extra = mode == Mode::kBase ? ker_anchor(A, m, tol)
                                     : Matrix(ix(A.ell()), 0);
  int full = mode == Mode::kBase ? static_cast<int>(A.ell())
                                 : constrained_dim(S, m, tol);
  std::size_t k = 0;
  Closure cl = mech_product_closure(S, m, max_deg, tol, extra, full, &k);
  fill_control(&v, cl, bad_products(cl, k), extra, tol, full);
  return v;
}

namespace {

// Jacobian of psi times rho at m, or a precondition failure.
bool manifold_kernel(const MechSystem& S, const ManifoldMap& psi, const Point& m,
                     double tol, Verdict* v, Matrix* kernel) {
  const LieAlgebroid& A = S.algebroid();
  const std::size_t N = psi.components.size();
  Matrix J(ix(N), ix(A.n()));
  PointEvaluator ev(m);
  for (std::size_t r = 0; r < N; ++r) {
    for (std::size_t i = 0; i < A.n(); ++i) {
      J(ix(r), ix(i)) = ev(diff(psi.components[r], i));
    }
  }
  Matrix jr = J * A.anchor().eval(ev);
  int rank = numeric_rank(jr, tol);
  if (N == 0 || rank < static_cast<int>(N)) {
    v->outcome = Outcome::kPreconditionFailed;
    v->rank_found = rank;
    v->rank_required = static_cast<int>(N);
    v->note = "psi_* rho(E_m) has rank " + std::to_string(rank) +
              ", target dimension " + std::to_string(N);
    return false;
  }
  *kernel = null_space(jr, tol);
  return true;
}

}  // namespace

Verdict accessibility_wrt_manifold(const MechSystem& S, const ManifoldMap& psi,
                                   const Point& m, int max_deg, double tol) {
  Verdict v = base_verdict("wrt-manifold-access", m, max_deg, tol);
  Matrix K;
  if (!manifold_kernel(S, psi, m, tol, &v, &K)) return v;
  const int l = static_cast<int>(S.algebroid().ell());
  CverChor cc = cver_chor(S, m, max_deg, tol);
  v.rank_found = rank_with(cc.chor, K, tol);
  v.rank_required = l;
  v.basis = cc.hor_basis;
  for (Eigen::Index k = 0; k < K.cols(); ++k) {
    v.basis.push_back("ker[" + std::to_string(k + 1) + "]");
  }
  v.cap_reached = cc.cap_reached;
  v.outcome = v.rank_found >= l ? Outcome::kSufficient : Outcome::kInconclusive;
  return v;
}

Verdict controllability_wrt_manifold(const MechSystem& S, const ManifoldMap& psi,
                                     const Point& m, int max_deg, double tol) {
  Verdict v = base_verdict("wrt-manifold-control", m, max_deg, tol);
  Verdict acc = accessibility_wrt_manifold(S, psi, m, max_deg, tol);
  if (!acc.sufficient()) {
    v.outcome = Outcome::kPreconditionFailed;
    v.rank_found = acc.rank_found;
    v.rank_required = acc.rank_required;
    v.note = "accessibility condition not met; " + acc.note;
    return v;
  }
  Matrix K;
  manifold_kernel(S, psi, m, tol, &v, &K);
  std::size_t k = 0;
  const int l = static_cast<int>(S.algebroid().ell());
  Closure cl = mech_product_closure(S, m, max_deg, tol, K, l, &k);
  fill_control(&v, cl, bad_products(cl, k), K, tol, l);
  return v;
}

}  // namespace alab
