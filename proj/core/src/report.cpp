#include "alab/report.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace alab {
namespace {

using ojson = nlohmann::ordered_json;

ojson point_json(const Point& p) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p(i));
  return a;
}

Point point_from(const ojson& j) {
  Point p(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    p(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return p;
}

Outcome outcome_from(const std::string& s) {
  for (Outcome o : {Outcome::kSufficient, Outcome::kInconclusive,
                    Outcome::kPreconditionFailed}) {
    if (s == outcome_name(o)) return o;
  }
  throw std::runtime_error("unknown verdict \"" + s + "\"");
}

ClaimKind claim_from(const std::string& s) {
  for (ClaimKind k : {ClaimKind::kNone, ClaimKind::kForward, ClaimKind::kEquivalence}) {
    if (s == claim_kind_name(k)) return k;
  }
  throw std::runtime_error("unknown claim kind \"" + s + "\"");
}

ojson verdict_json(const Verdict& v) {
  ojson j;
  j["name"] = v.name;
  j["point"] = point_json(v.point);
  j["verdict"] = outcome_name(v.outcome);
  j["ranks"] = {{"found", v.rank_found}, {"required", v.rank_required}};
  ojson w;
  w["basis"] = v.basis;
  ojson bad = ojson::array();
  for (const BadTermCheck& b : v.bad_terms) {
    ojson c = ojson::array();
    for (const Combination& k : b.combination) c.push_back({{"term", k.term}, {"coeff", k.coeff}});
    bad.push_back({{"term", b.term},
                   {"degree", b.degree},
                   {"residual", b.residual},
                   {"passed", b.passed},
                   {"combination", c}});
  }
  w["bad_terms"] = bad;
  j["witnesses"] = w;
  j["caps"] = {{"degree", v.degree_cap}, {"reached", v.cap_reached}};
  j["tolerances"] = {{"rank", v.tol}};
  j["note"] = v.note;
  return j;
}

Verdict verdict_from(const ojson& j) {
  Verdict v;
  v.name = j.at("name").get<std::string>();
  v.point = point_from(j.at("point"));
  v.outcome = outcome_from(j.at("verdict").get<std::string>());
  v.rank_found = j.at("ranks").at("found").get<int>();
  v.rank_required = j.at("ranks").at("required").get<int>();
  const ojson& w = j.at("witnesses");
  v.basis = w.at("basis").get<std::vector<std::string>>();
  for (const ojson& b : w.at("bad_terms")) {
    BadTermCheck c;
    c.term = b.at("term").get<std::string>();
    c.degree = b.at("degree").get<int>();
    c.residual = b.at("residual").get<double>();
    c.passed = b.at("passed").get<bool>();
    for (const ojson& k : b.at("combination")) {
      c.combination.push_back({k.at("term").get<std::string>(), k.at("coeff").get<double>()});
    }
    v.bad_terms.push_back(std::move(c));
  }
  v.degree_cap = j.at("caps").at("degree").get<int>();
  v.cap_reached = j.at("caps").at("reached").get<bool>();
  v.tol = j.at("tolerances").at("rank").get<double>();
  v.note = j.at("note").get<std::string>();
  return v;
}

// Residuals that do not apply are written as null.
ojson residual_json(double r) { return r < 0.0 ? ojson(nullptr) : ojson(r); }
double residual_from(const ojson& j) { return j.is_null() ? -1.0 : j.get<double>(); }

}  // namespace

std::string report_to_json(const Report& r) {
  ojson j;
  j["model"] = r.model;
  ojson tests = ojson::array();
  for (const Verdict& v : r.tests) tests.push_back(verdict_json(v));
  j["tests"] = tests;
  if (!r.morphisms.empty()) {
    ojson ms = ojson::array();
    for (const MorphismReport& m : r.morphisms) {
      ojson o;
      o["name"] = m.name;
      o["target"] = m.target;
      o["residuals"] = {{"admissible", m.admissible},
                        {"morphism", m.morphism},
                        {"connection", residual_json(m.connection)},
                        {"prolonged_morphism", m.prolonged_morphism},
                        {"mech_related", residual_json(m.mech_related)},
                        {"general_related", residual_json(m.general_related)}};
      o["general_weakly_related"] = m.general_weakly_related;
      ojson claims = ojson::array();
      for (const Claim& c : m.claims) {
        claims.push_back({{"property", c.property},
                          {"kind", claim_kind_name(c.kind)},
                          {"target_point", point_json(c.target_point)},
                          {"verdict", outcome_name(c.outcome)},
                          {"provenance", c.provenance}});
      }
      o["claims"] = claims;
      ojson tv = ojson::array();
      for (const Verdict& v : m.target_verdicts) tv.push_back(verdict_json(v));
      o["target_tests"] = tv;
      ms.push_back(o);
    }
    j["morphisms"] = ms;
  }
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  try {
    ojson j = ojson::parse(text);
    Report r;
    r.model = j.at("model").get<std::string>();
    for (const ojson& t : j.at("tests")) r.tests.push_back(verdict_from(t));
    if (j.contains("morphisms")) {
      for (const ojson& o : j["morphisms"]) {
        MorphismReport m;
        m.name = o.at("name").get<std::string>();
        m.target = o.at("target").get<std::string>();
        const ojson& res = o.at("residuals");
        m.admissible = res.at("admissible").get<double>();
        m.morphism = res.at("morphism").get<double>();
        m.connection = residual_from(res.at("connection"));
        m.prolonged_morphism = res.at("prolonged_morphism").get<double>();
        m.mech_related = residual_from(res.at("mech_related"));
        m.general_related = residual_from(res.at("general_related"));
        m.general_weakly_related = o.at("general_weakly_related").get<bool>();
        for (const ojson& c : o.at("claims")) {
          Claim cl;
          cl.property = c.at("property").get<std::string>();
          cl.kind = claim_from(c.at("kind").get<std::string>());
          cl.target_point = point_from(c.at("target_point"));
          cl.outcome = outcome_from(c.at("verdict").get<std::string>());
          cl.provenance = c.at("provenance").get<std::string>();
          m.claims.push_back(std::move(cl));
        }
        for (const ojson& t : o.at("target_tests")) m.target_verdicts.push_back(verdict_from(t));
        r.morphisms.push_back(std::move(m));
      }
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
}

}  // namespace alab
