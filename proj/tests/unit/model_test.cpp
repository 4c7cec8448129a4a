#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "alab/model.hpp"
#include "fixtures.hpp"

namespace alab {
namespace {

using json = nlohmann::json;

json exported(const std::string& name) { return json::parse(model_to_json(zoo_model(name))); }

std::string where_of(const std::string& text) {
  try {
    load_model(text);
  } catch (const ModelError& e) {
    return e.where();
  }
  return "<loaded>";
}

TEST(Model, ZooPassesTheLoadGate) {
  for (const Model& m : testing::all_zoo_models()) {
    EXPECT_NO_THROW(check_model(m)) << m.name;
  }
}

TEST(Model, JsonRoundTripIsStable) {
  for (const std::string& name : zoo_names()) {
    std::string text = model_to_json(zoo_model(name));
    Model back = load_model(text);
    EXPECT_EQ(model_to_json(back), text) << name;
    EXPECT_EQ(back.points.size(), zoo_model(name).points.size());
  }
}

TEST(Model, LoadedModelGivesSameVerdicts) {
  Model zoo = zoo_model("rigid_body");
  Model back = load_model(model_to_json(zoo));
  for (const std::string& t : zoo.tests) {
    Verdict a = run_test(zoo, t, zoo.points.front(), 4, 1e-9);
    Verdict b = run_test(back, t, back.points.front(), 4, 1e-9);
    EXPECT_EQ(a.outcome, b.outcome) << t;
    EXPECT_EQ(a.rank_found, b.rank_found) << t;
  }
}

TEST(Model, CorruptedStructureConstantIsRejected) {
  json j = exported("rigid_body");
  j["algebroid"]["brackets"][0]["value"][2] = "2";
  try {
    load_model(j.dump());
    FAIL() << "corrupted model loaded";
  } catch (const ModelError& e) {
    EXPECT_EQ(e.where(), "/algebroid");
    EXPECT_NE(e.message().find("structure"), std::string::npos);
  }
}

TEST(Model, ErrorsCarryLocations) {
  json j = exported("polar");
  j["system"]["metric"][1][1] = "x1^";
  EXPECT_EQ(where_of(j.dump()).rfind("/system/metric", 0), 0u);

  j = exported("polar");
  j["algebroid"].erase("anchor");
  EXPECT_EQ(where_of(j.dump()), "/algebroid");

  j = exported("polar");
  j["analysis"]["points"][0] = {1.0};
  EXPECT_EQ(where_of(j.dump()), "/analysis/points/0");

  j = exported("polar");
  j["analysis"]["tests"] = {"zero-acess"};
  EXPECT_EQ(where_of(j.dump()), "/analysis/tests");

  j = exported("constrained_cart");
  j["system"]["projector"][2][2] = "2";
  EXPECT_EQ(where_of(j.dump()), "/system/projector");

  // Metric singular at a perturbed analysis point.
  j = exported("polar");
  j["analysis"]["points"][0] = {0.0, 0.5};
  EXPECT_EQ(where_of(j.dump()), "/system/metric");
}

TEST(Model, SyntaxErrorsReportLine) {
  try {
    load_model("{\n  \"name\": \"x\",\n  \"algebroid\": [,\n}");
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos) << e.what();
  }
}

TEST(Model, Sources) {
  EXPECT_EQ(load_model_source("zoo:oscillator").name, "oscillator");
  EXPECT_THROW(load_model_source("zoo:pendulum"), ModelError);
  EXPECT_THROW(load_model_source("/definitely/not/here.json"), ModelError);
}

TEST(Model, TestsReportMissingData) {
  Model flat = zoo_model("tq_flat_2");
  EXPECT_EQ(known_tests().size(), 8u);
  Verdict v = run_test(flat, "general-access", flat.points.front(), 4, 1e-9);
  EXPECT_EQ(v.outcome, Outcome::kPreconditionFailed);
  v = run_test(flat, "wrt-manifold-access", flat.points.front(), 4, 1e-9);
  EXPECT_EQ(v.outcome, Outcome::kPreconditionFailed);
  EXPECT_ANY_THROW(run_test(flat, "no-such-test", flat.points.front(), 4, 1e-9));
}

TEST(Model, ForcesAreRaisedWithTheMetric) {
  json j = exported("polar");
  j["system"].erase("inputs");
  j["system"]["forces"] = json::array({json::array({"0", "1"})});
  Model m = load_model(j.dump());
  Point p(2);
  p << 2.0, 0.0;
  // theta = dx2 raised with diag(1, r^2) is e2 / r^2.
  Vector eta = m.inputs.front().eval(p);
  EXPECT_NEAR(eta(0), 0.0, 1e-15);
  EXPECT_NEAR(eta(1), 0.25, 1e-15);
}

}  // namespace
}  // namespace alab

namespace alab {
namespace {

TEST(Model, ShippedFilesMatchTheZoo) {
  for (const std::string& name : zoo_names()) {
    std::string path = std::string(ALAB_MODELS_DIR) + "/" + name + ".json";
    Model m = load_model_source(path);
    EXPECT_EQ(model_to_json(m), model_to_json(zoo_model(name))) << path;
  }
}

}  // namespace
}  // namespace alab
