#include <gtest/gtest.h>

#include <sstream>

#include "nilprob/serialize.hpp"

using namespace nilprob;
using serialize::Json;

TEST(Serialize, RationalAsFractionString) {
  EXPECT_EQ(serialize::to_json(Rational(65, 128)), "65/128");
  EXPECT_EQ(serialize::to_json(Rational(2, 4)), "1/2");
}

TEST(Serialize, ExactAndMonteCarloReportsHaveDistinctShapes) {
  stats::StatReport exact;
  exact.statistic = "d1";
  exact.exact = Rational(5, 8);
  exact.estimate = 0.625;
  auto j = serialize::to_json(exact);
  EXPECT_EQ(j["kind"], "exact");
  EXPECT_EQ(j["value_num"], 5);
  EXPECT_EQ(j["value_den"], 8);
  EXPECT_FALSE(j.contains("ci_low"));

  stats::StatReport mc;
  mc.kind = stats::StatReport::Kind::monte_carlo;
  mc.statistic = "d2";
  mc.estimate = 0.2;
  mc.ci_low = 0.19;
  mc.ci_high = 0.21;
  mc.confidence = 0.99;
  mc.samples = 1000;
  mc.seed = 7;
  j = serialize::to_json(mc);
  EXPECT_EQ(j["kind"], "monte_carlo");
  EXPECT_EQ(j["seed"], 7);
  EXPECT_DOUBLE_EQ(j["ci_high"].get<double>(), 0.21);
  EXPECT_FALSE(j.contains("value_num"));
}

TEST(Serialize, KeyOrderIsInsertionOrder) {
  Json j;
  j["zeta"] = 1;
  j["alpha"] = 2;
  std::ostringstream os;
  serialize::write_json(os, j);
  EXPECT_EQ(os.str(), "{\n  \"zeta\": 1,\n  \"alpha\": 2\n}\n");
}

TEST(Serialize, CsvFlattensAndQuotes) {
  Json j;
  j["a"]["b"] = Json::array({1, 2});
  j["empty"] = Json::array();
  j["s"] = "x,y \"q\"";
  std::ostringstream os;
  serialize::write_csv(os, "cmd", j);
  EXPECT_EQ(os.str(),
            "schema,command,key,value\n"
            "1,cmd,a.b.0,1\n"
            "1,cmd,a.b.1,2\n"
            "1,cmd,empty,[]\n"
            "1,cmd,s,\"x,y \"\"q\"\"\"\n");
}

TEST(Serialize, TextUsesSameFlattening) {
  Json j;
  j["a"]["b"] = true;
  j["n"] = nullptr;
  std::ostringstream os;
  serialize::write_text(os, j);
  EXPECT_EQ(os.str(), "a.b: true\nn: null\n");
}

TEST(Serialize, VectorAndDenseMap) {
  EXPECT_EQ(serialize::to_json(fieldlin::FpVector(3, {1, 2, 0})), Json::array({1, 2, 0}));
  const bias::DenseMultilinear m(2, {1, 1}, 1, {1});
  const auto j = serialize::to_json(m);
  EXPECT_EQ(j["codim"], 1);
  EXPECT_EQ(j["coeffs"], Json::array({1}));
}
