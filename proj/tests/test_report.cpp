#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ckforms/report.hpp"

using namespace ckforms;

namespace {

std::string fixture(const std::string& rel) { return std::string(CKFORMS_FIXTURE_DIR) + "/" + rel; }

RunConfig numbers_config(int dim, int r) {
  RunConfig c;
  c.command = "numbers";
  c.dim = dim;
  c.r = r;
  return c;
}

}  // namespace

TEST(CliJson, FloatsKeepSeventeenDigits) {
  Json j;
  j["a"] = 0.1;
  j["b"] = 3;
  j["c"] = std::vector<int>{1, 2};
  j["d"] = "x\"y";
  const std::string s = to_json_text(j);
  EXPECT_NE(s.find("0.10000000000000001"), std::string::npos) << s;
  EXPECT_NE(s.find("\"b\": 3"), std::string::npos) << s;
  EXPECT_NE(s.find("\\\""), std::string::npos) << s;
  // round trip is lossless
  EXPECT_EQ(Json::parse(s)["a"].get<double>(), 0.1);
}

TEST(CliJson, KeyOrderIsInsertionOrder) {
  Json j;
  j["z"] = 1;
  j["a"] = 2;
  const std::string s = to_json_text(j);
  EXPECT_LT(s.find("\"z\""), s.find("\"a\""));
}

TEST(CliNumbers, TorusDocument) {
  const CommandResult r = cmd_numbers(numbers_config(3, 1));
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.doc["schema"], 1);
  EXPECT_TRUE(r.doc.contains("curvature_convention"));
  EXPECT_EQ(r.doc["config"]["seed"], 1);
  for (const char* key : {"b", "t", "k", "p"}) EXPECT_EQ(r.doc["numbers"][key], 3) << key;
  EXPECT_EQ(r.doc["duality"].size(), 4u);
  EXPECT_EQ(r.doc["bounds"].size(), 3u);
  EXPECT_EQ(r.csv.substr(0, r.csv.find('\n')), "n,r,band,tol,b,t,k,p");
  EXPECT_NE(r.csv.find(",3,3,3,3\n"), std::string::npos);
}

TEST(CliNumbers, ConfigErrors) {
  RunConfig c = numbers_config(3, 1);
  c.manifold = "sphere";
  try {
    cmd_numbers(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()), "spectral kernels supported on flat tori only");
  }
  EXPECT_THROW(cmd_numbers(numbers_config(3, 3)), ConfigError);
  RunConfig f = numbers_config(3, 1);
  f.format = "xml";
  EXPECT_THROW(cmd_numbers(f), ConfigError);
  RunConfig m = numbers_config(3, 1);
  m.manifold = "klein";
  EXPECT_THROW(run_command(m), ConfigError);
  RunConfig u = numbers_config(3, 1);
  u.command = "plot";
  EXPECT_THROW(run_command(u), ConfigError);
}

TEST(CliClassify, FromFixtureFile) {
  RunConfig c;
  c.command = "classify";
  c.dim = 2;
  c.form = fixture("forms/sin_dx1.form");
  c.points = 10;
  const CommandResult r = cmd_classify(c);
  EXPECT_EQ(r.doc["classification"]["classes"], "D");
  EXPECT_EQ(r.doc["classification"]["memberships"]["F"], false);
  EXPECT_NE(r.csv.find("D,true"), std::string::npos);

  RunConfig s;
  s.command = "classify";
  s.manifold = "custom";
  s.chart = fixture("charts/sphere2.chart");
  s.form = fixture("forms/ambient_z.form");
  s.points = 10;
  EXPECT_EQ(cmd_classify(s).doc["classification"]["classes"], "DTP");

  RunConfig sp = c;
  sp.manifold = "sphere";
  sp.dim = 3;
  sp.form = "killing:1:2";
  EXPECT_EQ(cmd_classify(sp).doc["classification"]["classes"], "FTK");
}

TEST(CliClassify, Errors) {
  RunConfig c;
  c.command = "classify";
  c.dim = 2;
  EXPECT_THROW(cmd_classify(c), ConfigError);
  c.form = fixture("forms/does_not_exist.form");
  EXPECT_THROW(cmd_classify(c), Error);
  c.manifold = "custom";
  EXPECT_THROW(cmd_classify(c), ConfigError);
  c.manifold = "conformal";
  EXPECT_THROW(cmd_classify(c), ConfigError);
}

TEST(CliVerify, MislabeledCatalogueFails) {
  RunConfig c;
  c.command = "verify";
  c.catalogue = fixture("mislabeled.catalogue");
  c.points = 10;
  const CommandResult r = cmd_verify(c);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.doc["summary"]["failed"], 1);
  EXPECT_NEAR(r.doc["checks"][0]["residual"].get<double>(), 1.0, 1e-9);
  EXPECT_EQ(r.csv.substr(0, r.csv.find('\n')), "id,chart,form,residual,tol,pass,eigenvalue,error");
}

TEST(CliVerify, EmptyCatalogue) {
  const auto path = std::filesystem::temp_directory_path() / "ckforms_empty.catalogue";
  {
    std::ofstream f(path);
    f << "# only comments\n";
  }
  RunConfig c;
  c.command = "verify";
  c.catalogue = path.string();
  try {
    cmd_verify(c);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("no fixtures"), std::string::npos);
  }
  std::filesystem::remove(path);
}

TEST(CliVerify, DeterministicJson) {
  RunConfig c;
  c.command = "verify";
  c.catalogue = fixture("example.catalogue");
  c.points = 5;
  c.seed = 9;
  const std::string a = to_json_text(cmd_verify(c).doc), b = to_json_text(cmd_verify(c).doc);
  EXPECT_EQ(a, b);
  c.seed = 10;
  EXPECT_NE(to_json_text(cmd_verify(c).doc), a);
}

TEST(CliCsv, Quoting) {
  EXPECT_EQ(detail::csv_field("plain"), "plain");
  EXPECT_EQ(detail::csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(detail::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

TEST(CliReport, JsonOnly) {
  RunConfig c;
  c.command = "report";
  c.format = "csv";
  EXPECT_THROW(cmd_report(c), ConfigError);
}
