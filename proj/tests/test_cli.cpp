#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rescue/eval.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::string kData = RESCUE_TEST_DATA;
const std::string kCorpus = RESCUE_CORPUS_DIR;

struct Run {
  int code = -1;
  std::string out;  // stdout and stderr together
};

std::string quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

Run cli(const std::vector<std::string>& args) {
  std::string cmd = quote(RESCUETWEET);
  for (const auto& a : args) cmd += " " + quote(a);
  cmd += " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliOutputs : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("rescue_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }
  std::vector<std::string> outputs() const {
    return {"--out-geojson", (dir / "out.geojson").string(), "--out-map", (dir / "map.html").string(),
            "--out-summary", (dir / "summary.json").string()};
  }
  fs::path dir;
};

}  // namespace

TEST(Cli, ClassifyQuotedRequest) {
  auto r = cli({"classify", "--text", "Please help! 4055 South #Braeswood Boulevard #HoustonFlood"});
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "RescueRequest");
  EXPECT_TRUE(j["features"]["has_address"].get<bool>());
}

TEST(Cli, ClassifyEmptyText) {
  auto r = cli({"classify", "--text", ""});
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = json::parse(r.out);
  EXPECT_EQ(j["verdict"], "NotRescueRequest");
  for (const auto& [k, v] : j["features"].items()) EXPECT_FALSE(v.get<bool>()) << k;
}

TEST(Cli, ClassifyOffer) {
  auto j = json::parse(cli({"classify", "--text", "We are offering shelter and food at 2100 Main St"}).out);
  EXPECT_EQ(j["verdict"], "NotRescueRequest");
  EXPECT_TRUE(j["features"]["has_offer_help"].get<bool>());
}

TEST(Cli, ClassifyFileOneLinePerTweet) {
  auto r = cli({"classify", "--input", kData + "/fixture10.ndjson"});
  ASSERT_EQ(r.code, 0) << r.out;
  std::istringstream in(r.out);
  int lines = 0, requests = 0;
  for (std::string line; std::getline(in, line); ++lines) requests += json::parse(line)["verdict"] == "RescueRequest";
  EXPECT_EQ(lines, 10);
  EXPECT_EQ(requests, 2);
}

TEST(Cli, EvalCountsMatchLibrary) {
  auto r = cli({"eval", "--counts", "228,66,23,5475", "--json"});
  ASSERT_EQ(r.code, 0) << r.out;
  auto j = json::parse(r.out);
  auto m = rescue::metrics({228, 66, 23, 5475});
  EXPECT_EQ(j["metrics"]["sensitivity"]["value"].get<double>(), m.sensitivity.value);
  EXPECT_EQ(j["metrics"]["specificity"]["value"].get<double>(), m.specificity.value);
  EXPECT_EQ(j["metrics"]["mcc"]["value"].get<double>(), m.mcc.value);
  EXPECT_EQ(j["metrics"]["f1"]["value"].get<double>(), m.f1.value);
  auto table = cli({"eval", "--counts", "228,66,23,5475"});
  EXPECT_NE(table.out.find("0.9084"), std::string::npos);
  EXPECT_NE(table.out.find("0.8315"), std::string::npos);
}

TEST(Cli, EvalShippedCorpus) {
  auto r = cli({"eval", "--input", kCorpus + "/synthetic_labelled.csv", "--json"});
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(json::parse(r.out)["confusion_matrix"]["total"], 200);
}

TEST(Cli, EvalMissingFile) {
  auto r = cli({"eval", "--input", "/nonexistent/labels.csv"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.out.find("/nonexistent/labels.csv"), std::string::npos) << r.out;
}

TEST(Cli, EvalBadCounts) {
  EXPECT_NE(cli({"eval", "--counts", "1,2,3"}).code, 0);
  EXPECT_NE(cli({"eval", "--counts", "0,0,0,0"}).code, 0);
}

TEST_F(CliOutputs, PipelineFixture) {
  auto args = std::vector<std::string>{"pipeline", "--input", kData + "/fixture10.ndjson", "--gazetteer",
                                       kData + "/fixture10_gazetteer.tsv"};
  auto o = outputs();
  args.insert(args.end(), o.begin(), o.end());
  auto r = cli(args);
  ASSERT_EQ(r.code, 0) << r.out;
  auto s = json::parse(slurp(dir / "summary.json"));
  EXPECT_EQ(s["read"], 10);
  EXPECT_EQ(s["stream_passed"], 10);
  EXPECT_EQ(s["classified_positive"], 2);
  EXPECT_EQ(s["geocoded_ok"], 2);
  EXPECT_EQ(s["geocode_failed"], 0);
  EXPECT_EQ(json::parse(slurp(dir / "out.geojson"))["features"].size(), 2u);
  EXPECT_NE(slurp(dir / "map.html").find("rescue-data"), std::string::npos);
}

TEST_F(CliOutputs, PipelineEmptyInput) {
  auto args = std::vector<std::string>{"pipeline", "--input", kData + "/empty.ndjson", "--gazetteer",
                                       kData + "/fixture10_gazetteer.tsv"};
  auto o = outputs();
  args.insert(args.end(), o.begin(), o.end());
  ASSERT_EQ(cli(args).code, 0);
  const json summary = json::parse(slurp(dir / "summary.json"));
  for (const auto& [k, v] : summary.items()) EXPECT_EQ(v, 0) << k;
  EXPECT_TRUE(json::parse(slurp(dir / "out.geojson"))["features"].empty());
}

TEST_F(CliOutputs, PipelineGazetteerMissingOne) {
  auto args = std::vector<std::string>{"pipeline", "--input", kData + "/fixture10.ndjson", "--gazetteer",
                                       kData + "/fixture10_gazetteer_partial.tsv"};
  auto o = outputs();
  args.insert(args.end(), o.begin(), o.end());
  ASSERT_EQ(cli(args).code, 0);
  EXPECT_EQ(json::parse(slurp(dir / "summary.json"))["geocode_failed"], 1);
  EXPECT_EQ(json::parse(slurp(dir / "out.geojson"))["ungeocoded"].size(), 1u);
}

TEST_F(CliOutputs, ManifestAndConfigFile) {
  std::ofstream(dir / "inputs.manifest") << kData << "/fixture10.ndjson\n";
  std::ofstream(dir / "config.json") << R"({"gazetteer": ")" << kData << R"(/fixture10_gazetteer.tsv"})";
  auto args = std::vector<std::string>{"pipeline", "--input", (dir / "inputs.manifest").string(), "--config",
                                       (dir / "config.json").string(), "--sequential"};
  auto o = outputs();
  args.insert(args.end(), o.begin(), o.end());
  auto r = cli(args);
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(json::parse(slurp(dir / "summary.json"))["geocoded_ok"], 2);
}

TEST(Cli, FatalErrorsNameStageAndPath) {
  auto in = cli({"pipeline", "--input", "/nonexistent/in.ndjson", "--gazetteer", kData + "/two_rows.tsv"});
  EXPECT_EQ(in.code, 2);
  EXPECT_NE(in.out.find("[ingest]"), std::string::npos) << in.out;
  EXPECT_NE(in.out.find("/nonexistent/in.ndjson"), std::string::npos);

  auto gaz = cli({"pipeline", "--input", kData + "/fixture10.ndjson", "--gazetteer", "/nonexistent/g.tsv"});
  EXPECT_EQ(gaz.code, 1);
  EXPECT_NE(gaz.out.find("/nonexistent/g.tsv"), std::string::npos) << gaz.out;

  auto dup = cli({"pipeline", "--input", kData + "/fixture10.ndjson", "--gazetteer", kData + "/duplicate_key.tsv"});
  EXPECT_NE(dup.code, 0);
  EXPECT_NE(dup.out.find("duplicate"), std::string::npos) << dup.out;

  EXPECT_EQ(cli({"pipeline", "--input", kData + "/fixture10.ndjson"}).code, 1);
  EXPECT_NE(cli({"frobnicate"}).code, 0);
}

TEST(Cli, NoKeyFlag) {
  // credentials come from the environment only
  EXPECT_NE(cli({"pipeline", "--api-key", "x"}).code, 0);
}
