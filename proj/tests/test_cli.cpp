#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "carleson_lab/cli.hpp"

using namespace carleson_lab;
using io::json;

namespace {

struct Result {
  int code = -1;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "carleson-lab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  set_thread_count(0);
  return r;
}

std::string sample(const std::string& name) { return std::string(CARLESON_LAB_SAMPLES_DIR) + "/" + name; }

std::filesystem::path scratch() {
  const auto dir = std::filesystem::temp_directory_path() / "carleson_lab_cli_test";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST(Cli, ClassifyExitCodes) {
  const auto pos = run({"classify", "--measure", "radial_power:0", "--lambda", "1", "--gamma", "0"});
  EXPECT_EQ(pos.code, 0) << pos.err;
  const auto j = json::parse(pos.out);
  EXPECT_EQ(j["report_version"], 1);
  EXPECT_EQ(j["result"]["verdict"], "carleson");
  EXPECT_EQ(j["config"]["quad"]["radial_nodes"], 128);
  EXPECT_EQ(run({"classify", "--measure", "radial_power:-0.5", "--lambda", "1", "--gamma", "0"}).code, 1);
}

TEST(Cli, InputErrors) {
  const auto dir = scratch();
  const auto bad = (dir / "bad.json").string();
  io::write_atomic(bad, "{\n  \"type\": \"radial_power\",\n  \"theta\": 0,,\n}\n");
  auto r = run({"norm", "--measure", bad});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("line 3, column 14"), std::string::npos) << r.err;

  const auto unk = (dir / "cfg.json").string();
  io::write_atomic(unk, R"({"measure": "radial_power:0", "lamda": 1})");
  r = run({"norm", "--config", unk});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("unknown key 'lamda'"), std::string::npos) << r.err;

  EXPECT_EQ(run({"verify", "theoremC"}).code, 3);
  EXPECT_EQ(run({"frobnicate"}).code, 3);
  EXPECT_EQ(run({"classify", "--lambda", "1"}).code, 3);
  EXPECT_EQ(run({"classify", "--measure", "radial_power:0", "--lambda", "0.5", "--route", "ball"}).code, 3);
  EXPECT_EQ(run({"classify", "--measure", "radial_power:0", "--lambda", "1", "--tuple", "2,2,0"}).code, 3);
  EXPECT_EQ(run({"norm", "--measure", sample("atoms_ball.json"), "--dim", "1"}).code, 3);
  std::filesystem::remove_all(dir);
}

TEST(Cli, HypothesisViolationsNameTheInequality) {
  auto r = run({"toeplitz", "--measure", "radial_power:0", "--beta", "-0.5"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("n+1+beta > n*max(1,1/p1) + (1+alpha1)/p1"), std::string::npos) << r.err;
  r = run({"cesaro", "--alpha", "0"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("alpha > 0"), std::string::npos) << r.err;
}

TEST(Cli, CsvAndAtomicOutput) {
  const auto dir = scratch();
  const auto path = (dir / "series.csv").string();
  const auto r =
      run({"classify", "--measure", "radial_power:0.5", "--lambda", "1", "--format", "csv", "--output", path});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto text = io::read_file(path);
  EXPECT_EQ(text.rfind("probe_id,radius,value,slope,verdict\n", 0), 0u);
  EXPECT_NE(text.find(",carleson\n"), std::string::npos);
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  EXPECT_EQ(run({"geometry", "--z", "0.1,0", "--w", "0.2,0", "--format", "csv"}).code, 3);
  std::filesystem::remove_all(dir);
}

TEST(Cli, Geometry) {
  const auto r = run({"geometry", "--z", "0.3,0.1,0,0.2", "--w", "-0.5,0.2,0.1,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out)["result"];
  EXPECT_EQ(j["mobius"].size(), 2u);
  EXPECT_LT(j["involution_residual"].get<double>(), 1e-12);
  EXPECT_LT(j["identity_residual"].get<double>(), 1e-12);
}

TEST(Cli, ThreadCountDoesNotChangeReports) {
  const std::vector<std::string> args{"norm", "--measure", sample("atoms_disk.json"), "--lambda", "1.5", "--gamma", "0.5"};
  auto one = args, three = args;
  one.insert(one.end(), {"--threads", "1"});
  three.insert(three.end(), {"--threads", "3"});
  const auto a = run(one), b = run(three);
  EXPECT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, Samples) {
  EXPECT_EQ(run({"classify", "--config", sample("classify_lattice.json")}).code, 0);
  const auto p = run({"product", "--config", sample("product_tuples.json")});
  EXPECT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(json::parse(p.out)["result"]["norm_verdict"], "carleson");
  EXPECT_EQ(run({"norm", "--measure", sample("atoms_ball.json"), "--lambda", "1"}).code, 0);
  // The half-plane bump with theta = -1/4 sits below the lambda = 1 threshold.
  EXPECT_EQ(run({"classify", "--measure", sample("mixed_sum.json"), "--lambda", "1"}).code, 1);
}

TEST(Cli, OtherCommands) {
  EXPECT_EQ(run({"vanishing", "--measure", "radial_power:0.5", "--lambda", "1"}).code, 0);
  EXPECT_EQ(run({"vanishing", "--measure", "radial_power:0", "--lambda", "1"}).code, 1);
  EXPECT_EQ(run({"lattice", "--radius", "1", "--truncation", "0.01"}).code, 0);
  const auto t = run({"toeplitz", "--measure", "radial_power:1", "--beta", "1"});
  EXPECT_EQ(t.code, 0) << t.err;
  EXPECT_EQ(json::parse(t.out)["result"]["operator_verdict"], "carleson");
  EXPECT_EQ(run({"cesaro", "--symbol", "monomial:1"}).code, 0);
  EXPECT_EQ(run({"keylemma", "--measure", "radial_power:0"}).code, 0);
}

TEST(Cli, VerifySummary) {
  const auto dir = scratch();
  const auto path = (dir / "summary.json").string();
  const auto r = run({"verify", "geometry", "--output", path});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("[1] ok"), std::string::npos);
  const auto j = json::parse(io::read_file(path));
  EXPECT_TRUE(j["pass"]);
  EXPECT_EQ(j["suite"], "geometry");
  EXPECT_EQ(j["config"]["seed"], 20140101);
  std::filesystem::remove_all(dir);
}
