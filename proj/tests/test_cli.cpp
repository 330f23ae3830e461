#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "commands.hpp"
#include "hawkes/error.hpp"

namespace hawkes::cli {
namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("hawkes_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    io::write_text(dir_ / name, text);
    return dir_ / name;
  }
  fs::path path(const std::string& name) const { return dir_ / name; }
  json read_json(const std::string& name) const { return json::parse(io::read_text(dir_ / name)); }

  fs::path dir_;
};

const char* kConfig = R"({"D": 2, "T": 300, "mu": [0.6, 0.5], "A": [[0.3, 0.2], [0.0, 0.3]],
                          "kernel": {"type": "exponential", "beta": 1.0}})";

TEST_F(Cli, SimulateIsDeterministic) {
  const auto cfg = write("c.json", kConfig);
  cmd_simulate({cfg, path("a.csv"), 5, std::nullopt});
  cmd_simulate({cfg, path("b.csv"), 5, std::nullopt});
  EXPECT_EQ(io::read_text(path("a.csv")), io::read_text(path("b.csv")));
  const json m = read_json("a.manifest.json");
  EXPECT_EQ(m["D"], 2);
  EXPECT_EQ(m["T"], 300);
}

TEST_F(Cli, SimulatePoissonCount) {
  const auto cfg = write("c.json", R"({"D": 2, "T": 500, "mu": [1.0, 0.5], "A": [[0, 0], [0, 0]],
                                       "kernel": {"type": "exponential", "beta": 1}})");
  const std::string summary = cmd_simulate({cfg, path("e.csv"), 3, std::nullopt});
  const EventSequence seq = io::load_events(path("e.csv"));
  EXPECT_NEAR(static_cast<double>(seq.size()), 750.0, 4.0 * std::sqrt(750.0));
  EXPECT_NE(summary.find("branching_radius=0"), std::string::npos);
}

TEST_F(Cli, SimulateRejectsNonStationary) {
  const auto cfg = write("c.json", R"({"D": 1, "T": 5, "mu": [1], "A": [[1.5]],
                                       "kernel": {"type": "exponential", "beta": 1}})");
  try {
    cmd_simulate({cfg, path("e.csv"), 1, std::nullopt});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonStationary);
  }
}

TEST_F(Cli, FitEmptyAndSubset) {
  const auto cfg = write("c.json", kConfig);
  write("empty.csv", "time,node\n");
  write("empty.manifest.json", R"({"T": 10, "D": 2})");
  cmd_fit({path("empty.csv"), cfg, path("f.json"), {}, {}});
  const json f = read_json("f.json");
  for (const auto& row : f["alpha"])
    for (const auto& v : row) EXPECT_EQ(v.get<double>(), 0.0);

  cmd_simulate({cfg, path("e.csv"), 9, std::nullopt});
  cmd_fit({path("e.csv"), cfg, path("g.json"), {}, {1}});
  const json g = read_json("g.json");
  EXPECT_EQ(g["nodes"], json::array({1}));
  EXPECT_EQ(g["alpha"][0][0].get<double>(), 0.0);
  EXPECT_THROW(cmd_fit({path("e.csv"), cfg, path("h.json"), {}, {2}}), Error);
}

TEST_F(Cli, CiBothSharesEstimate) {
  const auto cfg = write("c.json", kConfig);
  cmd_simulate({cfg, path("e.csv"), 11, std::nullopt});
  CiArgs a;
  a.events = path("e.csv");
  a.config = cfg;
  a.out = path("ci.json");
  cmd_ci(a);
  const json doc = read_json("ci.json");
  ASSERT_EQ(doc["reports"].size(), 2u);
  EXPECT_EQ(doc["reports"][0]["method"], "asymptotic");
  EXPECT_EQ(doc["reports"][1]["method"], "concentration");
  for (const auto& r : doc["reports"])
    for (const auto& e : r["entries"])
      EXPECT_EQ(e["point"], doc["alpha_hat"][e["i"].get<int>()][e["j"].get<int>()]);
  EXPECT_EQ(doc["width_comparison"].size(), 4u);
  EXPECT_EQ(doc["polyhedra"].size(), 2u);
}

TEST_F(Cli, CiSingleNodeIdentityInstance) {
  // D = 1 with no events: the adapted schedule is the identity throughout.
  const auto cfg = write("c.json", R"({"D": 1, "T": 100, "mu": [1], "kernel": {"type": "exponential", "beta": 1}})");
  write("e.csv", "time,node\n");
  write("e.manifest.json", R"({"T": 100, "D": 1})");
  CiArgs a;
  a.events = path("e.csv");
  a.config = cfg;
  a.out = path("ci.json");
  a.method = MethodChoice::Asymptotic;
  cmd_ci(a);
  const json doc = read_json("ci.json");
  EXPECT_TRUE(doc["reports"][0]["flags"]["singular_fisher"].get<bool>());
}

TEST_F(Cli, RecoverRule) {
  ConfidenceReport r;
  r.method = CiMethod::Asymptotic;
  r.entries.push_back({0, 1, 0.3, 0.2, 0.5});
  r.entries.push_back({1, 0, 0.1, -0.1, 0.3});
  r.entries.push_back({1, 1, 0.0, 0.0, 0.2});
  Eigen::Matrix2d truth;
  truth << 0.0, 0.6, 0.0, 0.1;
  const json out = recover_edges(r, Eigen::MatrixXd(truth));
  ASSERT_EQ(out["edges"].size(), 1u);
  EXPECT_EQ(out["edges"][0]["source"], 1);
  EXPECT_EQ(out["edges"][0]["target"], 0);
  EXPECT_EQ(out["adjacency"][0][1], 1.0);
  // (0,1) misses 0.6; (0,0) has no interval.
  EXPECT_EQ(out["non_covered_summary"]["count"], 1);
  EXPECT_EQ(out["non_covered_summary"]["true_zero"], 0);

  ConfidenceReport zero;
  zero.entries.push_back({0, 0, 0.0, -0.1, 0.1});
  EXPECT_TRUE(recover_edges(zero, std::nullopt)["edges"].empty());
}

TEST_F(Cli, RecoverFromCiFile) {
  const auto cfg = write("c.json", kConfig);
  cmd_simulate({cfg, path("e.csv"), 13, std::nullopt});
  CiArgs a;
  a.events = path("e.csv");
  a.config = cfg;
  a.out = path("ci.json");
  cmd_ci(a);
  cmd_recover({path("ci.json"), path("edges.json"), cfg});
  const json out = read_json("edges.json");
  ASSERT_EQ(out["reports"].size(), 2u);
  EXPECT_TRUE(out["reports"][0].contains("non_covered"));
}

TEST_F(Cli, CoverageSingleRepAndDeterminism) {
  const auto cfg = write("c.json", R"({"D": 2, "T": 60, "mu": [0.6, 0.5], "A": [[0.3, 0.2], [0.1, 0.3]],
                                       "kernel": {"type": "exponential", "beta": 1.0}})");
  CoverageArgs a;
  a.config = cfg;
  a.out = path("cov1.csv");
  a.reps = 1;
  cmd_coverage(a);
  std::stringstream lines(io::read_text(path("cov1.csv")));
  std::string line;
  int rep = 0, aggregate = 0;
  while (std::getline(lines, line)) {
    rep += line.rfind("rep,", 0) == 0;
    aggregate += line.rfind("aggregate,", 0) == 0;
  }
  EXPECT_EQ(rep, 2);  // one row per method
  EXPECT_EQ(aggregate, 2);

  a.reps = 3;
  a.out = path("cov3a.csv");
  cmd_coverage(a);
  a.out = path("cov3b.csv");
  cmd_coverage(a);
  EXPECT_EQ(io::read_text(path("cov3a.csv")), io::read_text(path("cov3b.csv")));
}

TEST_F(Cli, ReportSummary) {
  const auto cfg = write("c.json", kConfig);
  const json doc = json::parse(cmd_report({cfg, std::nullopt}));
  EXPECT_NEAR(doc["lambda"][1].get<double>(), 0.5 / 0.7, 1e-15);
  EXPECT_EQ(doc["W"].size(), 2u);
}

TEST_F(Cli, ParseHelpers) {
  EXPECT_EQ(parse_nodes("0,2,5"), (std::vector<int>{0, 2, 5}));
  EXPECT_THROW(parse_nodes("0,x"), Error);
  EXPECT_EQ(method_from_string("both"), MethodChoice::Both);
  EXPECT_THROW(method_from_string("bayes"), Error);
}

#ifdef HAWKES_UQ_BIN
int run(const std::string& args) {
  const int status = std::system((std::string(HAWKES_UQ_BIN) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST_F(Cli, BinaryExitCodes) {
  const auto good = write("c.json", kConfig);
  const auto bad = write("bad.json", R"({"D": 2, "T": 300, "mu": [-0.6, 0.5], "A": [[0.3, 0.2], [0.0, 0.3]],
                                         "kernel": {"type": "exponential", "beta": 1.0}})");
  EXPECT_EQ(run("simulate --config " + good.string() + " --out " + path("e.csv").string()), 0);
  EXPECT_NE(run("simulate --config " + bad.string() + " --out " + path("x.csv").string()), 0);
  EXPECT_NE(run("fit --events " + path("e.csv").string()), 0);
  EXPECT_EQ(run("ci --events " + path("e.csv").string() + " --config " + good.string() +
                " --method asymptotic --nodes 1 --out " + path("ci.json").string()),
            0);
  EXPECT_NE(run("ci --events " + path("e.csv").string() + " --config " + good.string() +
                " --epsilon 2 --out " + path("ci.json").string()),
            0);
}
#endif

}  // namespace
}  // namespace hawkes::cli
