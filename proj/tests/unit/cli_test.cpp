#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "qgibbs/cli.hpp"
#include "qgibbs/embedding.hpp"
#include "qgibbs/sampler.hpp"
#include "support.hpp"

namespace qgibbs {
namespace {

using nlohmann::json;
using testing::fixture_path;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("qgibbs_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                    ::testing::UnitTest::GetInstance()->current_test_info()->name());
  std::filesystem::create_directories(dir);
  return dir;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

TEST(CliSpectrum, SingleNodeGapIsOne) {
  const CliRun r = run({"spectrum", fixture_path("single_node")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["command"], "spectrum");
  EXPECT_NEAR(j["delta"].get<double>(), 1.0, 1e-12);
}

// Every fixture's report against the high-precision oracle golden.
TEST(CliSpectrum, MatchesOracleGoldens) {
  for (const std::string& name : testing::all_fixtures()) {
    const CliRun r = run({"spectrum", fixture_path(name)});
    ASSERT_EQ(r.code, kExitOk) << name << r.err;
    const json j = json::parse(r.out);
    const json g = testing::golden(name);
    EXPECT_NEAR(j["delta"].get<double>(), g["delta"].get<double>(), 1e-9) << name;
    EXPECT_NEAR(j["delta_walk"].get<double>(), g["delta_walk"].get<double>(), 1e-9) << name;
    const json& values = j["spectrum"]["eigenvalues"];
    ASSERT_EQ(values.size(), g["eigenvalues"].size()) << name;
    ComplexVector reported(static_cast<Eigen::Index>(values.size()));
    for (std::size_t k = 0; k < values.size(); ++k) {
      reported(static_cast<Eigen::Index>(k)) = Complex(values[k][0].get<double>(), values[k][1].get<double>());
    }
    EXPECT_LT(eigenvalue_multiset_distance(reported, testing::golden_complex(g["eigenvalues"])), 1e-9) << name;
    EXPECT_LT(j["detailed_balance_residual"].get<double>(), 1e-12) << name;
  }
}

TEST(CliSpectrum, CsvTableAndMatrixExport) {
  const CliRun table = run({"spectrum", fixture_path("seeded3"), "--format", "csv"});
  ASSERT_EQ(table.code, kExitOk);
  EXPECT_EQ(table.out.rfind("j,re,im,modulus,phi,eta\n", 0), 0u);
  EXPECT_EQ(std::count(table.out.begin(), table.out.end(), '\n'), 9);

  const CliRun matrix = run({"spectrum", fixture_path("two_node"), "--matrix", "m1"});
  ASSERT_EQ(matrix.code, kExitOk);
  std::istringstream lines(matrix.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "y,x,value");
  const RealMatrix expected = testing::golden_matrix(testing::golden("two_node")["m1"]);
  int rows = 0;
  while (std::getline(lines, line)) {
    int y = 0, x = 0;
    double value = 0;
    ASSERT_EQ(std::sscanf(line.c_str(), "%d,%d,%lf", &y, &x, &value), 3);
    EXPECT_NEAR(value, expected(y, x), 1e-15);
    ++rows;
  }
  EXPECT_EQ(rows, 16);
}

TEST(CliSpectrum, MalformedCptNamesTheRow) {
  const CliRun r = run({"spectrum", std::string(FIXTURE_DIR) + "/malformed/bad_cpt_row.json"});
  EXPECT_EQ(r.code, kExitUsage);
  const json e = json::parse(r.err);
  EXPECT_EQ(e["error"], "parse");
  EXPECT_NE(e["field"].get<std::string>().find("cpt[1]"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliErrors, UsageAndMissingFiles) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"bogus"}).code, kExitUsage);
  EXPECT_EQ(run({"spectrum"}).code, kExitUsage);
  EXPECT_EQ(run({"spectrum", fixture_path("seeded3"), "--format", "xml"}).code, kExitUsage);
  EXPECT_EQ(run({"spectrum", "/nonexistent.json"}).code, kExitUsage);
  EXPECT_EQ(run({"sample", fixture_path("seeded3"), "--x0", "0,1"}).code, kExitUsage);
  EXPECT_EQ(run({"sample", fixture_path("seeded3"), "--x0", "0,a,1"}).code, kExitUsage);
  EXPECT_EQ(run({"sample", fixture_path("seeded3"), "--epsilon2", "2"}).code, kExitUsage);
  EXPECT_EQ(run({"--help"}).code, kExitOk);
}

TEST(CliErrors, BudgetExceededIsUsageError) {
  const CliRun r = run({"sample", fixture_path("star_g095"), "--probe-bits", "12", "--pe-steps", "2", "--shots", "1"});
  EXPECT_EQ(r.code, kExitUsage);
  EXPECT_EQ(json::parse(r.err)["error"], "budget");
}

TEST(CliVerify, NormalFixturesPassEverything) {
  for (const std::string& name : testing::kNormalFixtures) {
    const CliRun r = run({"verify", fixture_path(name)});
    ASSERT_EQ(r.code, kExitOk) << name << r.out;
    const json j = json::parse(r.out);
    EXPECT_TRUE(j["passed"].get<bool>());
    for (const json& check : j["checks"]) EXPECT_EQ(check["status"], "pass") << name << " " << check["name"];
  }
}

TEST(CliVerify, GenericFixtureReportsGatedChecks) {
  const CliRun r = run({"verify", fixture_path("seeded3")});
  ASSERT_EQ(r.code, kExitOk) << r.out;
  const json j = json::parse(r.out);
  int reported = 0;
  for (const json& check : j["checks"]) {
    EXPECT_NE(check["status"], "fail") << check["name"];
    if (check["status"] == "reported") {
      ++reported;
      EXPECT_FALSE(check["reason"].get<std::string>().empty());
    }
    if (check["name"] == "eigenbasis_overlap_multiplexor") {
      EXPECT_EQ(check["status"], "reported");
      EXPECT_TRUE(check["value"].is_number());
    }
  }
  EXPECT_GT(reported, 0);
  EXPECT_FALSE(j["orthonormal_gate"].get<bool>());
}

TEST(CliVerify, HardFailureExitsOne) {
  // b copies a exactly: the Gibbs chain cannot leave {00} or {11}.
  const auto dir = temp_dir();
  const auto path = dir / "reducible.json";
  std::ofstream(path) << R"({"nodes": [
    {"name": "a", "cardinality": 2, "cpt": [[0.5, 0.5]]},
    {"name": "b", "cardinality": 2, "parents": ["a"], "cpt": [[1.0, 0.0], [0.0, 1.0]]}]})";
  const CliRun r = run({"verify", path.string()});
  EXPECT_EQ(r.code, kExitInvariantFailure);
  EXPECT_FALSE(json::parse(r.out)["passed"].get<bool>());
  std::filesystem::remove_all(dir);
}

TEST(CliVerify, CsvFormat) {
  const CliRun r = run({"verify", fixture_path("single_node"), "--format", "csv"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out.rfind("name,value,tolerance,status\n", 0), 0u);
}

TEST(CliCompile, SingleNodeOneGate) {
  const CliRun r = run({"compile", fixture_path("single_node")});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(parse_gate_list(r.out).gates.size(), 1u);
  EXPECT_NE(r.out.find("MUXRY target=0 controls= angles="), std::string::npos);
}

TEST(CliCompile, WritesBothListsThatRoundTrip) {
  const auto dir = temp_dir();
  const std::string prefix = (dir / "chain3").string();
  const CliRun r = run({"compile", fixture_path("chain3"), "--out", prefix});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json summary = json::parse(r.out);
  EXPECT_EQ(summary["u1"].size(), 3u);
  const Embedding e = make_embedding(testing::fixture("chain3"));
  const GateList u1 = parse_gate_list(read_file(prefix + ".u1.gates"));
  const GateList u2 = parse_gate_list(read_file(prefix + ".u2.gates"));
  EXPECT_EQ(max_abs(dense_matrix(u1) - dense_matrix(e.u1)), 0.0);
  EXPECT_EQ(max_abs(dense_matrix(u2) - dense_matrix(e.u2)), 0.0);
  // Blanket reduction: the middle node has two controls, not five.
  EXPECT_EQ(u1.gates[1].controls.size(), 2u);
  EXPECT_EQ(run({"compile", fixture_path("chain3"), "--which", "2"}).out, read_file(prefix + ".u2.gates"));
  std::filesystem::remove_all(dir);
}

TEST(CliSample, QuantumJsonAndDeterminism) {
  const std::vector<std::string> args = {"sample", fixture_path("independent3_uniform"), "--shots", "2000",
                                         "--seed", "4"};
  const CliRun a = run(args), b = run(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const json j = json::parse(a.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["report"]["L"], 2);
  EXPECT_GE(j["report"]["fidelity"].get<double>(), 0.94);
  EXPECT_FALSE(j["report"].contains("wall_clock_seconds"));
  EXPECT_TRUE(json::parse(run({"sample", fixture_path("single_node"), "--shots", "10", "--timing"}).out)["report"]
                  .contains("wall_clock_seconds"));
}

TEST(CliSample, OverridesReachTheSampler) {
  const CliRun r = run({"sample", fixture_path("seeded3"), "--shots", "100", "--probe-bits", "3", "--pe-steps", "1",
                     "--grover-iters", "1", "--x0", "1,1,0", "--no-success-check"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json j = json::parse(r.out)["report"];
  EXPECT_EQ(j["pe"]["a"], 3);
  EXPECT_EQ(j["pe"]["c"], 1);
  EXPECT_EQ(j["L"], 1);
  EXPECT_EQ(j["x0"], json::array({1, 1, 0}));
  EXPECT_FALSE(j["success_check"].get<bool>());
  EXPECT_EQ(j["W_applications_per_preparation"], 2 * 7);
}

TEST(CliSample, ClassicalCsvToFile) {
  const auto dir = temp_dir();
  const auto out = dir / "samples.csv";
  const CliRun r = run({"sample", fixture_path("two_node"), "--method", "classical", "--burn-in", "3", "--shots", "500",
                     "--format", "csv", "--out", out.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  const std::string text = read_file(out);
  EXPECT_EQ(text.rfind("state,count,empirical,exact,pi\n", 0), 0u);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
  std::filesystem::remove_all(dir);
}

TEST(CliCompare, GlobExpandsToOneRowPerNet) {
  const CliRun r = run({"compare", std::string(FIXTURE_DIR) + "/independent*.json", "--shots", "100"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, kCompareHeader);
  std::vector<std::string> names;
  while (std::getline(lines, line)) names.push_back(line.substr(0, line.find(',')));
  EXPECT_EQ(names, (std::vector<std::string>{"independent2", "independent3_uniform"}));
  EXPECT_EQ(run({"compare", std::string(FIXTURE_DIR) + "/nothing*.json"}).code, kExitUsage);
  const json j = json::parse(run({"compare", fixture_path("single_node"), "--format", "json", "--shots", "10"}).out);
  EXPECT_EQ(j["rows"].size(), 1u);
}

TEST(CliBinary, ExitCodesFromTheExecutable) {
  const std::string binary = QGIBBS_CLI_PATH;
  EXPECT_EQ(std::system((binary + " spectrum " + fixture_path("single_node") + " > /dev/null").c_str()), 0);
  const int usage = std::system((binary + " spectrum 2> /dev/null").c_str());
  EXPECT_EQ(WEXITSTATUS(usage), kExitUsage);
}

}  // namespace
}  // namespace qgibbs
