#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "exogate/cli/commands.hpp"

namespace fs = std::filesystem;
using namespace exogate;
using namespace exogate::cli;

namespace {

const std::string kScenarios = EXOGATE_SCENARIO_DIR;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("exogate_cli_" + std::string(info->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  int exe(const std::string& args) {
    const std::string cmd = std::string(EXOGATE_CLI_PATH) + " " + args + " >" +
                            (dir_ / "stdout.txt").string() + " 2>" +
                            (dir_ / "stderr.txt").string();
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }

  std::string slurp(const fs::path& p) { return io::read_text_file(p.string()); }

  fs::path dir_;
};

std::string canonical() { return kScenarios + "/canonical.json"; }

}  // namespace

TEST_F(CliTest, ValidateCanonical) {
  EXPECT_EQ(exe("validate " + canonical()), kExitOk);
  EXPECT_NE(slurp(dir_ / "stdout.txt").find("valid"), std::string::npos);
}

TEST_F(CliTest, ValidateReportsViolations) {
  auto doc = io::parse_json_text(io::read_text_file(canonical()), "c");
  doc["policy"]["theta_stand"] = 0.9;
  doc["subject"]["m_b"] = -1.0;
  const std::string path = write("bad.json", doc.dump(2));
  std::stringstream out, err;
  EXPECT_EQ(cmd_validate(path, out, err), kExitInvalid);
  EXPECT_NE(err.str().find("policy.theta_stand < theta_bend required"), std::string::npos);
  EXPECT_NE(err.str().find("subject.m_b"), std::string::npos);
}

TEST_F(CliTest, ValidateSyntaxErrorShowsLine) {
  const std::string path = write("broken.json", "{\n  \"duration\": 12,\n  oops\n}\n");
  EXPECT_EQ(exe("validate " + path), kExitInvalid);
  EXPECT_NE(slurp(dir_ / "stderr.txt").find("broken.json:3:"), std::string::npos);
}

TEST_F(CliTest, RunWritesArtifacts) {
  const fs::path out = dir_ / "run";
  ASSERT_EQ(exe("run " + canonical() + " --out " + out.string()), kExitOk);
  for (const char* f : {"log.csv", "metrics.json", "events.json"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  const auto m = io::parse_json_text(slurp(out / "metrics.json"), "metrics");
  EXPECT_GT(m["latency_gain"].get<double>(), 0.0);
  EXPECT_EQ(m["provenance"]["flags"]["no_vision"], false);
}

TEST_F(CliTest, NoExoZeroesAssistance) {
  const fs::path out = dir_ / "noexo";
  ASSERT_EQ(exe("run " + canonical() + " --no-exo --out " + out.string()), kExitOk);
  const auto m = io::parse_json_text(slurp(out / "metrics.json"), "metrics");
  EXPECT_EQ(m["peak_tau_ass"].get<double>(), 0.0);
}

TEST_F(CliTest, OverridesRecordedInProvenance) {
  const fs::path out = dir_ / "ovr";
  ASSERT_EQ(exe("run " + canonical() + " --set policy.gamma=0.5 --seed 3 --out " + out.string()),
            kExitOk);
  const auto m = io::parse_json_text(slurp(out / "metrics.json"), "metrics");
  EXPECT_EQ(m["provenance"]["overrides"][0], "policy.gamma=0.5");
}

TEST_F(CliTest, UnknownOverrideIsInvalid) {
  EXPECT_EQ(exe("run " + canonical() + " --set policy.gama=0.5 --out " + (dir_ / "x").string()),
            kExitInvalid);
}

TEST_F(CliTest, RerunIsByteIdentical) {
  RunOptions a;
  a.out_dir = (dir_ / "a").string();
  RunOptions b = a;
  b.out_dir = (dir_ / "b").string();
  std::stringstream out, err;
  ASSERT_EQ(cmd_run(kScenarios + "/noisy.json", a, out, err), kExitOk);
  ASSERT_EQ(cmd_run(kScenarios + "/noisy.json", b, out, err), kExitOk);
  for (const char* f : {"log.csv", "metrics.json", "events.json", "frames.jsonl"})
    EXPECT_EQ(fnv1a(slurp(dir_ / "a" / f)), fnv1a(slurp(dir_ / "b" / f))) << f;
}

TEST_F(CliTest, ReplayReproducesRun) {
  const fs::path a = dir_ / "a";
  ASSERT_EQ(exe("run " + kScenarios + "/noisy.json --out " + a.string()), kExitOk);
  const fs::path b = dir_ / "b";
  ASSERT_EQ(exe("replay " + kScenarios + "/noisy.json --frames " + (a / "frames.jsonl").string() +
                " --out " + b.string()),
            kExitOk);
  EXPECT_EQ(slurp(a / "log.csv"), slurp(b / "log.csv"));
  EXPECT_EQ(exe("replay " + canonical() + " --out " + b.string()), kExitInvalid);
}

TEST_F(CliTest, AbortExitCode) {
  const fs::path out = dir_ / "abort";
  EXPECT_EQ(exe("run " + kScenarios + "/canonical.json --set subject.g=1e308 --out " +
                out.string()),
            kExitAbort);
  EXPECT_NE(slurp(dir_ / "stderr.txt").find("tick"), std::string::npos);
}

TEST_F(CliTest, SweepGammaIncreasesPeak) {
  const fs::path out = dir_ / "sweep";
  ASSERT_EQ(exe("sweep " + kScenarios + "/sweep_gamma.json --jobs 2 --out " + out.string()),
            kExitOk);
  std::ifstream agg(out / "aggregate.csv");
  std::string line;
  std::getline(agg, line);
  EXPECT_EQ(line.rfind("point,policy.gamma,status", 0), 0u) << line;
  std::vector<double> peaks;
  const auto cols = [&] {
    std::vector<std::string> c;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) c.push_back(cell);
    return c;
  }();
  const auto peak_col = std::find(cols.begin(), cols.end(), "peak_tau_ass") - cols.begin();
  while (std::getline(agg, line)) {
    std::stringstream ss(line);
    std::string cell;
    for (long i = 0; i <= peak_col; ++i) std::getline(ss, cell, ',');
    peaks.push_back(std::stod(cell));
  }
  ASSERT_EQ(peaks.size(), 3u);
  EXPECT_LT(peaks[0], peaks[1]);
  EXPECT_LT(peaks[1], peaks[2]);
  EXPECT_TRUE(fs::exists(out / "point_0002" / "metrics.json"));
}

TEST_F(CliTest, EmptySweepEqualsRun) {
  const std::string spec =
      write("empty.json", "{\"base\": \"" + canonical() + "\", \"axes\": []}");
  const fs::path out = dir_ / "sweep";
  ASSERT_EQ(exe("sweep " + spec + " --out " + out.string()), kExitOk);
  const fs::path run = dir_ / "run";
  ASSERT_EQ(exe("run " + canonical() + " --out " + run.string()), kExitOk);
  EXPECT_EQ(slurp(out / "point_0000" / "log.csv"), slurp(run / "log.csv"));
}

TEST_F(CliTest, SweepCapRefusedWithCount) {
  const std::string spec = write(
      "big.json", "{\"base\": \"" + canonical() +
                      "\", \"max_points\": 4, \"axes\": [{\"path\": \"policy.gamma\", "
                      "\"values\": [0.1, 0.2, 0.3]}, {\"path\": \"gate.N_on\", \"values\": [3, 5]}]}");
  EXPECT_EQ(exe("sweep " + spec + " --out " + (dir_ / "s").string()), kExitInvalid);
  EXPECT_NE(slurp(dir_ / "stderr.txt").find("6"), std::string::npos);
  EXPECT_EQ(exe("sweep " + spec + " --allow-large --out " + (dir_ / "s").string()), kExitOk);
}

TEST_F(CliTest, RhoOnSweepLatencyNonDecreasing) {
  const fs::path out = dir_ / "rho";
  ASSERT_EQ(exe("sweep " + kScenarios + "/sweep_rho_on.json --out " + out.string()), kExitOk);
  double prev = -1.0;
  for (int i = 0; i < 3; ++i) {
    const auto m = io::parse_json_text(slurp(out / point_name(i) / "metrics.json"), "m");
    ASSERT_TRUE(m["onset_latency"].is_number());
    const double lat = m["onset_latency"].get<double>();
    EXPECT_GE(lat, prev);
    prev = lat;
  }
}

TEST(SweepGrid, RowMajorIndices) {
  SweepSpec s;
  s.axes = {{"a", {1, 2}}, {"b", {1, 2, 3}}};
  EXPECT_EQ(grid_size(s), 6u);
  EXPECT_EQ(grid_indices(s, 4), (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(point_name(7), "point_0007");
}
