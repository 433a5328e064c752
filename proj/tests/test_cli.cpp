#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(COLIDE_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("colide_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, SimulateFitEval) {
  write("small.cfg", "graph.d = 5\ndata.n = 300\nfit.schedule = 1:1:500,0.1:0.9:500\n");
  ASSERT_EQ(run("simulate --config " + path("small.cfg") + " --seed 2 --out " + path("sim")), 0);
  ASSERT_TRUE(fs::exists(dir_ / "sim" / "data.csv"));
  ASSERT_TRUE(fs::exists(dir_ / "sim" / "truth.csv"));
  ASSERT_EQ(run("fit " + path("sim/data.csv") + " --config " + path("small.cfg") +
                " --method colide_nv --method ls_baseline --out " + path("fit")),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "fit" / "colide_nv_adjacency.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "fit" / "colide_nv_scale.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "fit" / "ls_baseline_weights_raw.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "fit" / "ls_baseline_scale.csv"));
  EXPECT_EQ(run("eval " + path("fit/colide_nv_adjacency.csv") + " " + path("sim/truth.csv") + " --out " +
                path("metrics.json")),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "metrics.json"));
}

TEST_F(Cli, Bench) {
  write("grid.cfg", "graph.d = 4\ndata.n = 100\nrun.seeds = 0-1\nfit.schedule = 1:1:200\n");
  ASSERT_EQ(run("bench --config " + path("grid.cfg") + " --jobs 2 --out " + path("bench")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "bench" / "results.jsonl"));
  EXPECT_TRUE(fs::exists(dir_ / "bench" / "summary.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "bench" / "manifest.json"));
}

TEST_F(Cli, ConfigErrorsExitOne) {
  write("bad.cfg", "graph.nodes = 4\n");
  EXPECT_EQ(run("bench --config " + path("bad.cfg")), 1);
  EXPECT_EQ(run("bench"), 1);
  EXPECT_EQ(run("simulate --method dagma"), 1);
  EXPECT_EQ(run("frobnicate"), 1);
  EXPECT_EQ(run("simulate --jobs 0"), 1);
}

TEST_F(Cli, DataErrorsExitTwo) {
  EXPECT_EQ(run("fit " + path("missing.csv")), 2);
  write("ragged.csv", "a,b\n1,2\n3\n");
  EXPECT_EQ(run("fit " + path("ragged.csv")), 2);
  write("t.csv", "0,1\n0,0\n");
  EXPECT_EQ(run("sachs --data " + path("missing.csv") + " --truth " + path("t.csv")), 2);
}
