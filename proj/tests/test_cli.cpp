#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "liouville/io.hpp"

namespace fs = std::filesystem;
using liouville::io::json;

namespace {

// one scratch directory per test so ctest -j runs do not collide
fs::path root() {
  static std::string current;
  const std::string name = ::testing::UnitTest::GetInstance()->current_test_info()->name();
  const auto dir = fs::temp_directory_path() / "liouville_cli" / name;
  if (current != name) {
    current = name;
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  return dir;
}

// exit status of the CLI; stderr lands in root()/stderr.txt
int run(const std::string& args) {
  const std::string cmd = std::string(LIOUVILLE_CLI) + " " + args + " > " + (root() / "stdout.txt").string() + " 2> " +
                          (root() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path write_config(const std::string& name, const std::string& text) {
  const auto p = root() / name;
  std::ofstream(p) << text;
  return p;
}

const char* kThreeElliptic =
    R"({"genus":0,"elliptic":[{"position":[0.5,0],"eta":0.45},{"position":[-0.25,0.4330127018922193],"eta":0.45},)"
    R"({"position":[-0.25,-0.4330127018922193],"eta":0.45}]})";
const char* kTorus = R"({"genus":1,"elliptic":[{"position":[0.5,0.5],"eta":0.25}],"periods":[[1,0],[0,1]]})";

}  // namespace

TEST(Cli, SolveBothWritesComparison) {
  const auto cfg = write_config("three.json", kThreeElliptic);
  const auto out = root() / "three";
  ASSERT_EQ(run("solve --config " + cfg.string() + " --out " + out.string() + " --method both --grid 512"), 0)
      << slurp(root() / "stderr.txt");
  for (const char* f : {"solution.csv", "phi.csv", "config.json", "meta.json", "report.json", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  const auto report = liouville::io::read_json(out / "report.json");
  ASSERT_TRUE(report.contains("comparison"));
  EXPECT_LT(report["comparison"]["sup_difference"].get<double>(), 1e-3);
  EXPECT_TRUE(report["pass"].get<bool>());
  const auto manifest = liouville::io::read_json(out / "manifest.json");
  EXPECT_EQ(manifest["exit_status"], 0);
  EXPECT_EQ(manifest["settings"]["grid"], 512);
  EXPECT_EQ(run("verify --solution " + out.string()), 0) << slurp(root() / "stderr.txt");
}

TEST(Cli, InvalidWeightExitsThreeNamingSource) {
  const auto cfg = write_config(
      "bad.json", R"({"genus":0,"elliptic":[{"position":[0,0],"eta":0.3},{"position":[1,0],"eta":0.6},)"
                  R"({"position":[0,1],"eta":0.3}]})");
  EXPECT_EQ(run("solve --config " + cfg.string() + " --out " + (root() / "bad").string()), 3);
  EXPECT_NE(slurp(root() / "stderr.txt").find("elliptic[1]"), std::string::npos);
  EXPECT_EQ(run("solve --config " + (root() / "nowhere.json").string() + " --out " + (root() / "x").string()), 4);
}

TEST(Cli, NoConvergenceExitsTwo) {
  const auto cfg = write_config("tight.json", std::string(kThreeElliptic).insert(1, R"("settings":{"max_iterations":2},)"));
  EXPECT_EQ(run("solve --config " + cfg.string() + " --out " + (root() / "tight").string() + " --grid 64"), 2);
  EXPECT_EQ(liouville::io::read_json(root() / "tight" / "manifest.json")["exit_status"], 2);
}

TEST(Cli, OracleExitCodes) {
  EXPECT_EQ(run("oracle --mu 1"), 0);
  EXPECT_EQ(run("oracle --mu 0"), 3);
  EXPECT_EQ(run("oracle --mu 0.6 --json"), 0);
  const auto table = json::parse(slurp(root() / "stdout.txt"));
  EXPECT_EQ(table["rows"].size(), 4u);
  EXPECT_TRUE(table["pass"].get<bool>());
}

TEST(Cli, ExportTorusAndReproduceFromManifest) {
  const auto cfg = write_config("torus.json", kTorus);
  const auto out = root() / "torus";
  ASSERT_EQ(run("solve --config " + cfg.string() + " --out " + out.string() + " --grid 256"), 0)
      << slurp(root() / "stderr.txt");
  ASSERT_EQ(run("export --solution " + out.string() + " --ppm"), 0);
  EXPECT_EQ(slurp(out / "export" / "phi.ppm").substr(0, 15), "P6\n256 256\n255\n");
  EXPECT_EQ(slurp(out / "export" / "U.csv"), slurp(out / "solution.csv"));
  EXPECT_EQ(slurp(out / "export" / "phi.csv"), slurp(out / "phi.csv"));
  EXPECT_EQ(run("export --solution " + (root() / "absent").string()), 4);

  const auto again = root() / "torus_again";
  ASSERT_EQ(run("solve --config " + (out / "manifest.json").string() + " --out " + again.string()), 0);
  EXPECT_EQ(slurp(again / "solution.csv"), slurp(out / "solution.csv"));
  EXPECT_EQ(slurp(again / "phi.csv"), slurp(out / "phi.csv"));
}

TEST(Cli, ParallelSweepMatchesSequential) {
  const auto cfg = write_config("sweep.json", kThreeElliptic);
  const auto seq = root() / "seq", par = root() / "par";
  ASSERT_EQ(run("sweep --config " + cfg.string() + " --out " + seq.string() + " --grids 48,64,80 --no-verify"), 0);
  ASSERT_EQ(run("sweep --config " + cfg.string() + " --out " + par.string() + " --grids 48,64,80 --no-verify --parallel"),
            0);
  for (const char* g : {"grid_48", "grid_64", "grid_80"}) {
    EXPECT_EQ(slurp(seq / g / "solution.csv"), slurp(par / g / "solution.csv")) << g;
    EXPECT_FALSE(slurp(seq / g / "solution.csv").empty());
  }
}

TEST(Cli, ExportBackground) {
  const auto cfg = write_config("bg.json", kTorus);
  const auto out = root() / "bg";
  ASSERT_EQ(run("export-background --config " + cfg.string() + " --out " + out.string() + " --grid 32"), 0);
  for (const char* f : {"beta.csv", "v.csv", "r.csv"}) EXPECT_TRUE(fs::exists(out / f)) << f;
}
