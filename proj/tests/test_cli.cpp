#include <gtest/gtest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <string>

#include "json.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PARAPACK_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string path = ::testing::TempDir() + name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST(Cli, DensityJsonMatchesClosedForm) {
  const auto r = run("density --body ball2 --config sausage:7 --rho 1");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_NEAR(j["value"].get<double>(), 7.0 * std::numbers::pi / (24.0 + std::numbers::pi), 1e-14);
}

TEST(Cli, DensityCsvGrid) {
  const auto r = run("density --body ball2 --config hex:7 --rho 0.5,1,2 --format csv");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("n,rho,family,density,volume,hull_dim\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
}

TEST(Cli, OutputIsByteIdenticalAcrossRuns) {
  const std::string args = "oracle --body ball3 --config fcc:10 --rho 1 --samples 20000 --seed 7";
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  const auto c = run(args + " --threads 3");
  EXPECT_EQ(a.out, c.out);
}

TEST(Cli, FilePackingSetAndExitCodes) {
  const auto good = temp_file("good.json", R"({"dim":2,"label":"pair","points":[[0,0],[2,0]]})");
  auto r = run("density --body ball2 --config file:" + good + " --rho 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["config_label"], "pair");

  const auto bad = temp_file("bad.json", "[[0,0],[1,0]]");
  EXPECT_EQ(run("density --body ball2 --config file:" + bad + " --rho 1").code, 2);
  EXPECT_EQ(run("density --body square --config fcc:5").code, 3);
  EXPECT_EQ(run("density --body ball2 --config hex:x").code, 1);
  EXPECT_EQ(run("density --body nothing --config hex:3").code, 1);
  EXPECT_EQ(run("density --body ball2 --config hex:3 --rho 1,0.5").code, 1);
  EXPECT_EQ(run("density --body ball2 --config hex:3 --rho -1").code, 1);
  EXPECT_EQ(run("scan --dim 5 --n 2:3").code, 1);
}

TEST(Cli, ScanFindsPlanarMagicNumber) {
  const auto r = run("scan --dim 2 --rho 1 --n 2:5 --find-magic");
  ASSERT_EQ(r.code, 0);
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["rows"].size(), 4u);
  EXPECT_EQ(j["magic"][0]["first_cluster_win"], 3);
}

TEST(Cli, BoundsAndRender) {
  auto r = run("bounds --dim 3 --class symmetric");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["body"], "symmetric");
  r = run("render --body ball2 --config hex:7 --rho 1");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("<svg"), std::string::npos);
  EXPECT_EQ(run("render --body ball3 --config fcc:4").code, 3);
}
