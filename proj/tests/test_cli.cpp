#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

const std::string kCli = MOUFANG_CLI;
const std::string kScenarios = MOUFANG_SCENARIO_DIR;
const std::string kData = MOUFANG_TEST_DATA;

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = "'" + kCli + "' " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, {}};
  std::string out;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string scenario(const std::string& name) { return "'" + kScenarios + "/" + name + ".json'"; }

}  // namespace

TEST(Cli, PassingScenarioExitsZero) {
  const CliRun r = run("verify " + scenario("fano_gp"));
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j.contains("body"));
  ASSERT_TRUE(j.contains("timing"));
  for (const auto& c : j["body"]["checks"]) EXPECT_EQ(c["status"], "pass") << c.dump();
}

TEST(Cli, FailingCheckExitsOne) {
  const CliRun r = run("verify " + scenario("quadric_q_5adic"));
  EXPECT_EQ(r.code, 1);
  const auto j = nlohmann::json::parse(r.out);
  bool any_failed = false;
  for (const auto& c : j["body"]["checks"]) any_failed |= c["status"] != "pass";
  EXPECT_TRUE(any_failed);
}

TEST(Cli, SchemaErrorsExitTwo) {
  EXPECT_EQ(run("verify '" + kData + "/malformed.json'").code, 2);
  EXPECT_EQ(run("verify '" + kData + "/unknown_check.json'").code, 2);
  EXPECT_EQ(run("verify '" + kData + "/does_not_exist.json'").code, 2);
  EXPECT_EQ(run("bogus").code, 2);
}

TEST(Cli, EpiPrintsReducedPoint) {
  const CliRun r = run("epi " + scenario("plane_3adic") + " --element '1/3,1,2'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "1,0,0\n");
}

TEST(Cli, EpiRejectsNonElements) {
  EXPECT_EQ(run("epi " + scenario("plane_3adic") + " --element '0,0,0'").code, 1);
}

TEST(Cli, FactorRankTwo) {
  const CliRun r = run("factor " + scenario("plane_f2st_rank2"));
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["body"]["checks"].size(), 1u);
  EXPECT_EQ(j["body"]["checks"][0]["name"], "factor");
}

TEST(Cli, CompatOctagonSwapFails) {
  const CliRun r = run("compat " + scenario("octagon_swap"));
  EXPECT_EQ(r.code, 1);
  const auto j = nlohmann::json::parse(r.out);
  for (const auto& c : j["body"]["checks"]) EXPECT_EQ(c["status"], "fail") << c["name"];
}

TEST(Cli, DeterministicBodies) {
  for (const std::string name : {"plane_3adic", "quadric_q_3adic"}) {
    const CliRun a = run("verify " + scenario(name)), b = run("verify " + scenario(name));
    ASSERT_EQ(a.code, b.code);
    EXPECT_EQ(nlohmann::json::parse(a.out)["body"].dump(), nlohmann::json::parse(b.out)["body"].dump()) << name;
  }
}

TEST(Cli, OutputFileMatchesStdout) {
  const std::string path = testing::TempDir() + "moufang_report.json";
  EXPECT_EQ(run("verify " + scenario("pg2_f3") + " --output '" + path + "'").code, 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const CliRun r = run("verify " + scenario("pg2_f3"));
  EXPECT_EQ(nlohmann::json::parse(ss.str())["body"], nlohmann::json::parse(r.out)["body"]);
}
