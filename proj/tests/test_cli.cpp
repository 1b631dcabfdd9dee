#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "ccwb/constructions.hpp"
#include "ccwb/protocol.hpp"
#include "ccwb/value_table.hpp"

using namespace ccwb;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run ccwb_run(const std::string& args) {
  const std::string cmd = std::string(CCWB_BIN) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  const int st = pclose(p);
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("ccwb_cli_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Cli, GenWritesCcmat) {
  const auto r = ccwb_run("gen --builtin eq:2");
  EXPECT_EQ(r.code, 0);
  const auto t = parse_ccmat(r.out);
  EXPECT_EQ(t.rows(), 4U);
  EXPECT_EQ(t, gen_named(NamedFamily::EQ, 2));
  const auto f = temp_path("g3.ccmat");
  EXPECT_EQ(ccwb_run("gen --builtin g3 -o " + f.string()).code, 0);
  EXPECT_EQ(load_ccmat(f.string()), gen_g3());
  std::filesystem::remove(f);
}

TEST(Cli, SolvePrintsDepth) {
  const auto r = ccwb_run("solve s-figure --mode total");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "6\n");
  EXPECT_EQ(ccwb_run("solve f4 --max-depth 3").code, 2);
  EXPECT_EQ(ccwb_run("solve g3 --mode total").code, 64);
}

TEST(Cli, SolveFromFileWithWitness) {
  const auto table = temp_path("eq1.ccmat");
  const auto witness = temp_path("w.json");
  const auto report = temp_path("r.json");
  {
    std::ofstream os(table);
    os << "ccmat v1 2 2 total\n1 0\n0 1\n";
  }
  const auto r = ccwb_run("solve " + table.string() + " --witness " + witness.string() + " --report " + report.string());
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2\n");
  std::ifstream wi(witness);
  const auto p = protocol_from_json(nlohmann::json::parse(wi));
  EXPECT_FALSE(verify_classical(p, gen_named(NamedFamily::EQ, 1), Semantics::Global));
  std::ifstream ri(report);
  const auto j = nlohmann::json::parse(ri);
  EXPECT_EQ(j["entries"][0]["result"], "pass");
  for (const auto& f : {table, witness, report}) std::filesystem::remove(f);
}

TEST(Cli, VerifyProtocol) {
  const auto good = temp_path("good.json");
  const auto bad = temp_path("bad.json");
  std::ofstream(good) << protocol_to_json(eq1_protocol()).dump();
  ClassicalProtocol zero(2, 2, LeafKind::Global);
  zero.set_root(zero.add_global_leaf(0));
  std::ofstream(bad) << protocol_to_json(zero).dump();
  EXPECT_EQ(ccwb_run("verify-protocol --table eq:1 --protocol " + good.string()).code, 0);
  const auto r = ccwb_run("verify-protocol --table eq:1 --protocol " + bad.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(nlohmann::json::parse(r.out)["entries"][0]["result"], "fail");
  std::filesystem::remove(good);
  std::filesystem::remove(bad);
}

TEST(Cli, FamiliesExpansionCertificate) {
  EXPECT_EQ(ccwb_run("fooling verify --builtin u-vertical").code, 0);
  EXPECT_EQ(ccwb_run("fooling verify --builtin m-horizontal").code, 0);
  EXPECT_EQ(ccwb_run("expansion --builtin vertical --k 13 --min 17").code, 0);
  EXPECT_EQ(ccwb_run("expansion --builtin horizontal --k 9 --min 18").code, 1);
  const auto c = ccwb_run("certificate --axis cols");
  EXPECT_EQ(c.code, 0);
  EXPECT_EQ(nlohmann::json::parse(c.out)["schema"], "ccwb-report");
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(ccwb_run("").code, 64);
  EXPECT_EQ(ccwb_run("nonsense").code, 64);
  EXPECT_EQ(ccwb_run("solve").code, 64);
  EXPECT_EQ(ccwb_run("solve no-such-table").code, 64);
  EXPECT_EQ(ccwb_run("gen --builtin eq:x").code, 64);
  EXPECT_EQ(ccwb_run("reproduce \"\"").code, 64);
  EXPECT_EQ(ccwb_run("reproduce section-9").code, 64);
  EXPECT_EQ(ccwb_run("fooling verify --builtin nope").code, 64);
}

TEST(Cli, ReproduceSectionFour) {
  const auto r = ccwb_run("reproduce section-4");
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  ASSERT_EQ(j["entries"].size(), 4U);
  for (const auto& e : j["entries"]) EXPECT_EQ(e["result"], "pass") << e["task"];
}
