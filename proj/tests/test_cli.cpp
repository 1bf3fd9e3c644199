#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "cli.hpp"
#include "support.hpp"

namespace flatband {
namespace {

using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(const std::string& verb, const std::string& fixture, cli::Options o = {}) {
  cli::Command cmd;
  cmd.verb = verb;
  cmd.input = testing::fixture_path(fixture);
  cmd.options = o;
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(cmd, out, err);
  return {code, out.str(), err.str()};
}

int run_binary(const std::string& args) {
  const std::string line = std::string(FLATBAND_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(line.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, Validate) {
  const auto r = run_cli("validate", "lieb.json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["n"], 3);
  EXPECT_EQ(doc["d"], 2);
  EXPECT_EQ(doc["edges"], 8);
  EXPECT_EQ(doc["self_adjoint"], true);
}

TEST(Cli, Autosymmetrize) {
  const auto r = run_cli("validate", "lieb_half.json");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["edges"], 8);
}

TEST(Cli, ErrorExitCodes) {
  const auto broken = run_cli("validate", "broken.json");
  EXPECT_EQ(broken.code, 1);
  EXPECT_NE(broken.err.find("WeakSymmetryViolation"), std::string::npos) << broken.err;
  EXPECT_TRUE(broken.out.empty());

  const auto rank = run_cli("validate", "bad_rank.json");
  EXPECT_EQ(rank.code, 2);
  EXPECT_NE(rank.err.find("RankMismatch"), std::string::npos) << rank.err;
  EXPECT_NE(rank.err.find("edges["), std::string::npos) << rank.err;

  EXPECT_EQ(run_cli("validate", "malformed.json").code, 2);
  EXPECT_EQ(run_cli("validate", "does_not_exist.json").code, 2);

  cli::Options o;
  o.base = 4;
  EXPECT_EQ(run_cli("certify", "lieb.json", o).code, 2);
  o.base = 0;
  EXPECT_EQ(run_cli("certify", "lieb.json", o).code, 2);

  EXPECT_EQ(run_cli("extremal", "isolated.json").code, 1);
}

TEST(Cli, BinaryExitCodes) {
  const std::string dir = FLATBAND_FIXTURE_DIR;
  EXPECT_EQ(run_binary("validate " + dir + "/lieb.json"), 0);
  EXPECT_EQ(run_binary("validate " + dir + "/broken.json"), 1);
  EXPECT_EQ(run_binary("validate " + dir + "/bad_rank.json"), 2);
  EXPECT_EQ(run_binary("certify " + dir + "/lieb.json --base x"), 2);
  EXPECT_EQ(run_binary("flatband " + dir + "/lieb.json --exact --sampled"), 2);
  EXPECT_EQ(run_binary("nonsense " + dir + "/lieb.json"), 2);
}

TEST(Cli, Certify) {
  const auto r = run_cli("certify", "lieb.json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  ASSERT_EQ(doc.size(), 3U);
  EXPECT_EQ(doc[0]["base"], 1);
  EXPECT_EQ(doc[0]["L"], 2);
  EXPECT_EQ(doc[0]["branch"], "extremal");
  EXPECT_EQ(doc[0]["footprint"], json::parse("[[2,1]]"));
  EXPECT_EQ(doc[0]["quasi"], json::parse("[1,0]"));
  EXPECT_EQ(doc[0]["totalcont"], json::parse(R"({"num":"1","inum":"0"})"));
}

TEST(Cli, FlatBandExact) {
  const auto r = run_cli("flatband", "lieb_v011.json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  ASSERT_EQ(doc["flat_bands"].size(), 1U);
  EXPECT_EQ(doc["flat_bands"][0]["exact"], true);
  EXPECT_EQ(doc["flat_bands"][0]["energy"], json::parse(R"({"num":"1","inum":"0"})"));
  EXPECT_EQ(doc["method"], "exact");

  const auto none = json::parse(run_cli("flatband", "lieb.json").out);
  EXPECT_TRUE(none["flat_bands"].empty());
}

TEST(Cli, FlatBandSampled) {
  cli::Options o;
  o.sampled = true;
  o.seed = 5;
  const auto r = run_cli("flatband", "lieb_v011.json", o);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["method"], "sampled");
  EXPECT_EQ(doc["seed"], 5);
  ASSERT_EQ(doc["flat_bands"].size(), 1U);
}

TEST(Cli, BandsCsv) {
  cli::Options o;
  o.grid = 3;
  const auto r = run_cli("bands", "lieb.json", o);
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "theta_1,theta_2,E_1,E_2,E_3");
  std::size_t rows = 0;
  for (std::string line; std::getline(in, line);) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 4);
    ++rows;
  }
  EXPECT_EQ(rows, 9U);
}

TEST(Cli, LoopsAndExtremal) {
  cli::Options o;
  o.base = 3;
  o.order = 3;
  const auto r = run_cli("loops", "chain.json", o);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["base"], 3);
  bool found = false;
  for (const auto& e : doc["entries"]) {
    if (e["quasi"] == json::parse("[3]")) {
      EXPECT_EQ(e["footprint"], json::parse("[[1,1],[2,1]]"));
      EXPECT_EQ(e["totalcont"]["num"], "-1");
      found = true;
    }
  }
  EXPECT_TRUE(found);

  const auto x = json::parse(run_cli("extremal", "chain.json", o).out);
  ASSERT_EQ(x.size(), 1U);
  EXPECT_EQ(x[0]["L"], 3);
  EXPECT_EQ(x[0]["extremals"].size(), 4U);
  EXPECT_EQ(x[0]["symmetric"]["length"], 4);
}

TEST(Cli, SeriesCheckAndProbe) {
  cli::Options o;
  o.order = 3;
  const auto r = run_cli("series-check", "dimer.json", o);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["errors"].size(), 4U);
  EXPECT_EQ(doc["z"].size(), 1U);

  o.trials = 20;
  const auto p = json::parse(run_cli("probe", "lieb.json", o).out);
  EXPECT_EQ(p["trials"], 20);
  EXPECT_EQ(p["hits"], 0);
}

TEST(Cli, Deterministic) {
  for (const auto& verb : {"validate", "connectivity", "bands", "flatband", "extremal", "certify", "probe"}) {
    cli::Options o;
    o.trials = 10;
    EXPECT_EQ(run_cli(verb, "chain.json", o).out, run_cli(verb, "chain.json", o).out) << verb;
  }
}

TEST(Cli, OutputFile) {
  const std::string path = ::testing::TempDir() + "flatband_cli_out.json";
  std::remove(path.c_str());
  ASSERT_EQ(run_binary("validate " + std::string(FLATBAND_FIXTURE_DIR) + "/dimer.json -o " + path), 0);
  std::ifstream in(path);
  ASSERT_TRUE(in.good());
  EXPECT_EQ(json::parse(in)["n"], 2);
}

TEST(Cli, ScalarForms) {
  EXPECT_EQ(cli::parse_scalar(json(3), "x"), GaussRational(3));
  EXPECT_EQ(cli::parse_scalar(json("1/3"), "x"), GaussRational::parse("1/3"));
  EXPECT_EQ(cli::parse_scalar(json("0.25"), "x"), GaussRational::parse("1/4"));
  EXPECT_EQ(cli::parse_scalar(json::parse("[1, 2]"), "x"), GaussRational(1) + GaussRational::parse("0", "2"));
  EXPECT_EQ(cli::parse_scalar(json::parse(R"({"num":"1/2","inum":"-1"})"), "x"), GaussRational::parse("1/2", "-1"));
  EXPECT_THROW(cli::parse_scalar(json("abc"), "x"), Error);
  EXPECT_THROW(cli::parse_scalar(json::parse("[1]"), "x"), Error);
  const auto x = GaussRational::parse("-2/3", "5");
  EXPECT_EQ(cli::parse_scalar(cli::exact_json(x), "x"), x);
}

}  // namespace
}  // namespace flatband
