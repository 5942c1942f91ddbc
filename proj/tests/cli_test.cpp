// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "metriclab/json_io.hpp"
#include "metriclab/random_instances.hpp"

using namespace metriclab;
namespace fs = std::filesystem;

namespace {

const fs::path kTmp = fs::path("cli_test_tmp");

struct RunResult {
  int exitCode;
  std::string out;
};

RunResult run(const std::string& args, const std::string& env = "") {
  fs::create_directories(kTmp);
  fs::path outFile = kTmp / "stdout.txt";
  std::string cmd = env + (env.empty() ? "" : " ") + METRICLAB_CLI_PATH + " " + args + " > " +
                    outFile.string() + " 2> " + (kTmp / "stderr.txt").string();
  int rc = std::system(cmd.c_str());
  int exitCode = rc < 0 ? rc : WEXITSTATUS(rc);
  std::ifstream in(outFile);
  std::stringstream ss;
  ss << in.rdbuf();
  return {exitCode, ss.str()};
}

std::string writeSpace(const MetricSpace& m, const std::string& name) {
  fs::create_directories(kTmp);
  fs::path p = kTmp / name;
  io::write_json_file(p.string(), io::space_to_json(m));
  return p.string();
}

} // namespace

TEST_CASE("dist gh of a file with itself is zero") {
  auto a = writeSpace(random_space({3, 1.0, 2.0, 7}), "a.json");
  auto res = run("dist gh " + a + " " + a);
  REQUIRE(res.exitCode == 0);
  auto doc = io::json::parse(res.out);
  CHECK(doc["value"].get<double>() == 0.0);
  CHECK(doc["exact"].get<bool>());
}

TEST_CASE("dist lip on unequal sizes prints inf") {
  auto a = writeSpace(random_space({3, 1.0, 2.0, 8}), "b.json");
  auto b = writeSpace(random_space({4, 1.0, 2.0, 9}), "c.json");
  auto res = run("dist lip " + a + " " + b);
  REQUIRE(res.exitCode == 0);
  auto doc = io::json::parse(res.out);
  CHECK(doc["value"].get<std::string>() == "inf");
}

TEST_CASE("dist gh on the (1,3) two-point pair gives 1") {
  auto M = validate_metric<double>({{0, 1}, {1, 0}});
  auto N = validate_metric<double>({{0, 3}, {3, 0}});
  auto res = run("dist gh " + writeSpace(M, "m13a.json") + " " + writeSpace(N, "m13b.json"));
  REQUIRE(res.exitCode == 0);
  CHECK(io::json::parse(res.out)["value"].get<double>() == 1.0);
}

TEST_CASE("dist hausdorff with subsets") {
  auto m = validate_metric<double>({{0, 1, 2}, {1, 0, 1}, {2, 1, 0}});
  auto res =
      run("dist hausdorff " + writeSpace(m, "h.json") + " --subset-a 0 --subset-b 2");
  REQUIRE(res.exitCode == 0);
  CHECK(io::json::parse(res.out)["value"].get<double>() == 2.0);
}

TEST_CASE("require-exact with a tiny budget exits 3") {
  auto a = writeSpace(random_space({7, 1.0, 3.0, 21}), "big1.json");
  auto b = writeSpace(random_space({7, 1.0, 3.0, 22}), "big2.json");
  auto res = run("dist gh " + a + " " + b + " --budget 10 --require-exact");
  CHECK(res.exitCode == 3);
}

TEST_CASE("reduce separate doubles the points") {
  auto a = writeSpace(random_space({2, 1.0, 2.0, 31}), "sep.json");
  auto res = run("reduce separate " + a + " --p 1 --copies 2");
  REQUIRE(res.exitCode == 0);
  auto doc = io::json::parse(res.out);
  CHECK(doc["n"].get<int>() == 4);
  CHECK(doc["provenance"]["construction"] == "separate");
  // emitted documents re-validate on read
  CHECK_NOTHROW(io::space_from_json(doc));
}

TEST_CASE("reduce bound refuses inputs outside M_5 with exit 2") {
  auto a = writeSpace(random_space({2, 1.0, 2.0, 35}), "notm5.json");
  auto res = run("reduce bound " + a);
  CHECK(res.exitCode == 2);
}

TEST_CASE("reduce bound emits a valid capped document for M_5 inputs") {
  auto a = writeSpace(random_space({2, 5.0, 7.0, 36}), "m5.json");
  auto res = run("reduce bound " + a);
  REQUIRE(res.exitCode == 0);
  auto doc = io::json::parse(res.out);
  MetricSpace out = io::space_from_json(doc);
  CHECK(in_class(out, ClassBounds<double>{std::nullopt, 3.0}));
  CHECK(doc["provenance"]["construction"] == "bound");
}

TEST_CASE("reduce lip-gadget sizes: 2 points, levels -1..1, plus the anchor") {
  auto a = writeSpace(random_space({2, 0.1, 0.3, 37}), "lg.json");
  auto res = run("reduce lip-gadget " + a + " --kmin -1 --kmax 1");
  REQUIRE(res.exitCode == 0);
  auto doc = io::json::parse(res.out);
  CHECK(doc["n"].get<int>() == 7);
  CHECK_NOTHROW(io::space_from_json(doc));
}

TEST_CASE("reduce kadets-gadget and bm-gadget from norm plus params documents") {
  fs::create_directories(kTmp);
  io::json norm;
  norm["kind"] = "euclidean";
  norm["dim"] = 2;
  auto normPath = (kTmp / "norm.json").string();
  io::write_json_file(normPath, norm);

  io::json kparams;
  kparams["spherePoints"] = {{1.0, 0.0}, {-1.0, 0.0}};
  kparams["families"] = {{0, 1}};
  auto kp = (kTmp / "kparams.json").string();
  io::write_json_file(kp, kparams);
  auto res = run("reduce kadets-gadget " + normPath + " --params " + kp);
  REQUIRE(res.exitCode == 0);
  auto doc = io::json::parse(res.out);
  CHECK(doc["n"].get<int>() == 4);
  CHECK_NOTHROW(io::space_from_json(doc));

  io::json bparams;
  bparams["vectors"] = {{1.0, 0.0}, {-1.0, 0.0}};
  auto bp = (kTmp / "bparams.json").string();
  io::write_json_file(bp, bparams);
  auto bres = run("reduce bm-gadget " + normPath + " --params " + bp);
  REQUIRE(bres.exitCode == 0);
  CHECK_NOTHROW(io::space_from_json(io::json::parse(bres.out)));
}

TEST_CASE("dist gh --parallel matches the serial value") {
  auto a = writeSpace(random_space({6, 1.0, 3.0, 61}), "par1.json");
  auto b = writeSpace(random_space({6, 1.0, 3.0, 62}), "par2.json");
  auto serial = run("dist gh " + a + " " + b);
  auto parallel = run("dist gh " + a + " " + b + " --parallel");
  REQUIRE(serial.exitCode == 0);
  REQUIRE(parallel.exitCode == 0);
  CHECK(io::json::parse(serial.out)["value"].get<double>() ==
        io::json::parse(parallel.out)["value"].get<double>());
}

TEST_CASE("malformed documents exit 2") {
  fs::create_directories(kTmp);
  fs::path p = kTmp / "broken.json";
  std::ofstream(p) << "{\"kind\":\"metric\",\"d\":[[0,3,1],[3,0,1],[1,1,0]]}";
  auto res = run("dist gh " + p.string() + " " + p.string());
  CHECK(res.exitCode == 2);
  std::ofstream(p) << "not json";
  auto res2 = run("validate " + p.string());
  CHECK(res2.exitCode == 2);
}

TEST_CASE("suite lemmsep passes and unknown suites exit 2") {
  auto res = run("suite lemmsep --trials 1");
  CHECK(res.exitCode == 0);
  auto bad = run("suite no-such-suite");
  CHECK(bad.exitCode == 2);
}

TEST_CASE("suite reports are byte-identical given the seed, except elapsed") {
  fs::create_directories(kTmp);
  auto r1 = (kTmp / "rep1.json").string(), r2 = (kTmp / "rep2.json").string();
  REQUIRE(run("suite gh-oracle --trials 4 --seed 7 --report " + r1).exitCode == 0);
  REQUIRE(run("suite gh-oracle --trials 4 --seed 7 --report " + r2).exitCode == 0);
  auto d1 = io::read_json_file(r1), d2 = io::read_json_file(r2);
  d1.erase("elapsed_ms");
  d2.erase("elapsed_ms");
  CHECK(d1.dump() == d2.dump());
}

TEST_CASE("game duality output matches gh") {
  auto a = writeSpace(random_space({2, 1.0, 3.0, 41}), "ga.json");
  auto b = writeSpace(random_space({2, 1.0, 3.0, 42}), "gb.json");
  auto res = run("game " + a + " " + b + " --duality");
  REQUIRE(res.exitCode == 0);
  auto doc = io::json::parse(res.out);
  CHECK(doc["matchesGH"].get<bool>());
  CHECK(doc["stable"].get<bool>());
}

TEST_CASE("gen emits a document that validates, honoring METRICLAB_MODE") {
  auto res = run("gen --points 4 --lo 1 --hi 2 --seed 3");
  REQUIRE(res.exitCode == 0);
  CHECK_NOTHROW(io::space_from_json(io::json::parse(res.out)));
  auto rat = run("gen --points 3 --lo 1 --hi 2 --seed 3", "METRICLAB_MODE=rational");
  REQUIRE(rat.exitCode == 0);
  auto doc = io::json::parse(rat.out);
  CHECK(doc["d"][0][1].is_string());
  CHECK_NOTHROW(io::rational_space_from_json(doc));
}

TEST_CASE("rational mode gh through the CLI") {
  RationalSpace M = random_rational_space(3, Rat(1), Rat(3), 4, 51);
  fs::create_directories(kTmp);
  auto p = (kTmp / "rat.json").string();
  io::write_json_file(p, io::space_to_json(M));
  auto res = run("dist gh " + p + " " + p + " --mode rational");
  REQUIRE(res.exitCode == 0);
  CHECK(io::json::parse(res.out)["value"].get<std::string>() == "0");
}
