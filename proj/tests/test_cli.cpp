#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "featred/cli.hpp"
#include "featred/errors.hpp"
#include "featred/json_io.hpp"

using namespace featred;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "featred");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path tmp(const std::string& name) { return std::filesystem::path(FEATRED_TEST_TMPDIR) / name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("bounds prints the closed forms") {
    const auto r = run({"bounds", "--m", "100", "--p", "0.5", "--gamma", "1"});
    CHECK(r.code == 0);
    CHECK(r.out.find("upper bound: 19.9316") != std::string::npos);
    CHECK(r.out.find("0.01") != std::string::npos);

    const auto path = tmp("cli_bounds.json");
    const auto j = run({"--json", path.string(), "bounds", "--m", "1000000", "--p", "0.1", "--delta", "0.05", "--tau",
                        "10", "--theta", "100"});
    CHECK(j.code == 0);
    const auto doc = Json::parse(slurp(path));
    CHECK(doc["schema"] == kSchemaVersion);
    CHECK(doc["lower"]["threshold"] == 62);
    CHECK(doc["chernoff"]["bound"].get<double>() == doctest::Approx(0.003860908272455418));
  }

  TEST_CASE("usage and domain errors exit with 1") {
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"bounds", "--p", "1.5"}).code == 1);
    CHECK(run({"simulate-upper", "--conflicts", "weird"}).code == 1);
    CHECK(run({"select", "--input", tmp("does-not-exist.csv").string()}).code == 1);
    CHECK(run({"--help"}).code == 0);
  }

  TEST_CASE("budget exhaustion exits with 2") {
    const auto r = run({"--trials", "1", "simulate-upper", "--m", "60", "--p", "0.1", "--node-budget", "3"});
    CHECK(r.code == 2);
    CHECK(r.err.find("budget") != std::string::npos);
  }

  TEST_CASE("verify-lemma") {
    const auto r = run({"--seed", "3", "verify-lemma", "--count", "40", "--n-max", "6"});
    CHECK(r.code == 0);
    CHECK(r.out.find("0 counterexamples") != std::string::npos);
  }

  TEST_CASE("simulate-upper and chernoff") {
    const auto path = tmp("cli_upper.json");
    const auto r = run({"--trials", "10", "--json", path.string(), "simulate-upper", "--m", "20", "--workers", "2"});
    CHECK(r.code == 0);
    const auto doc = Json::parse(slurp(path));
    CHECK(doc["schema"] == kSchemaVersion);
    CHECK(doc["empirical"].size() == 10);

    const auto c = run({"--trials", "2000", "chernoff"});
    CHECK(c.code == 0);
    CHECK(c.out.find("pass") != std::string::npos);
  }

  TEST_CASE("select writes the report and instance") {
    const auto csv = tmp("cli_select.csv");
    const auto fm = planted_block_dataset(200, 2, 3, 3, 0.1, 4);
    std::ofstream(csv) << to_csv(fm);
    const auto inst_path = tmp("cli_select_instance.json");
    const auto r = run({"select", "--input", csv.string(), "--instance-json", inst_path.string()});
    CHECK(r.code == 0);
    const auto report = Json::parse(r.out);
    CHECK(report["schema"] == kSchemaVersion);
    CHECK(report["witness_checked"] == true);
    const auto inst = instance_from_json(Json::parse(slurp(inst_path)));
    CHECK(inst.order() == 9);
    std::vector<int> chosen;
    for (const auto& name : report.at("selected")) {
      const auto it = std::find(fm.names().begin(), fm.names().end(), name.get<std::string>());
      REQUIRE(it != fm.names().end());
      chosen.push_back(static_cast<int>(it - fm.names().begin()));
    }
    CHECK(chosen.size() >= 5);
    CHECK(is_nice(chosen, inst));
  }

  TEST_CASE("instance JSON round trip") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto inst = sample_instance(3 + static_cast<int>(seed), 0.4, ConflictSpec::uniform(1), seed);
      const auto j = instance_to_json(inst);
      CHECK(instance_from_json(j) == inst);
      CHECK(instance_from_json(Json::parse(dump(j))) == inst);
    }
    const auto bad = Json::parse(R"({"m": 3, "edges": [], "conflicts": {"1": [2]}})");
    CHECK_THROWS_AS(instance_from_json(bad), DomainError);
    const auto loop = Json::parse(R"({"m": 3, "edges": [[2, 2]], "conflicts": {}})");
    CHECK_THROWS_AS(instance_from_json(loop), DomainError);
  }
}
