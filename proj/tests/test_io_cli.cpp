#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "subsidylab/common.hpp"
#include "subsidylab/fixtures.hpp"
#include "subsidylab/io.hpp"
#include "subsidylab/rng.hpp"
#include "support.hpp"

namespace sl = subsidylab;
using nlohmann::ordered_json;

#ifndef SUBSIDYLAB_CLI_PATH
#define SUBSIDYLAB_CLI_PATH "subsidylab"
#endif

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

CliResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(SUBSIDYLAB_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult res;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0)
    res.out.append(buf, got);
  const int status = pclose(pipe);
  res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = "cli_tmp_" + name;
  sl::write_text_file(path, text);
  return path;
}

std::string dump_game(const sl::MaintenanceGame& g) {
  return sl::canonical_dump(sl::game_to_json(g));
}

std::string dump_game(const sl::CostSharingGame& g) {
  return sl::canonical_dump(sl::game_to_json(g));
}

}  // namespace

TEST_CASE("game serialization round-trips byte-identically") {
  const std::string a = dump_game(sl::example1_game());
  const sl::LoadedGame back = sl::parse_game(a);
  REQUIRE(back.type == sl::LoadedGame::Type::kMaintenance);
  CHECK(dump_game(back.cmg) == a);

  const std::string b = dump_game(sl::example3_game());
  const sl::LoadedGame csg = sl::parse_game(b);
  REQUIRE(csg.type == sl::LoadedGame::Type::kCostSharing);
  CHECK(dump_game(csg.csg) == b);

  auto gen = sl::substream(311, "roundtrip");
  for (int trial = 0; trial < 40; ++trial) {
    const sl::MaintenanceGame g = support::random_maintenance(gen, 1, 6, true);
    const std::string text = dump_game(g);
    CHECK(dump_game(sl::parse_game(text).cmg) == text);
  }
}

TEST_CASE("indices in files are one-based") {
  const std::string text = R"({
    "type": "maintenance", "n": 2,
    "costs": [0.3, 0.3], "p": [0.5, 0.5],
    "phi": {"kind": "cnf", "clauses": [[1], [-2, 1]]}
  })";
  const sl::MaintenanceGame g = sl::parse_game(text).cmg;
  CHECK(g.phi.clauses() == std::vector<std::vector<int>>{{1}, {-2, 1}});

  const std::string csg_text = R"({
    "type": "cost_sharing", "agents": 2,
    "actions": [{"id": "a", "avail": [1, 2]}, {"id": "b", "avail": [2]}],
    "worlds": [{"prob": 1.0, "costs": {"a": 1.0, "b": 2.0}}]
  })";
  const sl::CostSharingGame c = sl::parse_game(csg_text).csg;
  CHECK(c.actions[0].avail == std::vector<int>{0, 1});
  CHECK(c.actions[1].avail == std::vector<int>{1});

  const sl::SetCoverInstance inst =
      sl::parse_set_cover(R"({"n": 2, "sets": [[1, 2]], "k": 1})");
  CHECK(inst.sets == std::vector<std::vector<int>>{{0, 1}});
}

TEST_CASE("malformed inputs raise schema errors") {
  CHECK_THROWS_AS(sl::parse_game("[1, 2]"), sl::SchemaError);
  CHECK_THROWS_AS(sl::parse_game("{\"type\": \"zoo\"}"), sl::SchemaError);
  CHECK_THROWS_AS(sl::parse_game("{not json"), sl::SchemaError);
  CHECK_THROWS_AS(
      sl::parse_game(R"({"type": "maintenance", "n": 1, "costs": [1],
                         "p": [0.5], "phi": {"kind": "mystery"}})"),
      sl::SchemaError);
  CHECK_THROWS_AS(
      sl::parse_game(R"({"type": "maintenance", "n": 2, "costs": [1, 1],
                         "p": [0.5, 0.5],
                         "phi": {"kind": "cnf", "clauses": [[3]]}})"),
      sl::SchemaError);
  CHECK_THROWS_AS(
      sl::parse_game(R"({"type": "maintenance", "n": 2, "costs": [1, 1],
                         "p": [0.5, 1.5],
                         "phi": {"kind": "cnf", "clauses": [[1]]}})"),
      sl::SchemaError);

  const sl::MaintenanceGame g = sl::example1_game();
  CHECK_THROWS_AS(
      sl::parse_maintenance_scheme(R"({"type": "uniform", "sigma": -1})", g),
      sl::SchemaError);
  CHECK_THROWS_AS(
      sl::parse_maintenance_scheme(R"({"type": "uniform", "sigma": 99})", g),
      sl::SchemaError);

  const sl::CostSharingGame csg = sl::example3_game();
  CHECK_THROWS_AS(
      sl::parse_csg_scheme(R"({"type": "csg", "amounts": {"Z": 1.0}})", csg),
      sl::SchemaError);
}

TEST_CASE("graph files accept json and plain text") {
  const sl::Graph a = sl::parse_graph(R"({"n": 3, "edges": [[1, 2], [2, 3]]})");
  const sl::Graph b = sl::parse_graph("3\n1 2\n2 3\n");
  CHECK(a.n == 3);
  CHECK(a.edges == b.edges);
  CHECK(a.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
}

TEST_CASE("distribution files fill defaults") {
  const sl::GameDistribution d =
      sl::parse_distribution(R"({"family": "series", "n": 4})");
  CHECK(d.n == 4);
  CHECK(d.H == 1.0);
  CHECK(d.prior_lo == 0.1);
  CHECK_THROWS_AS(sl::parse_distribution(R"({"family": "nope"})"),
                  sl::SchemaError);
}

TEST_CASE("cli analyzes the revelation example") {
  const std::string path = write_temp("ex2.json", dump_game(sl::example2_game()));
  const CliResult res = run_cli("analyze " + path + " --inspect 1");
  REQUIRE(res.code == 0);
  const ordered_json j = ordered_json::parse(res.out);
  CHECK(j["type"] == "maintenance");
  REQUIRE(j.contains("voi"));
  CHECK(j["voi"]["inspected"] == 1);
  CHECK(j["voi"]["worst_voi"][0].get<double>() == doctest::Approx(-0.7));
  CHECK(j["voi"]["worst_voi"][1].get<double>() == doctest::Approx(-0.7));
  CHECK(j["voi"]["expected_voi"][0].get<double>() == doctest::Approx(-0.3));
  CHECK(j["voi"]["expected_voi"][1].get<double>() == doctest::Approx(-0.42));
}

TEST_CASE("cli exit codes distinguish schema and metric failures") {
  CHECK(run_cli("analyze no_such_file.json").code == 2);

  const sl::MaintenanceGame sure = sl::make_maintenance_game(
      {0.5}, {0.5}, sl::SystemFunction::from_table(1, {1, 1}), 2.0);
  const std::string path = write_temp("sure.json", dump_game(sure));
  CHECK(run_cli("analyze " + path).code == 3);

  CHECK(run_cli("bogus-subcommand").code != 0);
}

TEST_CASE("cli solves the worked example") {
  const std::string path = write_temp("ex1.json", dump_game(sl::example1_game()));
  const CliResult res =
      run_cli("solve " + path + " --objective poa1 --mode uniform");
  REQUIRE(res.code == 0);
  const ordered_json j = ordered_json::parse(res.out);
  REQUIRE(j["feasible"].get<bool>());
  CHECK(j["sigma"].get<double>() ==
        doctest::Approx(0.05 + 1.3e-6).epsilon(1e-9));
  CHECK(j["objective_report"]["poa_is_one"].get<bool>());
}

TEST_CASE("cli verify runs the example checks") {
  const CliResult res = run_cli("verify --kind examples");
  CHECK(res.code == 0);
  CHECK(res.out.find("all example checks passed") != std::string::npos);
}

TEST_CASE("cli reduce output feeds straight back into analyze and solve") {
  const std::string graph =
      write_temp("k3.json", R"({"n": 3, "edges": [[1, 2], [2, 3], [1, 3]]})");
  const std::string red = "cli_tmp_red.json";
  CliResult res = run_cli("reduce --kind cmg-poas " + graph + " --k 2 -o " + red);
  REQUIRE(res.code == 0);
  const ordered_json j = ordered_json::parse(sl::read_text_file(red));
  CHECK(j["reduction"]["n_star"] == 2);
  CHECK(j["n"] == 3);

  res = run_cli("solve " + red + " --objective poa1 --mode per-agent --n-star 2");
  REQUIRE(res.code == 0);
  CHECK(ordered_json::parse(res.out)["feasible"].get<bool>());

  res = run_cli("solve " + red + " --objective poa1 --mode per-agent --n-star 1");
  REQUIRE(res.code == 0);
  CHECK_FALSE(ordered_json::parse(res.out)["feasible"].get<bool>());

  const CliResult voi_blocked =
      run_cli("reduce --kind cmg-voi " + graph + " --k 2");
  CHECK(voi_blocked.code == 2);
}

TEST_CASE("cli online learning emits records and a summary") {
  const std::string dist =
      write_temp("dist.json", R"({"family": "series", "n": 4, "H": 1.0})");
  const std::string out = "cli_tmp_online.jsonl";
  const CliResult res = run_cli("learn-online --dist " + dist +
                                " --rounds 40 --seed 3 --out " + out);
  REQUIRE(res.code == 0);
  // Summary lands on stdout when no --summary path is given.
  CHECK(res.out.rfind("T,n,H,lambda,cum_loss,regret\n", 0) == 0);

  std::istringstream lines(sl::read_text_file(out));
  std::string line;
  int t = 0;
  double last_regret = 0.0;
  while (std::getline(lines, line)) {
    const ordered_json j = ordered_json::parse(line);
    ++t;
    CHECK(j["t"] == t);
    CHECK(j["loss"].get<double>() >= 0.0);
    last_regret = j["cum_regret"].get<double>();
  }
  CHECK(t == 40);

  std::istringstream summary(res.out);
  std::string header, row;
  std::getline(summary, header);
  std::getline(summary, row);
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream row_in(row);
  while (std::getline(row_in, cell, ',')) cells.push_back(cell);
  REQUIRE(cells.size() == 6);
  CHECK(std::stod(cells[5]) == doctest::Approx(last_regret).epsilon(1e-9));
}

TEST_CASE("cli offline learning reports train and test losses") {
  const std::string dist =
      write_temp("dist2.json", R"({"family": "series", "n": 4, "H": 1.0})");
  const CliResult res = run_cli("learn-offline --dist " + dist +
                                " --train 12 --test 20 --seed 5");
  REQUIRE(res.code == 0);
  const ordered_json j = ordered_json::parse(res.out);
  CHECK(j["mode"] == "uniform");
  CHECK(j.contains("sigma"));
  CHECK(j["excess"].get<double>() >= -1e-9);

  const CliResult csv = run_cli("learn-offline --dist " + dist +
                                " --train 12 --test 20 --seed 5 --format csv");
  REQUIRE(csv.code == 0);
  CHECK(csv.out.find("train_loss") != std::string::npos);

  const CliResult same = run_cli("learn-offline --dist " + dist +
                                 " --train 12 --test 20 --seed 5");
  CHECK(same.out == res.out);
}
