#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "divclus/core.hpp"
#include "divclus/io.hpp"

using nlohmann::json;
using namespace divclus;

namespace {

std::string run(const std::string& args, int* exit_code = nullptr) {
  const std::string out_path = "/tmp/divclus_cli_out.txt";
  const std::string cmd = std::string(DIVCLUS_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
  const int rc = std::system(cmd.c_str());
  if (exit_code) *exit_code = WEXITSTATUS(rc);
  std::ifstream in(out_path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// runtime_ms is the one permitted difference between identical runs.
std::string strip_runtime(const std::string& lines) {
  std::stringstream out;
  std::stringstream in(lines);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    j.erase("runtime_ms");
    out << j.dump() << "\n";
  }
  return out.str();
}

struct Workspace {
  std::string points = "/tmp/divclus_cli_points.csv";
  std::string groups = "/tmp/divclus_cli_groups.json";
  Workspace() {
    run("gen --out-points " + points + " --out-groups " + groups +
        " --n 80 --dim 2 --blobs 3 --t 4 --k 4 --req 2,1,1,1 --seed 12");
  }
  ~Workspace() {
    std::remove(points.c_str());
    std::remove(groups.c_str());
  }
};

}  // namespace

TEST_CASE("gen: identical seeds produce byte-identical files") {
  const std::string p1 = "/tmp/divclus_gen_a.csv", g1 = "/tmp/divclus_gen_a.json";
  const std::string p2 = "/tmp/divclus_gen_b.csv", g2 = "/tmp/divclus_gen_b.json";
  run("gen --out-points " + p1 + " --out-groups " + g1 + " --n 60 --t 4 --k 3 --seed 5");
  run("gen --out-points " + p2 + " --out-groups " + g2 + " --n 60 --t 4 --k 3 --seed 5");
  CHECK(slurp(p1) == slurp(p2));
  CHECK(slurp(g1) == slurp(g2));
  for (const auto& f : {p1, g1, p2, g2}) std::remove(f.c_str());
}

TEST_CASE("feasible: engines agree and report the state count") {
  Workspace ws;
  int rc_es = 0, rc_dp = 0, rc_lp = 0;
  const json es = json::parse(run("feasible --points " + ws.points + " --groups " + ws.groups +
                                  " --engine es", &rc_es));
  const json dp = json::parse(run("feasible --points " + ws.points + " --groups " + ws.groups +
                                  " --engine dp", &rc_dp));
  const json lp = json::parse(run("feasible --points " + ws.points + " --groups " + ws.groups +
                                  " --engine lp --seed 3", &rc_lp));
  CHECK(es["feasible"] == dp["feasible"]);
  CHECK(dp["feasible"] == lp["feasible"]);
  CHECK(dp["state_count"] == 3 * 2 * 2 * 2);
  CHECK(rc_es == rc_dp);
  CHECK(rc_dp == rc_lp);
}

TEST_CASE("feasible: infeasible instance exits with code 2") {
  Workspace ws;
  // Impossible requirement: more facilities from one group than k.
  {
    const MetricInstance inst =
        MetricInstance::from_points(read_points_csv(ws.points), Objective::kMedian);
    GroupsFile gf = read_groups_json(ws.groups, inst.num_facilities());
    // Demand group 0 overlap of k from a group that is much smaller.
    std::vector<std::vector<int>> lists(gf.groups.t);
    lists[0] = {0};  // shrink group 0 to one facility
    for (int f = 0; f < inst.num_facilities(); ++f)
      for (int g = 1; g < gf.groups.t; ++g)
        if (gf.groups.membership[f] >> g & 1) lists[g].push_back(f);
    write_groups_json("/tmp/divclus_cli_groups2.json",
                      GroupSystem::from_lists(gf.groups.t, inst.num_facilities(), lists),
                      Requirements({3, 0, 0, 0}, 4));
  }
  int rc = 0;
  run("feasible --points " + ws.points + " --groups /tmp/divclus_cli_groups2.json --engine dp",
      &rc);
  CHECK(rc == 2);
  std::remove("/tmp/divclus_cli_groups2.json");
}

TEST_CASE("solve: bicriteria record obeys its own contract and recomputes") {
  Workspace ws;
  const std::string out = run("solve --points " + ws.points + " --groups " + ws.groups +
                              " --alg bicriteria --engine dp --seed 4");
  const json rec = json::parse(out);
  CHECK(rec["k_star"].get<int>() <= 8);
  CHECK(rec["zeta_star"].get<double>() <= 1.0 + 1e-9);
  // Reported cost must match a recomputation of the facility set.
  const MetricInstance inst =
      MetricInstance::from_points(read_points_csv(ws.points), Objective::kMedian);
  const auto facilities = rec["facilities"].get<std::vector<int>>();
  const double recomputed = evaluate_cost(inst, facilities);
  CHECK(std::abs(rec["cost"].get<double>() - recomputed) <=
        1e-9 * std::max(1.0, recomputed));
}

TEST_CASE("solve: determinism modulo runtime_ms across algorithms") {
  Workspace ws;
  for (const char* alg : {"ls0", "ls1", "bicriteria"}) {
    const std::string args = "solve --points " + ws.points + " --groups " + ws.groups +
                             " --alg " + std::string(alg) + " --seed 9";
    CHECK(strip_runtime(run(args)) == strip_runtime(run(args)));
  }
}

TEST_CASE("solve: fpt3 on a small instance is feasible and deterministic") {
  const std::string points = "/tmp/divclus_cli_small.csv";
  const std::string groups = "/tmp/divclus_cli_small.json";
  run("gen --out-points " + points + " --out-groups " + groups +
      " --n 20 --dim 2 --blobs 2 --t 2 --k 2 --req 1,1 --seed 6");
  const std::string args = "solve --points " + points + " --groups " + groups +
                           " --alg fpt3 --epsilon 0.5 --seed 2";
  const std::string out = run(args);
  const json rec = json::parse(out);
  CHECK(rec["k_star"] == 2);
  const auto cover = rec["coverage"].get<std::vector<int>>();
  CHECK(cover[0] >= 1);
  CHECK(cover[1] >= 1);
  CHECK(strip_runtime(out) == strip_runtime(run(args)));

  // kmpp on the means objective.
  const json km = json::parse(run("solve --points " + points + " --groups " + groups +
                                  " --alg kmpp --objective means --seed 2"));
  CHECK(km["alg"].get<std::string>().rfind("kmpp", 0) == 0);
  CHECK(km["zeta_star"] == 1.0);
  std::remove(points.c_str());
  std::remove(groups.c_str());
}

TEST_CASE("bench: exactly one schema-valid record per grid cell") {
  const std::string out =
      run("bench --mode solve --alg bicriteria --engine dp --n-list 60,90 --k-list 4,5,6 "
          "--t-list 4 --req 2,1,1,1 --seed 3");
  std::stringstream ss(out);
  std::string line;
  int records = 0;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    ++records;
    const json rec = json::parse(line);
    for (const char* key : {"alg", "cost", "k_star", "zeta_star", "coverage", "facilities",
                            "runtime_ms", "seed", "n", "k", "t"})
      CHECK(rec.contains(key));
  }
  CHECK(records == 2 * 3 * 1);
}

TEST_CASE("bench: feasibility sweep emits state counts") {
  const std::string out = run(
      "bench --mode feasible --engine dp --n-list 50 --k-list 3 --t-list 4,6 --seed 8");
  std::stringstream ss(out);
  std::string line;
  int records = 0;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    ++records;
    const json rec = json::parse(line);
    CHECK(rec.contains("feasible"));
    CHECK(rec.contains("state_count"));
  }
  CHECK(records == 2);
}
