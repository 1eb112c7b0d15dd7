#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "divclus/coreset.hpp"
#include "divclus/oracle.hpp"
#include "divclus/rng.hpp"
#include "testutil.hpp"

using namespace divclus;

TEST_CASE("exact_divkmed: 1-median answer confirmed by an independent rescan") {
  Rng rng(3);
  auto coords = testutil::scaled_random_points(12, 2, rng);
  auto inst = MetricInstance::from_points(coords, Objective::kMedian);
  GroupSystem groups(1, std::vector<std::uint64_t>(12, 0));
  auto sol = oracle::exact_divkmed(inst, groups, Requirements({0}, 1));
  REQUIRE(sol.has_value());
  double best = std::numeric_limits<double>::infinity();
  int arg = -1;
  for (int f = 0; f < 12; ++f) {
    const double c = evaluate_cost(inst, {f});
    if (c < best) {
      best = c;
      arg = f;
    }
  }
  CHECK(sol->facilities == std::vector<int>{arg});
  CHECK(sol->cost == doctest::Approx(best));
}

TEST_CASE("exact_divkmed: full budget over self-serving clients is free") {
  auto inst = testutil::line_instance({2, 4, 8});
  GroupSystem groups(1, {1, 1, 1});
  auto sol = oracle::exact_divkmed(inst, groups, Requirements({0}, 3));
  REQUIRE(sol.has_value());
  CHECK(sol->cost == doctest::Approx(0.0));
  CHECK(sol->facilities == std::vector<int>{0, 1, 2});
}

TEST_CASE("exact_divkmed agrees with the dp on infeasible inputs") {
  auto inst = testutil::line_instance({0, 1, 2});
  GroupSystem groups(2, {0b01, 0b01, 0b01});
  Requirements req({1, 1}, 2);
  CHECK_FALSE(oracle::exact_divkmed(inst, groups, req).has_value());
  CHECK_FALSE(dp_feasible(partition_classes(groups), req).feasible);
}

TEST_CASE("exact_divkmed: cap fails loudly") {
  Rng rng(5);
  auto coords = testutil::scaled_random_points(30, 2, rng);
  auto inst = MetricInstance::from_points(coords, Objective::kMedian);
  GroupSystem groups(1, std::vector<std::uint64_t>(30, 0));
  oracle::OracleConfig cfg;
  cfg.subset_cap = 10;
  CHECK_THROWS_AS(oracle::exact_divkmed(inst, groups, Requirements({0}, 4), cfg),
                  CapExceededError);
}

TEST_CASE("exact_feasible_multisets: the three-class example") {
  std::vector<std::uint64_t> mem = {0b11, 0b11, 0b01, 0b01, 0b10, 0b10};
  auto classes = partition_classes(GroupSystem(2, mem));
  auto sets = oracle::exact_feasible_multisets(classes, Requirements({1, 1}, 2));
  CHECK(sets.size() == 4);
}

TEST_CASE("exact_feasible_multisets: vacuous requirement and empty classes") {
  std::vector<std::uint64_t> mem = {0b1, 0b1, 0b0, 0b0};
  auto classes = partition_classes(GroupSystem(1, mem));
  // Two classes with ample frequency, k = 2: all C(3, 2) = 3 multisets
  // are feasible at r = 0.
  CHECK(oracle::exact_feasible_multisets(classes, Requirements({0}, 2)).size() == 3);
  CHECK(oracle::exact_feasible_multisets({}, Requirements({1}, 2)).empty());
}

TEST_CASE("exact_submodular_max mirrors the solver's exact mode bitwise") {
  Rng rng(7);
  for (int trial = 0; trial < 15; ++trial) {
    auto coords = testutil::scaled_random_points(11, 2, rng);
    auto inst = MetricInstance::from_points(
        coords, trial % 2 ? Objective::kMeans : Objective::kMedian);
    auto clients = passthrough_clients(inst);
    std::vector<std::vector<int>> pools = {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}};
    FictitiousExtension ext(inst, clients, pools, {1.0, 1.2, 2.0});
    auto mine = maximize_improv(ext, SubmodularMode::kExact);
    REQUIRE(mine.has_value());
    auto theirs = oracle::exact_submodular_max(ext, clients);
    const double a = improv(*mine, ext);
    CHECK(std::abs(a - theirs.value) <= 1e-12 * std::max(1.0, std::abs(a)));

    auto greedy = maximize_improv(ext, SubmodularMode::kGreedy);
    REQUIRE(greedy.has_value());
    CHECK(improv(*greedy, ext) >= 0.5 * theirs.value - 1e-9);
  }
}

TEST_CASE("exact_submodular_max: singleton pools forced") {
  auto inst = testutil::line_instance({0, 1, 5});
  auto clients = passthrough_clients(inst);
  FictitiousExtension ext(inst, clients, {{1}, {2}}, {1.0, 1.0});
  auto res = oracle::exact_submodular_max(ext, clients);
  CHECK(res.selection == std::vector<int>{1, 2});
}
