#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "divclus/heuristics.hpp"
#include "divclus/oracle.hpp"
#include "divclus/rng.hpp"
#include "testutil.hpp"

using namespace divclus;

TEST_CASE("ls0: k equals |F| leaves nothing to swap") {
  auto inst = testutil::line_instance({0, 2, 7});
  auto sol = local_search_ls0(inst, 3, 5);
  CHECK(sol.facilities == std::vector<int>{0, 1, 2});
  CHECK(sol.cost == doctest::Approx(evaluate_cost(inst, {0, 1, 2})));
}

TEST_CASE("ls0: within 5x of the optimum on small instances") {
  Rng rng(19);
  for (int trial = 0; trial < 12; ++trial) {
    auto coords = testutil::scaled_random_points(15, 2, rng);
    auto inst = MetricInstance::from_points(coords, Objective::kMedian);
    GroupSystem groups(1, std::vector<std::uint64_t>(15, 0));
    Requirements req({0}, 3);
    auto opt = oracle::exact_divkmed(inst, groups, req);
    REQUIRE(opt.has_value());
    auto sol = local_search_ls0(inst, 3, trial);
    CHECK(sol.cost <= 5.0 * opt->cost + 1e-9);
  }
}

TEST_CASE("ls0: p = 2 swaps still improve and stay within budget") {
  Rng rng(29);
  auto coords = testutil::scaled_random_points(12, 2, rng);
  auto inst = MetricInstance::from_points(coords, Objective::kMedian);
  Ls0Config cfg;
  cfg.p = 2;
  auto sol = local_search_ls0(inst, 3, 7, cfg);
  CHECK(sol.facilities.size() == 3);
  Ls0Config base;
  auto sol1 = local_search_ls0(inst, 3, 7, base);
  CHECK(sol.cost <= sol1.cost + 1e-9);
}

TEST_CASE("ls0: separated blobs get one center each") {
  // Two tight blobs far apart; k = 2 should split them on most seeds.
  std::vector<std::vector<double>> coords;
  Rng rng(37);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int i = 0; i < 20; ++i) coords.push_back({noise(rng), noise(rng)});
  for (int i = 0; i < 20; ++i) coords.push_back({10 + noise(rng), noise(rng)});
  auto inst = MetricInstance::from_points(coords, Objective::kMedian);
  int split = 0;
  const int seeds = 20;
  for (int s = 0; s < seeds; ++s) {
    auto sol = local_search_ls0(inst, 2, s);
    REQUIRE(sol.facilities.size() == 2);
    const bool left = sol.facilities[0] < 20, right = sol.facilities[1] >= 20;
    if (left && right) ++split;
  }
  CHECK(split >= seeds * 95 / 100);
}

TEST_CASE("ls0: deterministic given the seed") {
  Rng rng(43);
  auto coords = testutil::scaled_random_points(20, 2, rng);
  auto inst = MetricInstance::from_points(coords, Objective::kMedian);
  auto a = local_search_ls0(inst, 4, 99);
  auto b = local_search_ls0(inst, 4, 99);
  CHECK(a.facilities == b.facilities);
  CHECK(a.cost == b.cost);
}

TEST_CASE("kmpp: objective guard and k = 1") {
  auto med = testutil::line_instance({0, 1}, Objective::kMedian);
  CHECK_THROWS_AS(kmeanspp_seed(med, 1, 3), std::invalid_argument);
  auto mea = testutil::line_instance({0, 1, 2}, Objective::kMeans);
  auto sol = kmeanspp_seed(mea, 1, 3);
  CHECK(sol.facilities.size() == 1);
}

TEST_CASE("kmpp: identical points cost zero, padding flagged") {
  std::vector<std::vector<double>> coords(5, {2.0, 2.0});
  auto inst = MetricInstance::from_points(coords, Objective::kMeans);
  auto sol = kmeanspp_seed(inst, 3, 11);
  CHECK(sol.cost == doctest::Approx(0.0));
}

TEST_CASE("kmpp: empirical mean within the classical seeding envelope") {
  Rng rng(53);
  auto coords = testutil::scaled_random_points(16, 2, rng);
  auto inst = MetricInstance::from_points(coords, Objective::kMeans);
  GroupSystem groups(1, std::vector<std::uint64_t>(16, 0));
  const int k = 3;
  Requirements req({0}, k);
  auto opt = oracle::exact_divkmed(inst, groups, req);
  REQUIRE(opt.has_value());
  double total = 0;
  const int seeds = 200;
  KmppConfig cfg;
  cfg.restarts = 1;
  for (int s = 0; s < seeds; ++s) total += kmeanspp_seed(inst, k, s, cfg).cost;
  const double bound = 8.0 * (std::log(k) + 2.0) * opt->cost;
  CHECK(total / seeds <= bound);
}

TEST_CASE("ls1: singleton pools force the output") {
  auto inst = testutil::line_instance({0, 3, 9});
  GroupSystem groups(2, {0b01, 0b10, 0b00});
  Requirements req({1, 1}, 2);
  auto sol = local_search_ls1(inst, groups, req, 4, PatternSource::kAll);
  CHECK(sol.facilities == std::vector<int>{0, 1});
  CHECK(sol.feasible);
}

TEST_CASE("ls1: feasible output at or above the optimum, every pattern source") {
  Rng rng(61);
  int solved = 0;
  for (int trial = 0; trial < 30 && solved < 10; ++trial) {
    auto ri = testutil::random_instance(16, 3, 3, rng);
    auto opt = oracle::exact_divkmed(ri.instance, ri.groups, ri.req);
    if (!opt) {
      CHECK_THROWS_AS(local_search_ls1(ri.instance, ri.groups, ri.req, 1, PatternSource::kDp),
                      InfeasibleError);
      continue;
    }
    ++solved;
    for (auto src : {PatternSource::kEs, PatternSource::kDp, PatternSource::kAll}) {
      auto sol = local_search_ls1(ri.instance, ri.groups, ri.req, trial, src);
      CHECK(dominates(sol.coverage, ri.req.r));
      CHECK(static_cast<int>(sol.facilities.size()) == ri.req.k);
      CHECK(sol.cost >= opt->cost - 1e-9);
    }
  }
  CHECK(solved >= 10);
}

TEST_CASE("ls1: deterministic given seed and pattern order") {
  Rng rng(67);
  auto ri = testutil::random_instance(18, 3, 3, rng);
  if (!oracle::feasible_ksubset(ri.groups, ri.req))
    ri.req = Requirements(std::vector<int>(ri.groups.t, 0), ri.req.k);
  auto a = local_search_ls1(ri.instance, ri.groups, ri.req, 21, PatternSource::kAll);
  auto b = local_search_ls1(ri.instance, ri.groups, ri.req, 21, PatternSource::kAll);
  CHECK(a.facilities == b.facilities);
  CHECK(a.cost == b.cost);
}
