#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "divclus/core.hpp"
#include "divclus/rng.hpp"

namespace testutil {

using divclus::GroupSystem;
using divclus::MetricInstance;
using divclus::Objective;
using divclus::Requirements;

inline MetricInstance line_instance(const std::vector<double>& xs,
                                    Objective obj = Objective::kMedian) {
  std::vector<std::vector<double>> coords;
  for (double x : xs) coords.push_back({x});
  return MetricInstance::from_points(std::move(coords), obj);
}

// Random points in a box, rescaled so the minimum nonzero pairwise distance
// is 1 (the radius-discretization grid assumes distances in [1, Delta]).
inline std::vector<std::vector<double>> scaled_random_points(int n, int dim, divclus::Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::vector<double>> coords(n, std::vector<double>(dim));
  for (auto& p : coords)
    for (double& x : p) x = unif(rng);
  double dmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double d2 = 0;
      for (int d = 0; d < dim; ++d) {
        const double diff = coords[i][d] - coords[j][d];
        d2 += diff * diff;
      }
      const double d = std::sqrt(d2);
      if (d > 0) dmin = std::min(dmin, d);
    }
  if (dmin < std::numeric_limits<double>::infinity() && dmin > 0)
    for (auto& p : coords)
      for (double& x : p) x /= dmin;
  return coords;
}

inline GroupSystem random_groups(int t, int n, divclus::Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> density(t);
  for (double& d : density) d = 0.15 + 0.7 * unif(rng);
  std::vector<std::uint64_t> mem(n, 0);
  for (int f = 0; f < n; ++f)
    for (int g = 0; g < t; ++g)
      if (unif(rng) < density[g]) mem[f] |= 1ULL << g;
  return GroupSystem(t, std::move(mem));
}

struct RandomInstance {
  MetricInstance instance;
  GroupSystem groups;
  Requirements req;
};

// Random geometric instance with random groups and requirements; roughly
// half the draws are infeasible, which the agreement tests want.
inline RandomInstance random_instance(int max_n, int max_t, int max_k, divclus::Rng& rng,
                                      Objective obj = Objective::kMedian) {
  std::uniform_int_distribution<int> tpick(1, max_t), kpick(1, max_k);
  const int t = tpick(rng);
  const int k = kpick(rng);
  std::uniform_int_distribution<int> npick(std::max(k, 4), max_n);
  const int n = npick(rng);
  std::uniform_int_distribution<int> dimpick(1, 3);
  auto coords = scaled_random_points(n, dimpick(rng), rng);
  GroupSystem groups = random_groups(t, n, rng);
  std::vector<int> r(t);
  std::uniform_int_distribution<int> rpick(0, k);
  for (int& x : r) x = rpick(rng);
  return RandomInstance{MetricInstance::from_points(std::move(coords), obj), std::move(groups),
                        Requirements(std::move(r), k)};
}

}  // namespace testutil
