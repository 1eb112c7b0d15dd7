#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "divclus/core.hpp"
#include "divclus/heuristics.hpp"

namespace divclus {

enum class ClusteringAlg { kLs0, kKmpp };
enum class FeasEngine { kEs, kDp, kLp };

struct BicriteriaResult {
  Solution solution;  // union, declared budget 2k
  std::vector<int> cluster_part;
  std::vector<int> feasibility_part;  // empty when the cluster part already covers r
  double cluster_cost = 0.0;
  double zeta_star = 0.0;  // cost(solution) / cost(cluster part)
  int k_star = 0;
  std::string engine_used;
};

struct BicriteriaConfig {
  Ls0Config ls0;
  KmppConfig kmpp;
  int lp_max_attempts = 100;
};

// Clustering solution union a requirement-satisfying pick: at most 2k
// facilities, coverage >= r, cost no worse than the clustering part.
// LP rounding exhaustion falls back to the DP engine.
BicriteriaResult bicriteria_2k(const MetricInstance& instance, const GroupSystem& groups,
                               const Requirements& req, ClusteringAlg clustering_alg,
                               FeasEngine feas_engine, std::uint64_t seed,
                               const BicriteriaConfig& config = {});

// Up to three picks from facilities on a sphere around `center`, at least
// one of which lands in the half-ball of any point of the sphere when
// d = 2. Returns indices into the input list. The seed is accepted for
// interface symmetry; picks are deterministic (lowest index preference).
std::vector<int> halfball_pick_3(const std::vector<std::vector<double>>& facilities,
                                 const std::vector<double>& center, double lambda,
                                 std::uint64_t seed);

// Minimum-cost one-per-pool combination; prefers combinations covering r
// and falls back to the unconstrained minimum (feasible=false) when none
// does. Throws CapExceededError when the combination count exceeds `cap`.
Solution best_k_of_mk(const MetricInstance& instance, const GroupSystem& groups,
                      const Requirements& req, const std::vector<std::vector<int>>& pools,
                      long long cap = 1000000);

}  // namespace divclus
