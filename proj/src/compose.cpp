#include "divclus/compose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "divclus/feasibility.hpp"
#include "divclus/rng.hpp"

namespace divclus {

BicriteriaResult bicriteria_2k(const MetricInstance& instance, const GroupSystem& groups,
                               const Requirements& req, ClusteringAlg clustering_alg,
                               FeasEngine feas_engine, std::uint64_t seed,
                               const BicriteriaConfig& config) {
  BicriteriaResult res;
  Solution cluster =
      clustering_alg == ClusteringAlg::kLs0
          ? local_search_ls0(instance, req.k, derive_seed(seed, 1), config.ls0)
          : kmeanspp_seed(instance, req.k, derive_seed(seed, 1), config.kmpp);
  res.cluster_part = cluster.facilities;
  res.cluster_cost = cluster.cost;

  std::vector<int> combined = cluster.facilities;
  std::string engine;
  if (!dominates(coverage(cluster.facilities, groups), req.r)) {
    const std::vector<FacilityClass> classes = partition_classes(instance, groups);
    std::optional<ConstraintPattern> pattern;
    switch (feas_engine) {
      case FeasEngine::kEs:
        pattern = first_feasible_pattern(classes, req);
        engine = "es";
        break;
      case FeasEngine::kDp: {
        const DpResult dp = dp_feasible(classes, req);
        if (dp.feasible) pattern = dp.picks;
        engine = "dp";
        break;
      }
      case FeasEngine::kLp: {
        engine = "lp";
        const FractionalSolution frac = lp_solve_fractional(classes, req);
        if (frac.feasible) {
          LpRoundConfig rc;
          rc.max_attempts = config.lp_max_attempts;
          rc.resolve_after = config.lp_max_attempts / 2;
          pattern = lp_round(classes, frac.x, req, derive_seed(seed, 2), rc);
        }
        if (!pattern) {
          // Rounding exhausted (or LP infeasible): decide via DP.
          const DpResult dp = dp_feasible(classes, req);
          if (dp.feasible) pattern = dp.picks;
          engine = "lp->dp";
        }
        break;
      }
    }
    if (!pattern) throw InfeasibleError("infeasible instance");
    const std::vector<int> feas = materialize_pattern(classes, *pattern, derive_seed(seed, 3));
    res.feasibility_part = feas;
    combined.insert(combined.end(), feas.begin(), feas.end());
  } else {
    engine = "none";
  }

  res.solution = make_solution(instance, groups, req, std::move(combined),
                               "bicriteria[" + engine + "]", 2 * req.k);
  res.k_star = static_cast<int>(res.solution.facilities.size());
  res.zeta_star = res.cluster_cost > 0 ? res.solution.cost / res.cluster_cost
                                       : (res.solution.cost > 0 ? std::numeric_limits<double>::infinity() : 1.0);
  res.engine_used = engine;
  return res;
}

std::vector<int> halfball_pick_3(const std::vector<std::vector<double>>& facilities,
                                 const std::vector<double>& center, double lambda,
                                 std::uint64_t /*seed*/) {
  if (facilities.empty()) throw std::invalid_argument("no facilities on the sphere");
  const std::size_t dim = center.size();
  const double tol = 1e-6 * std::max(1.0, lambda);
  std::vector<std::vector<double>> rel(facilities.size(), std::vector<double>(dim));
  for (std::size_t i = 0; i < facilities.size(); ++i) {
    if (facilities[i].size() != dim) throw std::invalid_argument("dimension mismatch");
    double norm2 = 0;
    for (std::size_t d = 0; d < dim; ++d) {
      rel[i][d] = facilities[i][d] - center[d];
      norm2 += rel[i][d] * rel[i][d];
    }
    if (std::abs(std::sqrt(norm2) - lambda) > tol)
      throw std::invalid_argument("facility not on the sphere");
  }
  auto dot = [&](int a, int b) {
    double s = 0;
    for (std::size_t d = 0; d < dim; ++d) s += rel[a][d] * rel[b][d];
    return s;
  };

  std::vector<int> picks{0};
  // f2: any facility in the open opposite half-space of f1.
  for (std::size_t i = 0; i < facilities.size(); ++i) {
    if (dot(static_cast<int>(i), picks[0]) < 0) {
      picks.push_back(static_cast<int>(i));
      break;
    }
  }
  if (picks.size() == 2) {
    // f3: opposite to both previous picks.
    for (std::size_t i = 0; i < facilities.size(); ++i) {
      const int fi = static_cast<int>(i);
      if (dot(fi, picks[0]) < 0 && dot(fi, picks[1]) < 0) {
        picks.push_back(fi);
        break;
      }
    }
  }
  return picks;
}

Solution best_k_of_mk(const MetricInstance& instance, const GroupSystem& groups,
                      const Requirements& req, const std::vector<std::vector<int>>& pools,
                      long long cap) {
  if (pools.empty()) throw std::invalid_argument("no pools");
  long long product = 1;
  for (const auto& pool : pools) {
    if (pool.empty()) throw std::invalid_argument("empty pool");
    product *= static_cast<long long>(pool.size());
    if (product > cap) throw CapExceededError("combination count exceeds cap");
  }

  const int k = static_cast<int>(pools.size());
  std::vector<int> choice(k, 0);
  double best_feasible = std::numeric_limits<double>::infinity();
  double best_any = std::numeric_limits<double>::infinity();
  std::vector<int> best_feasible_set, best_any_set;
  for (;;) {
    std::vector<int> S;
    for (int j = 0; j < k; ++j) S.push_back(pools[j][choice[j]]);
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());
    const double cost = evaluate_cost(instance, S);
    if (cost < best_any) {
      best_any = cost;
      best_any_set = S;
    }
    if (dominates(coverage(S, groups), req.r) && cost < best_feasible) {
      best_feasible = cost;
      best_feasible_set = S;
    }
    int j = 0;
    while (j < k) {
      if (++choice[j] < static_cast<int>(pools[j].size())) break;
      choice[j] = 0;
      ++j;
    }
    if (j == k) break;
  }

  const bool have_feasible = !best_feasible_set.empty();
  return make_solution(instance, groups, req,
                       have_feasible ? best_feasible_set : best_any_set,
                       have_feasible ? "best-k" : "best-k[unconstrained]", req.k);
}

}  // namespace divclus
