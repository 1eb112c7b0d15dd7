#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "divclus/core.hpp"
#include "divclus/feasibility.hpp"

namespace divclus {

// k facility pools plus the client set the search is run against (usually
// a coreset). Pools may share underlying facilities when a class appears
// with multiplicity > 1; the pool index acts as the copy tag and selections
// never reuse an underlying facility.
struct PartitionInstance {
  const MetricInstance* instance = nullptr;
  const WeightedClientSet* clients = nullptr;
  std::vector<std::vector<int>> pools;
  std::vector<int> pool_class;  // class index per pool, -1 when unknown

  int k() const { return static_cast<int>(pools.size()); }
};

PartitionInstance make_partition_instance(const MetricInstance& instance,
                                          const WeightedClientSet& clients,
                                          const std::vector<FacilityClass>& classes,
                                          const ConstraintPattern& pattern);

// Smallest nonnegative integer e with (1+eta)^e >= a. Requires a >= 1.
int discretize(double a, double eta);

// Facilities of the pool whose clamped leader distance lands in exponent
// bucket e: discretize(max(d(f, leader), 1), eta) == e. Distances below 1
// share bucket 0.
std::vector<int> candidate_set(const MetricInstance& instance, const std::vector<int>& pool,
                               int leader_client, int exponent, double eta);

struct LeaderRadiusGuess {
  std::vector<int> leaders;    // coreset positions, one per pool
  std::vector<int> exponents;  // radius exponents, one per pool
  double eta = 0.0;
};

// The metric extension of Algorithm-2 style searches: one fictitious
// facility per pool at distance 2*lambda_j from every member of Pi_j, and
// 2*lambda_j + d(Pi_j, v) from anything else.
class FictitiousExtension {
 public:
  FictitiousExtension(const MetricInstance& instance, const WeightedClientSet& clients,
                      std::vector<std::vector<int>> candidate_pools,
                      std::vector<double> lambdas);

  int num_pools() const { return static_cast<int>(pools_.size()); }
  const std::vector<std::vector<int>>& pools() const { return pools_; }
  double lambda(int j) const { return lambdas_[j]; }
  const MetricInstance& instance() const { return *instance_; }
  const WeightedClientSet& clients() const { return *clients_; }

  // d(F'_j, .) for the three node kinds of the extended space.
  double client_distance(int j, int coreset_index) const {
    return 2 * lambdas_[j] + pool_min_[j][coreset_index];
  }
  double facility_distance(int j, int facility_id) const;
  double pair_distance(int i, int j) const;

  // min_{f in Pi_j} d(f, c) for the attached client.
  double pool_client_distance(int j, int coreset_index) const { return pool_min_[j][coreset_index]; }
  // min over all pools: a floor on d(c, S) for any one-per-pool selection.
  double any_pool_client_distance(int coreset_index) const { return all_min_[coreset_index]; }
  // min_j d(F'_j, c) for the attached client.
  double nearest_fictitious(int coreset_index) const { return fict_min_[coreset_index]; }

  // cost(C', F') under the instance objective.
  double fictitious_cost() const { return base_cost_; }

 private:
  const MetricInstance* instance_;
  const WeightedClientSet* clients_;
  std::vector<std::vector<int>> pools_;
  std::vector<double> lambdas_;
  std::vector<std::vector<double>> pool_min_;
  std::vector<double> fict_min_;
  std::vector<double> all_min_;
  double base_cost_ = 0.0;
};

// Builds the per-pool candidate sets from the guess and attaches one
// fictitious facility per pool with lambda_j = (1+eta)^{e_j}. Guesses with
// an empty candidate set are rejected upstream (throws here). The bucket
// structure is what makes the extension a metric: members of one candidate
// set lie within 2*lambda_j of each other.
FictitiousExtension extend_with_fictitious(const MetricInstance& instance,
                                           const std::vector<std::vector<int>>& pools,
                                           const WeightedClientSet& clients,
                                           const LeaderRadiusGuess& guess);

// cost(C', F') - cost(C', F' union S): nonnegative, monotone, submodular.
double improv(const std::vector<int>& S, const FictitiousExtension& ext);

enum class SubmodularMode { kExact, kGreedy };

// One facility per pool, pairwise distinct underlying ids, maximizing
// improv. Exact mode enumerates the candidate product (throws
// CapExceededError beyond `exact_cap`); greedy runs k best-marginal-gain
// rounds with a matroid-intersection feasibility check plus one
// single-swap improvement sweep. Returns nullopt when no distinct
// one-per-pool selection exists.
std::optional<std::vector<int>> maximize_improv(const FictitiousExtension& ext,
                                                SubmodularMode mode,
                                                long long exact_cap = 1000000);

// Lowest-id-preference system of distinct representatives over the pools.
std::optional<std::vector<int>> pick_one_per_pool(const std::vector<std::vector<int>>& pools);

enum class PickMode { kExact, kGreedy, kArbitrary };

struct FptConfig {
  long long exact_product_cap = 1000000;
  bool prune_guesses = true;
  double coreset_c0 = 20.0;
  double coreset_delta = 0.1;
};

// Leader/radius search for one partition instance. Enumerates, per pool,
// the (leader, radius-exponent) pairs realized by the pool's facilities
// (nearest attached client and its distance bucket; the optimal guess has
// this form), takes the Cartesian product across pools and keeps the
// min-cost selection w.r.t. the attached clients. eta = e*eps'/2 for the
// median objective, e*eps'/16 for means. `incumbent_hint` only prunes
// guesses whose selection cost cannot go below it; it is never returned.
Solution solve_kmed_kpm(const PartitionInstance& pinst, double eps_prime, PickMode mode,
                        const FptConfig& config = {},
                        double incumbent_hint = std::numeric_limits<double>::infinity());

// Full pipeline: classes, coreset (nu = eps/16), feasible patterns, one
// partition search per pattern (eps' = eps/4), minimum full-client cost.
Solution solve_divkmed_fpt(const MetricInstance& instance, const GroupSystem& groups,
                           const Requirements& req, double eps, SubmodularMode mode,
                           std::uint64_t seed, const FptConfig& config = {});

// Same pipeline with the arbitrary one-per-pool pick instead of the
// submodular maximization.
Solution solve_divkmed_3apx(const MetricInstance& instance, const GroupSystem& groups,
                            const Requirements& req, double eps, std::uint64_t seed,
                            const FptConfig& config = {});

}  // namespace divclus
