#pragma once

#include <optional>
#include <vector>

#include "divclus/core.hpp"
#include "divclus/feasibility.hpp"
#include "divclus/fpt.hpp"

namespace divclus {
namespace oracle {

// Deliberately plain brute force; caps fail loudly rather than sampling.
struct OracleConfig {
  long long subset_cap = 10000000;   // k-subsets of F
  long long product_cap = 10000000;  // one-per-pool combinations
};

// Minimum-cost requirement-satisfying k-subset over all C(|F|, k)
// candidates; nullopt means the instance is infeasible.
std::optional<Solution> exact_divkmed(const MetricInstance& instance,
                                      const GroupSystem& groups, const Requirements& req,
                                      const OracleConfig& config = {});

// Existence-only scan: the first requirement-satisfying k-subset in
// lexicographic id order, without cost evaluation.
std::optional<std::vector<int>> feasible_ksubset(const GroupSystem& groups,
                                                 const Requirements& req,
                                                 const OracleConfig& config = {});

// All frequency-respecting k-multisets of classes whose signature sum
// dominates r.
std::vector<ConstraintPattern> exact_feasible_multisets(
    const std::vector<FacilityClass>& classes, const Requirements& req,
    const OracleConfig& config = {});

struct SubmodularMax {
  std::vector<int> selection;  // one facility per pool, pairwise distinct
  double value = 0.0;
};

// True improv maximizer by full product enumeration over the pools,
// skipping selections that reuse an underlying facility. Shares only the
// extension's distance surface with the solver.
SubmodularMax exact_submodular_max(const FictitiousExtension& ext,
                                   const WeightedClientSet& clients,
                                   const OracleConfig& config = {});

}  // namespace oracle
}  // namespace divclus
