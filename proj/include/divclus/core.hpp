#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace divclus {

enum class Objective { kMedian, kMeans };

// Thrown when an instance admits no requirement-satisfying k-subset.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an enumeration exceeds its configured budget.
struct CapExceededError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A weighted subset of clients that stands in for the full client set.
// nu/delta/seed record the construction parameters; passthrough marks the
// exact (identity) case.
struct WeightedClientSet {
  std::vector<int> clients;
  std::vector<double> weights;
  double nu = 0.0;
  double delta = 0.0;
  std::uint64_t seed = 0;
  bool passthrough = false;

  std::size_t size() const { return clients.size(); }
};

// Clients and facilities index into a shared point set, given either by
// coordinates (L2 distances) or by an explicit symmetric matrix. Instances
// are immutable after construction and safe to share across threads.
class MetricInstance {
 public:
  // U = C = F: every point is both a client and a facility.
  static MetricInstance from_points(std::vector<std::vector<double>> coords,
                                    Objective objective,
                                    std::size_t cache_threshold = kDefaultCacheThreshold);
  static MetricInstance from_points(std::vector<std::vector<double>> coords,
                                    std::vector<int> client_points,
                                    std::vector<int> facility_points,
                                    Objective objective,
                                    std::size_t cache_threshold = kDefaultCacheThreshold);
  // Explicit matrix over U with U = C = F. Validates symmetry, zero
  // diagonal and the triangle inequality (tolerance 1e-9).
  static MetricInstance from_matrix(std::vector<std::vector<double>> dist,
                                    Objective objective);

  int num_clients() const { return static_cast<int>(client_points_.size()); }
  int num_facilities() const { return static_cast<int>(facility_points_.size()); }
  int dimension() const { return dim_; }
  Objective objective() const { return objective_; }
  bool has_coordinates() const { return !coords_.empty(); }

  double client_weight(int c) const { return weights_[c]; }
  const std::vector<double>& client_weights() const { return weights_; }
  void set_client_weights(std::vector<double> w);

  const std::vector<double>& client_coords(int c) const { return coords_[client_points_[c]]; }
  const std::vector<double>& facility_coords(int f) const { return coords_[facility_points_[f]]; }

  // Metric distance d; the means objective squares it at evaluation time.
  double distance(int client, int facility) const {
    return point_distance(client_points_[client], facility_points_[facility]);
  }
  double client_client_distance(int a, int b) const {
    return point_distance(client_points_[a], client_points_[b]);
  }
  double facility_facility_distance(int a, int b) const {
    return point_distance(facility_points_[a], facility_points_[b]);
  }

  // max/min nonzero pairwise distance over the point set. Diagnostic only;
  // exact up to `pair_cap` points, sampled beyond.
  double aspect_ratio(std::size_t pair_cap = 4096) const;

  static constexpr std::size_t kDefaultCacheThreshold = 4096;

 private:
  MetricInstance() = default;
  double point_distance(int p, int q) const;
  void build_cache(std::size_t threshold);
  void check_ids() const;

  Objective objective_ = Objective::kMedian;
  int dim_ = 0;
  std::vector<std::vector<double>> coords_;  // empty for matrix instances
  std::vector<std::vector<double>> matrix_;  // empty for coordinate instances
  std::vector<int> client_points_;
  std::vector<int> facility_points_;
  std::vector<double> weights_;
  std::vector<double> cache_;  // optional point-x-point cache, row-major
  int cache_n_ = 0;
};

// Per-facility group membership bitmasks (bit i = member of group i).
struct GroupSystem {
  int t = 0;
  std::vector<std::uint64_t> membership;

  GroupSystem() = default;
  GroupSystem(int t_, std::vector<std::uint64_t> membership_);
  // From explicit member lists, one per group.
  static GroupSystem from_lists(int t, int num_facilities,
                                const std::vector<std::vector<int>>& groups);

  std::uint64_t signature(int facility) const { return membership[facility]; }
  int num_facilities() const { return static_cast<int>(membership.size()); }
};

struct Requirements {
  std::vector<int> r;
  int k = 0;

  Requirements() = default;
  Requirements(std::vector<int> r_, int k_);
  int t() const { return static_cast<int>(r.size()); }
  int max_requirement() const;
};

// All facilities sharing one characteristic vector.
struct FacilityClass {
  std::uint64_t signature = 0;
  std::vector<int> members;

  int frequency() const { return static_cast<int>(members.size()); }
};

struct Solution {
  std::vector<int> facilities;  // sorted, distinct
  double cost = 0.0;
  std::vector<int> coverage;
  std::string algorithm;
  bool feasible = false;
  int budget = 0;  // declared size bound of the producing algorithm
};

// Sum of weighted nearest-facility distances (squared for means). When a
// client set is given its ids/weights replace the instance's.
double evaluate_cost(const MetricInstance& instance, const std::vector<int>& S,
                     const WeightedClientSet* clients = nullptr);

// Elementwise group membership counts of S.
std::vector<int> coverage(const std::vector<int>& S, const GroupSystem& groups);

bool dominates(const std::vector<int>& cover, const std::vector<int>& r);

// Signature partition of the facility set, in lexicographic signature order
// (group 0 most significant). Invariant under facility input order.
std::vector<FacilityClass> partition_classes(const MetricInstance& instance,
                                             const GroupSystem& groups);
std::vector<FacilityClass> partition_classes(const GroupSystem& groups);

// Lexicographic comparison of signatures as 0/1 vectors (gamma[0] first).
bool signature_less(std::uint64_t a, std::uint64_t b, int t);

std::string signature_string(std::uint64_t sig, int t);

// Assembles a Solution with cost, coverage and feasibility filled in.
Solution make_solution(const MetricInstance& instance, const GroupSystem& groups,
                       const Requirements& req, std::vector<int> facilities,
                       std::string algorithm, int budget);

}  // namespace divclus
