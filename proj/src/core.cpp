#include "divclus/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

namespace divclus {

namespace {

double l2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

void validate_matrix(const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  constexpr double tol = 1e-9;
  for (std::size_t i = 0; i < n; ++i) {
    if (m[i].size() != n) throw std::invalid_argument("distance matrix not square");
    if (std::abs(m[i][i]) > tol) throw std::invalid_argument("nonzero diagonal in distance matrix");
    for (std::size_t j = 0; j < n; ++j) {
      if (m[i][j] < 0) throw std::invalid_argument("negative distance");
      if (std::abs(m[i][j] - m[j][i]) > tol)
        throw std::invalid_argument("asymmetric distance matrix");
    }
  }
  // Triangle inequality: full scan at small n, random triples beyond.
  if (n <= 1024) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
          if (m[i][j] > m[i][l] + m[l][j] + tol)
            throw std::invalid_argument("triangle inequality violated");
  } else {
    std::mt19937_64 rng(0x7121a7ULL);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int it = 0; it < 1000000; ++it) {
      const std::size_t i = pick(rng), j = pick(rng), l = pick(rng);
      if (m[i][j] > m[i][l] + m[l][j] + tol)
        throw std::invalid_argument("triangle inequality violated");
    }
  }
}

}  // namespace

MetricInstance MetricInstance::from_points(std::vector<std::vector<double>> coords,
                                           Objective objective,
                                           std::size_t cache_threshold) {
  std::vector<int> ids(coords.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<int>(i);
  return from_points(std::move(coords), ids, ids, objective, cache_threshold);
}

MetricInstance MetricInstance::from_points(std::vector<std::vector<double>> coords,
                                           std::vector<int> client_points,
                                           std::vector<int> facility_points,
                                           Objective objective,
                                           std::size_t cache_threshold) {
  if (coords.empty()) throw std::invalid_argument("no points");
  MetricInstance inst;
  inst.objective_ = objective;
  inst.dim_ = static_cast<int>(coords[0].size());
  for (const auto& p : coords)
    if (static_cast<int>(p.size()) != inst.dim_)
      throw std::invalid_argument("inconsistent point dimension");
  inst.coords_ = std::move(coords);
  inst.client_points_ = std::move(client_points);
  inst.facility_points_ = std::move(facility_points);
  inst.weights_.assign(inst.client_points_.size(), 1.0);
  inst.check_ids();
  inst.build_cache(cache_threshold);
  return inst;
}

MetricInstance MetricInstance::from_matrix(std::vector<std::vector<double>> dist,
                                           Objective objective) {
  if (dist.empty()) throw std::invalid_argument("no points");
  validate_matrix(dist);
  MetricInstance inst;
  inst.objective_ = objective;
  inst.matrix_ = std::move(dist);
  const int n = static_cast<int>(inst.matrix_.size());
  inst.client_points_.resize(n);
  inst.facility_points_.resize(n);
  for (int i = 0; i < n; ++i) inst.client_points_[i] = inst.facility_points_[i] = i;
  inst.weights_.assign(n, 1.0);
  return inst;
}

void MetricInstance::set_client_weights(std::vector<double> w) {
  if (w.size() != client_points_.size())
    throw std::invalid_argument("weight vector length mismatch");
  for (double x : w)
    if (!(x > 0)) throw std::invalid_argument("client weights must be positive");
  weights_ = std::move(w);
}

void MetricInstance::check_ids() const {
  const int n = static_cast<int>(coords_.empty() ? matrix_.size() : coords_.size());
  for (int p : client_points_)
    if (p < 0 || p >= n) throw std::invalid_argument("client point index out of range");
  for (int p : facility_points_)
    if (p < 0 || p >= n) throw std::invalid_argument("facility point index out of range");
  if (client_points_.empty()) throw std::invalid_argument("no clients");
  if (facility_points_.empty()) throw std::invalid_argument("no facilities");
}

void MetricInstance::build_cache(std::size_t threshold) {
  const std::size_t n = coords_.size();
  if (n == 0 || n > threshold) return;
  cache_n_ = static_cast<int>(n);
  cache_.resize(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    cache_[i * n + i] = 0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = l2(coords_[i], coords_[j]);
      cache_[i * n + j] = d;
      cache_[j * n + i] = d;
    }
  }
}

double MetricInstance::point_distance(int p, int q) const {
  if (!matrix_.empty()) return matrix_[p][q];
  if (cache_n_ > 0) return cache_[static_cast<std::size_t>(p) * cache_n_ + q];
  return l2(coords_[p], coords_[q]);
}

double MetricInstance::aspect_ratio(std::size_t pair_cap) const {
  const std::size_t n = coords_.empty() ? matrix_.size() : coords_.size();
  double dmin = std::numeric_limits<double>::infinity();
  double dmax = 0;
  auto consider = [&](std::size_t i, std::size_t j) {
    const double d = point_distance(static_cast<int>(i), static_cast<int>(j));
    if (d > 0 && d < dmin) dmin = d;
    if (d > dmax) dmax = d;
  };
  if (n <= pair_cap) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) consider(i, j);
  } else {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t it = 0; it < pair_cap * pair_cap / 2; ++it) {
      const std::size_t i = pick(rng), j = pick(rng);
      if (i != j) consider(i, j);
    }
  }
  if (!(dmin < std::numeric_limits<double>::infinity()) || dmax == 0) return 1.0;
  return dmax / dmin;
}

GroupSystem::GroupSystem(int t_, std::vector<std::uint64_t> membership_)
    : t(t_), membership(std::move(membership_)) {
  if (t < 1 || t > 64) throw std::invalid_argument("group count must be in [1,64]");
  const std::uint64_t valid = (t == 64) ? ~0ULL : ((1ULL << t) - 1);
  for (std::uint64_t m : membership)
    if ((m & ~valid) != 0) throw std::invalid_argument("membership bit beyond group count");
}

GroupSystem GroupSystem::from_lists(int t, int num_facilities,
                                    const std::vector<std::vector<int>>& groups) {
  if (static_cast<int>(groups.size()) != t)
    throw std::invalid_argument("group list count does not match t");
  std::vector<std::uint64_t> mem(num_facilities, 0);
  for (int g = 0; g < t; ++g) {
    for (int f : groups[g]) {
      if (f < 0 || f >= num_facilities) throw std::invalid_argument("facility id out of range in group");
      mem[f] |= (1ULL << g);
    }
  }
  return GroupSystem(t, std::move(mem));
}

Requirements::Requirements(std::vector<int> r_, int k_) : r(std::move(r_)), k(k_) {
  if (k < 1) throw std::invalid_argument("budget k must be positive");
  for (int x : r)
    if (x < 0 || x > k) throw std::invalid_argument("requirement out of [0,k]");
}

int Requirements::max_requirement() const {
  int m = 0;
  for (int x : r) m = std::max(m, x);
  return m;
}

double evaluate_cost(const MetricInstance& instance, const std::vector<int>& S,
                     const WeightedClientSet* clients) {
  if (S.empty()) throw std::invalid_argument("empty solution");
  for (int f : S)
    if (f < 0 || f >= instance.num_facilities())
      throw std::invalid_argument("unknown facility id");
  const bool means = instance.objective() == Objective::kMeans;
  double total = 0;
  const std::size_t nc = clients ? clients->size() : static_cast<std::size_t>(instance.num_clients());
  for (std::size_t i = 0; i < nc; ++i) {
    const int c = clients ? clients->clients[i] : static_cast<int>(i);
    const double w = clients ? clients->weights[i] : instance.client_weight(c);
    double best = std::numeric_limits<double>::infinity();
    for (int f : S) best = std::min(best, instance.distance(c, f));
    total += w * (means ? best * best : best);
  }
  return total;
}

std::vector<int> coverage(const std::vector<int>& S, const GroupSystem& groups) {
  std::vector<int> cover(groups.t, 0);
  for (int f : S) {
    if (f < 0 || f >= groups.num_facilities())
      throw std::invalid_argument("unknown facility id");
    const std::uint64_t sig = groups.membership[f];
    for (int i = 0; i < groups.t; ++i)
      if (sig >> i & 1) ++cover[i];
  }
  return cover;
}

bool dominates(const std::vector<int>& cover, const std::vector<int>& r) {
  for (std::size_t i = 0; i < r.size(); ++i)
    if (cover[i] < r[i]) return false;
  return true;
}

bool signature_less(std::uint64_t a, std::uint64_t b, int t) {
  for (int i = 0; i < t; ++i) {
    const int ai = a >> i & 1, bi = b >> i & 1;
    if (ai != bi) return ai < bi;
  }
  return false;
}

std::string signature_string(std::uint64_t sig, int t) {
  std::string s(t, '0');
  for (int i = 0; i < t; ++i)
    if (sig >> i & 1) s[i] = '1';
  return s;
}

std::vector<FacilityClass> partition_classes(const GroupSystem& groups) {
  std::map<std::uint64_t, std::vector<int>> by_sig;
  for (int f = 0; f < groups.num_facilities(); ++f) by_sig[groups.membership[f]].push_back(f);
  std::vector<FacilityClass> classes;
  classes.reserve(by_sig.size());
  for (auto& [sig, members] : by_sig) {
    std::sort(members.begin(), members.end());
    classes.push_back(FacilityClass{sig, std::move(members)});
  }
  std::sort(classes.begin(), classes.end(), [&](const FacilityClass& a, const FacilityClass& b) {
    return signature_less(a.signature, b.signature, groups.t);
  });
  return classes;
}

std::vector<FacilityClass> partition_classes(const MetricInstance& instance,
                                             const GroupSystem& groups) {
  if (groups.num_facilities() != instance.num_facilities())
    throw std::invalid_argument("group system facility count mismatch");
  return partition_classes(groups);
}

Solution make_solution(const MetricInstance& instance, const GroupSystem& groups,
                       const Requirements& req, std::vector<int> facilities,
                       std::string algorithm, int budget) {
  std::sort(facilities.begin(), facilities.end());
  facilities.erase(std::unique(facilities.begin(), facilities.end()), facilities.end());
  Solution sol;
  sol.cost = facilities.empty() ? 0.0 : evaluate_cost(instance, facilities);
  sol.coverage = coverage(facilities, groups);
  sol.feasible = dominates(sol.coverage, req.r) &&
                 static_cast<int>(facilities.size()) <= budget;
  sol.facilities = std::move(facilities);
  sol.algorithm = std::move(algorithm);
  sol.budget = budget;
  return sol;
}

}  // namespace divclus
