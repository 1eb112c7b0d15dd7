#include "divclus/fpt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "divclus/coreset.hpp"

namespace divclus {

namespace {

constexpr double kEuler = 2.718281828459045;

double phi(double d, bool means) { return means ? d * d : d; }

}  // namespace

int discretize(double a, double eta) {
  if (!(a >= 1.0)) throw std::invalid_argument("discretize requires a >= 1");
  if (!(eta > 0.0)) throw std::invalid_argument("discretize requires eta > 0");
  if (a == 1.0) return 0;
  int e = static_cast<int>(std::ceil(std::log(a) / std::log1p(eta)));
  e = std::max(e, 0);
  while (e > 0 && std::pow(1.0 + eta, e - 1) >= a) --e;
  while (std::pow(1.0 + eta, e) < a) ++e;
  return e;
}

std::vector<int> candidate_set(const MetricInstance& instance, const std::vector<int>& pool,
                               int leader_client, int exponent, double eta) {
  std::vector<int> out;
  for (int f : pool) {
    const double d = instance.distance(leader_client, f);
    if (discretize(std::max(d, 1.0), eta) == exponent) out.push_back(f);
  }
  return out;
}

PartitionInstance make_partition_instance(const MetricInstance& instance,
                                          const WeightedClientSet& clients,
                                          const std::vector<FacilityClass>& classes,
                                          const ConstraintPattern& pattern) {
  PartitionInstance pinst;
  pinst.instance = &instance;
  pinst.clients = &clients;
  for (std::size_t e = 0; e < pattern.counts.size(); ++e) {
    for (int copy = 0; copy < pattern.counts[e]; ++copy) {
      pinst.pools.push_back(classes[e].members);
      pinst.pool_class.push_back(static_cast<int>(e));
    }
  }
  return pinst;
}

FictitiousExtension::FictitiousExtension(const MetricInstance& instance,
                                         const WeightedClientSet& clients,
                                         std::vector<std::vector<int>> candidate_pools,
                                         std::vector<double> lambdas)
    : instance_(&instance),
      clients_(&clients),
      pools_(std::move(candidate_pools)),
      lambdas_(std::move(lambdas)) {
  if (pools_.size() != lambdas_.size())
    throw std::invalid_argument("pool/lambda count mismatch");
  const int k = num_pools();
  const std::size_t nc = clients_->size();
  pool_min_.assign(k, std::vector<double>(nc, std::numeric_limits<double>::infinity()));
  for (int j = 0; j < k; ++j) {
    if (pools_[j].empty()) throw std::invalid_argument("empty candidate pool");
    for (std::size_t i = 0; i < nc; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int f : pools_[j]) best = std::min(best, instance.distance(clients_->clients[i], f));
      pool_min_[j][i] = best;
    }
  }
  fict_min_.assign(nc, std::numeric_limits<double>::infinity());
  all_min_.assign(nc, std::numeric_limits<double>::infinity());
  const bool means = instance.objective() == Objective::kMeans;
  base_cost_ = 0;
  for (std::size_t i = 0; i < nc; ++i) {
    for (int j = 0; j < k; ++j) {
      fict_min_[i] = std::min(fict_min_[i], 2 * lambdas_[j] + pool_min_[j][i]);
      all_min_[i] = std::min(all_min_[i], pool_min_[j][i]);
    }
    base_cost_ += clients_->weights[i] * phi(fict_min_[i], means);
  }
}

double FictitiousExtension::facility_distance(int j, int facility_id) const {
  double best = std::numeric_limits<double>::infinity();
  for (int f : pools_[j])
    best = std::min(best, instance_->facility_facility_distance(f, facility_id));
  return 2 * lambdas_[j] + best;
}

double FictitiousExtension::pair_distance(int i, int j) const {
  if (i == j) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int f : pools_[i])
    for (int g : pools_[j])
      best = std::min(best, instance_->facility_facility_distance(f, g));
  return 2 * lambdas_[i] + 2 * lambdas_[j] + best;
}

FictitiousExtension extend_with_fictitious(const MetricInstance& instance,
                                           const std::vector<std::vector<int>>& pools,
                                           const WeightedClientSet& clients,
                                           const LeaderRadiusGuess& guess) {
  if (pools.size() != guess.leaders.size() || pools.size() != guess.exponents.size())
    throw std::invalid_argument("guess width does not match pool count");
  std::vector<std::vector<int>> cand(pools.size());
  std::vector<double> lambdas(pools.size());
  for (std::size_t j = 0; j < pools.size(); ++j) {
    cand[j] = candidate_set(instance, pools[j], clients.clients[guess.leaders[j]],
                            guess.exponents[j], guess.eta);
    lambdas[j] = std::pow(1.0 + guess.eta, guess.exponents[j]);
  }
  return FictitiousExtension(instance, clients, std::move(cand), std::move(lambdas));
}

double improv(const std::vector<int>& S, const FictitiousExtension& ext) {
  const MetricInstance& inst = ext.instance();
  const WeightedClientSet& clients = ext.clients();
  const bool means = inst.objective() == Objective::kMeans;
  double with_s = 0;
  for (std::size_t i = 0; i < clients.size(); ++i) {
    double best = ext.nearest_fictitious(static_cast<int>(i));
    for (int f : S) best = std::min(best, inst.distance(clients.clients[i], f));
    with_s += clients.weights[i] * phi(best, means);
  }
  return ext.fictitious_cost() - with_s;
}

namespace {

// Kuhn's augmenting-path matching: can every pool in `order` get a
// distinct facility, honoring `assigned` (facility -> pool) as fixed?
bool try_assign(int pool, const std::vector<std::vector<int>>& pools,
                std::unordered_map<int, int>& match, std::unordered_set<int>& visited,
                const std::unordered_set<int>& banned) {
  for (int f : pools[pool]) {
    if (banned.count(f) || visited.count(f)) continue;
    visited.insert(f);
    const auto it = match.find(f);
    if (it == match.end() || try_assign(it->second, pools, match, visited, banned)) {
      match[f] = pool;
      return true;
    }
  }
  return false;
}

// True if the pools in `remaining` admit a distinct system avoiding `banned`.
bool sdr_exists(const std::vector<std::vector<int>>& pools, const std::vector<int>& remaining,
                const std::unordered_set<int>& banned) {
  std::unordered_map<int, int> match;
  for (int j : remaining) {
    std::unordered_set<int> visited;
    if (!try_assign(j, pools, match, visited, banned)) return false;
  }
  return true;
}

}  // namespace

std::optional<std::vector<int>> pick_one_per_pool(const std::vector<std::vector<int>>& pools) {
  const int k = static_cast<int>(pools.size());
  std::unordered_map<int, int> match;  // facility -> pool
  const std::unordered_set<int> banned;
  for (int j = 0; j < k; ++j) {
    std::unordered_set<int> visited;
    if (!try_assign(j, pools, match, visited, banned)) return std::nullopt;
  }
  std::vector<int> picks(k, -1);
  for (const auto& [f, j] : match) picks[j] = f;
  return picks;
}

namespace {

struct GainEvaluator {
  const FictitiousExtension& ext;
  const bool means;
  std::vector<double> cur;  // current per-client min distance

  explicit GainEvaluator(const FictitiousExtension& e)
      : ext(e), means(e.instance().objective() == Objective::kMeans) {
    cur.resize(e.clients().size());
    for (std::size_t i = 0; i < cur.size(); ++i)
      cur[i] = e.nearest_fictitious(static_cast<int>(i));
  }

  double gain(int f) const {
    const auto& cl = ext.clients();
    double g = 0;
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const double d = ext.instance().distance(cl.clients[i], f);
      if (d < cur[i]) g += cl.weights[i] * (phi(cur[i], means) - phi(d, means));
    }
    return g;
  }

  void commit(int f) {
    const auto& cl = ext.clients();
    for (std::size_t i = 0; i < cur.size(); ++i)
      cur[i] = std::min(cur[i], ext.instance().distance(cl.clients[i], f));
  }
};

std::optional<std::vector<int>> maximize_exact(const FictitiousExtension& ext,
                                               long long exact_cap) {
  const int k = ext.num_pools();
  long long product = 1;
  for (const auto& pool : ext.pools()) {
    product *= static_cast<long long>(pool.size());
    if (product > exact_cap)
      throw CapExceededError("candidate product exceeds exact cap; use greedy mode");
  }
  const auto& clients = ext.clients();
  const bool means = ext.instance().objective() == Objective::kMeans;
  const std::size_t nc = clients.size();

  std::vector<std::vector<double>> level(k + 1, std::vector<double>(nc));
  for (std::size_t i = 0; i < nc; ++i) level[0][i] = ext.nearest_fictitious(static_cast<int>(i));

  std::vector<int> pick(k, -1), best_pick;
  std::vector<int> used;
  double best_value = -1;

  auto rec = [&](auto&& self, int j) -> void {
    if (j == k) {
      double with_s = 0;
      for (std::size_t i = 0; i < nc; ++i) with_s += clients.weights[i] * phi(level[k][i], means);
      const double value = ext.fictitious_cost() - with_s;
      if (value > best_value) {
        best_value = value;
        best_pick = pick;
      }
      return;
    }
    for (int f : ext.pools()[j]) {
      if (std::find(used.begin(), used.end(), f) != used.end()) continue;
      for (std::size_t i = 0; i < nc; ++i)
        level[j + 1][i] =
            std::min(level[j][i], ext.instance().distance(clients.clients[i], f));
      pick[j] = f;
      used.push_back(f);
      self(self, j + 1);
      used.pop_back();
    }
  };
  rec(rec, 0);
  if (best_pick.empty()) return std::nullopt;
  return best_pick;
}

std::optional<std::vector<int>> maximize_greedy(const FictitiousExtension& ext) {
  const int k = ext.num_pools();
  const auto& pools = ext.pools();
  {
    std::vector<int> all(k);
    for (int j = 0; j < k; ++j) all[j] = j;
    if (!sdr_exists(pools, all, {})) return std::nullopt;
  }

  GainEvaluator eval(ext);
  std::vector<int> chosen(k, -1);
  std::unordered_set<int> used;
  std::vector<bool> pool_done(k, false);

  for (int round = 0; round < k; ++round) {
    double best_gain = -1;
    int best_pool = -1, best_f = -1;
    std::vector<int> remaining;
    for (int j = 0; j < k; ++j)
      if (!pool_done[j]) remaining.push_back(j);
    for (int j : remaining) {
      for (int f : pools[j]) {
        if (used.count(f)) continue;
        // Matroid-intersection admissibility: the other open pools must
        // still have a distinct completion after taking (j, f).
        std::vector<int> rest;
        for (int o : remaining)
          if (o != j) rest.push_back(o);
        std::unordered_set<int> banned = used;
        banned.insert(f);
        if (!sdr_exists(pools, rest, banned)) continue;
        const double g = eval.gain(f);
        if (g > best_gain) {
          best_gain = g;
          best_pool = j;
          best_f = f;
        }
      }
    }
    if (best_pool < 0) return std::nullopt;
    chosen[best_pool] = best_f;
    pool_done[best_pool] = true;
    used.insert(best_f);
    eval.commit(best_f);
  }

  // One single-swap improvement sweep; value can only go up.
  double cur_value = improv(chosen, ext);
  for (int j = 0; j < k; ++j) {
    int best_f = chosen[j];
    double best_value = cur_value;
    for (int f : pools[j]) {
      if (f != chosen[j] && used.count(f)) continue;
      if (f == chosen[j]) continue;
      std::vector<int> trial = chosen;
      trial[j] = f;
      const double v = improv(trial, ext);
      if (v > best_value) {
        best_value = v;
        best_f = f;
      }
    }
    if (best_f != chosen[j]) {
      used.erase(chosen[j]);
      used.insert(best_f);
      chosen[j] = best_f;
      cur_value = best_value;
    }
  }
  return chosen;
}

}  // namespace

std::optional<std::vector<int>> maximize_improv(const FictitiousExtension& ext,
                                                SubmodularMode mode, long long exact_cap) {
  if (mode == SubmodularMode::kExact) return maximize_exact(ext, exact_cap);
  return maximize_greedy(ext);
}

namespace {

struct LeaderRadiusPair {
  int leader_index;  // position within the attached client set
  int exponent;

  bool operator<(const LeaderRadiusPair& o) const {
    return leader_index != o.leader_index ? leader_index < o.leader_index
                                          : exponent < o.exponent;
  }
  bool operator==(const LeaderRadiusPair& o) const {
    return leader_index == o.leader_index && exponent == o.exponent;
  }
};

// The (leader, radius) pairs realized by the pool's facilities: for each
// facility, its nearest attached client (ties: lowest position) and the
// distance bucket. The optimal facility of the pool realizes its own pair,
// so the product over pools covers the guess the guarantee needs.
std::vector<LeaderRadiusPair> realized_pairs(const MetricInstance& instance,
                                             const WeightedClientSet& clients,
                                             const std::vector<int>& pool, double eta) {
  std::vector<LeaderRadiusPair> pairs;
  for (int f : pool) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (std::size_t i = 0; i < clients.size(); ++i) {
      const double d = instance.distance(clients.clients[i], f);
      if (d < best) {
        best = d;
        arg = static_cast<int>(i);
      }
    }
    pairs.push_back({arg, discretize(std::max(best, 1.0), eta)});
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

double selection_cost(const MetricInstance& instance, const WeightedClientSet& clients,
                      const std::vector<int>& S) {
  const bool means = instance.objective() == Objective::kMeans;
  double total = 0;
  for (std::size_t i = 0; i < clients.size(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int f : S) best = std::min(best, instance.distance(clients.clients[i], f));
    total += clients.weights[i] * phi(best, means);
  }
  return total;
}

}  // namespace

Solution solve_kmed_kpm(const PartitionInstance& pinst, double eps_prime, PickMode mode,
                        const FptConfig& config, double incumbent_hint) {
  if (!(eps_prime > 0)) throw std::invalid_argument("eps' must be positive");
  if (pinst.instance == nullptr || pinst.clients == nullptr)
    throw std::invalid_argument("partition instance missing instance/clients");
  if (pinst.pools.empty()) throw std::invalid_argument("no pools");
  for (const auto& pool : pinst.pools)
    if (pool.empty()) throw std::invalid_argument("empty pool");
  const MetricInstance& instance = *pinst.instance;
  const WeightedClientSet& clients = *pinst.clients;
  if (clients.size() == 0) throw std::invalid_argument("no clients attached");

  const bool means = instance.objective() == Objective::kMeans;
  const double eta = means ? kEuler * eps_prime / 16.0 : kEuler * eps_prime / 2.0;
  const int k = pinst.k();

  // Per-pool candidate pairs, shared between copies of the same class.
  std::vector<std::vector<LeaderRadiusPair>> pairs(k);
  std::map<int, int> class_first_pool;
  for (int j = 0; j < k; ++j) {
    const int cls = j < static_cast<int>(pinst.pool_class.size()) ? pinst.pool_class[j] : -1;
    if (cls >= 0) {
      const auto it = class_first_pool.find(cls);
      if (it != class_first_pool.end()) {
        pairs[j] = pairs[it->second];
        continue;
      }
      class_first_pool[cls] = j;
    }
    pairs[j] = realized_pairs(instance, clients, pinst.pools[j], eta);
  }

  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<int> best_sel;

  std::vector<int> choice(k, 0);
  for (;;) {
    // Assemble the guess.
    std::vector<std::vector<int>> cand(k);
    std::vector<double> lambdas(k);
    bool ok = true;
    for (int j = 0; j < k && ok; ++j) {
      const LeaderRadiusPair& pr = pairs[j][choice[j]];
      cand[j] = candidate_set(instance, pinst.pools[j], clients.clients[pr.leader_index],
                              pr.exponent, eta);
      lambdas[j] = std::pow(1.0 + eta, pr.exponent);
      if (cand[j].empty()) ok = false;  // cannot happen for realized pairs
    }
    if (ok) {
      FictitiousExtension ext(instance, clients, std::move(cand), std::move(lambdas));
      bool pruned = false;
      const double prune_at = std::min(best_cost, incumbent_hint);
      if (config.prune_guesses && prune_at < std::numeric_limits<double>::infinity()) {
        // Any one-per-pool selection costs at least the pool floor.
        double lb = 0;
        for (std::size_t i = 0; i < clients.size(); ++i)
          lb += clients.weights[i] * phi(ext.any_pool_client_distance(static_cast<int>(i)), means);
        pruned = lb >= prune_at;
      }
      if (!pruned) {
        std::optional<std::vector<int>> sel;
        switch (mode) {
          case PickMode::kArbitrary:
            sel = pick_one_per_pool(ext.pools());
            break;
          case PickMode::kExact:
            sel = maximize_improv(ext, SubmodularMode::kExact, config.exact_product_cap);
            break;
          case PickMode::kGreedy:
            sel = maximize_improv(ext, SubmodularMode::kGreedy);
            break;
        }
        if (sel) {
          const double cost = selection_cost(instance, clients, *sel);
          if (cost < best_cost) {
            best_cost = cost;
            best_sel = *sel;
          }
        }
      }
    }
    // Advance the mixed-radix counter over pair choices.
    int j = 0;
    while (j < k) {
      if (++choice[j] < static_cast<int>(pairs[j].size())) break;
      choice[j] = 0;
      ++j;
    }
    if (j == k) break;
  }

  if (best_sel.empty()) {
    // With a finite hint every guess may be legitimately pruned; report
    // that instead of failing.
    if (incumbent_hint < std::numeric_limits<double>::infinity()) {
      Solution pruned_out;
      pruned_out.cost = std::numeric_limits<double>::infinity();
      pruned_out.algorithm = "kmed-kpm[pruned]";
      pruned_out.budget = k;
      return pruned_out;
    }
    throw std::runtime_error("no usable leader/radius guess produced a selection");
  }

  Solution sol;
  sol.facilities = best_sel;
  std::sort(sol.facilities.begin(), sol.facilities.end());
  sol.cost = best_cost;
  sol.algorithm = "kmed-kpm";
  sol.budget = k;
  return sol;
}

namespace {

Solution solve_pipeline(const MetricInstance& instance, const GroupSystem& groups,
                        const Requirements& req, double eps, PickMode mode,
                        std::uint64_t seed, const FptConfig& config, const char* tag) {
  if (!(eps > 0 && eps <= 0.5)) throw std::invalid_argument("eps must be in (0, 1/2]");
  if (req.t() != groups.t) throw std::invalid_argument("requirement/group width mismatch");
  if (req.k > instance.num_facilities()) throw std::invalid_argument("k exceeds facility count");

  const std::vector<FacilityClass> classes = partition_classes(instance, groups);
  const std::vector<ConstraintPattern> patterns = enumerate_feasible_patterns(classes, req);
  if (patterns.empty()) throw InfeasibleError("infeasible instance");

  const WeightedClientSet coreset =
      build_coreset(instance, req.k, eps / 16.0, config.coreset_delta, seed,
                    CoresetConfig{config.coreset_c0});

  const bool means = instance.objective() == Objective::kMeans;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<int> best_facilities;
  for (const ConstraintPattern& pattern : patterns) {
    if (config.prune_guesses && best_cost < std::numeric_limits<double>::infinity()) {
      // Any solution of this pattern draws only from its classes; the
      // unconstrained nearest-facility cost over that union is a floor.
      std::vector<int> pattern_facilities;
      for (std::size_t e = 0; e < pattern.counts.size(); ++e)
        if (pattern.counts[e] > 0)
          pattern_facilities.insert(pattern_facilities.end(), classes[e].members.begin(),
                                    classes[e].members.end());
      double lb = 0;
      for (int c = 0; c < instance.num_clients() && lb < best_cost; ++c) {
        double d = std::numeric_limits<double>::infinity();
        for (int f : pattern_facilities) d = std::min(d, instance.distance(c, f));
        lb += instance.client_weight(c) * phi(d, means);
      }
      if (lb >= best_cost) continue;
    }
    const PartitionInstance pinst = make_partition_instance(instance, coreset, classes, pattern);
    const Solution sol = solve_kmed_kpm(pinst, eps / 4.0, mode, config);
    const double full_cost = evaluate_cost(instance, sol.facilities);
    if (full_cost < best_cost) {
      best_cost = full_cost;
      best_facilities = sol.facilities;
    }
  }
  return make_solution(instance, groups, req, std::move(best_facilities), tag, req.k);
}

}  // namespace

Solution solve_divkmed_fpt(const MetricInstance& instance, const GroupSystem& groups,
                           const Requirements& req, double eps, SubmodularMode mode,
                           std::uint64_t seed, const FptConfig& config) {
  const PickMode pick =
      mode == SubmodularMode::kExact ? PickMode::kExact : PickMode::kGreedy;
  const char* tag = mode == SubmodularMode::kExact ? "fpt[exact]" : "fpt[greedy]";
  return solve_pipeline(instance, groups, req, eps, pick, seed, config, tag);
}

Solution solve_divkmed_3apx(const MetricInstance& instance, const GroupSystem& groups,
                            const Requirements& req, double eps, std::uint64_t seed,
                            const FptConfig& config) {
  return solve_pipeline(instance, groups, req, eps, PickMode::kArbitrary, seed, config, "fpt3");
}

}  // namespace divclus
