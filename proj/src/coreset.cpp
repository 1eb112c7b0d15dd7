#include "divclus/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "divclus/rng.hpp"

namespace divclus {

namespace {

// Inverse-CDF draw from unnormalized weights; stable across platforms.
int weighted_index(const std::vector<double>& prefix, double u) {
  const double target = u * prefix.back();
  const auto it = std::upper_bound(prefix.begin(), prefix.end(), target);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - prefix.begin(),
                                                   static_cast<std::ptrdiff_t>(prefix.size()) - 1));
}

// D^z seeding over the client points: 2k bicriteria centers.
std::vector<int> seed_centers(const MetricInstance& instance, int count, int z, Rng& rng) {
  const int n = instance.num_clients();
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> centers;
  std::vector<double> mind(n, std::numeric_limits<double>::infinity());
  {
    std::uniform_int_distribution<int> first(0, n - 1);
    centers.push_back(first(rng));
  }
  for (int c = 0; c < n; ++c) mind[c] = instance.client_client_distance(c, centers[0]);
  while (static_cast<int>(centers.size()) < count) {
    std::vector<double> prefix(n);
    double acc = 0;
    for (int c = 0; c < n; ++c) {
      const double d = mind[c];
      acc += instance.client_weight(c) * (z == 2 ? d * d : d);
      prefix[c] = acc;
    }
    int next;
    if (acc <= 0) {
      std::uniform_int_distribution<int> any(0, n - 1);
      next = any(rng);
    } else {
      next = weighted_index(prefix, unif(rng));
    }
    centers.push_back(next);
    for (int c = 0; c < n; ++c)
      mind[c] = std::min(mind[c], instance.client_client_distance(c, next));
  }
  return centers;
}

}  // namespace

WeightedClientSet passthrough_clients(const MetricInstance& instance) {
  WeightedClientSet out;
  out.passthrough = true;
  out.clients.resize(instance.num_clients());
  for (int c = 0; c < instance.num_clients(); ++c) out.clients[c] = c;
  out.weights = instance.client_weights();
  return out;
}

WeightedClientSet build_coreset(const MetricInstance& instance, int k, double nu,
                                double delta, std::uint64_t seed,
                                const CoresetConfig& config) {
  if (!(nu > 0 && nu <= 0.5)) throw std::invalid_argument("nu must be in (0, 1/2]");
  if (!(delta > 0 && delta < 0.5)) throw std::invalid_argument("delta must be in (0, 1/2)");
  if (k < 1) throw std::invalid_argument("k must be positive");

  const int n = instance.num_clients();
  const bool means = instance.objective() == Objective::kMeans;
  const double dim = instance.has_coordinates()
                         ? static_cast<double>(instance.dimension())
                         : std::ceil(std::log2(static_cast<double>(n) + 1));
  const double m_target =
      means ? config.c0 * k * dim * dim * dim / (nu * nu * nu * nu)
            : config.c0 * k * dim / (nu * nu);
  const long long m = static_cast<long long>(std::ceil(m_target));

  if (m >= n) {
    WeightedClientSet out = passthrough_clients(instance);
    out.nu = 0.0;
    out.delta = delta;
    out.seed = seed;
    return out;
  }

  Rng rng(seed);
  const int z = means ? 2 : 1;
  const std::vector<int> centers = seed_centers(instance, 2 * k, z, rng);

  // Assignment to nearest center (ties: lowest center index).
  std::vector<int> owner(n, 0);
  std::vector<double> dist(n, 0);
  for (int c = 0; c < n; ++c) {
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (std::size_t j = 0; j < centers.size(); ++j) {
      const double d = instance.client_client_distance(c, centers[j]);
      if (d < best) {
        best = d;
        arg = static_cast<int>(j);
      }
    }
    owner[c] = arg;
    dist[c] = best;
  }
  double total_cost = 0;
  std::vector<double> cluster_weight(centers.size(), 0.0);
  for (int c = 0; c < n; ++c) {
    const double w = instance.client_weight(c);
    total_cost += w * (means ? dist[c] * dist[c] : dist[c]);
    cluster_weight[owner[c]] += w;
  }

  // s(c) = w_c d(c,A)^z / cost_z(A) + w_c / weight(cluster(c)).
  std::vector<double> sens(n);
  double sens_total = 0;
  for (int c = 0; c < n; ++c) {
    const double w = instance.client_weight(c);
    double s = w / cluster_weight[owner[c]];
    if (total_cost > 0) s += w * (means ? dist[c] * dist[c] : dist[c]) / total_cost;
    sens[c] = s;
    sens_total += s;
  }

  std::vector<double> prefix(n);
  double acc = 0;
  for (int c = 0; c < n; ++c) {
    acc += sens[c];
    prefix[c] = acc;
  }

  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::map<int, double> merged;
  for (long long i = 0; i < m; ++i) {
    const int c = weighted_index(prefix, unif(rng));
    merged[c] += instance.client_weight(c) * sens_total / (static_cast<double>(m) * sens[c]);
  }

  WeightedClientSet out;
  out.nu = nu;
  out.delta = delta;
  out.seed = seed;
  out.passthrough = false;
  for (const auto& [c, w] : merged) {
    out.clients.push_back(c);
    out.weights.push_back(w);
  }
  return out;
}

}  // namespace divclus
