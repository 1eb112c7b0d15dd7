#include "divclus/generator.hpp"

#include <numeric>
#include <stdexcept>

#include "divclus/rng.hpp"

namespace divclus {

SyntheticInstance generate_synthetic(int n, int dim, int blobs, int t, int k,
                                     std::uint64_t seed, std::vector<int> r,
                                     const GeneratorConfig& config) {
  if (t < 2) throw std::invalid_argument("generator requires t >= 2");
  if (n < k || k < 1) throw std::invalid_argument("generator requires n >= k >= 1");
  if (blobs < 1 || dim < 1) throw std::invalid_argument("invalid blob or dimension count");
  if (r.empty()) r.assign(t, 1);
  if (static_cast<int>(r.size()) != t)
    throw std::invalid_argument("requirement vector width must equal t");

  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> noise(0.0, config.sigma);

  std::vector<std::vector<double>> centers(blobs, std::vector<double>(dim));
  for (auto& c : centers)
    for (double& x : c) x = unit(rng);

  SyntheticInstance out;
  out.coords.resize(n, std::vector<double>(dim));
  for (int i = 0; i < n; ++i) {
    const auto& c = centers[i % blobs];
    for (int d = 0; d < dim; ++d) out.coords[i][d] = c[d] + noise(rng);
  }

  const int max_groups = std::max(1, t / 2);
  std::vector<std::uint64_t> membership(n, 0);
  std::vector<int> ids(t);
  std::iota(ids.begin(), ids.end(), 0);
  for (int i = 0; i < n; ++i) {
    std::uniform_int_distribution<int> count_dist(1, max_groups);
    const int g = count_dist(rng);
    for (int j = 0; j < g; ++j) {
      std::uniform_int_distribution<int> pick(j, t - 1);
      std::swap(ids[j], ids[pick(rng)]);
      membership[i] |= 1ULL << ids[j];
    }
  }

  out.groups = GroupSystem(t, std::move(membership));
  out.req = Requirements(std::move(r), k);
  return out;
}

}  // namespace divclus
