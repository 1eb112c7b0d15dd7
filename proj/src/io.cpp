#include "divclus/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace divclus {

namespace {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::vector<std::vector<double>> read_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open points file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty points file: " + path);
  std::vector<std::vector<double>> coords;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    bool first = true;
    while (std::getline(ss, cell, ',')) {
      if (first) {
        first = false;  // id column
        continue;
      }
      row.push_back(std::stod(cell));
    }
    coords.push_back(std::move(row));
  }
  if (coords.empty()) throw std::runtime_error("no points in file: " + path);
  return coords;
}

void write_points_csv(const std::string& path, const std::vector<std::vector<double>>& coords) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write points file: " + path);
  const std::size_t dim = coords.empty() ? 0 : coords[0].size();
  out << "id";
  for (std::size_t d = 1; d <= dim; ++d) out << ",x" << d;
  out << "\n";
  for (std::size_t i = 0; i < coords.size(); ++i) {
    out << i;
    for (double x : coords[i]) out << "," << format_double(x);
    out << "\n";
  }
}

std::vector<std::vector<double>> read_distance_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  int n = 0;
  if (!(in >> n) || n <= 0) throw std::runtime_error("bad matrix header in " + path);
  std::vector<std::vector<double>> m(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(in >> m[i][j])) throw std::runtime_error("truncated matrix file: " + path);
  return m;
}

GroupsFile read_groups_json(const std::string& path, int num_facilities) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open groups file: " + path);
  nlohmann::json j;
  in >> j;
  const int t = j.at("t").get<int>();
  const auto lists = j.at("groups").get<std::vector<std::vector<int>>>();
  const auto r = j.at("r").get<std::vector<int>>();
  const int k = j.at("k").get<int>();
  GroupsFile out{GroupSystem::from_lists(t, num_facilities, lists), Requirements(r, k)};
  return out;
}

void write_groups_json(const std::string& path, const GroupSystem& groups,
                       const Requirements& req) {
  std::vector<std::vector<int>> lists(groups.t);
  for (int f = 0; f < groups.num_facilities(); ++f)
    for (int i = 0; i < groups.t; ++i)
      if (groups.membership[f] >> i & 1) lists[i].push_back(f);
  nlohmann::json j;
  j["t"] = groups.t;
  j["groups"] = lists;
  j["r"] = req.r;
  j["k"] = req.k;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write groups file: " + path);
  out << j.dump(2) << "\n";
}

void normalize_columns_unit_norm(std::vector<std::vector<double>>& coords) {
  if (coords.empty()) return;
  const std::size_t dim = coords[0].size();
  for (std::size_t d = 0; d < dim; ++d) {
    double norm2 = 0;
    for (const auto& p : coords) norm2 += p[d] * p[d];
    const double norm = std::sqrt(norm2);
    if (norm > 0)
      for (auto& p : coords) p[d] /= norm;
  }
}

}  // namespace divclus
