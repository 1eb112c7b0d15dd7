#pragma once

#include <string>
#include <vector>

#include "divclus/core.hpp"
#include "divclus/generator.hpp"

namespace divclus {

// Points CSV: header "id,x1,...,xD", one row per point.
std::vector<std::vector<double>> read_points_csv(const std::string& path);
void write_points_csv(const std::string& path, const std::vector<std::vector<double>>& coords);

// Explicit matrix: first line n, then n rows of n reals.
std::vector<std::vector<double>> read_distance_matrix(const std::string& path);

// Groups + requirements JSON:
// { "t": int, "groups": [[facility ids], ...], "r": [ints], "k": int }
struct GroupsFile {
  GroupSystem groups;
  Requirements req;
};
GroupsFile read_groups_json(const std::string& path, int num_facilities);
void write_groups_json(const std::string& path, const GroupSystem& groups,
                       const Requirements& req);

// Scale every coordinate column to unit L2 norm.
void normalize_columns_unit_norm(std::vector<std::vector<double>>& coords);

}  // namespace divclus
