#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "saferoute/model.hpp"

namespace saferoute::test {

inline std::string data_path(const std::string& rel) { return std::string(SAFEROUTE_DATA_DIR) + "/" + rel; }

// Complete graph over the given points with constant profiles.
inline Instance euclidean_instance(const std::vector<std::array<double, 2>>& points, int vehicles = 1,
                                   double capacity = 1000.0, double latest = 100.0, int dummies = 0,
                                   double speed = 1.0, double close = 100.0) {
  std::vector<Node> nodes;
  for (std::size_t i = 0; i < points.size(); ++i) {
    Node n;
    n.id = static_cast<int>(i);
    n.x = points[i][0];
    n.y = points[i][1];
    n.demand = i == 0 ? 0.0 : 1.0;
    n.window_open = 0.0;
    n.window_close = i == 0 ? latest : close;
    nodes.push_back(n);
  }
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      const double d = std::hypot(points[i][0] - points[j][0], points[i][1] - points[j][1]);
      arcs.push_back(Arc{static_cast<int>(i), static_cast<int>(j), d, TimeProfile::constant(speed),
                         TimeProfile::constant(1.0), TimeProfile::constant(1e-3)});
    }
  }
  return Instance("euclid", nodes, arcs, Fleet{vehicles, capacity, latest}, dummies);
}

inline TimeProfile two_level(int boundary_hour, double before, double after) {
  std::array<double, kHoursPerDay> v{};
  for (int h = 0; h < kHoursPerDay; ++h) v[static_cast<std::size_t>(h)] = h < boundary_hour ? before : after;
  return TimeProfile(v);
}

}  // namespace saferoute::test
