#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kgrid/grid.hpp"

namespace kgrid {

// Syntactic necessary conditions for solvability, evaluated on the
// unconnected grid. A violation proves the grid unsolvable; a clean
// report proves nothing.
//
// Condition 4 (every completion of some node disconnects the grid) is not
// checked here; omega_star reports it dynamically as infeasibility.
struct Violation {
  int condition = 0;                 // 1, 2, 3, 5 or 6
  std::optional<Coordinate> witness; // empty for the grid-level parity check
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ScreenReport {
  std::vector<Violation> violations;

  bool unsolvable() const { return !violations.empty(); }
  bool fired(int condition) const {
    for (const Violation& v : violations)
      if (v.condition == condition) return true;
    return false;
  }
};

inline ScreenReport screen(const NumberedGrid& grid) {
  ScreenReport report;
  const int k = grid.k();

  if (grid.total_magnitude() % 2 != 0)
    report.violations.push_back(
        {2, std::nullopt, "magnitude sum " + std::to_string(grid.total_magnitude()) + " is odd"});

  // Nodes are stored row-major, which fixes the report order.
  for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
    const Node& p = grid.node(i);
    const int r = grid.neighbor_count(i);
    const std::string at = " at " + to_string(p.coord);

    if (r == 0) {
      report.violations.push_back({1, p.coord, "node has no neighbors" + at});
      continue;
    }

    int neighbor_sum = 0;
    for (Direction d : kDirections)
      if (int j = grid.neighbor_index(i, d); j != kNoIndex) neighbor_sum += grid.node(j).magnitude;
    if (neighbor_sum < p.magnitude)
      report.violations.push_back({3, p.coord,
                                   "neighbor magnitudes sum to " + std::to_string(neighbor_sum) + " < " +
                                       std::to_string(p.magnitude) + at});

    if (p.magnitude > r * k)
      report.violations.push_back({5, p.coord,
                                   "magnitude " + std::to_string(p.magnitude) + " > r*k = " + std::to_string(r) +
                                       "*" + std::to_string(k) + at});

    // magn = (r-1)k + j with 2 <= j <= k: r-1 neighbors take k each and the
    // last takes j, so every neighbor must accept at least j.
    if (k > 1) {
      const int j = p.magnitude - (r - 1) * k;
      if (j >= 2 && j <= k) {
        for (Direction d : kDirections) {
          const int q = grid.neighbor_index(i, d);
          if (q == kNoIndex || grid.node(q).magnitude > j - 1) continue;
          report.violations.push_back({6, p.coord,
                                       "incompatible neighbor " + to_string(grid.node(q).coord) + " of magnitude " +
                                           std::to_string(grid.node(q).magnitude) + " (r=" + std::to_string(r) +
                                           ", j=" + std::to_string(j) + ")" + at});
          break;
        }
      }
    }
  }
  return report;
}

}  // namespace kgrid
