#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

#include "kgrid/grid.hpp"
#include "kgrid/generate.hpp"
#include "kgrid/tau.hpp"

namespace kgrid {

struct SolutionSet {
  std::vector<Connections> solutions;
  bool exhausted = true;  // false when `limit` cut the search short

  std::size_t size() const { return solutions.size(); }
};

namespace detail {

// Depth-first assignment of multiplicities to the grid's edges in
// canonical order. Each node tracks its residual and the capacity still
// reachable through unassigned, unblocked edges; a node whose residual
// exceeds that capacity cuts the branch.
class SolutionSearch {
 public:
  SolutionSearch(const NumberedGrid& grid, std::optional<std::size_t> limit)
      : grid_(grid),
        k_(grid.k()),
        limit_(limit),
        mult_(grid.edge_count(), 0),
        blockers_(grid.edge_count(), 0),
        residual_(grid.size()),
        open_capacity_(grid.size(), 0) {
    for (std::size_t i = 0; i < grid.size(); ++i) residual_[i] = grid.node(static_cast<int>(i)).magnitude;
    for (std::size_t e = 0; e < grid.edge_count(); ++e) {
      auto [a, b] = grid.edge_nodes(static_cast<int>(e));
      open_capacity_[static_cast<std::size_t>(a)] += k_;
      open_capacity_[static_cast<std::size_t>(b)] += k_;
    }
  }

  SolutionSet run() {
    bool viable = true;
    for (std::size_t i = 0; i < grid_.size(); ++i) viable = viable && residual_[i] <= open_capacity_[i];
    if (viable) descend(0);
    SolutionSet out;
    out.exhausted = !limit_ || found_.size() <= *limit_;
    if (limit_ && found_.size() > *limit_) found_.resize(*limit_);
    out.solutions = std::move(found_);
    return out;
  }

 private:
  bool stop() const { return limit_ && found_.size() > *limit_; }

  bool fits(int v) const { return residual_[static_cast<std::size_t>(v)] <= open_capacity_[static_cast<std::size_t>(v)]; }

  // A complete component can never gain members; unless it already holds
  // every node the branch is dead.
  bool sealed_off(int start) {
    if (residual_[static_cast<std::size_t>(start)] != 0) return false;
    std::vector<int> stack{start};
    std::vector<char> seen(grid_.size(), 0);
    seen[static_cast<std::size_t>(start)] = 1;
    std::size_t members = 0;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      ++members;
      if (residual_[static_cast<std::size_t>(v)] != 0) return false;
      for (Direction d : kDirections) {
        int e = grid_.edge_index(v, d);
        if (e == kNoIndex || mult_[static_cast<std::size_t>(e)] == 0) continue;
        int w = grid_.neighbor_index(v, d);
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          stack.push_back(w);
        }
      }
    }
    return members < grid_.size();
  }

  void record() {
    if (!check_solved(grid_, mult_)) return;
    Connections c;
    for (std::size_t e = 0; e < mult_.size(); ++e)
      if (mult_[e] > 0) c.emplace(grid_.edge(static_cast<int>(e)), mult_[e]);
    found_.push_back(std::move(c));
  }

  void descend(std::size_t e) {
    if (stop()) return;
    if (e == mult_.size()) {
      record();
      return;
    }
    const int ei = static_cast<int>(e);
    auto [a, b] = grid_.edge_nodes(ei);
    const auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
    const bool blocked = blockers_[e] > 0;
    const int own = blocked ? 0 : k_;
    open_capacity_[ua] -= own;
    open_capacity_[ub] -= own;

    if (fits(a) && fits(b)) descend(e + 1);

    const int top = blocked ? 0 : std::min({k_, residual_[ua], residual_[ub]});
    if (top > 0) {
      // Later crossing edges lose their capacity while this edge is used.
      std::vector<int> newly_blocked;
      bool ok = true;
      for (int f : grid_.crossing_edges(ei)) {
        if (f <= ei) continue;
        if (blockers_[static_cast<std::size_t>(f)]++ == 0) {
          newly_blocked.push_back(f);
          auto [c, d] = grid_.edge_nodes(f);
          open_capacity_[static_cast<std::size_t>(c)] -= k_;
          open_capacity_[static_cast<std::size_t>(d)] -= k_;
          ok = ok && fits(c) && fits(d);
        }
      }
      for (int m = 1; m <= top && ok && !stop(); ++m) {
        mult_[e] = m;
        residual_[ua] -= m;
        residual_[ub] -= m;
        if (fits(a) && fits(b) && !sealed_off(a) && !sealed_off(b)) descend(e + 1);
        residual_[ua] += m;
        residual_[ub] += m;
      }
      mult_[e] = 0;
      for (int f : grid_.crossing_edges(ei)) {
        if (f <= ei) continue;
        if (--blockers_[static_cast<std::size_t>(f)] == 0) {
          auto [c, d] = grid_.edge_nodes(f);
          open_capacity_[static_cast<std::size_t>(c)] += k_;
          open_capacity_[static_cast<std::size_t>(d)] += k_;
        }
      }
    }
    open_capacity_[ua] += own;
    open_capacity_[ub] += own;
  }

  const NumberedGrid& grid_;
  int k_;
  std::optional<std::size_t> limit_;
  std::vector<int> mult_;
  std::vector<int> blockers_;
  std::vector<int> residual_;
  std::vector<int> open_capacity_;
  std::vector<Connections> found_;
};

}  // namespace detail

// All solutions of the grid, in lexicographic order of their edge
// multiplicity vectors. With a limit, at most `limit` are returned and
// `exhausted` tells whether any were left out.
inline SolutionSet enumerate_solutions(const NumberedGrid& grid, std::optional<std::size_t> limit = std::nullopt) {
  if (limit && *limit == 0) throw std::invalid_argument("solution limit must be positive");
  return detail::SolutionSearch(grid, limit).run();
}

inline constexpr int kDefaultMaxK = 8;

// Smallest k' <= k_max under which the node set is solvable. Any k-solution
// is also a (k+1)-solution, so a linear scan from 1 suffices.
inline std::optional<int> min_solvable_k(const NumberedGrid& grid, int k_max = kDefaultMaxK) {
  if (k_max < 1) throw std::invalid_argument("k_max must be at least 1");
  for (int k = 1; k <= k_max; ++k)
    if (enumerate_solutions(grid.with_k(k), 1).size() > 0) return k;
  return std::nullopt;
}

// Exactly one solution, yet tau cannot draw a single connection.
inline bool is_stall_witness(const NumberedGrid& grid) {
  const TauOutcome tau = run_tau(grid);
  return tau.status == TauStatus::Stalled && tau.trace.empty() && enumerate_solutions(grid, 2).size() == 1;
}

namespace detail {

// How far a grid is from a stall witness: forced first moves and
// guaranteed connections at the initial state, plus log2 of the solution
// count (capped).
inline double stall_distance(const NumberedGrid& grid) {
  constexpr std::size_t kCountCap = 256;
  const PuzzleState start(grid);
  int forced = 0;
  for (int i = 0; i < static_cast<int>(grid.size()); ++i) {
    const int r = grid.neighbor_count(i);
    if (r <= 1 || grid.node(i).magnitude >= r * grid.k()) {
      forced += 3;
      continue;
    }
    const auto w = omega_star(start, i);
    forced += w ? w->length() : 5;
  }
  const auto count = enumerate_solutions(grid, kCountCap).size();
  return 4.0 * forced + std::log2(static_cast<double>(std::max<std::size_t>(count, 1)));
}

}  // namespace detail

// Searches for a stall witness, spending at most `budget` candidate grids.
//
// Random mode scans generate() over seeds spec.seed, spec.seed+1, ...
// SolvableByConstruction mode anneals: each restart takes a fresh
// construction and repeatedly re-weights one or two of its pairs, keeping
// the assignment connected and crossing-free, moving toward fewer forced
// moves and fewer solutions. Every grid evaluated counts as a candidate.
// Both modes are deterministic in spec.seed.
inline std::optional<NumberedGrid> find_stall_witness(std::size_t budget, const GenSpec& spec) {
  std::size_t tried = 0;
  if (spec.mode == GenMode::Random) {
    for (std::uint64_t seed = spec.seed; tried < budget; ++seed, ++tried) {
      GenSpec candidate = spec;
      candidate.seed = seed;
      std::optional<NumberedGrid> grid;
      try {
        grid.emplace(generate(candidate));
      } catch (const GenerationFailure&) {
        continue;
      }
      if (is_stall_witness(*grid)) return grid;
    }
    return std::nullopt;
  }

  constexpr std::size_t kStepsPerRestart = 1500;
  std::mt19937_64 rng(spec.seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::uint64_t restart = 0; tried < budget; ++restart) {
    GenSpec fresh = spec;
    fresh.seed = spec.seed + restart;
    ++tried;
    std::optional<Construction> current;
    try {
      current.emplace(generate_construction(fresh));
    } catch (const GenerationFailure&) {
      continue;
    }
    NumberedGrid puzzle = current->puzzle();
    if (is_stall_witness(puzzle)) return puzzle;
    const NumberedGrid& layout = current->layout;
    bool movable = layout.edge_count() > 0;
    for (int i = 0; i < static_cast<int>(layout.size()); ++i) movable = movable && layout.neighbor_count(i) >= 2;
    if (!movable) continue;

    std::uniform_int_distribution<int> pick_edge(0, static_cast<int>(layout.edge_count()) - 1);
    std::uniform_int_distribution<int> pick_mult(0, layout.k());
    double score = detail::stall_distance(puzzle);
    double temperature = 2.0;
    for (std::size_t step = 0, proposals = 0; step < kStepsPerRestart && tried < budget && proposals < 20 * kStepsPerRestart;
         ++proposals) {
      Construction next = *current;
      next.multiplicity[static_cast<std::size_t>(pick_edge(rng))] = pick_mult(rng);
      if (unit(rng) < 0.5) next.multiplicity[static_cast<std::size_t>(pick_edge(rng))] = pick_mult(rng);
      if (next.multiplicity == current->multiplicity || !next.valid()) continue;
      ++step;
      ++tried;
      NumberedGrid candidate = next.puzzle();
      if (is_stall_witness(candidate)) return candidate;
      const double next_score = detail::stall_distance(candidate);
      if (next_score <= score || std::exp((score - next_score) / temperature) > unit(rng)) {
        current = std::move(next);
        score = next_score;
      }
      temperature = std::max(0.05, temperature * 0.995);
    }
  }
  return std::nullopt;
}

}  // namespace kgrid
