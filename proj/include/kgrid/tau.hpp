#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "kgrid/grid.hpp"
#include "kgrid/screens.hpp"
#include "kgrid/words.hpp"

namespace kgrid {

enum class TauRule { FullSaturation, SingleNeighbor, OneIncompleteNeighbor, OmegaStar };

inline const char* name_of(TauRule rule) {
  switch (rule) {
    case TauRule::FullSaturation: return "R1_FullSaturation";
    case TauRule::SingleNeighbor: return "R2_SingleNeighbor";
    case TauRule::OneIncompleteNeighbor: return "R3_OneIncompleteNeighbor";
    case TauRule::OmegaStar: return "R4_OmegaStar";
  }
  return "?";
}

struct TauStep {
  Coordinate node;
  TauRule rule;
  ConfigWord word;
  std::vector<std::pair<EdgeKey, int>> added;  // connections drawn by this step
  std::uint64_t digest = 0;                     // state after the step
};

enum class TauStatus { Solved, Stalled, Unsolvable };

inline const char* name_of(TauStatus s) {
  switch (s) {
    case TauStatus::Solved: return "solved";
    case TauStatus::Stalled: return "stalled";
    case TauStatus::Unsolvable: return "unsolvable";
  }
  return "?";
}

struct TauOutcome {
  TauStatus status;
  PuzzleState final_state;
  std::vector<TauStep> trace;
  std::string reason;
  ScreenReport screen;
};

// Builder function: draws the connections of `word` from node i and
// lowers the residuals on both ends. Throws ConnectionError if any edge
// violates capacity, residual or crossing constraints.
inline PuzzleState apply_builder(const PuzzleState& state, int i, const ConfigWord& word) {
  PuzzleState next = state;
  for (Direction d : kDirections) {
    const int c = word.count(d);
    if (c == 0) continue;
    const int e = state.grid().edge_index(i, d);
    if (e == kNoIndex)
      throw ConnectionError(ConnectionError::Kind::NotNeighbors,
                            to_string(state.grid().node(i).coord) + " has no " + name_of(d) + " neighbor");
    next = next.add_connections(e, c);
  }
  return next;
}

inline PuzzleState apply_builder(const PuzzleState& state, const Node& p, const ConfigWord& word) {
  return apply_builder(state, state.grid().require_index(p.coord), word);
}

namespace detail {

class TauRunner {
 public:
  explicit TauRunner(const NumberedGrid& grid) : state_(grid), k_(grid.k()) {}

  TauOutcome run() {
    ScreenReport report = screen(state_.grid());
    if (report.unsolvable()) {
      std::string reason = report.violations.front().message;
      return finish(TauStatus::Unsolvable, std::move(reason), std::move(report));
    }

    while (state_.total_residual() > 0) {
      if (failure_) return finish(TauStatus::Unsolvable, *failure_, std::move(report));
      if (try_forced()) continue;
      if (failure_) return finish(TauStatus::Unsolvable, *failure_, std::move(report));
      if (!try_omega_star()) break;
    }
    if (failure_) return finish(TauStatus::Unsolvable, *failure_, std::move(report));
    if (state_.total_residual() > 0)
      return finish(TauStatus::Stalled, "no guaranteed connection remains", std::move(report));
    SolvedCheck check = is_solved(state_);
    if (!check) return finish(TauStatus::Unsolvable, check.reason, std::move(report));
    return finish(TauStatus::Solved, "", std::move(report));
  }

 private:
  int node_count() const { return static_cast<int>(state_.grid().size()); }

  // Connections still available on the pair in direction d, ignoring the
  // neighbor's residual.
  int pair_capacity(int i, Direction d) const {
    const int e = state_.grid().edge_index(i, d);
    if (e == kNoIndex || state_.blocked(e)) return 0;
    return k_ - state_.multiplicity(e);
  }

  // Sends all of node i's residual in direction d, failing if the pair or
  // the neighbor cannot take it.
  bool push_all(int i, Direction d, TauRule rule) {
    const int residual = state_.residual(i);
    const int j = state_.grid().neighbor_index(i, d);
    if (residual > std::min(pair_capacity(i, d), state_.residual(j))) {
      failure_ = to_string(state_.grid().node(i).coord) + " cannot place its remaining " +
                 std::to_string(residual) + " connections toward " + name_of(d);
      return false;
    }
    ConfigWord w;
    w.count(d) = residual;
    apply(i, w, rule);
    return true;
  }

  bool try_forced() {
    const NumberedGrid& grid = state_.grid();
    const int n = node_count();

    // R1: the remaining pair capacity exactly matches the residual. Nodes
    // with a single neighbor are left to R2, which draws the same connections.
    for (int i = 0; i < n; ++i) {
      if (state_.complete(i) || grid.neighbor_count(i) == 1) continue;
      ConfigWord w;
      for (Direction d : kDirections) w.count(d) = pair_capacity(i, d);
      if (w.length() < state_.residual(i)) {
        failure_ = to_string(grid.node(i).coord) + " has residual " + std::to_string(state_.residual(i)) +
                   " but only " + std::to_string(w.length()) + " free pair capacity";
        return false;
      }
      if (w.length() != state_.residual(i)) continue;
      for (Direction d : kDirections) {
        const int j = grid.neighbor_index(i, d);
        if (w.count(d) > 0 && w.count(d) > state_.residual(j)) {
          failure_ = to_string(grid.node(i).coord) + " must saturate its " + name_of(d) + " pair but " +
                     to_string(grid.node(j).coord) + " lacks residual";
          return false;
        }
      }
      apply(i, w, TauRule::FullSaturation);
      return true;
    }

    // R2: only one neighbor exists.
    for (int i = 0; i < n; ++i) {
      if (state_.complete(i) || grid.neighbor_count(i) != 1) continue;
      for (Direction d : kDirections)
        if (grid.neighbor_index(i, d) != kNoIndex) return push_all(i, d, TauRule::SingleNeighbor);
    }

    // R3: only one neighbor is still incomplete.
    for (int i = 0; i < n; ++i) {
      if (state_.complete(i)) continue;
      int open = 0;
      Direction target = Direction::Top;
      for (Direction d : kDirections) {
        const int j = grid.neighbor_index(i, d);
        if (j != kNoIndex && !state_.complete(j)) {
          ++open;
          target = d;
        }
      }
      if (open == 0) {
        failure_ = to_string(grid.node(i).coord) + " is incomplete but every neighbor is complete";
        return false;
      }
      if (open == 1) return push_all(i, target, TauRule::OneIncompleteNeighbor);
    }
    return false;
  }

  // R4: apply omega* of the best-ranked node with a non-zero guarantee.
  bool try_omega_star() {
    const NumberedGrid& grid = state_.grid();
    using Key = std::tuple<int, int, int, int>;
    std::optional<std::pair<Key, std::pair<int, ConfigWord>>> best;
    for (int i = 0; i < node_count(); ++i) {
      if (state_.complete(i)) continue;
      auto w = omega_star(state_, i);
      if (!w) {
        failure_ = to_string(grid.node(i).coord) + " has no feasible configuration";
        return false;
      }
      if (w->zero()) continue;
      const int r = grid.neighbor_count(i);
      const Coordinate c = grid.node(i).coord;
      // Fewest neighbors first, then magnitudes farthest from the row peak.
      Key key{r, -std::abs(state_.residual(i) - r * k_ / 2), c.y, c.x};
      if (!best || key < best->first) best = {key, {i, *w}};
    }
    if (!best) return false;
    apply(best->second.first, best->second.second, TauRule::OmegaStar);
    return true;
  }

  void apply(int i, const ConfigWord& w, TauRule rule) {
    const NumberedGrid& grid = state_.grid();
    state_ = apply_builder(state_, i, w);
    TauStep step{grid.node(i).coord, rule, w, {}, state_.digest()};
    for (Direction d : kDirections)
      if (w.count(d) > 0) step.added.emplace_back(grid.edge(grid.edge_index(i, d)), w.count(d));
    trace_.push_back(std::move(step));
  }

  TauOutcome finish(TauStatus status, std::string reason, ScreenReport report) {
    return TauOutcome{status, state_, std::move(trace_), std::move(reason), std::move(report)};
  }

  PuzzleState state_;
  int k_;
  std::vector<TauStep> trace_;
  std::optional<std::string> failure_;
};

}  // namespace detail

// Iterated guaranteed-connection propagation. Forced rules are re-checked
// after every mutation in priority order; omega* is applied one node at a
// time so each guarantee is computed against the current state.
inline TauOutcome run_tau(const NumberedGrid& grid) { return detail::TauRunner(grid).run(); }

}  // namespace kgrid
