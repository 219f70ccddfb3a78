#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kgrid/grid.hpp"

namespace kgrid {

// One connection configuration for a node: how many connections go to
// each of the four neighbors. Drawing order is irrelevant, so a word is
// fully described by its count vector.
struct ConfigWord {
  std::array<int, 4> counts{0, 0, 0, 0};

  int count(Direction d) const { return counts[index_of(d)]; }
  int& count(Direction d) { return counts[index_of(d)]; }
  int length() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
  bool zero() const { return length() == 0; }

  friend auto operator<=>(const ConfigWord&, const ConfigWord&) = default;
};

inline ConfigWord make_word(int top, int right, int bottom, int left) { return ConfigWord{{top, right, bottom, left}}; }

// Digit notation: "1123" is two Top, one Right, one Bottom. Empty word is "".
inline std::string to_string(const ConfigWord& w) {
  std::string s;
  for (Direction d : kDirections) s.append(static_cast<std::size_t>(w.count(d)), static_cast<char>('0' + static_cast<int>(d)));
  return s;
}

inline ConfigWord parse_word(const std::string& digits) {
  ConfigWord w;
  for (char c : digits) {
    if (c < '1' || c > '4') throw std::invalid_argument("bad direction digit in word: " + digits);
    ++w.counts[static_cast<std::size_t>(c - '1')];
  }
  return w;
}

using WordSet = std::vector<ConfigWord>;

namespace detail {

// All count vectors with sum n and entries in [0, cap[d]], ordered like
// their digit strings ("11" < "12" < ... < "44").
inline WordSet bounded_compositions(int n, const std::array<int, 4>& cap) {
  WordSet out;
  if (n < 0) return out;
  ConfigWord w;
  auto rec = [&](auto&& self, std::size_t pos, int left) -> void {
    if (pos == 3) {
      if (left <= cap[3]) {
        w.counts[3] = left;
        out.push_back(w);
      }
      return;
    }
    int tail_cap = 0;
    for (std::size_t j = pos + 1; j < 4; ++j) tail_cap += cap[j];
    for (int c = std::min(cap[pos], left); c >= 0 && left - c <= tail_cap; --c) {
      w.counts[pos] = c;
      self(self, pos + 1, left - c);
    }
  };
  rec(rec, 0, n);
  return out;
}

}  // namespace detail

class EmptyResult : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Every way to spread n connections over four directions with at most k
// per direction. Directions are not filtered by the grid here.
inline WordSet enumerate_phi_k(int n, int k) {
  if (n < 1 || k < 1) throw std::invalid_argument("enumerate_phi_k needs n >= 1 and k >= 1");
  if (n > 4 * k)
    throw EmptyResult("no configuration of " + std::to_string(n) + " connections with k=" + std::to_string(k));
  return detail::bounded_compositions(n, {k, k, k, k});
}

// Coefficient of x^n in (1 + x + ... + x^k)^r.
inline std::uint64_t count_configs(int n, int r, int k) {
  if (n < 0 || r < 0 || k < 0) return 0;
  if (n > r * k) return 0;
  std::vector<std::uint64_t> poly(1, 1);
  for (int step = 0; step < r; ++step) {
    std::vector<std::uint64_t> next(poly.size() + static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < poly.size(); ++i)
      for (int c = 0; c <= k; ++c) next[i + static_cast<std::size_t>(c)] += poly[i];
    poly = std::move(next);
  }
  return poly[static_cast<std::size_t>(n)];
}

// Which feasibility condition rejects `word` for node i, or 0 if it is feasible.
//   1 capacity k on the pair, 2 crossing an existing connection,
//   3 count above min(k, neighbor residual), 4 seals off a completed
//   component, 5 leaves a node incomplete with only complete neighbors.
// Conditions 4 and 5 look exactly one step ahead.
inline int feasibility_violation(const PuzzleState& state, int i, const ConfigWord& word) {
  const NumberedGrid& grid = state.grid();
  const int k = grid.k();
  for (Direction d : kDirections) {
    const int c = word.count(d);
    if (c == 0) continue;
    const int e = grid.edge_index(i, d);
    if (e != kNoIndex && state.multiplicity(e) + c > k) return 1;
  }
  for (Direction d : kDirections) {
    const int c = word.count(d);
    if (c == 0) continue;
    const int e = grid.edge_index(i, d);
    if (e != kNoIndex && state.blocked(e)) return 2;
  }
  for (Direction d : kDirections) {
    const int c = word.count(d);
    if (c == 0) continue;
    const int j = grid.neighbor_index(i, d);
    const int limit = j == kNoIndex ? 0 : std::min(k, state.residual(j));
    if (c > limit) return 3;
  }

  std::vector<int> mult(state.multiplicities().begin(), state.multiplicities().end());
  std::vector<int> residual(grid.size());
  for (std::size_t v = 0; v < grid.size(); ++v) residual[v] = state.residual(static_cast<int>(v));
  for (Direction d : kDirections) {
    const int c = word.count(d);
    if (c == 0) continue;
    mult[static_cast<std::size_t>(grid.edge_index(i, d))] += c;
    residual[static_cast<std::size_t>(i)] -= c;
    residual[static_cast<std::size_t>(grid.neighbor_index(i, d))] -= c;
  }

  const auto label = component_labels(grid, mult);
  std::vector<char> has_incomplete(grid.size(), 0);
  bool single_component = true;
  for (std::size_t v = 0; v < grid.size(); ++v) {
    if (residual[v] > 0) has_incomplete[static_cast<std::size_t>(label[v])] = 1;
    if (label[v] != label[0]) single_component = false;
  }
  if (!single_component)
    for (std::size_t v = 0; v < grid.size(); ++v)
      if (!has_incomplete[static_cast<std::size_t>(label[v])]) return 4;

  for (std::size_t v = 0; v < grid.size(); ++v) {
    if (residual[v] == 0) continue;
    bool starved = true;
    for (Direction d : kDirections) {
      const int j = grid.neighbor_index(static_cast<int>(v), d);
      if (j != kNoIndex && residual[static_cast<std::size_t>(j)] > 0) starved = false;
    }
    if (starved) return 5;
  }
  return 0;
}

inline WordSet enumerate_feasible(const PuzzleState& state, int i) {
  const int n = state.residual(i);
  const int k = state.grid().k();
  WordSet out;
  if (n < 1 || n > 4 * k) return out;
  for (const ConfigWord& w : enumerate_phi_k(n, k))
    if (feasibility_violation(state, i, w) == 0) out.push_back(w);
  return out;
}

inline WordSet enumerate_feasible(const PuzzleState& state, const Node& p) {
  return enumerate_feasible(state, state.grid().require_index(p.coord));
}

// Componentwise minimum over the feasible words: the connections node i
// receives in every feasible completion. nullopt means no feasible word
// exists, which is distinct from the zero vector (nothing guaranteed).
inline std::optional<ConfigWord> omega_star(const PuzzleState& state, int i) {
  const WordSet feasible = enumerate_feasible(state, i);
  if (feasible.empty()) return std::nullopt;
  ConfigWord meet = feasible.front();
  for (const ConfigWord& w : feasible)
    for (std::size_t d = 0; d < 4; ++d) meet.counts[d] = std::min(meet.counts[d], w.counts[d]);
  return meet;
}

inline std::optional<ConfigWord> omega_star(const PuzzleState& state, const Node& p) {
  return omega_star(state, state.grid().require_index(p.coord));
}

}  // namespace kgrid
