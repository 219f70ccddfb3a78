#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "kgrid/kgrid.hpp"

namespace kgrid::test {

inline NumberedGrid make_grid(int k, std::initializer_list<std::tuple<int, int, int>> nodes) {
  std::vector<Node> out;
  for (auto [x, y, n] : nodes) out.push_back({{x, y}, n});
  return NumberedGrid(k, std::move(out));
}

inline std::string fixture_dir() { return KGRID_FIXTURES; }

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::string> fixture_names() {
  std::vector<std::string> names;
  for (const auto& entry : std::filesystem::directory_iterator(fixture_dir()))
    if (entry.path().extension() == ".puzzle") names.push_back(entry.path().stem().string());
  std::sort(names.begin(), names.end());
  return names;
}

inline NumberedGrid load_fixture(const std::string& name) {
  return parse_puzzle(slurp(std::filesystem::path(fixture_dir()) / (name + ".puzzle")));
}

// Straightforward reference model, written without the library's adjacency
// tables: neighbor pairs by scanning all nodes, every assignment in 0..k tried.
namespace reference {

using Pair = std::pair<int, int>;  // node indices into the input vector

inline std::vector<Pair> neighbor_pairs(const std::vector<Node>& nodes) {
  std::vector<Pair> pairs;
  for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
    int right = -1, top = -1;
    for (int j = 0; j < static_cast<int>(nodes.size()); ++j) {
      const Coordinate a = nodes[i].coord, b = nodes[j].coord;
      if (b.y == a.y && b.x > a.x && (right < 0 || b.x < nodes[right].coord.x)) right = j;
      if (b.x == a.x && b.y > a.y && (top < 0 || b.y < nodes[top].coord.y)) top = j;
    }
    if (right >= 0) pairs.emplace_back(i, right);
    if (top >= 0) pairs.emplace_back(i, top);
  }
  return pairs;
}

inline bool crosses(const std::vector<Node>& nodes, Pair p, Pair q) {
  auto horizontal = [&](Pair e) { return nodes[e.first].coord.y == nodes[e.second].coord.y; };
  if (horizontal(p) == horizontal(q)) return false;
  const Pair h = horizontal(p) ? p : q, v = horizontal(p) ? q : p;
  const int y = nodes[h.first].coord.y, x = nodes[v.first].coord.x;
  const auto [x1, x2] = std::minmax(nodes[h.first].coord.x, nodes[h.second].coord.x);
  const auto [y1, y2] = std::minmax(nodes[v.first].coord.y, nodes[v.second].coord.y);
  return x1 < x && x < x2 && y1 < y && y < y2;
}

inline bool solved(const std::vector<Node>& nodes, int k, const std::vector<Pair>& pairs, const std::vector<int>& mult) {
  std::vector<int> deg(nodes.size(), 0);
  for (std::size_t e = 0; e < pairs.size(); ++e) {
    if (mult[e] > k) return false;
    deg[static_cast<std::size_t>(pairs[e].first)] += mult[e];
    deg[static_cast<std::size_t>(pairs[e].second)] += mult[e];
  }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (deg[i] != nodes[i].magnitude) return false;
  for (std::size_t e = 0; e < pairs.size(); ++e)
    for (std::size_t f = e + 1; f < pairs.size(); ++f)
      if (mult[e] > 0 && mult[f] > 0 && crosses(nodes, pairs[e], pairs[f])) return false;
  std::vector<bool> seen(nodes.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      if (mult[e] == 0) continue;
      int w = -1;
      if (pairs[e].first == v) w = pairs[e].second;
      if (pairs[e].second == v) w = pairs[e].first;
      if (w >= 0 && !seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = true;
        stack.push_back(w);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

// Every solution as a connection map. Exponential; keep pairs small.
inline std::set<Connections> all_solutions(const NumberedGrid& grid) {
  const std::vector<Node> nodes(grid.nodes().begin(), grid.nodes().end());
  const auto pairs = neighbor_pairs(nodes);
  std::set<Connections> out;
  std::vector<int> mult(pairs.size(), 0);
  while (true) {
    if (solved(nodes, grid.k(), pairs, mult)) {
      Connections c;
      for (std::size_t e = 0; e < pairs.size(); ++e)
        if (mult[e] > 0) c.emplace(EdgeKey(nodes[pairs[e].first].coord, nodes[pairs[e].second].coord), mult[e]);
      out.insert(c);
    }
    std::size_t pos = 0;
    while (pos < mult.size() && mult[pos] == grid.k()) mult[pos++] = 0;
    if (pos == mult.size()) break;
    ++mult[pos];
  }
  return out;
}

// Word count by listing every 4-vector in 0..k.
inline std::uint64_t count_vectors(int n, int r, int k) {
  std::uint64_t total = 0;
  std::vector<int> c(static_cast<std::size_t>(r), 0);
  while (true) {
    if (std::accumulate(c.begin(), c.end(), 0) == n) ++total;
    std::size_t pos = 0;
    while (pos < c.size() && c[pos] == k) c[pos++] = 0;
    if (pos == c.size()) break;
    ++c[pos];
  }
  return total;
}

}  // namespace reference

// Mixed-mode corpus of small grids (at most 4x4, k at most 3), deterministic.
inline std::vector<NumberedGrid> corpus(std::size_t count, std::uint64_t seed = 1) {
  std::mt19937_64 rng(seed);
  std::vector<NumberedGrid> out;
  std::uint64_t s = seed * 1000;
  while (out.size() < count) {
    GenSpec spec;
    spec.seed = s++;
    spec.width = std::uniform_int_distribution<int>(2, 4)(rng);
    spec.height = std::uniform_int_distribution<int>(2, 4)(rng);
    spec.node_density = std::uniform_real_distribution<double>(0.4, 0.9)(rng);
    spec.k = std::uniform_int_distribution<int>(1, 3)(rng);
    spec.mode = out.size() % 2 ? GenMode::SolvableByConstruction : GenMode::Random;
    try {
      out.push_back(generate(spec));
    } catch (const GenerationFailure&) {
    }
  }
  return out;
}

// Per-direction connection counts of node i under a solution.
inline std::array<int, 4> direction_counts(const NumberedGrid& grid, int i, const Connections& solution) {
  std::array<int, 4> out{};
  for (Direction d : kDirections) {
    const int j = grid.neighbor_index(i, d);
    if (j == kNoIndex) continue;
    auto it = solution.find(EdgeKey(grid.node(i).coord, grid.node(j).coord));
    if (it != solution.end()) out[index_of(d)] = it->second;
  }
  return out;
}

// One random single-record change: multiplicity +1, multiplicity -1 (the
// record disappears at 0) or one endpoint shifted by a unit step. The result
// always parses and never repeats a pair.
inline Connections perturb(const Connections& solution, std::mt19937_64& rng) {
  std::vector<std::pair<EdgeKey, int>> recs(solution.begin(), solution.end());
  while (true) {
    const std::size_t pick = std::uniform_int_distribution<std::size_t>(0, recs.size() - 1)(rng);
    const int kind = std::uniform_int_distribution<int>(0, 2)(rng);
    Connections out = solution;
    auto [key, m] = recs[pick];
    if (kind == 0) {
      out[key] = m + 1;
      return out;
    }
    if (kind == 1) {
      if (m == 1)
        out.erase(key);
      else
        out[key] = m - 1;
      return out;
    }
    static constexpr int kStep[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    const auto& step = kStep[std::uniform_int_distribution<int>(0, 3)(rng)];
    const bool move_a = std::bernoulli_distribution(0.5)(rng);
    Coordinate a = key.a, b = key.b;
    Coordinate& c = move_a ? a : b;
    c = {c.x + step[0], c.y + step[1]};
    if (c.x < 0 || c.y < 0 || a == b) continue;
    out.erase(key);
    if (!out.emplace(EdgeKey(a, b), m).second) continue;
    return out;
  }
}

}  // namespace kgrid::test
