#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "kgrid/grid.hpp"

namespace kgrid {

enum class GenMode { Random, SolvableByConstruction };

struct GenSpec {
  std::uint64_t seed = 0;
  int width = 4;
  int height = 4;
  double node_density = 0.7;
  int k = 2;
  GenMode mode = GenMode::Random;
};

class GenerationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A node layout together with a connected, non-crossing multiplicity
// assignment on its neighbor pairs. Setting every magnitude to the node's
// degree yields a puzzle that this assignment solves.
struct Construction {
  NumberedGrid layout;
  std::vector<int> multiplicity;  // indexed by layout edge

  // True when the assignment is connected, crossing-free, within 1..k where
  // positive, and gives every node at least one connection.
  bool valid() const {
    std::vector<int> deg(layout.size(), 0);
    for (std::size_t e = 0; e < multiplicity.size(); ++e) {
      const int m = multiplicity[e];
      if (m < 0 || m > layout.k()) return false;
      if (m == 0) continue;
      for (int f : layout.crossing_edges(static_cast<int>(e)))
        if (multiplicity[static_cast<std::size_t>(f)] > 0) return false;
      auto [a, b] = layout.edge_nodes(static_cast<int>(e));
      deg[static_cast<std::size_t>(a)] += m;
      deg[static_cast<std::size_t>(b)] += m;
    }
    if (std::find(deg.begin(), deg.end(), 0) != deg.end()) return false;
    const auto label = component_labels(layout, multiplicity);
    return std::all_of(label.begin(), label.end(), [&](int l) { return l == label.front(); });
  }

  NumberedGrid puzzle() const {
    std::vector<Node> nodes(layout.nodes().begin(), layout.nodes().end());
    for (Node& n : nodes) n.magnitude = 0;
    for (std::size_t e = 0; e < multiplicity.size(); ++e) {
      auto [a, b] = layout.edge_nodes(static_cast<int>(e));
      nodes[static_cast<std::size_t>(a)].magnitude += multiplicity[e];
      nodes[static_cast<std::size_t>(b)].magnitude += multiplicity[e];
    }
    return NumberedGrid(layout.k(), std::move(nodes));
  }

  Connections connections() const {
    Connections out;
    for (std::size_t e = 0; e < multiplicity.size(); ++e)
      if (multiplicity[e] > 0) out.emplace(layout.edge(static_cast<int>(e)), multiplicity[e]);
    return out;
  }
};

namespace detail {

inline std::vector<Coordinate> place_nodes(std::mt19937_64& rng, const GenSpec& spec) {
  std::bernoulli_distribution keep(spec.node_density);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<Coordinate> coords;
    for (int y = 0; y < spec.height; ++y)
      for (int x = 0; x < spec.width; ++x)
        if (keep(rng)) coords.push_back({x, y});
    if (coords.size() >= 2) return coords;
  }
  throw GenerationFailure("could not place two nodes");
}

inline std::vector<Node> unit_nodes(const std::vector<Coordinate>& coords) {
  std::vector<Node> nodes;
  for (Coordinate c : coords) nodes.push_back({c, 1});
  return nodes;
}

// Magnitudes are uniform in 1..min(4k, r*k) so no node violates the r*k bound outright.
inline NumberedGrid generate_random(std::mt19937_64& rng, const GenSpec& spec) {
  std::vector<Node> nodes = unit_nodes(place_nodes(rng, spec));
  const NumberedGrid layout(spec.k, nodes);
  for (Node& n : nodes) {
    const int r = layout.neighbor_count(layout.require_index(n.coord));
    const int hi = std::max(1, std::min(4 * spec.k, r * spec.k));
    n.magnitude = std::uniform_int_distribution<int>(1, hi)(rng);
  }
  return NumberedGrid(spec.k, std::move(nodes));
}

// Random spanning forest (Kruskal over shuffled, non-crossing pairs), a
// few extra pairs, multiplicities uniform in 1..k; the largest component
// becomes the puzzle.
inline Construction build_construction(std::mt19937_64& rng, const GenSpec& spec) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const NumberedGrid layout(spec.k, unit_nodes(place_nodes(rng, spec)));

    std::vector<int> order(layout.edge_count());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<int> mult(layout.edge_count(), 0);
    auto crosses_chosen = [&](int e) {
      for (int f : layout.crossing_edges(e))
        if (mult[static_cast<std::size_t>(f)] > 0) return true;
      return false;
    };
    std::vector<int> parent(layout.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
      while (parent[static_cast<std::size_t>(v)] != v)
        v = parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      return v;
    };
    std::uniform_int_distribution<int> multiplicity(1, spec.k);
    for (int e : order) {
      auto [a, b] = layout.edge_nodes(e);
      if (find(a) == find(b) || crosses_chosen(e)) continue;
      parent[static_cast<std::size_t>(find(a))] = find(b);
      mult[static_cast<std::size_t>(e)] = multiplicity(rng);
    }
    std::bernoulli_distribution extra(0.35);
    for (int e : order)
      if (mult[static_cast<std::size_t>(e)] == 0 && !crosses_chosen(e) && extra(rng))
        mult[static_cast<std::size_t>(e)] = multiplicity(rng);

    std::map<int, int> sizes;
    for (std::size_t i = 0; i < layout.size(); ++i) ++sizes[find(static_cast<int>(i))];
    int root = -1, best = 0;
    for (auto [r, s] : sizes)
      if (s > best) best = s, root = r;
    if (best < 2) continue;

    // Dropped nodes never sit between two kept neighbors, so every chosen
    // pair is still a neighbor pair of the reduced layout.
    std::vector<Node> kept;
    for (std::size_t i = 0; i < layout.size(); ++i)
      if (find(static_cast<int>(i)) == root) kept.push_back(layout.node(static_cast<int>(i)));
    NumberedGrid reduced(spec.k, std::move(kept));
    std::vector<int> reduced_mult(reduced.edge_count(), 0);
    for (std::size_t e = 0; e < mult.size(); ++e)
      if (mult[e] > 0 && find(layout.edge_nodes(static_cast<int>(e)).first) == root) reduced_mult[static_cast<std::size_t>(*reduced.find_edge(layout.edge(static_cast<int>(e))))] = mult[e];
    return Construction{std::move(reduced), std::move(reduced_mult)};
  }
  throw GenerationFailure("could not build a connected instance");
}

inline void check_spec(const GenSpec& spec) {
  if (spec.width < 1 || spec.height < 1 || spec.k < 1 || !(spec.node_density > 0.0) || spec.node_density > 1.0)
    throw std::invalid_argument("invalid generator spec");
  if (static_cast<long long>(spec.width) * spec.height < 2) throw GenerationFailure("lattice holds fewer than two nodes");
}

}  // namespace detail

// A solvable instance together with its witness solution. Deterministic in spec.seed.
inline Construction generate_construction(const GenSpec& spec) {
  detail::check_spec(spec);
  std::mt19937_64 rng(spec.seed);
  return detail::build_construction(rng, spec);
}

// Deterministic in spec.seed.
inline NumberedGrid generate(const GenSpec& spec) {
  detail::check_spec(spec);
  std::mt19937_64 rng(spec.seed);
  return spec.mode == GenMode::Random ? detail::generate_random(rng, spec) : detail::build_construction(rng, spec).puzzle();
}

}  // namespace kgrid
