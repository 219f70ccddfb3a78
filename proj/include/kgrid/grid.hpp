#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kgrid {

// Lattice position. y grows upward: the Top neighbor has the larger y.
struct Coordinate {
  int x = 0;
  int y = 0;

  friend constexpr auto operator<=>(const Coordinate&, const Coordinate&) = default;
};

inline std::string to_string(Coordinate c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + ")";
}

// Scan order used wherever a deterministic node order matters.
constexpr bool row_major_less(Coordinate a, Coordinate b) {
  return a.y != b.y ? a.y < b.y : a.x < b.x;
}

struct Node {
  Coordinate coord;
  int magnitude = 1;

  friend constexpr bool operator==(const Node&, const Node&) = default;
};

enum class Direction : int { Top = 1, Right = 2, Bottom = 3, Left = 4 };

inline constexpr std::array<Direction, 4> kDirections = {
    Direction::Top, Direction::Right, Direction::Bottom, Direction::Left};

constexpr std::size_t index_of(Direction d) { return static_cast<std::size_t>(d) - 1; }

constexpr Direction opposite(Direction d) {
  switch (d) {
    case Direction::Top: return Direction::Bottom;
    case Direction::Right: return Direction::Left;
    case Direction::Bottom: return Direction::Top;
    case Direction::Left: return Direction::Right;
  }
  return d;
}

inline const char* name_of(Direction d) {
  switch (d) {
    case Direction::Top: return "top";
    case Direction::Right: return "right";
    case Direction::Bottom: return "bottom";
    case Direction::Left: return "left";
  }
  return "?";
}

// Unordered neighbor pair, stored with a < b.
struct EdgeKey {
  Coordinate a;
  Coordinate b;

  EdgeKey() = default;
  EdgeKey(Coordinate p, Coordinate q) : a(std::min(p, q)), b(std::max(p, q)) {}

  bool horizontal() const { return a.y == b.y; }

  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

inline std::string to_string(const EdgeKey& e) { return to_string(e.a) + "-" + to_string(e.b); }

// Strict interior crossing of two axis-aligned neighbor segments.
inline bool segments_cross(const EdgeKey& e1, const EdgeKey& e2) {
  if (e1.horizontal() == e2.horizontal()) return false;
  const EdgeKey& h = e1.horizontal() ? e1 : e2;
  const EdgeKey& v = e1.horizontal() ? e2 : e1;
  const int x = v.a.x;
  const int y = h.a.y;
  return h.a.x < x && x < h.b.x && v.a.y < y && y < v.b.y;
}

class GridError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kNoIndex = -1;

// Immutable puzzle instance. Nodes are kept in row-major order and all
// neighbor pairs are precomputed as an indexed edge list in EdgeKey order.
class NumberedGrid {
 public:
  NumberedGrid(int k, std::vector<Node> nodes) : k_(k), nodes_(std::move(nodes)) {
    if (k_ < 1) throw GridError("k must be at least 1");
    if (nodes_.empty()) throw GridError("grid has no nodes");
    for (const Node& n : nodes_) {
      if (n.coord.x < 0 || n.coord.y < 0)
        throw GridError("negative coordinate at " + to_string(n.coord));
      if (n.magnitude < 1) throw GridError("magnitude below 1 at " + to_string(n.coord));
    }
    std::sort(nodes_.begin(), nodes_.end(),
              [](const Node& a, const Node& b) { return row_major_less(a.coord, b.coord); });
    for (std::size_t i = 1; i < nodes_.size(); ++i)
      if (nodes_[i].coord == nodes_[i - 1].coord)
        throw GridError("duplicate coordinate " + to_string(nodes_[i].coord));
    build_topology();
  }

  int k() const { return k_; }
  std::size_t size() const { return nodes_.size(); }
  std::span<const Node> nodes() const { return nodes_; }
  const Node& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }

  std::optional<int> index_of(Coordinate c) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), c, [](const Node& n, Coordinate v) {
      return row_major_less(n.coord, v);
    });
    if (it == nodes_.end() || it->coord != c) return std::nullopt;
    return static_cast<int>(it - nodes_.begin());
  }

  int require_index(Coordinate c) const {
    auto i = index_of(c);
    if (!i) throw GridError("no node at " + to_string(c));
    return *i;
  }

  // Index of the neighbor of node i in direction d, or kNoIndex.
  int neighbor_index(int i, Direction d) const { return adj_[static_cast<std::size_t>(i)].node[kgrid::index_of(d)]; }
  // Index of the edge from node i in direction d, or kNoIndex.
  int edge_index(int i, Direction d) const { return adj_[static_cast<std::size_t>(i)].edge[kgrid::index_of(d)]; }

  int neighbor_count(int i) const {
    int r = 0;
    for (Direction d : kDirections) r += neighbor_index(i, d) != kNoIndex;
    return r;
  }

  std::size_t edge_count() const { return edges_.size(); }
  std::span<const EdgeKey> edges() const { return edges_; }
  const EdgeKey& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  std::pair<int, int> edge_nodes(int e) const { return edge_nodes_[static_cast<std::size_t>(e)]; }
  // Edges whose segment crosses edge e.
  std::span<const int> crossing_edges(int e) const { return crossings_[static_cast<std::size_t>(e)]; }

  std::optional<int> find_edge(const EdgeKey& key) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) return std::nullopt;
    return static_cast<int>(it - edges_.begin());
  }

  int total_magnitude() const {
    return std::accumulate(nodes_.begin(), nodes_.end(), 0,
                           [](int s, const Node& n) { return s + n.magnitude; });
  }

  // Same node set under a different connection bound.
  NumberedGrid with_k(int k) const { return NumberedGrid(k, nodes_); }

  friend bool operator==(const NumberedGrid& a, const NumberedGrid& b) {
    return a.k_ == b.k_ && a.nodes_ == b.nodes_;
  }

 private:
  struct Adjacency {
    std::array<int, 4> node{kNoIndex, kNoIndex, kNoIndex, kNoIndex};
    std::array<int, 4> edge{kNoIndex, kNoIndex, kNoIndex, kNoIndex};
  };

  void build_topology() {
    const int n = static_cast<int>(nodes_.size());
    adj_.assign(nodes_.size(), Adjacency{});
    // Row neighbors: nodes_ is row-major, so consecutive nodes in a row are adjacent.
    for (int i = 0; i + 1 < n; ++i) {
      if (nodes_[i].coord.y == nodes_[i + 1].coord.y) {
        adj_[i].node[kgrid::index_of(Direction::Right)] = i + 1;
        adj_[i + 1].node[kgrid::index_of(Direction::Left)] = i;
      }
    }
    std::vector<int> by_column(nodes_.size());
    std::iota(by_column.begin(), by_column.end(), 0);
    std::sort(by_column.begin(), by_column.end(), [&](int a, int b) { return nodes_[a].coord < nodes_[b].coord; });
    for (int t = 0; t + 1 < n; ++t) {
      int lo = by_column[t], hi = by_column[t + 1];
      if (nodes_[lo].coord.x == nodes_[hi].coord.x) {
        adj_[lo].node[kgrid::index_of(Direction::Top)] = hi;
        adj_[hi].node[kgrid::index_of(Direction::Bottom)] = lo;
      }
    }

    for (int i = 0; i < n; ++i)
      for (Direction d : {Direction::Top, Direction::Right})
        if (int j = adj_[i].node[kgrid::index_of(d)]; j != kNoIndex)
          edges_.emplace_back(nodes_[i].coord, nodes_[j].coord);
    std::sort(edges_.begin(), edges_.end());

    edge_nodes_.resize(edges_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      int a = *index_of(edges_[e].a), b = *index_of(edges_[e].b);
      edge_nodes_[e] = {a, b};
      const bool h = edges_[e].horizontal();
      adj_[a].edge[kgrid::index_of(h ? Direction::Right : Direction::Top)] = static_cast<int>(e);
      adj_[b].edge[kgrid::index_of(h ? Direction::Left : Direction::Bottom)] = static_cast<int>(e);
    }

    crossings_.assign(edges_.size(), {});
    for (std::size_t e = 0; e < edges_.size(); ++e)
      for (std::size_t f = e + 1; f < edges_.size(); ++f)
        if (segments_cross(edges_[e], edges_[f])) {
          crossings_[e].push_back(static_cast<int>(f));
          crossings_[f].push_back(static_cast<int>(e));
        }
  }

  int k_;
  std::vector<Node> nodes_;
  std::vector<Adjacency> adj_;
  std::vector<EdgeKey> edges_;
  std::vector<std::pair<int, int>> edge_nodes_;
  std::vector<std::vector<int>> crossings_;
};

// Nearest node from p in direction d, if any.
inline std::optional<Node> neighbor(const NumberedGrid& grid, const Node& p, Direction d) {
  int j = grid.neighbor_index(grid.require_index(p.coord), d);
  if (j == kNoIndex) return std::nullopt;
  return grid.node(j);
}

class ConnectionError : public std::runtime_error {
 public:
  enum class Kind { CapacityExceeded, ResidualExceeded, CrossingViolation, NotNeighbors };

  ConnectionError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// A grid plus the connections drawn so far. Copies are cheap; all
// mutation goes through add_connections, which returns a new state.
class PuzzleState {
 public:
  explicit PuzzleState(std::shared_ptr<const NumberedGrid> grid)
      : grid_(std::move(grid)), mult_(grid_->edge_count(), 0), residual_(grid_->size()) {
    for (std::size_t i = 0; i < grid_->size(); ++i) residual_[i] = grid_->node(static_cast<int>(i)).magnitude;
  }
  explicit PuzzleState(NumberedGrid grid) : PuzzleState(std::make_shared<const NumberedGrid>(std::move(grid))) {}

  const NumberedGrid& grid() const { return *grid_; }
  std::shared_ptr<const NumberedGrid> grid_ptr() const { return grid_; }

  int multiplicity(int e) const { return mult_[static_cast<std::size_t>(e)]; }
  int multiplicity(const EdgeKey& key) const {
    auto e = grid_->find_edge(key);
    return e ? multiplicity(*e) : 0;
  }
  std::span<const int> multiplicities() const { return mult_; }

  int residual(int i) const { return residual_[static_cast<std::size_t>(i)]; }
  int residual(const Node& p) const { return residual(grid_->require_index(p.coord)); }
  int degree(int i) const { return grid_->node(i).magnitude - residual(i); }
  int total_residual() const { return std::accumulate(residual_.begin(), residual_.end(), 0); }
  bool complete(int i) const { return residual(i) == 0; }

  // Multiplicity on the edge from node i in direction d (0 when absent).
  int multiplicity(int i, Direction d) const {
    int e = grid_->edge_index(i, d);
    return e == kNoIndex ? 0 : multiplicity(e);
  }

  // True when edge e crosses some edge that already carries a connection.
  bool blocked(int e) const {
    for (int f : grid_->crossing_edges(e))
      if (mult_[static_cast<std::size_t>(f)] > 0) return true;
    return false;
  }

  std::map<EdgeKey, int> connections() const {
    std::map<EdgeKey, int> out;
    for (std::size_t e = 0; e < mult_.size(); ++e)
      if (mult_[e] > 0) out.emplace(grid_->edge(static_cast<int>(e)), mult_[e]);
    return out;
  }

  PuzzleState add_connections(int e, int m) const {
    if (m < 1) throw std::invalid_argument("connection count must be positive");
    const EdgeKey& key = grid_->edge(e);
    auto [a, b] = grid_->edge_nodes(e);
    if (multiplicity(e) + m > grid_->k())
      throw ConnectionError(ConnectionError::Kind::CapacityExceeded,
                            "edge " + to_string(key) + " would exceed k=" + std::to_string(grid_->k()));
    if (residual(a) < m || residual(b) < m)
      throw ConnectionError(ConnectionError::Kind::ResidualExceeded,
                            "edge " + to_string(key) + " exceeds an endpoint residual");
    if (blocked(e))
      throw ConnectionError(ConnectionError::Kind::CrossingViolation,
                            "edge " + to_string(key) + " crosses an existing connection");
    PuzzleState next = *this;
    next.mult_[static_cast<std::size_t>(e)] += m;
    next.residual_[static_cast<std::size_t>(a)] -= m;
    next.residual_[static_cast<std::size_t>(b)] -= m;
    return next;
  }

  PuzzleState add_connections(const EdgeKey& key, int m) const {
    auto e = grid_->find_edge(key);
    if (!e)
      throw ConnectionError(ConnectionError::Kind::NotNeighbors, to_string(key) + " is not a neighbor pair");
    return add_connections(*e, m);
  }

  // FNV-1a over the multiplicity vector.
  std::uint64_t digest() const {
    std::uint64_t h = 1469598103934665603ull;
    for (int m : mult_) {
      h ^= static_cast<std::uint64_t>(m);
      h *= 1099511628211ull;
    }
    return h;
  }

  friend bool operator==(const PuzzleState& a, const PuzzleState& b) {
    return *a.grid_ == *b.grid_ && a.mult_ == b.mult_;
  }

 private:
  std::shared_ptr<const NumberedGrid> grid_;
  std::vector<int> mult_;
  std::vector<int> residual_;
};

inline int degree(const PuzzleState& state, const Node& p) {
  return state.degree(state.grid().require_index(p.coord));
}

inline PuzzleState add_connections(const PuzzleState& state, const EdgeKey& e, int m) {
  return state.add_connections(e, m);
}

// Component label per node, joining nodes along edges with positive multiplicity.
inline std::vector<int> component_labels(const NumberedGrid& grid, std::span<const int> mult) {
  std::vector<int> parent(grid.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (std::size_t e = 0; e < mult.size(); ++e) {
    if (mult[e] <= 0) continue;
    auto [a, b] = grid.edge_nodes(static_cast<int>(e));
    parent[find(a)] = find(b);
  }
  std::vector<int> label(grid.size());
  for (std::size_t i = 0; i < label.size(); ++i) label[i] = find(static_cast<int>(i));
  return label;
}

struct SolvedCheck {
  enum class Clause { None, IncompleteNode, CapacityExceeded, Crossing, Disconnected };

  bool solved = false;
  Clause failed = Clause::None;
  std::string reason;

  explicit operator bool() const { return solved; }
};

// Checks the four conditions of a solved grid on a multiplicity vector
// indexed by the grid's edge list.
inline SolvedCheck check_solved(const NumberedGrid& grid, std::span<const int> mult) {
  using Clause = SolvedCheck::Clause;
  std::vector<int> deg(grid.size(), 0);
  for (std::size_t e = 0; e < mult.size(); ++e) {
    auto [a, b] = grid.edge_nodes(static_cast<int>(e));
    deg[a] += mult[e];
    deg[b] += mult[e];
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Node& n = grid.node(static_cast<int>(i));
    if (deg[i] != n.magnitude)
      return {false, Clause::IncompleteNode,
              "incomplete node at " + to_string(n.coord) + " (degree " + std::to_string(deg[i]) +
                  ", magnitude " + std::to_string(n.magnitude) + ")"};
  }
  for (std::size_t e = 0; e < mult.size(); ++e)
    if (mult[e] > grid.k())
      return {false, Clause::CapacityExceeded, "edge " + to_string(grid.edge(static_cast<int>(e))) + " exceeds k"};
  for (std::size_t e = 0; e < mult.size(); ++e) {
    if (mult[e] <= 0) continue;
    for (int f : grid.crossing_edges(static_cast<int>(e)))
      if (mult[static_cast<std::size_t>(f)] > 0)
        return {false, Clause::Crossing,
                "crossing connections " + to_string(grid.edge(static_cast<int>(e))) + " and " +
                    to_string(grid.edge(f))};
  }
  auto label = component_labels(grid, mult);
  for (std::size_t i = 1; i < label.size(); ++i)
    if (label[i] != label[0])
      return {false, Clause::Disconnected,
              "disconnected: " + to_string(grid.node(static_cast<int>(i)).coord) + " is not linked to " +
                  to_string(grid.node(0).coord)};
  return {true, Clause::None, "solved"};
}

inline SolvedCheck is_solved(const PuzzleState& state) { return check_solved(state.grid(), state.multiplicities()); }

using Connections = std::map<EdgeKey, int>;

// Checks an explicit connection map against the grid: every key must be a
// neighbor pair with multiplicity in 1..k, then the solved-grid conditions.
inline SolvedCheck check_connections(const NumberedGrid& grid, const Connections& connections) {
  std::vector<int> mult(grid.edge_count(), 0);
  for (const auto& [key, m] : connections) {
    auto e = grid.find_edge(key);
    if (!e) return {false, SolvedCheck::Clause::IncompleteNode, to_string(key) + " is not a neighbor pair"};
    if (m < 1 || m > grid.k())
      return {false, SolvedCheck::Clause::CapacityExceeded,
              "multiplicity " + std::to_string(m) + " on " + to_string(key) + " is outside 1..k"};
    mult[static_cast<std::size_t>(*e)] = m;
  }
  return check_solved(grid, mult);
}

// Structural invariants of a state; returns a description of the first
// broken one. Used by tests as a debug validator.
inline std::optional<std::string> validate(const PuzzleState& state) {
  const NumberedGrid& grid = state.grid();
  std::vector<int> deg(grid.size(), 0);
  for (std::size_t e = 0; e < grid.edge_count(); ++e) {
    const int m = state.multiplicity(static_cast<int>(e));
    if (m < 0 || m > grid.k()) return "multiplicity out of range on " + to_string(grid.edge(static_cast<int>(e)));
    if (m > 0 && state.blocked(static_cast<int>(e))) return "crossing at " + to_string(grid.edge(static_cast<int>(e)));
    auto [a, b] = grid.edge_nodes(static_cast<int>(e));
    deg[static_cast<std::size_t>(a)] += m;
    deg[static_cast<std::size_t>(b)] += m;
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const int residual = grid.node(static_cast<int>(i)).magnitude - deg[i];
    if (residual != state.residual(static_cast<int>(i)) || residual < 0)
      return "residual mismatch at " + to_string(grid.node(static_cast<int>(i)).coord);
  }
  return std::nullopt;
}

}  // namespace kgrid
