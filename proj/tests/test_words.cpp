#include <gtest/gtest.h>

#include "support.hpp"

using namespace kgrid;
using kgrid::test::make_grid;

namespace {

std::set<ConfigWord> words_of(std::initializer_list<const char*> digits) {
  std::set<ConfigWord> out;
  for (const char* d : digits) out.insert(parse_word(d));
  return out;
}

std::set<ConfigWord> as_set(const WordSet& w) { return {w.begin(), w.end()}; }

}  // namespace

TEST(ConfigWord, DigitNotation) {
  const ConfigWord w = parse_word("11224");
  EXPECT_EQ(w, make_word(2, 2, 0, 1));
  EXPECT_EQ(to_string(w), "11224");
  EXPECT_EQ(w.length(), 5);
  EXPECT_EQ(parse_word("42211"), w);
  EXPECT_THROW(parse_word("15"), std::invalid_argument);
}

TEST(PhiK, MagnitudeTwo) {
  const WordSet w = enumerate_phi_k(2, 2);
  EXPECT_EQ(w.size(), 10u);
  EXPECT_EQ(as_set(w), words_of({"11", "22", "33", "44", "12", "13", "14", "23", "24", "34"}));
}

TEST(PhiK, MagnitudeFive) {
  EXPECT_EQ(as_set(enumerate_phi_k(5, 2)),
            words_of({"11223", "11224", "11233", "11234", "11244", "11334", "11344", "12233", "12234", "12244",
                      "12334", "12344", "13344", "22334", "22344", "23344"}));
}

TEST(PhiK, SingleConnection) { EXPECT_EQ(enumerate_phi_k(1, 1).size(), 4u); }

TEST(PhiK, DeterministicOrder) {
  const WordSet w = enumerate_phi_k(3, 2);
  EXPECT_TRUE(std::is_sorted(w.begin(), w.end(),
                             [](const ConfigWord& a, const ConfigWord& b) { return to_string(a) < to_string(b); }));
  EXPECT_EQ(as_set(w).size(), w.size());
}

TEST(PhiK, Errors) {
  EXPECT_THROW(enumerate_phi_k(9, 2), EmptyResult);
  EXPECT_THROW(enumerate_phi_k(0, 2), std::invalid_argument);
  EXPECT_THROW(enumerate_phi_k(2, 0), std::invalid_argument);
  EXPECT_EQ(enumerate_phi_k(8, 2).size(), 1u);
}

TEST(PhiK, CardinalityMatchesCount) {
  for (int k = 1; k <= 4; ++k)
    for (int n = 1; n <= std::min(12, 4 * k); ++n)
      EXPECT_EQ(enumerate_phi_k(n, k).size(), count_configs(n, 4, k)) << n << " " << k;
}

TEST(CountConfigs, KnownValues) {
  EXPECT_EQ(count_configs(7, 4, 2), 4u);
  EXPECT_EQ(count_configs(20, 4, 10), 891u);
  EXPECT_EQ(count_configs(3, 4, 2), 16u);
  EXPECT_EQ(count_configs(3, 4, 1), 4u);
}

TEST(CountConfigs, Extremes) {
  for (int r = 1; r <= 4; ++r)
    for (int k = 1; k <= 6; ++k) {
      EXPECT_EQ(count_configs(0, r, k), 1u);
      EXPECT_EQ(count_configs(r * k, r, k), 1u);
      EXPECT_EQ(count_configs(r * k + 1, r, k), 0u);
    }
}

TEST(CountConfigs, MatchesVectorListing) {
  for (int r = 1; r <= 4; ++r)
    for (int k = 1; k <= 4; ++k)
      for (int n = 0; n <= r * k + 1; ++n)
        EXPECT_EQ(count_configs(n, r, k), kgrid::test::reference::count_vectors(n, r, k));
}

TEST(CountConfigs, RowSymmetry) {
  for (int r = 1; r <= 4; ++r)
    for (int k = 1; k <= 8; ++k)
      for (int n = 0; n <= r * k; ++n) EXPECT_EQ(count_configs(n, r, k), count_configs(r * k - n, r, k));
}

class WorkedExample : public ::testing::Test {
 protected:
  NumberedGrid grid = kgrid::test::load_fixture("worked-example");
  PuzzleState state{grid};
  int p = grid.require_index({0, 0});
  int q = grid.require_index({2, 1});
};

TEST_F(WorkedExample, CornerHasOneFeasibleWord) {
  EXPECT_EQ(as_set(enumerate_feasible(state, p)), words_of({"12"}));
  EXPECT_EQ(omega_star(state, p), parse_word("12"));
}

TEST_F(WorkedExample, CornerRejectionReasons) {
  for (const ConfigWord& w : enumerate_phi_k(2, 2)) {
    const std::string s = to_string(w);
    const int expected = s == "12" ? 0 : (s == "11" || s == "22") ? 4 : 3;
    EXPECT_EQ(feasibility_violation(state, p, w), expected) << s;
  }
}

TEST_F(WorkedExample, CenterAfterCornerConnections) {
  const PuzzleState next = apply_builder(state, p, parse_word("12"));
  EXPECT_EQ(next.residual(q), 5);
  EXPECT_EQ(as_set(enumerate_feasible(next, q)), words_of({"11223", "11224", "11234", "12234"}));
  for (const ConfigWord& w : enumerate_phi_k(5, 2)) {
    const std::string s = to_string(w);
    if (s.find("33") != std::string::npos) {
      EXPECT_EQ(feasibility_violation(next, q, w), 3) << s;
    } else if (s.find("44") != std::string::npos) {
      EXPECT_EQ(feasibility_violation(next, q, w), 5) << s;
    }
  }
  EXPECT_EQ(omega_star(next, q), parse_word("12"));
}

TEST(Feasible, SquareCornerRejectsDoubles) {
  const auto g = make_grid(2, {{0, 0, 2}, {1, 0, 2}, {0, 1, 2}, {1, 1, 2}});
  PuzzleState s(g);
  const int p = g.require_index({0, 0});
  EXPECT_EQ(feasibility_violation(s, p, parse_word("11")), 4);
  EXPECT_EQ(feasibility_violation(s, p, parse_word("22")), 4);
  EXPECT_EQ(as_set(enumerate_feasible(s, p)), words_of({"12"}));
}

TEST(Feasible, SingleNeighborForced) {
  // (0,0)-(1,0) already joined; (2,0) has one connection left toward (1,0).
  const auto g = make_grid(1, {{0, 0, 1}, {1, 0, 2}, {2, 0, 1}});
  const auto s = add_connections(PuzzleState(g), EdgeKey({0, 0}, {1, 0}), 1);
  const int i = g.require_index({2, 0});
  EXPECT_EQ(as_set(enumerate_feasible(s, i)), words_of({"4"}));
  EXPECT_EQ(omega_star(s, i), parse_word("4"));
}

TEST(Feasible, SingleNeighborGuarantee) {
  const auto g = make_grid(3, {{0, 0, 2}, {0, 4, 5}, {3, 4, 3}});
  const int i = g.require_index({0, 0});
  EXPECT_EQ(omega_star(PuzzleState(g), i), parse_word("11"));
}

TEST(Feasible, CrossingBlocksWord) {
  const auto g = make_grid(1, {{0, 1, 1}, {2, 1, 1}, {1, 0, 1}, {1, 2, 1}});
  const auto s = add_connections(PuzzleState(g), EdgeKey({0, 1}, {2, 1}), 1);
  EXPECT_EQ(feasibility_violation(s, g.require_index({1, 0}), parse_word("1")), 2);
  EXPECT_FALSE(omega_star(s, g.require_index({1, 0})));
}

TEST(Feasible, CapacityCondition) {
  const auto g = make_grid(2, {{0, 0, 3}, {1, 0, 3}, {0, 1, 1}});
  const auto s = add_connections(PuzzleState(g), EdgeKey({0, 0}, {1, 0}), 2);
  EXPECT_EQ(feasibility_violation(s, g.require_index({0, 0}), parse_word("2")), 1);
}

TEST(Feasible, SubsetOfPhiK) {
  for (const auto& g : kgrid::test::corpus(80, 21)) {
    PuzzleState s(g);
    for (int i = 0; i < static_cast<int>(g.size()); ++i) {
      if (g.node(i).magnitude > 4 * g.k()) continue;
      const auto all = as_set(enumerate_phi_k(g.node(i).magnitude, g.k()));
      for (const ConfigWord& w : enumerate_feasible(s, i)) EXPECT_TRUE(all.count(w));
    }
  }
}

TEST(OmegaStar, SoundAgainstReferenceSolutions) {
  std::size_t checked = 0;
  for (const auto& g : kgrid::test::corpus(150, 22)) {
    if (g.edge_count() > 9) continue;
    const auto solutions = kgrid::test::reference::all_solutions(g);
    if (solutions.empty()) continue;
    PuzzleState s(g);
    for (int i = 0; i < static_cast<int>(g.size()); ++i) {
      const auto w = omega_star(s, i);
      ASSERT_TRUE(w);
      for (const auto& sol : solutions) {
        const auto counts = kgrid::test::direction_counts(g, i, sol);
        for (int d = 0; d < 4; ++d) EXPECT_LE(w->counts[d], counts[d]);
      }
      ++checked;
    }
  }
  EXPECT_GT(checked, 100u);
}
