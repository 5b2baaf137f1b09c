#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "nfold/diagram.hpp"
#include "nfold/util.hpp"

using namespace nfold;

namespace {

// Independent oracle: guillotine count over the multiset of side lengths.
// f(sides) = sum over axes and proper cut offsets of f(lower) * f(upper).
long long guillotine_count(std::vector<int> sides,
                           std::map<std::vector<int>, long long>& memo) {
  std::sort(sides.begin(), sides.end());
  auto it = memo.find(sides);
  if (it != memo.end()) return it->second;
  long long total = 0;
  bool unit = true;
  for (int s : sides)
    if (s > 1) unit = false;
  if (unit) {
    total = 1;
  } else {
    for (std::size_t d = 0; d < sides.size(); ++d) {
      for (int cut = 1; cut < sides[d]; ++cut) {
        std::vector<int> lower = sides, upper = sides;
        lower[d] = cut;
        upper[d] = sides[d] - cut;
        total += guillotine_count(lower, memo) * guillotine_count(upper, memo);
      }
    }
  }
  memo[sides] = total;
  return total;
}

long long guillotine_count(const std::vector<int>& sides) {
  std::map<std::vector<int>, long long> memo;
  return guillotine_count(sides, memo);
}

TreePtr cell2(int x, int y) { return make_leaf({x, y}); }

}  // namespace

TEST_CASE("make_grid basics") {
  CHECK(make_grid({2, 2}).cell_count() == 4);
  CHECK(make_grid({3}).cell_count() == 3);
  CHECK(make_grid({2, 2, 2}).cell_count() == 8);
  CHECK(make_grid({2, 2}).cells().size() == 4);
  CHECK_THROWS_AS(make_grid({}), InputError);
  CHECK_THROWS_AS(make_grid({2, 0}), InputError);
  CHECK_THROWS_AS(make_grid({-1}), InputError);
}

TEST_CASE("enumerate_trees matches the guillotine recursion oracle") {
  CHECK(enumerate_trees(make_grid({3})).size() == 2);
  CHECK(enumerate_trees(make_grid({4})).size() == 5);
  CHECK(enumerate_trees(make_grid({2, 2})).size() == 2);
  CHECK(enumerate_trees(make_grid({2, 3})).size() == 8);
  CHECK(enumerate_trees(make_grid({2, 2, 2})).size() == 12);

  // Every grid with at most 12 cells and arity <= 3.
  for (int a = 1; a <= 12; ++a)
    for (int b = 1; a * b <= 12; ++b)
      for (int c = 1; a * b * c <= 12; ++c) {
        GluingDiagram grid = make_grid({a, b, c});
        auto trees = enumerate_trees(grid);
        long long expected = guillotine_count({a, b, c});
        CAPTURE(a);
        CAPTURE(b);
        CAPTURE(c);
        CHECK(static_cast<long long>(trees.size()) == expected);
        CHECK(count_trees(grid) == expected);
        // Enumeration yields pairwise distinct valid trees.
        std::set<std::string> keys;
        for (const auto& t : trees) {
          keys.insert(tree_key(t));
          CHECK(validate_tree(t, grid).ok);
        }
        CHECK(keys.size() == trees.size());
      }
}

TEST_CASE("enumerate_trees respects the capacity cap") {
  CHECK_THROWS_AS(enumerate_trees(make_grid({12}), 10), CapacityError);
}

TEST_CASE("validate_tree accepts rows-then-columns on 2x2") {
  auto t = make_node(2, make_node(1, cell2(0, 0), cell2(1, 0)),
                     make_node(1, cell2(0, 1), cell2(1, 1)));
  CHECK(validate_tree(t, make_grid({2, 2})).ok);
}

TEST_CASE("validate_tree rejects structural defects") {
  // Merging non-adjacent cells.
  auto bad_adjacency = make_node(2, make_node(1, cell2(0, 0), cell2(1, 1)),
                                 make_node(1, cell2(0, 1), cell2(1, 0)));
  auto r1 = validate_tree(bad_adjacency, make_grid({2, 2}));
  CHECK_FALSE(r1.ok);
  CHECK_FALSE(r1.issues.empty());

  // Duplicated leaf.
  auto dup = make_node(2, make_node(1, cell2(0, 0), cell2(1, 0)),
                       make_node(1, cell2(0, 0), cell2(1, 1)));
  auto r2 = validate_tree(dup, make_grid({2, 2}));
  CHECK_FALSE(r2.ok);

  // Leaf outside the grid.
  auto outside = make_node(1, make_leaf({0}), make_leaf({5}));
  CHECK_FALSE(validate_tree(outside, make_grid({2})).ok);
}

TEST_CASE("applicable_moves finds the documented patterns") {
  // ((a o1 b) o1 c): one alpha at the root.
  auto t1 = make_node(1, make_node(1, make_leaf({0}), make_leaf({1})), make_leaf({2}));
  auto m1 = applicable_moves(t1);
  REQUIRE(m1.size() == 1);
  CHECK(m1[0].kind == Move::Kind::Alpha);
  CHECK(m1[0].pos == "");

  // (a o2 c) o1 (b o2 d): one forward beta at the root.
  auto t2 = make_node(1, make_node(2, cell2(0, 0), cell2(0, 1)),
                      make_node(2, cell2(1, 0), cell2(1, 1)));
  auto m2 = applicable_moves(t2);
  REQUIRE(m2.size() == 1);
  CHECK(m2[0].kind == Move::Kind::Beta);
  CHECK(m2[0].dir == 1);
  CHECK(m2[0].inner_dir == 2);

  // Fully right-nested single-direction tree: normal form, no moves.
  auto t3 = make_node(1, make_leaf({0}),
                      make_node(1, make_leaf({1}), make_node(1, make_leaf({2}), make_leaf({3}))));
  CHECK(applicable_moves(t3).empty());

  // The beta pattern with i > j is not a forward move.
  auto t4 = make_node(2, make_node(1, cell2(0, 0), cell2(1, 0)),
                      make_node(1, cell2(0, 1), cell2(1, 1)));
  CHECK(applicable_moves(t4).empty());
}

TEST_CASE("apply_move rewrites and inverts") {
  auto a = make_leaf({0}), b = make_leaf({1}), c = make_leaf({2});
  auto t = make_node(1, make_node(1, a, b), c);
  Move alpha{Move::Kind::Alpha, 1, 0, ""};
  auto t_after = apply_move(t, alpha);
  CHECK(tree_key(t_after) == tree_key(make_node(1, a, make_node(1, b, c))));
  CHECK(tree_equal(apply_move(t_after, alpha, Orientation::Inverse), t));

  auto quad = make_node(1, make_node(2, cell2(0, 0), cell2(0, 1)),
                        make_node(2, cell2(1, 0), cell2(1, 1)));
  Move beta{Move::Kind::Beta, 1, 2, ""};
  auto quad_after = apply_move(quad, beta);
  CHECK(tree_key(quad_after) ==
        tree_key(make_node(2, make_node(1, cell2(0, 0), cell2(1, 0)),
                           make_node(1, cell2(0, 1), cell2(1, 1)))));
  CHECK(tree_equal(apply_move(quad_after, beta, Orientation::Inverse), quad));

  CHECK_THROWS_AS(apply_move(quad, alpha), ApplicationError);
}

TEST_CASE("apply then inverse is the identity on random trees") {
  Rng rng(20240811);
  std::vector<GluingDiagram> grids = {make_grid({5}), make_grid({2, 3}), make_grid({2, 2, 2}),
                                      make_grid({3, 3})};
  for (const auto& grid : grids) {
    auto trees = enumerate_trees(grid);
    for (int round = 0; round < 50; ++round) {
      const auto& t = trees[rng.below(trees.size())];
      auto moves = applicable_moves(t);
      if (moves.empty()) continue;
      const Move& m = moves[rng.below(moves.size())];
      auto stepped = apply_move(t, m);
      auto report = validate_tree(stepped, grid);
      CHECK(report.ok);
      CHECK(tree_leaf_count(stepped) == tree_leaf_count(t));
      CHECK(tree_equal(apply_move(stepped, m, Orientation::Inverse), t));
    }
  }
}

TEST_CASE("move paths invert cleanly") {
  auto grid = make_grid({2, 2});
  auto trees = enumerate_trees(grid);
  REQUIRE(trees.size() == 2);
  auto moves = applicable_moves(trees[0]);
  TreePtr start, other;
  for (const auto& t : trees) {
    if (!applicable_moves(t).empty())
      start = t;
    else
      other = t;
  }
  REQUIRE(start);
  MovePath p{start, {PathStep{applicable_moves(start)[0], Orientation::Forward}}};
  CHECK(tree_equal(p.end(), other));
  auto back = p.inverted();
  CHECK(tree_equal(back.start, other));
  CHECK(tree_equal(back.end(), start));
}
