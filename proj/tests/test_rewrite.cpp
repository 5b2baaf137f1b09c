#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfold/rewrite.hpp"

using namespace nfold;

namespace {

TreePtr cell2(int x, int y) { return make_leaf({x, y}); }

}  // namespace

TEST_CASE("rewrite graph shapes on small grids") {
  auto g4 = build_rewrite_graph(make_grid({4}));
  CHECK(g4.vertices.size() == 5);
  CHECK(g4.edges.size() == 5);  // the pentagon

  auto g22 = build_rewrite_graph(make_grid({2, 2}));
  CHECK(g22.vertices.size() == 2);
  CHECK(g22.edges.size() == 1);

  auto g3 = build_rewrite_graph(make_grid({3}));
  CHECK(g3.vertices.size() == 2);
  CHECK(g3.edges.size() == 1);
}

TEST_CASE("normalize on documented examples") {
  // (a o2 c) o1 (b o2 d) -> (a o1 b) o2 (c o1 d) in one beta.
  auto quad = make_node(1, make_node(2, cell2(0, 0), cell2(0, 1)),
                        make_node(2, cell2(1, 0), cell2(1, 1)));
  auto res = normalize(quad);
  CHECK(res.path.steps.size() == 1);
  CHECK(res.path.steps[0].move.kind == Move::Kind::Beta);
  CHECK(tree_key(res.tree) ==
        tree_key(make_node(2, make_node(1, cell2(0, 0), cell2(1, 0)),
                           make_node(1, cell2(0, 1), cell2(1, 1)))));

  // ((a o1 b) o1 c) -> a o1 (b o1 c) in one alpha.
  auto triple = make_node(1, make_node(1, make_leaf({0}), make_leaf({1})), make_leaf({2}));
  auto res2 = normalize(triple);
  CHECK(res2.path.steps.size() == 1);
  CHECK(res2.path.steps[0].move.kind == Move::Kind::Alpha);

  // All 12 trees of [2,2,2] reach the unique stratified form: o3 at the
  // root, then o2, then o1.
  auto grid = make_grid({2, 2, 2});
  auto nf = stratified_normal_form(grid);
  CHECK(nf->dir == 3);
  CHECK(nf->left->dir == 2);
  CHECK(nf->left->left->dir == 1);
  for (const auto& t : enumerate_trees(grid)) {
    auto r = normalize(t);
    CHECK(tree_equal(r.tree, nf));
    // Idempotence: the terminal form admits no further moves.
    CHECK(normalize(r.tree).path.steps.empty());
  }
}

TEST_CASE("termination holds and cycles are detected when constructed") {
  auto rep4 = check_termination(build_rewrite_graph(make_grid({4})));
  CHECK(rep4.acyclic);
  // Longest directed path in the pentagon: ((ab)c)d -> (a(bc))d -> a((bc)d)
  // -> a(b(cd)), three edges.
  CHECK(rep4.longest_path == 3);

  auto rep222 = check_termination(build_rewrite_graph(make_grid({2, 2, 2})));
  CHECK(rep222.acyclic);

  // Artificially reverse one edge of a two-vertex graph to force a cycle.
  auto g = build_rewrite_graph(make_grid({2, 2}));
  RewriteGraph::Edge rev = g.edges[0];
  std::swap(rev.from, rev.to);
  g.edges.push_back(rev);
  g.out_edges[rev.from].push_back(1);
  g.in_edges[rev.to].push_back(1);
  auto bad = check_termination(g);
  CHECK_FALSE(bad.acyclic);
  CHECK(bad.cycle.size() >= 2);
}

TEST_CASE("unique normal form on small grids") {
  auto rep23 = check_unique_normal_form(build_rewrite_graph(make_grid({2, 3})));
  CHECK(rep23.ok);
  CHECK(rep23.connected);
  CHECK(rep23.terminals.size() == 1);
  CHECK(rep23.matches_normalize);
  CHECK(rep23.matches_stratified);

  auto g22 = build_rewrite_graph(make_grid({2, 2}));
  auto rep22 = check_unique_normal_form(g22);
  REQUIRE(rep22.ok);
  CHECK(tree_key(g22.vertices[rep22.terminal]) ==
        tree_key(make_node(2, make_node(1, cell2(0, 0), cell2(1, 0)),
                           make_node(1, cell2(0, 1), cell2(1, 1)))));

  auto rep1 = check_unique_normal_form(build_rewrite_graph(make_grid({1})));
  CHECK(rep1.ok);
  CHECK(rep1.terminals.size() == 1);
}

TEST_CASE("connect_trees routes through the normal form") {
  auto grid = make_grid({2, 2});
  auto trees = enumerate_trees(grid);
  auto same = connect_trees(trees[0], trees[0], grid);
  CHECK(same.steps.empty());

  auto path = connect_trees(trees[0], trees[1], grid);
  CHECK(path.steps.size() == 1);
  CHECK(tree_equal(path.end(), trees[1]));

  auto grid3 = make_grid({2, 2, 2});
  auto trees3 = enumerate_trees(grid3);
  TreePtr a, b;
  for (const auto& t : trees3) {
    if (t->dir == 1 && !a) a = t;
    if (t->dir == 3 && !b) b = t;
  }
  REQUIRE((a && b));
  auto p3 = connect_trees(a, b, grid3);
  CHECK(tree_equal(p3.end(), b));
  CHECK_FALSE(p3.steps.empty());

  CHECK_THROWS_AS(connect_trees(trees[0], trees3[0], grid), InputError);
}

TEST_CASE("coherence complex cells and H1") {
  auto cx4 = build_coherence_complex(make_grid({4}));
  CHECK(cx4.cell_counts["pentagon"] == 1);
  CHECK(coherence_h1(cx4) == 0);

  auto cx23 = build_coherence_complex(make_grid({2, 3}));
  CHECK(cx23.cell_counts["hexagon-1"] >= 1);
  CHECK(coherence_h1(cx23) == 0);

  auto cx222 = build_coherence_complex(make_grid({2, 2, 2}));
  CHECK(cx222.cell_counts["hexagon-2"] >= 1);
  CHECK(coherence_h1(cx222) == 0);
}

TEST_CASE("critical pairs are certified and classified") {
  auto cx4 = build_coherence_complex(make_grid({4}));
  auto rep4 = critical_pairs(cx4);
  CHECK(rep4.all_joinable);
  CHECK(rep4.all_tiled);
  // Two alphas diverging at the pentagon peak.
  CHECK(rep4.class_counts["pentagon"] == 1);

  auto cx23 = build_coherence_complex(make_grid({2, 3}));
  auto rep23 = critical_pairs(cx23);
  CHECK(rep23.all_joinable);
  CHECK(rep23.all_tiled);
  CHECK(rep23.class_counts["hexagon-1"] >= 1);

  auto cx222 = build_coherence_complex(make_grid({2, 2, 2}));
  auto rep222 = critical_pairs(cx222);
  CHECK(rep222.all_joinable);
  CHECK(rep222.all_tiled);
  CHECK(rep222.class_counts["hexagon-2"] >= 1);
  CHECK(rep222.class_counts["disjoint"] >= 1);
}

TEST_CASE("paths_equivalent: reflexivity, pentagon, hexagon") {
  auto cx4 = build_coherence_complex(make_grid({4}));
  const auto& g = cx4.graph;

  // A path against itself: equivalent with an empty witness.
  int peak = -1;
  for (std::size_t v = 0; v < g.vertices.size(); ++v)
    if (g.out_edges[v].size() == 2) peak = static_cast<int>(v);
  REQUIRE(peak >= 0);
  auto nf = normalize(g.vertices[peak]);
  auto self = paths_equivalent(cx4, nf.path, nf.path);
  CHECK(self.decided);
  CHECK(self.equivalent);
  CHECK(self.witness.empty());

  // The two pentagon boundary paths, via exactly one pentagon cell.
  const TwoCell* pent = nullptr;
  for (const auto& c : cx4.cells)
    if (c.kind == TwoCell::Kind::Pentagon) pent = &c;
  REQUIRE(pent);
  SignedWalk wa, wb;
  for (int e : pent->side_a) wa.emplace_back(e, +1);
  for (int e : pent->side_b) wb.emplace_back(e, +1);
  auto verdict = paths_equivalent(cx4, wa, wb, pent->source);
  CHECK(verdict.decided);
  CHECK(verdict.equivalent);
  CHECK(verdict.witness.size() == 1);

  // Same for a hexagon-1 cell on [2,3].
  auto cx23 = build_coherence_complex(make_grid({2, 3}));
  const TwoCell* hex = nullptr;
  for (const auto& c : cx23.cells)
    if (c.kind == TwoCell::Kind::Hexagon1) hex = &c;
  REQUIRE(hex);
  SignedWalk ha, hb;
  for (int e : hex->side_a) ha.emplace_back(e, +1);
  for (int e : hex->side_b) hb.emplace_back(e, +1);
  auto hv = paths_equivalent(cx23, ha, hb, hex->source);
  CHECK(hv.decided);
  CHECK(hv.equivalent);
  CHECK(hv.witness.size() == 1);

  // Mismatched endpoints are an input error.
  SignedWalk empty;
  CHECK_THROWS_AS(paths_equivalent(cx4, wa, empty, pent->source), InputError);
}

TEST_CASE("acyclicity, connectivity, unique NF, tiling and H1 across grids") {
  std::vector<std::vector<int>> grids = {{2}, {3}, {4}, {5}, {2, 2}, {2, 3}, {3, 3}, {2, 2, 2}};
  for (const auto& e : grids) {
    CAPTURE(e.size());
    auto cx = build_coherence_complex(make_grid(e));
    CHECK(check_termination(cx.graph).acyclic);
    auto nf = check_unique_normal_form(cx.graph);
    CHECK(nf.ok);
    auto cp = critical_pairs(cx);
    CHECK(cp.all_joinable);
    CHECK(cp.all_tiled);
    CHECK(coherence_h1(cx) == 0);
  }
}

TEST_CASE("larger grids, including the deferred two-beta overlap cases") {
  // [2,2,3] is the smallest grid with diverging beta pairs whose inner cuts
  // do not align (no hexagon cell exists at the peak); those certificates
  // go through the normalization-retry route.
  for (const auto& e : std::vector<std::vector<int>>{{6}, {2, 4}, {2, 2, 3}}) {
    CAPTURE(e.size());
    auto cx = build_coherence_complex(make_grid(e));
    CHECK(check_termination(cx.graph).acyclic);
    CHECK(check_unique_normal_form(cx.graph).ok);
    auto cp = critical_pairs(cx);
    CHECK(cp.all_joinable);
    CHECK(cp.all_tiled);
    CHECK(coherence_h1(cx) == 0);
    if (e == std::vector<int>{2, 2, 3}) CHECK(cp.class_counts["inductive-composite"] >= 6);
  }
}

TEST_CASE("no applicable moves exactly at the stratified normal form") {
  for (const auto& e : std::vector<std::vector<int>>{{4}, {2, 3}, {2, 2, 2}, {3, 3}}) {
    auto grid = make_grid(e);
    auto nf = stratified_normal_form(grid);
    for (const auto& t : enumerate_trees(grid)) {
      bool is_terminal = applicable_moves(t).empty();
      CHECK(is_terminal == tree_equal(t, nf));
    }
  }
}
