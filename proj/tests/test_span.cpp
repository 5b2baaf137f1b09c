#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfold/rewrite.hpp"
#include "nfold/json_io.hpp"
#include "nfold/span.hpp"
#include "nfold/util.hpp"

using namespace nfold;

namespace {

Elem A(const std::string& s) { return Elem::atom(s); }

ElemSet atoms(const std::vector<std::string>& names) {
  std::vector<Elem> out;
  for (const auto& n : names) out.push_back(A(n));
  return make_set(std::move(out));
}

ElemMap amap(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::pair<Elem, Elem>> out;
  for (const auto& [a, b] : pairs) out.emplace_back(A(a), A(b));
  return ElemMap(std::move(out));
}

// Arity-1 span: left <- core -> right.
FiniteSpan span1(const ElemSet& left, const ElemSet& core, const ElemSet& right,
                 const ElemMap& to_left, const ElemMap& to_right) {
  FiniteSpan s;
  s.directions = {1};
  s.sets["0"] = left;
  s.sets["*"] = core;
  s.sets["1"] = right;
  s.maps[{"*", "0"}] = to_left;
  s.maps[{"*", "1"}] = to_right;
  return s;
}

// Arity-1 cospan: left -> core <- right.
FiniteCospan cospan1(const ElemSet& left, const ElemSet& core, const ElemSet& right,
                     const ElemMap& from_left, const ElemMap& from_right) {
  FiniteCospan s;
  s.directions = {1};
  s.sets["0"] = left;
  s.sets["*"] = core;
  s.sets["1"] = right;
  s.maps[{"0", "*"}] = from_left;
  s.maps[{"1", "*"}] = from_right;
  return s;
}

}  // namespace

TEST_CASE("pullback composition on the documented example") {
  // A2 = {x,y} -> A3 = {0,1} with x->0, y->1; A4 = {p,q,r} -> A3 with
  // p->0, q->0, r->1. Core of the composite: {(x,p),(x,q),(y,r)}.
  ElemSet a1 = atoms({"s"});
  ElemSet a3 = atoms({"0", "1"});
  ElemSet a5 = atoms({"t"});
  FiniteSpan left = span1(a1, atoms({"x", "y"}), a3, amap({{"x", "s"}, {"y", "s"}}),
                          amap({{"x", "0"}, {"y", "1"}}));
  FiniteSpan right = span1(a3, atoms({"p", "q", "r"}), a5,
                           amap({{"p", "0"}, {"q", "0"}, {"r", "1"}}),
                           amap({{"p", "t"}, {"q", "t"}, {"r", "t"}}));
  CHECK(validate_span(left).ok);
  CHECK(validate_span(right).ok);
  FiniteSpan comp = compose_spans(left, right, 1);
  CHECK(validate_span(comp).ok);
  REQUIRE(comp.core().size() == 3);
  CHECK(set_contains(comp.core(), Elem::pair(A("x"), A("p"))));
  CHECK(set_contains(comp.core(), Elem::pair(A("x"), A("q"))));
  CHECK(set_contains(comp.core(), Elem::pair(A("y"), A("r"))));
  // Sources and targets of the composite come from the outer legs.
  CHECK(comp.sets.at("0") == a1);
  CHECK(comp.sets.at("1") == a5);
}

TEST_CASE("empty fibers give an empty pullback") {
  ElemSet a3 = atoms({"0", "1"});
  FiniteSpan left = span1(atoms({"s"}), atoms({"x"}), a3, amap({{"x", "s"}}),
                          amap({{"x", "0"}}));
  FiniteSpan right = span1(a3, atoms({"p"}), atoms({"t"}), amap({{"p", "1"}}),
                           amap({{"p", "t"}}));
  FiniteSpan comp = compose_spans(left, right, 1);
  CHECK(comp.core().empty());
}

TEST_CASE("formal units absorb strictly") {
  ElemSet a3 = atoms({"0"});
  FiniteSpan s = span1(atoms({"s"}), atoms({"x", "y"}), a3,
                       amap({{"x", "s"}, {"y", "s"}}), amap({{"x", "0"}, {"y", "0"}}));
  SpanMor x = as_morphism(s);
  SpanMor left_unit = formal_unit(source_of(x, 1), 1);
  SpanMor right_unit = formal_unit(target_of(x, 1), 1);
  CHECK(compose_spans(left_unit, x, 1) == x);
  CHECK(compose_spans(x, right_unit, 1) == x);
  // A unit whose base does not match the boundary is rejected.
  SpanMor wrong = formal_unit(source_of(x, 1), 1);
  wrong.base.sets[std::string()] = atoms({"zz"});
  CHECK_THROWS_AS(compose_spans(x, wrong, 1), InputError);
}

TEST_CASE("composability requires matching shared faces") {
  FiniteSpan a = span1(atoms({"s"}), atoms({"x"}), atoms({"m"}), amap({{"x", "s"}}),
                       amap({{"x", "m"}}));
  FiniteSpan b = span1(atoms({"DIFFERENT"}), atoms({"y"}), atoms({"t"}),
                       amap({{"y", "DIFFERENT"}}), amap({{"y", "t"}}));
  CHECK_THROWS_AS(compose_spans(a, b, 1), InputError);
}

TEST_CASE("pushout composition on the documented examples") {
  // A2 = {x,y}, A4 = {p,q}, A3 = {*} with * -> x and * -> p: three classes.
  FiniteCospan left = cospan1(atoms({"i"}), atoms({"x", "y"}), atoms({"m"}),
                              amap({{"i", "x"}}), amap({{"m", "x"}}));
  FiniteCospan right = cospan1(atoms({"m"}), atoms({"p", "q"}), atoms({"o"}),
                               amap({{"m", "p"}}), amap({{"o", "q"}}));
  CHECK(validate_cospan(left).ok);
  CHECK(validate_cospan(right).ok);
  // Shared face {m}: m -> x in `left` (target leg) and m -> p in `right`
  // (source leg), so x ~ p after gluing.
  FiniteCospan glued = compose_cospans(left, right, 1);
  CHECK(validate_cospan(glued).ok);
  CHECK(glued.core().size() == 3);

  // Gluing along an empty set: plain disjoint union.
  FiniteCospan l2 = cospan1(atoms({"i"}), atoms({"x", "y"}), ElemSet{}, amap({{"i", "x"}}),
                            ElemMap());
  FiniteCospan r2 = cospan1(ElemSet{}, atoms({"p", "q"}), atoms({"o"}), ElemMap(),
                            amap({{"o", "p"}}));
  CHECK(compose_cospans(l2, r2, 1).core().size() == 4);

  // Identity legs collapse the union back onto the shared set.
  ElemSet same = atoms({"a", "b"});
  ElemMap ident = amap({{"a", "a"}, {"b", "b"}});
  FiniteCospan l3 = cospan1(same, same, same, ident, ident);
  FiniteCospan glued3 = compose_cospans(l3, l3, 1);
  CHECK(glued3.core().size() == same.size());
}

TEST_CASE("cospan core size obeys inclusion-exclusion against a union-find oracle") {
  Rng rng(7231);
  for (int round = 0; round < 200; ++round) {
    int nl = rng.range(1, 8), nr = rng.range(1, 8), ns = rng.range(0, 6);
    ElemSet lcore, rcore, seam;
    for (int i = 0; i < nl; ++i) lcore.push_back(A("l" + std::to_string(i)));
    for (int i = 0; i < nr; ++i) rcore.push_back(A("r" + std::to_string(i)));
    for (int i = 0; i < ns; ++i) seam.push_back(A("s" + std::to_string(i)));
    std::vector<std::pair<Elem, Elem>> into_l, into_r;
    std::vector<std::pair<int, int>> oracle_edges;
    for (int i = 0; i < ns; ++i) {
      int tl = rng.range(0, nl - 1), tr = rng.range(0, nr - 1);
      into_l.emplace_back(seam[i], lcore[tl]);
      into_r.emplace_back(seam[i], rcore[tr]);
      oracle_edges.emplace_back(tl, nl + tr);
    }
    FiniteCospan left = cospan1(ElemSet{}, lcore, seam, ElemMap(), ElemMap(into_l));
    FiniteCospan right = cospan1(seam, rcore, ElemSet{}, ElemMap(into_r), ElemMap());
    FiniteCospan glued = compose_cospans(left, right, 1);

    // Oracle: plain union-find over nl + nr vertices.
    std::vector<int> parent(nl + nr);
    for (int i = 0; i < nl + nr; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int v) {
      return parent[v] == v ? v : parent[v] = find(parent[v]);
    };
    int merges = 0;
    for (auto [u, v] : oracle_edges) {
      int ru = find(u), rv = find(v);
      if (ru != rv) {
        parent[ru] = rv;
        ++merges;
      }
    }
    CAPTURE(round);
    CHECK(static_cast<int>(glued.core().size()) == nl + nr - merges);
  }
}

TEST_CASE("pullback core size matches a brute-force oracle on random spans") {
  Rng rng(9812);
  for (int round = 0; round < 200; ++round) {
    int nl = rng.range(1, 20), nr = rng.range(1, 20), ns = rng.range(1, 6);
    ElemSet lcore, rcore, seam;
    for (int i = 0; i < nl; ++i) lcore.push_back(A("x" + std::to_string(i)));
    for (int i = 0; i < nr; ++i) rcore.push_back(A("y" + std::to_string(i)));
    for (int i = 0; i < ns; ++i) seam.push_back(A("s" + std::to_string(i)));
    std::vector<int> lt(nl), rt(nr);
    std::vector<std::pair<Elem, Elem>> lm, rm;
    for (int i = 0; i < nl; ++i) {
      lt[i] = rng.range(0, ns - 1);
      lm.emplace_back(lcore[i], seam[lt[i]]);
    }
    for (int i = 0; i < nr; ++i) {
      rt[i] = rng.range(0, ns - 1);
      rm.emplace_back(rcore[i], seam[rt[i]]);
    }
    ElemSet pt = atoms({"pt"});
    std::vector<std::pair<Elem, Elem>> lout, rout;
    for (const auto& e : lcore) lout.emplace_back(e, A("pt"));
    for (const auto& e : rcore) rout.emplace_back(e, A("pt"));
    FiniteSpan left = span1(pt, lcore, seam, ElemMap(lout), ElemMap(lm));
    FiniteSpan right = span1(seam, rcore, pt, ElemMap(rm), ElemMap(rout));
    FiniteSpan comp = compose_spans(left, right, 1);

    // Oracle: direct double loop.
    long long expected = 0;
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nr; ++j)
        if (lt[i] == rt[j]) ++expected;
    CAPTURE(round);
    CHECK(static_cast<long long>(comp.core().size()) == expected);
  }
}

TEST_CASE("evaluate_tree: leaves, singleton-face instance, equinumerosity") {
  auto grid = make_grid({2, 2});
  auto inst = make_instance(grid, 5, 2, InstanceKind::SingletonFaces);
  REQUIRE(validate_instance(inst).ok);

  // A single-cell tree evaluates to that cell's span.
  auto leaf = make_leaf({0, 0});
  CHECK(evaluate_tree(inst, leaf) == inst.cells.at({0, 0}));

  // All cores have 2 elements and every face is a singleton, so the full
  // composite has 2^4 = 16 core elements.
  for (const auto& [cell, span] : inst.cells) CHECK(span.core().size() == 2);
  auto trees = enumerate_trees(grid);
  for (const auto& t : trees) CHECK(evaluate_tree(inst, t).core().size() == 16);

  // Parallel trees have equinumerous cores on any instance.
  auto rnd = make_instance(grid, 99, 3);
  REQUIRE(validate_instance(rnd).ok);
  CHECK(evaluate_tree(rnd, trees[0]).core().size() ==
        evaluate_tree(rnd, trees[1]).core().size());
}

TEST_CASE("evaluate_path: identity, alpha pointwise, beta pointwise") {
  // Empty path: identity bijection.
  auto grid3 = make_grid({3});
  auto inst3 = make_instance(grid3, 17, 3);
  auto trees3 = enumerate_trees(grid3);
  MovePath empty{trees3[0], {}};
  auto id = evaluate_path(inst3, empty);
  for (const auto& [e, img] : id.forward.pairs()) CHECK(e == img);

  // Single alpha on a 1x3 instance: ((a,b),c) -> (a,(b,c)) pointwise.
  TreePtr left_nested, right_nested;
  for (const auto& t : trees3)
    if (!t->left->is_leaf())
      left_nested = t;
    else
      right_nested = t;
  REQUIRE(left_nested);
  Move alpha{Move::Kind::Alpha, 1, 0, ""};
  MovePath pa{left_nested, {PathStep{alpha, Orientation::Forward}}};
  auto ba = evaluate_path(inst3, pa);
  for (const auto& [e, img] : ba.forward.pairs()) {
    const Elem& ab = e.first();
    CHECK(img == Elem::pair(ab.first(), Elem::pair(ab.second(), e.second())));
  }

  // Single beta on 2x2: ((a,b),(c,d)) -> ((a,c),(b,d)) pointwise.
  auto grid22 = make_grid({2, 2});
  auto inst22 = make_instance(grid22, 23, 3);
  TreePtr beta_src = make_node(1, make_node(2, make_leaf({0, 0}), make_leaf({0, 1})),
                               make_node(2, make_leaf({1, 0}), make_leaf({1, 1})));
  Move beta{Move::Kind::Beta, 1, 2, ""};
  MovePath pb{beta_src, {PathStep{beta, Orientation::Forward}}};
  auto bb = evaluate_path(inst22, pb);
  CHECK(!bb.forward.pairs().empty());
  for (const auto& [e, img] : bb.forward.pairs()) {
    const Elem& ab = e.first();
    const Elem& cd = e.second();
    CHECK(img == Elem::pair(Elem::pair(ab.first(), cd.first()),
                            Elem::pair(ab.second(), cd.second())));
  }
}

TEST_CASE("pseudo-axioms hold pointwise on seeded instances") {
  struct Shape {
    std::vector<int> grid;
    std::string want;
  };
  std::vector<Shape> shapes = {{{4}, "pentagon"}, {{2, 3}, "hexagon-1"},
                               {{2, 2, 2}, "hexagon-2"}};
  for (const auto& shape : shapes) {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
      auto inst = make_instance(make_grid(shape.grid), seed, 3);
      auto report = check_pseudo_axioms(inst);
      CAPTURE(shape.want);
      CAPTURE(seed);
      CHECK(report.ok);
      CHECK(report.by_kind[shape.want] >= 1);
    }
  }
}

TEST_CASE("unit laws and coherences hold on generated instances") {
  for (std::uint64_t seed : {11ull, 12ull}) {
    auto rep2 = check_unit_laws(make_instance(make_grid({2, 2}), seed, 3));
    CHECK(rep2.ok);
    auto rep3 = check_unit_laws(make_instance(make_grid({2, 2, 2}), seed, 2));
    CHECK(rep3.ok);
  }
}

TEST_CASE("composition is associative only up to the alpha bijection") {
  auto grid = make_grid({3});
  auto inst = make_instance(grid, 31, 3);
  auto a = inst.cells.at({0});
  auto b = inst.cells.at({1});
  auto c = inst.cells.at({2});
  FiniteSpan left = compose_spans(compose_spans(a, b, 1), c, 1);
  FiniteSpan right = compose_spans(a, compose_spans(b, c, 1), 1);
  CHECK_FALSE(left == right);  // nesting differs on purpose
  CHECK(left.core().size() == right.core().size());
}

TEST_CASE("tensor, braiding and the interchange with composition") {
  auto grid = make_grid({2});
  Rng seeds(5150);
  for (int round = 0; round < 50; ++round) {
    auto ix = make_instance(grid, seeds.next(), 3);
    auto iy = make_instance(grid, seeds.next(), 3);
    const FiniteSpan& x = ix.cells.at({0});
    const FiniteSpan& y = iy.cells.at({0});
    FiniteSpan xy = tensor(x, y);
    CHECK(validate_span(xy).ok);
    CHECK(xy.core().size() == x.core().size() * y.core().size());

    // The tensor unit is formal: tensoring with it returns the operand.
    CHECK(tensor(x, TensorUnit{}) == x);
    CHECK(tensor(TensorUnit{}, y) == y);

    // braiding o braiding = identity.
    auto swap_xy = braiding(x, y);
    auto swap_yx = braiding(y, x);
    auto round_trip = swap_xy.then(swap_yx);
    for (const auto& [e, img] : round_trip.forward.pairs()) CHECK(e == img);

    // Interchange of tensor with composition: the middle-swap re-bracketing
    // is a bijection core((x o y) (x) (x' o y')) -> core((x (x) x') o (y (x) y')).
    const FiniteSpan& xr = ix.cells.at({1});
    const FiniteSpan& yr = iy.cells.at({1});
    FiniteSpan comp_then_tensor = tensor(compose_spans(x, xr, 1), compose_spans(y, yr, 1));
    FiniteSpan tensor_then_comp = compose_spans(tensor(x, y), tensor(xr, yr), 1);
    CHECK(comp_then_tensor.core().size() == tensor_then_comp.core().size());
    for (const Elem& e : comp_then_tensor.core()) {
      const Elem& ab = e.first();   // (a, a') in x o xr
      const Elem& cd = e.second();  // (c, c') in y o yr
      Elem swapped = Elem::pair(Elem::pair(ab.first(), cd.first()),
                                Elem::pair(ab.second(), cd.second()));
      CHECK(set_contains(tensor_then_comp.core(), swapped));
    }
  }
}

TEST_CASE("parallel move paths evaluate to equal bijections") {
  for (const auto& extents : std::vector<std::vector<int>>{{4}, {2, 3}, {2, 2, 2}}) {
    auto grid = make_grid(extents);
    auto cx = build_coherence_complex(grid);
    auto inst = make_instance(grid, 77, 2);
    auto cp = critical_pairs(cx);
    for (const auto& cert : cp.certificates) {
      MovePath pa, pb;
      pa.start = cx.graph.vertices[cert.peak];
      pb.start = pa.start;
      pa.steps.push_back(PathStep{cx.graph.edges[cert.edge_a].move, Orientation::Forward});
      for (int e : cert.completion_a)
        pa.steps.push_back(PathStep{cx.graph.edges[e].move, Orientation::Forward});
      pb.steps.push_back(PathStep{cx.graph.edges[cert.edge_b].move, Orientation::Forward});
      for (int e : cert.completion_b)
        pb.steps.push_back(PathStep{cx.graph.edges[e].move, Orientation::Forward});
      CHECK(evaluate_path(inst, pa) == evaluate_path(inst, pb));
    }
  }
}

TEST_CASE("instance JSON round-trips") {
  auto inst = make_instance(make_grid({2, 2}), 42, 3);
  auto back = instance_from_json(instance_to_json(inst));
  CHECK(back.grid == inst.grid);
  REQUIRE(back.cells.size() == inst.cells.size());
  for (const auto& [cell, span] : inst.cells) CHECK(back.cells.at(cell) == span);
}
