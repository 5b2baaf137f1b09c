#include "nfold/report.hpp"

#include <chrono>
#include <functional>
#include <map>

#include "nfold/dw.hpp"
#include "nfold/rewrite.hpp"
#include "nfold/span.hpp"
#include "nfold/double_category.hpp"
#include "nfold/util.hpp"

namespace nfold::report {

namespace {

using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

CriterionResult timed(const std::string& id, double budget,
                      const std::function<bool(json&)>& body) {
  CriterionResult r;
  r.id = id;
  r.budget_seconds = budget;
  auto t0 = Clock::now();
  try {
    r.pass = body(r.details);
  } catch (const std::exception& e) {
    r.pass = false;
    r.details["exception"] = e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  if (budget > 0 && r.seconds > budget) {
    r.pass = false;
    r.details["over_budget"] = true;
  }
  return r;
}

// Independent guillotine-count recursion over the multiset of side
// lengths; deliberately not the box enumeration the library uses.
long long guillotine_oracle(std::vector<int> sides,
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
    for (std::size_t d = 0; d < sides.size(); ++d)
      for (int cut = 1; cut < sides[d]; ++cut) {
        std::vector<int> lower = sides, upper = sides;
        lower[d] = cut;
        upper[d] = sides[d] - cut;
        total += guillotine_oracle(lower, memo) * guillotine_oracle(upper, memo);
      }
  }
  memo[sides] = total;
  return total;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  std::vector<CriterionResult> out;

  // 1. Axiom suite: pentagon/hexagon cells hold pointwise in the span model
  //    on seeded instances with cell cores of size <= 3.
  out.push_back(timed("1-span-axioms", 10.0, [&](json& details) {
    struct Shape {
      std::vector<int> grid;
      std::string cell;
    };
    std::vector<Shape> shapes = {{{4}, "pentagon"},
                                 {{2, 3}, "hexagon-1"},
                                 {{2, 2, 2}, "hexagon-2"}};
    bool ok = true;
    for (const auto& shape : shapes) {
      auto grid = make_grid(shape.grid);
      int cells_seen = 0;
      auto results = parallel_map<int>(
          static_cast<std::size_t>(opts.axiom_instances), [&](std::size_t i) {
            auto inst = make_instance(grid, opts.seed + i, 3);
            auto rep = check_pseudo_axioms(inst);
            if (!rep.ok) return -1;
            auto it = rep.by_kind.find(shape.cell);
            return it == rep.by_kind.end() ? 0 : it->second;
          });
      for (int r : results) {
        if (r < 0) ok = false;
        cells_seen += std::max(r, 0);
      }
      if (cells_seen == 0) ok = false;
      details[shape.cell] = {{"instances", opts.axiom_instances},
                             {"cells_checked", cells_seen}};
    }
    return ok;
  }));

  // 2. Coherence suite over the eight reference grids.
  out.push_back(timed("2-coherence", 60.0, [&](json& details) {
    std::vector<std::vector<int>> grids = {{2},    {3},    {4},    {5},
                                           {2, 2}, {2, 3}, {3, 3}, {2, 2, 2}};
    bool ok = true;
    for (const auto& extents : grids) {
      auto cx = build_coherence_complex(make_grid(extents));
      auto term = check_termination(cx.graph);
      auto nf = check_unique_normal_form(cx.graph);
      auto cp = critical_pairs(cx);
      int h1 = coherence_h1(cx);
      bool grid_ok = term.acyclic && nf.ok && cp.all_joinable && cp.all_tiled && h1 == 0;
      ok = ok && grid_ok;
      std::string key;
      for (std::size_t i = 0; i < extents.size(); ++i)
        key += (i ? "x" : "") + std::to_string(extents[i]);
      details[key] = {{"trees", cx.graph.vertices.size()},
                      {"edges", cx.graph.edges.size()},
                      {"cells", cx.cells.size()},
                      {"acyclic", term.acyclic},
                      {"unique_terminal", nf.ok},
                      {"critical_pairs", cp.certificates.size()},
                      {"all_tiled", cp.all_tiled},
                      {"h1", h1},
                      {"ok", grid_ok}};
    }
    return ok;
  }));

  // 3. Tree-count oracle on every grid with at most 12 cells.
  out.push_back(timed("3-tree-counts", 0.0, [&](json& details) {
    bool ok = true;
    std::map<std::vector<int>, long long> memo;
    int grids = 0;
    for (int a = 1; a <= 12; ++a)
      for (int b = 1; a * b <= 12; ++b)
        for (int c = 1; a * b * c <= 12; ++c) {
          auto trees = enumerate_trees(make_grid({a, b, c}));
          if (static_cast<long long>(trees.size()) != guillotine_oracle({a, b, c}, memo))
            ok = false;
          ++grids;
        }
    // The named examples, pinned.
    ok = ok && enumerate_trees(make_grid({3})).size() == 2;
    ok = ok && enumerate_trees(make_grid({4})).size() == 5;
    ok = ok && enumerate_trees(make_grid({2, 2})).size() == 2;
    ok = ok && enumerate_trees(make_grid({2, 3})).size() == 8;
    ok = ok && enumerate_trees(make_grid({2, 2, 2})).size() == 12;
    details["grids_checked"] = grids;
    return ok;
  }));

  // 4. Dijkgraaf-Witten values and cross-checks.
  out.push_back(timed("4-dw-values", 30.0, [&](json& details) {
    bool ok = true;
    ok = ok && dw_invariant(sphere_presentation(), load_group("Z2")) == Rational(1, 2);
    ok = ok && dw_invariant(torus_presentation(), load_group("S3")) == Rational(3);
    ok = ok && dw_invariant(surface_presentation(2), load_group("Z2")) == Rational(8);
    details["sphere_z2"] = dw_invariant(sphere_presentation(), load_group("Z2")).str();
    details["torus_s3"] = dw_invariant(torus_presentation(), load_group("S3")).str();
    details["genus2_z2"] = dw_invariant(surface_presentation(2), load_group("Z2")).str();
    int mednykh_checks = 0;
    for (const char* name : {"Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "S3", "D4",
                             "Q8"}) {
      auto g = load_group(name);
      for (int genus = 1; genus <= 3; ++genus) {
        if (!(dw_invariant(surface_presentation(genus), g) == mednykh_value(g, genus)))
          ok = false;
        ++mednykh_checks;
      }
    }
    details["mednykh_checks"] = mednykh_checks;
    bool invariance = true;
    for (const char* name : {"Z2", "Z3", "S3", "D4", "Q8"}) {
      auto g = load_group(name);
      if (!(dw_invariant(torus_presentation(), g) ==
            dw_invariant(torus_two_vertex_presentation(), g)))
        invariance = false;
    }
    details["presentation_invariance"] = invariance;
    return ok && invariance;
  }));

  // 5. Functor coherence on the gluing fixtures.
  out.push_back(timed("5-functor-coherence", 0.0, [&](json& details) {
    bool ok = true;
    for (const char* name : {"Z2", "Z3", "S3"}) {
      auto g = load_group(name);
      auto cyl = check_functor_coherence(cylinder_presentation("m"),
                                         cylinder_presentation("n"), 1, g);
      auto iv = check_functor_coherence(interval_presentation("i"),
                                        interval_presentation("j"), 1, g);
      details[name] = {{"cylinder_classes", cyl.composite_classes},
                       {"cylinder_pairs", cyl.fiber_pairs},
                       {"interval_classes", iv.composite_classes},
                       {"interval_pairs", iv.fiber_pairs}};
      ok = ok && cyl.ok && iv.ok;
    }
    return ok;
  }));

  // 6. Nerve suite with mutation testing.
  out.push_back(timed("6-nerve-horns", 0.0, [&](json& details) {
    std::vector<FiniteDoubleCategory> corpus;
    corpus.push_back(squares_of_poset(chain_category(0), "trivial"));
    corpus.push_back(squares_of_poset(chain_category(1), "sq-chain1"));
    corpus.push_back(squares_of_poset(chain_category(2), "sq-chain2"));
    corpus.push_back(squares_of_poset(poset_category(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}),
                                      "sq-diamond"));
    corpus.push_back(squares_of_poset(poset_category(3, {{0, 1}, {0, 2}}), "sq-vee"));
    corpus.push_back(squares_of_poset(poset_category(2, {}), "sq-antichain"));
    corpus.push_back(product_double_category(cyclic_group_category(2),
                                             cyclic_group_category(2), "z2xz2"));
    corpus.push_back(product_double_category(cyclic_group_category(2),
                                             cyclic_group_category(3), "z2xz3"));
    corpus.push_back(product_double_category(chain_category(1), chain_category(1),
                                             "chain1xchain1"));
    corpus.push_back(product_double_category(cyclic_group_category(4), chain_category(1),
                                             "z4xchain1"));
    corpus.push_back(product_double_category(chain_category(2), cyclic_group_category(2),
                                             "chain2xz2"));
    bool ok = corpus.size() >= 10;
    int mutations_detected = 0, mutations_possible = 0;
    for (const auto& dc : corpus) {
      if (!check_strict_axioms(dc).ok) ok = false;
      auto n = nerve(dc, 3, 3);
      if (!check_simplicial_identities(n).ok) ok = false;
      auto horns = check_unique_inner_horns(n);
      if (!horns.ok) ok = false;
      details[dc.name] = {{"horns", horns.horns_checked}, {"unique", horns.ok}};
      auto small = nerve(dc, 2, 2);
      int victim = find_nondegenerate(small, 2, 1);
      if (victim >= 0) {
        ++mutations_possible;
        auto mutated = remove_element(small, 2, 1, victim);
        if (!check_unique_inner_horns(mutated).ok) ++mutations_detected;
      }
    }
    details["corpus_size"] = corpus.size();
    details["mutations"] = {{"possible", mutations_possible},
                            {"detected", mutations_detected}};
    return ok && mutations_detected == mutations_possible && mutations_possible > 0;
  }));

  // 7. Span-model size oracles and braiding involution.
  out.push_back(timed("7-span-oracles", 0.0, [&](json& details) {
    bool ok = true;
    Rng rng(opts.seed + 777);
    int pullbacks = 0, pushouts = 0;
    for (int round = 0; round < opts.oracle_rounds; ++round) {
      int nl = rng.range(1, 20), nr = rng.range(1, 20), ns = rng.range(1, 6);
      // Raw maps first; the span machinery second.
      std::vector<int> lt(nl), rt(nr);
      for (int i = 0; i < nl; ++i) lt[i] = rng.range(0, ns - 1);
      for (int i = 0; i < nr; ++i) rt[i] = rng.range(0, ns - 1);
      long long expected = 0;
      for (int i = 0; i < nl; ++i)
        for (int j = 0; j < nr; ++j)
          if (lt[i] == rt[j]) ++expected;
      ElemSet lcore, rcore, seam, pt;
      for (int i = 0; i < nl; ++i) lcore.push_back(Elem::atom("x" + std::to_string(i)));
      for (int i = 0; i < nr; ++i) rcore.push_back(Elem::atom("y" + std::to_string(i)));
      for (int i = 0; i < ns; ++i) seam.push_back(Elem::atom("s" + std::to_string(i)));
      pt.push_back(Elem::atom("pt"));
      auto span1 = [&](const ElemSet& a, const ElemSet& core, const ElemSet& b,
                       const ElemMap& ma, const ElemMap& mb) {
        FiniteSpan s;
        s.directions = {1};
        s.sets["0"] = a;
        s.sets["*"] = core;
        s.sets["1"] = b;
        s.maps[{"*", "0"}] = ma;
        s.maps[{"*", "1"}] = mb;
        return s;
      };
      std::vector<std::pair<Elem, Elem>> lm, rm, lo, ro;
      for (int i = 0; i < nl; ++i) {
        lm.emplace_back(lcore[i], seam[lt[i]]);
        lo.emplace_back(lcore[i], pt[0]);
      }
      for (int i = 0; i < nr; ++i) {
        rm.emplace_back(rcore[i], seam[rt[i]]);
        ro.emplace_back(rcore[i], pt[0]);
      }
      auto comp = compose_spans(span1(pt, lcore, seam, ElemMap(lo), ElemMap(lm)),
                                span1(seam, rcore, pt, ElemMap(rm), ElemMap(ro)), 1);
      if (static_cast<long long>(comp.core().size()) != expected) ok = false;
      ++pullbacks;

      // Pushout versus a direct union-find count.
      int pl = rng.range(1, 10), pr = rng.range(1, 10), ps = rng.range(0, 6);
      std::vector<int> parent(pl + pr);
      for (int i = 0; i < pl + pr; ++i) parent[i] = i;
      std::function<int(int)> find = [&](int v) {
        return parent[v] == v ? v : parent[v] = find(parent[v]);
      };
      ElemSet plc, prc, pseam;
      for (int i = 0; i < pl; ++i) plc.push_back(Elem::atom("l" + std::to_string(i)));
      for (int i = 0; i < pr; ++i) prc.push_back(Elem::atom("r" + std::to_string(i)));
      for (int i = 0; i < ps; ++i) pseam.push_back(Elem::atom("s" + std::to_string(i)));
      std::vector<std::pair<Elem, Elem>> into_l, into_r;
      int merges = 0;
      for (int i = 0; i < ps; ++i) {
        int a = rng.range(0, pl - 1), b = rng.range(0, pr - 1);
        into_l.emplace_back(pseam[i], plc[a]);
        into_r.emplace_back(pseam[i], prc[b]);
        int ra = find(a), rb = find(pl + b);
        if (ra != rb) {
          parent[ra] = rb;
          ++merges;
        }
      }
      FiniteCospan left, right;
      left.directions = right.directions = {1};
      left.sets["0"] = {};
      left.sets["*"] = plc;
      left.sets["1"] = pseam;
      left.maps[{"0", "*"}] = ElemMap();
      left.maps[{"1", "*"}] = ElemMap(into_l);
      right.sets["0"] = pseam;
      right.sets["*"] = prc;
      right.sets["1"] = {};
      right.maps[{"0", "*"}] = ElemMap(into_r);
      right.maps[{"1", "*"}] = ElemMap();
      auto glued = compose_cospans(left, right, 1);
      if (static_cast<int>(glued.core().size()) != pl + pr - merges) ok = false;
      ++pushouts;
    }
    int braidings = 0;
    for (int round = 0; round < opts.braiding_rounds; ++round) {
      auto ix = make_instance(make_grid({2}), rng.next(), 3);
      auto iy = make_instance(make_grid({2}), rng.next(), 3);
      const auto& x = ix.cells.at({0});
      const auto& y = iy.cells.at({0});
      auto round_trip = braiding(x, y).then(braiding(y, x));
      for (const auto& [e, img] : round_trip.forward.pairs())
        if (!(e == img)) ok = false;
      if (tensor(x, y).core().size() != x.core().size() * y.core().size()) ok = false;
      ++braidings;
    }
    details["pullbacks"] = pullbacks;
    details["pushouts"] = pushouts;
    details["braidings"] = braidings;
    return ok;
  }));

  return out;
}

// Wall times stay out of the JSON so identical runs serialize identically.
nlohmann::ordered_json results_to_json(const std::vector<CriterionResult>& results) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : results) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["pass"] = r.pass;
    if (r.budget_seconds > 0) j["budget_seconds"] = r.budget_seconds;
    j["details"] = r.details;
    out.push_back(j);
  }
  return out;
}

}  // namespace nfold::report
