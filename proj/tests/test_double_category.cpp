#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nfold/double_category.hpp"

using namespace nfold;

namespace {

std::vector<FiniteDoubleCategory> corpus() {
  std::vector<FiniteDoubleCategory> out;
  out.push_back(squares_of_poset(chain_category(0), "trivial"));
  out.push_back(squares_of_poset(chain_category(1), "sq-chain1"));
  out.push_back(squares_of_poset(chain_category(2), "sq-chain2"));
  out.push_back(squares_of_poset(poset_category(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}}),
                                 "sq-diamond"));
  out.push_back(squares_of_poset(poset_category(3, {{0, 1}, {0, 2}}), "sq-vee"));
  out.push_back(squares_of_poset(poset_category(2, {}), "sq-antichain"));
  out.push_back(product_double_category(cyclic_group_category(2), cyclic_group_category(2),
                                        "z2xz2"));
  out.push_back(product_double_category(cyclic_group_category(2), cyclic_group_category(3),
                                        "z2xz3"));
  out.push_back(product_double_category(chain_category(1), chain_category(1),
                                        "chain1xchain1"));
  out.push_back(product_double_category(cyclic_group_category(4), chain_category(1),
                                        "z4xchain1"));
  out.push_back(product_double_category(chain_category(2), cyclic_group_category(2),
                                        "chain2xz2"));
  return out;
}

}  // namespace

TEST_CASE("strict axioms hold on the whole corpus") {
  for (const auto& dc : corpus()) {
    CAPTURE(dc.name);
    auto rep = check_strict_axioms(dc);
    for (const auto& v : rep.violations) {
      CAPTURE(v.axiom);
      CAPTURE(v.witness);
      CHECK(false);
    }
    CHECK(rep.ok);
    CHECK(rep.checks > 0);
  }
}

TEST_CASE("one-object all-identity double category passes") {
  auto dc = squares_of_poset(chain_category(0), "point");
  CHECK(dc.objects.size() == 1);
  CHECK(dc.squares.size() == 1);
  CHECK(check_strict_axioms(dc).ok);
}

namespace {

// One object, identity 1-morphisms, squares an abelian group under both
// compositions. Parallel distinct squares make table corruption visible to
// the interchange check rather than to boundary bookkeeping.
FiniteDoubleCategory one_object_group_squares(int order) {
  FiniteDoubleCategory dc;
  dc.name = "group-squares-z" + std::to_string(order);
  dc.objects = {"*"};
  dc.hmor = {{"id", 0, 0}};
  dc.vmor = {{"id", 0, 0}};
  for (int i = 0; i < order; ++i) dc.squares.push_back({"a" + std::to_string(i), 0, 0, 0, 0});
  dc.id_h = {0};
  dc.id_v = {0};
  dc.id1_sq = {0};
  dc.id2_sq = {0};
  dc.comp_h = {{0}};
  dc.comp_v = {{0}};
  dc.comp_sq1.assign(order, std::vector<int>(order));
  dc.comp_sq2.assign(order, std::vector<int>(order));
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) dc.comp_sq1[i][j] = dc.comp_sq2[i][j] = (i + j) % order;
  return dc;
}

}  // namespace

TEST_CASE("a corrupted interchange entry is caught and named") {
  auto dc = one_object_group_squares(3);
  REQUIRE(check_strict_axioms(dc).ok);
  dc.comp_sq1[1][1] = 0;  // should be 2
  auto rep = check_strict_axioms(dc);
  CHECK_FALSE(rep.ok);
  bool named = false;
  for (const auto& v : rep.violations)
    if (v.axiom == "interchange law") named = true;
  CHECK(named);
}

TEST_CASE("nerve bidegrees match the definition") {
  auto dc = squares_of_poset(chain_category(2), "sq-chain2");
  auto n = nerve(dc, 3, 3);
  // (1,1)-multisimplices are exactly the squares.
  CHECK(n.size(1, 1) == static_cast<int>(dc.squares.size()));
  // (2,0)-multisimplices are the composable pairs of direction-1 morphisms.
  int pairs = 0;
  for (std::size_t f = 0; f < dc.hmor.size(); ++f)
    for (std::size_t g = 0; g < dc.hmor.size(); ++g)
      if (dc.comp_h[f][g] >= 0) ++pairs;
  CHECK(n.size(2, 0) == pairs);
  CHECK(n.size(0, 0) == static_cast<int>(dc.objects.size()));
}

TEST_CASE("simplicial identities hold for the nerve at cap (3,3)") {
  for (const auto& dc : corpus()) {
    CAPTURE(dc.name);
    auto n = nerve(dc, 3, 3);
    auto rep = check_simplicial_identities(n);
    for (const auto& v : rep.violations) {
      CAPTURE(v);
      CHECK(false);
    }
    CHECK(rep.ok);
  }
}

TEST_CASE("the chain-horn in one direction is filled by composition") {
  auto dc = squares_of_poset(chain_category(2), "sq-chain2");
  auto n = nerve(dc, 2, 0);
  auto rep = check_unique_inner_horns(n);
  CHECK(rep.ok);
  CHECK(rep.horns_checked > 0);
}

TEST_CASE("unique inner multihorn filling holds across the corpus") {
  for (const auto& dc : corpus()) {
    CAPTURE(dc.name);
    auto n = nerve(dc, 3, 3);
    auto rep = check_unique_inner_horns(n);
    for (const auto& f : rep.failures) {
      CAPTURE(f);
      CHECK(false);
    }
    CHECK(rep.ok);
  }
}

TEST_CASE("deleting one composite breaks unique horn filling, every time") {
  for (const auto& dc : corpus()) {
    CAPTURE(dc.name);
    auto n = nerve(dc, 2, 2);
    REQUIRE(check_simplicial_identities(n).ok);
    int victim = find_nondegenerate(n, 2, 1);
    if (victim < 0) continue;  // all (2,1) simplices degenerate: nothing to delete
    auto mutated = remove_element(n, 2, 1, victim);
    REQUIRE(check_simplicial_identities(mutated).ok);
    auto rep = check_unique_inner_horns(mutated);
    CHECK_FALSE(rep.ok);
    REQUIRE(!rep.failures.empty());
    CHECK(rep.failures.front().find("no filler") != std::string::npos);
  }
}
