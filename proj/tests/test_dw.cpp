#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "nfold/dw.hpp"
#include "nfold/json_io.hpp"

using namespace nfold;

TEST_CASE("builtin groups load and verify") {
  auto s3 = load_group("S3");
  CHECK(s3.order == 6);
  CHECK(conjugacy_classes(s3).size() == 3);

  auto z1 = load_group("Z1");
  CHECK(z1.order == 1);
  CHECK(z1.identity == 0);

  CHECK(load_group("D4").order == 8);
  CHECK(load_group("Q8").order == 8);
  CHECK(conjugacy_classes(load_group("Q8")).size() == 5);
  CHECK_THROWS_AS(load_group("F17"), InputError);
}

TEST_CASE("a corrupted table is rejected with a witness triple") {
  // Break associativity in Z3 by swapping one entry.
  std::vector<std::vector<int>> mul = {{0, 1, 2}, {1, 2, 0}, {2, 0, 0}};
  try {
    load_group_table("broken", {"e", "a", "b"}, mul);
    CHECK(false);
  } catch (const InputError& err) {
    std::string msg = err.what();
    CHECK(msg.find("triple") != std::string::npos);
  }
}

TEST_CASE("irrep dimensions derived from the table") {
  CHECK(irrep_dimensions(load_group("Z4")) == std::vector<int>{1, 1, 1, 1});
  CHECK(irrep_dimensions(load_group("S3")) == std::vector<int>{1, 1, 2});
  CHECK(irrep_dimensions(load_group("D4")) == std::vector<int>{1, 1, 1, 1, 2});
  CHECK(irrep_dimensions(load_group("Q8")) == std::vector<int>{1, 1, 1, 1, 2});
}

TEST_CASE("flat field counts on the documented fixtures") {
  auto s3 = load_group("S3");
  // Torus: pairs of commuting elements.
  CHECK(flat_fields(torus_presentation(), s3).size() == 18);
  // Sphere: the single relator forces the identity.
  CHECK(flat_fields(sphere_presentation(), s3).size() == 1);
  CHECK(flat_fields(sphere_presentation(), load_group("Z2")).size() == 1);
  // No relators, two edges, Z2: free assignment.
  CobPresentation free2;
  free2.name = "wedge2";
  free2.dim = 1;
  free2.num_vertices = 1;
  free2.edges.push_back({"a", 0, 0});
  free2.edges.push_back({"b", 0, 0});
  CHECK(flat_fields(free2, load_group("Z2")).size() == 4);
}

TEST_CASE("flat field enumeration respects the cap") {
  CHECK_THROWS_AS(flat_fields(surface_presentation(3), load_group("D4"), 1000),
                  CapacityError);
}

TEST_CASE("gauge classes: orbit enumeration with Burnside cross-check") {
  auto s3 = load_group("S3");
  auto torus = torus_presentation();
  auto classes = gauge_classes(torus, s3);
  auto avg = burnside_average(torus, s3);
  CHECK(Rational(classes.count()) == avg);

  // Sphere with Z2: a single field, a single class.
  CHECK(gauge_classes(sphere_presentation(), load_group("Z2")).count() == 1);

  // Free loop: classes are conjugacy classes.
  CHECK(gauge_classes(circle_presentation(), s3).count() == 3);

  // Burnside consistency across several small instances.
  for (const auto* name : {"Z2", "Z3", "S3"}) {
    auto g = load_group(name);
    for (const auto& p : {torus_presentation(), sphere_presentation(),
                          cylinder_presentation(), torus_two_vertex_presentation()}) {
      CAPTURE(name);
      CAPTURE(p.name);
      CHECK(Rational(gauge_classes(p, g).count()) == burnside_average(p, g));
    }
  }
}

TEST_CASE("gauge class representatives are the least field of each orbit") {
  auto s3 = load_group("S3");
  auto classes = gauge_classes(torus_presentation(), s3);
  for (std::size_t i = 0; i < classes.fields.size(); ++i) {
    int rep = classes.representative[classes.orbit_of[i]];
    CHECK(classes.fields[rep] <= classes.fields[i]);
  }
}

TEST_CASE("partition function values") {
  CHECK(dw_invariant(torus_presentation(), load_group("S3")) == Rational(3));
  CHECK(dw_invariant(sphere_presentation(), load_group("Z2")) == Rational(1, 2));
  CHECK(dw_invariant(surface_presentation(2), load_group("Z2")) == Rational(8));
  CHECK(mednykh_value(load_group("Z2"), 2) == Rational(8));  // 4 + 4
}

TEST_CASE("Mednykh consistency for all builtin groups of order <= 8, genus <= 3") {
  std::vector<std::string> names = {"Z1", "Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8",
                                    "S3", "D4", "Q8"};
  for (const auto& name : names) {
    auto g = load_group(name);
    for (int genus = 1; genus <= 3; ++genus) {
      CAPTURE(name);
      CAPTURE(genus);
      CHECK(dw_invariant(surface_presentation(genus), g) == mednykh_value(g, genus));
    }
  }
}

TEST_CASE("the invariant does not depend on the presentation") {
  for (const auto* name : {"Z2", "Z3", "S3", "D4", "Q8"}) {
    auto g = load_group(name);
    CAPTURE(name);
    CHECK(dw_invariant(torus_presentation(), g) ==
          dw_invariant(torus_two_vertex_presentation(), g));
  }
}

TEST_CASE("composition glues presentations along the seam") {
  auto s3 = load_group("S3");
  auto comp = compose_cobordisms(cylinder_presentation("m"), cylinder_presentation("n"), 1);
  CHECK(comp.glued.num_vertices == 3);
  CHECK(comp.glued.edges.size() == 5);
  // A cylinder is an identity cobordism: composing preserves the invariant.
  CHECK(dw_invariant(comp.glued, s3) == dw_invariant(cylinder_presentation(), s3));

  auto iv = compose_cobordisms(interval_presentation("i"), interval_presentation("j"), 1);
  CHECK(iv.glued.num_vertices == 3);
  CHECK(iv.glued.edges.size() == 2);
  CHECK(dw_invariant(iv.glued, s3) == dw_invariant(interval_presentation(), s3));

  // Seam mismatch: a cylinder cannot be glued to an interval.
  CHECK_THROWS_AS(compose_cobordisms(cylinder_presentation(), interval_presentation(), 1),
                  InputError);
}

TEST_CASE("restriction spans") {
  auto s3 = load_group("S3");
  auto span = phi_span(cylinder_presentation(), s3);
  REQUIRE(span.boundaries.size() == 2);
  // Both restrictions surject onto the boundary circle's class set (the
  // conjugacy classes).
  for (const auto& [key, data] : span.boundaries) {
    CHECK(data.classes.count() == 3);
    std::set<int> image(data.restriction.begin(), data.restriction.end());
    CHECK(static_cast<int>(image.size()) == data.classes.count());
  }

  // Closed cobordism: the span degenerates to the single class set.
  auto closed = phi_span(torus_presentation(), s3);
  CHECK(closed.boundaries.empty());
  CHECK(closed.core.count() == 8);

  // Disjoint union: classes multiply.
  auto uni = disjoint_union(torus_presentation(), sphere_presentation());
  CHECK(gauge_classes(uni.glued, s3).count() ==
        gauge_classes(torus_presentation(), s3).count() *
            gauge_classes(sphere_presentation(), s3).count());
}

TEST_CASE("functor coherence: composite classes match seam-compatible pairs") {
  for (const auto* name : {"Z2", "Z3", "S3"}) {
    auto g = load_group(name);
    CAPTURE(name);
    auto cyl = check_functor_coherence(cylinder_presentation("m"),
                                       cylinder_presentation("n"), 1, g);
    CHECK(cyl.ok);
    CHECK(cyl.composite_classes == cyl.fiber_pairs);
    auto iv = check_functor_coherence(interval_presentation("i"),
                                      interval_presentation("j"), 1, g);
    CHECK(iv.ok);
  }
}

TEST_CASE("associativity square on classes for triple compositions") {
  for (const auto* name : {"Z2", "S3"}) {
    auto g = load_group(name);
    CAPTURE(name);
    auto rep = check_triple_coherence(cylinder_presentation("m"), cylinder_presentation("n"),
                                      cylinder_presentation("p"), 1, g);
    CHECK(rep.ok);
    auto rep2 = check_triple_coherence(interval_presentation("i"), interval_presentation("j"),
                                       interval_presentation("k"), 1, g);
    CHECK(rep2.ok);
  }
}

TEST_CASE("disjoint union interchanges with composition on classes") {
  for (const auto* name : {"Z2", "Z3", "S3"}) {
    auto g = load_group(name);
    CAPTURE(name);
    auto rep = check_union_interchange(cylinder_presentation("m"), cylinder_presentation("n"),
                                       cylinder_presentation("m2"),
                                       cylinder_presentation("n2"), 1, g);
    CHECK(rep.ok);
  }
}

TEST_CASE("cobordism JSON round-trips") {
  for (const auto& p : {cylinder_presentation(), torus_presentation(),
                        interval_presentation(), surface_presentation(2)}) {
    auto back = cobordism_from_json(cobordism_to_json(p));
    CHECK(structurally_equal(back, p));
    CHECK(back.dim == p.dim);
    CHECK(back.boundaries.size() == p.boundaries.size());
    for (const auto& [key, part] : p.boundaries) {
      CHECK(back.boundaries.at(key).vertices == part.vertices);
      CHECK(back.boundaries.at(key).edges == part.edges);
      CHECK(back.boundaries.at(key).relators == part.relators);
    }
  }
}
