#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nfold/diagram.hpp"
#include "nfold/errors.hpp"
#include "nfold/util.hpp"

namespace nfold {

/// Finite group given by its multiplication table; verified on load.
struct GroupTable {
  std::string name;
  int order = 0;
  std::vector<std::string> element_names;
  std::vector<std::vector<int>> mul;
  int identity = 0;
  std::vector<int> inverse;

  int times(int a, int b) const { return mul[a][b]; }
  int inv(int a) const { return inverse[a]; }
};

/// Builtins: Z<n>, S3, D4, Q8; throws InputError on an unknown name.
GroupTable load_group(const std::string& name);
/// Verifies associativity, identity and inverses; names a failing triple.
GroupTable load_group_table(const std::string& name,
                            const std::vector<std::string>& element_names,
                            const std::vector<std::vector<int>>& mul);

std::vector<std::vector<int>> conjugacy_classes(const GroupTable& g);

/// Irreducible representation dimensions, derived from the class count and
/// the abelianization; unique for every group of order <= 8.
std::vector<int> irrep_dimensions(const GroupTable& g);

/// Character-theoretic value for the closed orientable genus-g surface:
/// sum over irreps of (|G|/dim)^(2g-2).
Rational mednykh_value(const GroupTable& g, int genus);

/// Combinatorial presentation of a cobordism with corners: a graph with
/// relator loops, plus labeled boundary sub-presentations per
/// (direction, sign).
struct CobPresentation {
  std::string name;
  int dim = 1;
  int num_vertices = 0;
  struct Edge {
    std::string id;
    int src = 0, dst = 0;
  };
  std::vector<Edge> edges;
  // Relators: signed edge references, +(e+1) forward, -(e+1) reversed,
  // forming closed loops read left to right.
  std::vector<std::vector<int>> relators;

  struct BoundaryPart {
    std::vector<int> vertices;  // indices into the parent
    std::vector<int> edges;
    std::vector<int> relators;
  };
  std::map<std::pair<int, int>, BoundaryPart> boundaries;  // (direction, +1/-1)
};

struct PresentationValidation {
  bool ok = true;
  std::vector<std::string> issues;
};

PresentationValidation validate_presentation(const CobPresentation& p);

/// The boundary part as a standalone presentation (dimension one lower).
CobPresentation induced_presentation(const CobPresentation& p,
                                     const CobPresentation::BoundaryPart& part,
                                     const std::string& name);

/// Structural equality of presentations under their given orderings:
/// vertex count, edge endpoints, relator words.
bool structurally_equal(const CobPresentation& a, const CobPresentation& b);

using FlatField = std::vector<int>;  // group element per edge

/// All edge assignments killing every relator, in lexicographic order.
/// Backtracking prunes on the earliest fully assigned relator.
std::vector<FlatField> flat_fields(const CobPresentation& m, const GroupTable& g,
                                   long long cap = 100000000);

struct GaugeClasses {
  std::vector<FlatField> fields;          // deterministic enumeration
  std::vector<int> orbit_of;              // field index -> orbit id
  std::vector<int> representative;        // orbit id -> field index (lex least)
  int count() const { return static_cast<int>(representative.size()); }
};

GaugeClasses gauge_classes(const CobPresentation& m, const GroupTable& g,
                           long long cap = 100000000);

/// Burnside cross-check: average number of fixed flat fields over all
/// vertex gauges equals the orbit count.
Rational burnside_average(const CobPresentation& m, const GroupTable& g,
                          long long cap = 100000000);

/// Untwisted partition function |flat fields| / |G|^#vertices.
Rational dw_invariant(const CobPresentation& m, const GroupTable& g,
                      long long cap = 100000000);

struct Composite {
  CobPresentation glued;
  std::vector<int> left_vertex, left_edge;    // cell maps of the left operand
  std::vector<int> right_vertex, right_edge;  // and of the right operand
};

/// Pushout along the seam: the (dir,+)-boundary of `m` is identified with
/// the (dir,-)-boundary of `n`, which must be structurally equal; other
/// boundaries are unioned, the seam's own faces cancel.
Composite compose_cobordisms(const CobPresentation& m, const CobPresentation& n, Direction dir);

/// Disjoint union; boundaries united per direction.
Composite disjoint_union(const CobPresentation& m, const CobPresentation& n);

/// Gauge-class sets at the cobordism and each labeled boundary, with the
/// restriction maps on class representatives.
struct GaugeClassSpan {
  GaugeClasses core;
  struct BoundaryData {
    CobPresentation presentation;
    GaugeClasses classes;
    std::vector<int> restriction;  // core orbit id -> boundary orbit id
  };
  std::map<std::pair<int, int>, BoundaryData> boundaries;
};

GaugeClassSpan phi_span(const CobPresentation& m, const GroupTable& g,
                        long long cap = 100000000);

struct CoherenceReport {
  bool ok = true;
  int composite_classes = 0;
  int fiber_pairs = 0;
  std::vector<std::string> failures;
};

/// Verifies that classes of m o n correspond bijectively to pairs of
/// classes of m and n agreeing on the seam class.
CoherenceReport check_functor_coherence(const CobPresentation& m, const CobPresentation& n,
                                        int dir, const GroupTable& g,
                                        long long cap = 100000000);

/// Triple-composition check: both bracketings of m o n o p decompose each
/// composite class into the same triple of restrictions, bijectively.
CoherenceReport check_triple_coherence(const CobPresentation& m, const CobPresentation& n,
                                       const CobPresentation& p, int dir,
                                       const GroupTable& g, long long cap = 100000000);

/// Interchange of disjoint union with composition:
/// (m o n) u (m' o n') versus (m u m') o (n u n') on classes.
CoherenceReport check_union_interchange(const CobPresentation& m, const CobPresentation& n,
                                        const CobPresentation& m2,
                                        const CobPresentation& n2, int dir,
                                        const GroupTable& g, long long cap = 100000000);

// Fixture presentations.
CobPresentation circle_presentation();
CobPresentation cylinder_presentation(const std::string& name = "cylinder");
CobPresentation point_presentation();
CobPresentation interval_presentation(const std::string& name = "interval");
CobPresentation sphere_presentation();
CobPresentation torus_presentation();
CobPresentation torus_two_vertex_presentation();
CobPresentation surface_presentation(int genus);

}  // namespace nfold
