#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "nfold/errors.hpp"

namespace nfold {

/// Finite category presented by explicit tables; composition is
/// diagrammatic (f then g needs dst(f) == src(g)).
struct FiniteCategory {
  int num_objects = 0;
  struct Mor {
    std::string name;
    int src = 0, dst = 0;
  };
  std::vector<Mor> morphisms;
  std::vector<int> identity;            // per object
  std::vector<std::vector<int>> comp;   // -1 where not composable
};

FiniteCategory chain_category(int length);          // poset 0 < 1 < ... < length
FiniteCategory cyclic_group_category(int order);    // one object, Z_n
FiniteCategory poset_category(int n, const std::vector<std::pair<int, int>>& relations);

/// Finite strict double category: objects, 1-morphisms in two directions,
/// squares, with identity assignments and explicit composition tables.
/// A square has s1/t1 (its direction-1 source/target, vertical morphisms)
/// and s2/t2 (direction-2 source/target, horizontal morphisms).
struct FiniteDoubleCategory {
  std::string name;
  std::vector<std::string> objects;

  struct Arrow {
    std::string name;
    int src = 0, dst = 0;
  };
  std::vector<Arrow> hmor;  // direction 1
  std::vector<Arrow> vmor;  // direction 2

  struct Square {
    std::string name;
    int s1 = 0, t1 = 0;  // vmor ids: left and right sides
    int s2 = 0, t2 = 0;  // hmor ids: bottom and top sides
  };
  std::vector<Square> squares;

  std::vector<int> id_h;     // object -> hmor
  std::vector<int> id_v;     // object -> vmor
  std::vector<int> id1_sq;   // vmor -> square (identity in direction 1)
  std::vector<int> id2_sq;   // hmor -> square (identity in direction 2)

  std::vector<std::vector<int>> comp_h;    // hmor x hmor -> hmor or -1
  std::vector<std::vector<int>> comp_v;    // vmor x vmor -> vmor or -1
  std::vector<std::vector<int>> comp_sq1;  // squares along direction 1
  std::vector<std::vector<int>> comp_sq2;  // squares along direction 2
};

/// Commutative-squares double category of a finite poset.
FiniteDoubleCategory squares_of_poset(const FiniteCategory& poset, const std::string& name);
/// Product of two categories: horizontal arrows from A, vertical from B.
FiniteDoubleCategory product_double_category(const FiniteCategory& a,
                                             const FiniteCategory& b,
                                             const std::string& name);

struct AxiomViolation {
  std::string axiom;
  std::string witness;
};

struct StrictAxiomReport {
  bool ok = true;
  int checks = 0;
  std::vector<AxiomViolation> violations;
};

/// Exhaustively verifies every displayed identity of the strict double
/// category definition over all elements.
StrictAxiomReport check_strict_axioms(const FiniteDoubleCategory& c);

/// Truncated bisimplicial set with explicit face/degeneracy tables.
struct MultiSimplicialSet {
  int cap_p = 0, cap_q = 0;
  // elems[p][q]: element names at bidegree (p,q).
  std::vector<std::vector<std::vector<std::string>>> elems;
  // (direction, p, q, index) -> table mapping element ids downward/upward.
  std::map<std::tuple<int, int, int, int>, std::vector<int>> face;
  std::map<std::tuple<int, int, int, int>, std::vector<int>> degeneracy;

  int size(int p, int q) const { return static_cast<int>(elems[p][q].size()); }
  const std::vector<int>& face_map(int dir, int p, int q, int i) const;
  const std::vector<int>& degeneracy_map(int dir, int p, int q, int i) const;
};

/// Bisimplicial nerve: (p,q)-multisimplices are p x q composable grids of
/// squares, with chains of 1-morphisms on the boundary degrees.
MultiSimplicialSet nerve(const FiniteDoubleCategory& c, int cap_p, int cap_q);

struct SimplicialIdentityReport {
  bool ok = true;
  std::vector<std::string> violations;
};

SimplicialIdentityReport check_simplicial_identities(const MultiSimplicialSet& n);

/// One multihorn shape: per direction either a full simplex (inner = -1)
/// or an inner horn with the given missing index.
struct HornShape {
  int k1 = 0;
  int inner1 = -1;
  int k2 = 0;
  int inner2 = -1;

  bool is_horn1() const { return inner1 >= 0; }
  bool is_horn2() const { return inner2 >= 0; }
  std::string str() const;
};

std::vector<HornShape> inner_horn_shapes(int cap_p, int cap_q);

struct HornReport {
  bool ok = true;
  long long horns_checked = 0;
  std::vector<std::string> shapes;   // shape -> summary lines
  std::vector<std::string> failures; // witness descriptions
};

/// For every inner multihorn shape within the cap and every horn datum,
/// exactly one filler must exist.
HornReport check_unique_inner_horns(const MultiSimplicialSet& n);

/// Removes one element and everything referencing it, keeping the tables
/// consistent. Used for mutation testing.
MultiSimplicialSet remove_element(const MultiSimplicialSet& n, int p, int q, int idx);

/// Index of some non-degenerate element at (p,q), or -1.
int find_nondegenerate(const MultiSimplicialSet& n, int p, int q);

}  // namespace nfold
