#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "nfold/diagram.hpp"
#include "nfold/errors.hpp"

namespace nfold {

/// Element of a span vertex set: an atom, or a nested pair produced by
/// pullback composition. Nesting is kept explicit so re-bracketing maps are
/// honest non-identity bijections.
class Elem {
 public:
  static Elem atom(const std::string& name);
  static Elem pair(const Elem& a, const Elem& b);

  bool is_atom() const { return node_->atom; }
  const std::string& name() const { return node_->name; }
  const Elem& first() const;
  const Elem& second() const;
  const std::string& key() const { return node_->key; }

  friend bool operator==(const Elem& a, const Elem& b) { return a.key() == b.key(); }
  friend bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }
  friend bool operator<(const Elem& a, const Elem& b) { return a.key() < b.key(); }

 private:
  struct Node {
    bool atom = true;
    std::string name;
    std::shared_ptr<const Node> a, b;
    std::string key;
  };
  explicit Elem(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Elem wrap(std::shared_ptr<const Node> n) { return Elem(std::move(n)); }
  std::shared_ptr<const Node> node_;
};

using ElemSet = std::vector<Elem>;  // sorted, unique

ElemSet make_set(std::vector<Elem> elems);
bool set_contains(const ElemSet& s, const Elem& e);

/// Finite map between element sets, stored as sorted pairs.
class ElemMap {
 public:
  ElemMap() = default;
  explicit ElemMap(std::vector<std::pair<Elem, Elem>> pairs);
  const Elem& apply(const Elem& e) const;
  bool defined_on(const Elem& e) const;
  const std::vector<std::pair<Elem, Elem>>& pairs() const { return pairs_; }
  ElemMap inverse_of_bijection() const;
  friend bool operator==(const ElemMap& a, const ElemMap& b) { return a.pairs_ == b.pairs_; }

 private:
  std::vector<std::pair<Elem, Elem>> pairs_;
};

/// Total invertible correspondence between two element sets.
struct Bijection {
  ElemMap forward;
  Bijection then(const Bijection& next) const;
  Bijection inverted() const;
  friend bool operator==(const Bijection& a, const Bijection& b) {
    return a.forward == b.forward;
  }
};

/// Face of a k-cube: one char per local axis, '0' source side, '1' target
/// side, '*' free. The all-free face is the core.
using FaceSpec = std::string;

FaceSpec core_face(int arity);
std::vector<FaceSpec> all_faces(int arity);

/// Cubical diagram of finite sets: a set per face, a map per codimension-1
/// face inclusion (pointing away from the barycenter), all squares
/// commuting. Direction i's source and target faces sit at x_i = 0 and 1.
struct FiniteSpan {
  std::vector<int> directions;  // ambient labels, strictly increasing
  std::map<FaceSpec, ElemSet> sets;
  std::map<std::pair<FaceSpec, FaceSpec>, ElemMap> maps;  // (from higher, to lower)

  int arity() const { return static_cast<int>(directions.size()); }
  int axis_of(int dir) const;  // local axis of an ambient direction
  const ElemSet& core() const;

  friend bool operator==(const FiniteSpan& a, const FiniteSpan& b) {
    return a.directions == b.directions && a.sets == b.sets && a.maps == b.maps;
  }
};

struct SpanValidation {
  bool ok = true;
  std::vector<std::string> issues;
};

SpanValidation validate_span(const FiniteSpan& s);

/// Dual diagram: maps point from lower faces toward barycenters.
struct FiniteCospan {
  std::vector<int> directions;
  std::map<FaceSpec, ElemSet> sets;
  std::map<std::pair<FaceSpec, FaceSpec>, ElemMap> maps;  // (from lower, to higher)

  int arity() const { return static_cast<int>(directions.size()); }
  int axis_of(int dir) const;
  const ElemSet& core() const;
  friend bool operator==(const FiniteCospan& a, const FiniteCospan& b) {
    return a.directions == b.directions && a.sets == b.sets && a.maps == b.maps;
  }
};

SpanValidation validate_cospan(const FiniteCospan& s);

/// k-morphism of the span model: a concrete span plus the set of directions
/// in which it is a formal identity. Formal units are a distinct variant,
/// never a singleton span.
struct SpanMor {
  FiniteSpan base;
  std::set<int> unit_dirs;

  bool is_unit_in(int dir) const { return unit_dirs.count(dir) > 0; }
  friend bool operator==(const SpanMor& a, const SpanMor& b) {
    return a.unit_dirs == b.unit_dirs && a.base == b.base;
  }
};

SpanMor as_morphism(const FiniteSpan& s);
/// id_dir(x): formal strict unit on x in a direction x does not span.
SpanMor formal_unit(const SpanMor& x, Direction dir);
SpanMor source_of(const SpanMor& x, Direction dir);
SpanMor target_of(const SpanMor& x, Direction dir);

/// Canonical pullback composition; formal units absorb strictly.
SpanMor compose_spans(const SpanMor& x, const SpanMor& y, Direction dir);
FiniteSpan compose_spans(const FiniteSpan& x, const FiniteSpan& y, Direction dir);

/// Canonical pushout composition of cospans. Core elements of the result
/// are canonical class representatives (smallest member of each identified
/// class).
FiniteCospan compose_cospans(const FiniteCospan& x, const FiniteCospan& y, Direction dir);

/// Facewise Cartesian product with pairwise maps.
FiniteSpan tensor(const FiniteSpan& x, const FiniteSpan& y);
struct TensorUnit {};
inline const FiniteSpan& tensor(const FiniteSpan& x, TensorUnit) { return x; }
inline const FiniteSpan& tensor(TensorUnit, const FiniteSpan& y) { return y; }
/// Swap bijection core(x (x) y) -> core(y (x) x); squares to the identity.
Bijection braiding(const FiniteSpan& x, const FiniteSpan& y);

/// Grid of composable spans: shared faces carry equal sets and maps.
struct SpanGridInstance {
  GluingDiagram grid;
  std::map<std::vector<int>, FiniteSpan> cells;
};

SpanValidation validate_instance(const SpanGridInstance& inst);

/// Composite span of the tree; core elements are nested tuples mirroring
/// the tree shape.
FiniteSpan evaluate_tree(const SpanGridInstance& inst, const TreePtr& tree);

/// Composite of the per-move re-bracketing bijections along the path,
/// from core(evaluate_tree(start)) to core(evaluate_tree(end)).
Bijection evaluate_path(const SpanGridInstance& inst, const MovePath& path);

enum class InstanceKind { Random, SingletonFaces, IdentityMaps };

/// Seeded instance generator; cell cores have at most `max_core` elements.
SpanGridInstance make_instance(const GluingDiagram& grid, std::uint64_t seed, int max_core,
                               InstanceKind kind = InstanceKind::Random);

struct AxiomReport {
  bool ok = true;
  int cells_checked = 0;
  std::map<std::string, int> by_kind;
  std::vector<std::string> failures;  // offending cell + element
};

/// For every 2-cell of the grid's coherence complex, evaluates both
/// boundary paths on the instance and compares the bijections pointwise.
AxiomReport check_pseudo_axioms(const SpanGridInstance& inst, long long max_trees = 1000000);

struct UnitLawReport {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Strict-unit and source/target identities on morphisms drawn from the
/// instance, including the unit coherence laws (identity associators and
/// interchangers on unit-laden composites).
UnitLawReport check_unit_laws(const SpanGridInstance& inst);

}  // namespace nfold
