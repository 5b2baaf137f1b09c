#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nfold/errors.hpp"

namespace nfold {

/// Spatial direction label, 1-based; direction i splits a box by
/// hyperplanes orthogonal to axis i. Valid values run from 1 to the
/// ambient arity, checked wherever a direction meets a grid or a span.
using Direction = int;

/// Regular gluing diagram: a k-cube cut into unit cells by integer
/// hyperplanes, extents p_1 x ... x p_k.
struct GluingDiagram {
  std::vector<int> extents;

  int arity() const { return static_cast<int>(extents.size()); }
  long long cell_count() const;
  bool contains_cell(const std::vector<int>& cell) const;
  /// All cells in lexicographic order.
  std::vector<std::vector<int>> cells() const;

  friend bool operator==(const GluingDiagram& a, const GluingDiagram& b) {
    return a.extents == b.extents;
  }
};

GluingDiagram make_grid(const std::vector<int>& extents);

/// Axis-aligned box of whole cells, [lo_d, hi_d) per direction.
struct Box {
  std::vector<int> lo, hi;

  static Box cell(const std::vector<int>& coords);
  bool valid_in(const GluingDiagram& grid) const;
  long long volume() const;
  /// The box covering both, if they are adjacent along `dir` with `a` on
  /// the lower side and matching in all other directions.
  static std::optional<Box> join(const Box& a, const Box& b, Direction dir);

  friend bool operator==(const Box& a, const Box& b) { return a.lo == b.lo && a.hi == b.hi; }
};

/// Composition tree over a gluing diagram: a leaf per unit cell, each
/// inner node merging two adjacent boxes along one direction (left =
/// lower side). Immutable; subtrees are shared freely.
struct CompTree;
using TreePtr = std::shared_ptr<const CompTree>;

struct CompTree {
  // Leaf: dir == 0 and `cell` set.  Node: dir >= 1 with both children.
  int dir = 0;
  std::vector<int> cell;
  TreePtr left, right;

  bool is_leaf() const { return dir == 0; }
};

TreePtr make_leaf(const std::vector<int>& cell);
TreePtr make_node(Direction dir, TreePtr left, TreePtr right);

bool tree_equal(const TreePtr& a, const TreePtr& b);
/// Canonical printable form, also used as a map key.
/// Leaves print as [c1,c2,...], nodes as (d L R).
std::string tree_key(const TreePtr& t);
int tree_leaf_count(const TreePtr& t);

/// Positions are root-to-node paths over 'L'/'R'.
using TreePath = std::string;

/// Subtree at `pos`; throws ApplicationError if the path leaves the tree.
TreePtr subtree_at(const TreePtr& t, const TreePath& pos);
/// Copy of `t` with the subtree at `pos` replaced.
TreePtr replace_at(const TreePtr& t, const TreePath& pos, const TreePtr& sub);

/// One forward rewrite move at a tree position.
///
/// Alpha at dir i:  (x oi y) oi z  ->  x oi (y oi z)
/// Beta with outer i < inner j:
///   (x oj y) oi (x' oj y')  ->  (x oi x') oj (y oi y')
/// moving the larger-index composition outward.
struct Move {
  enum class Kind { Alpha, Beta };
  Kind kind = Kind::Alpha;
  int dir = 0;        // Alpha: the direction; Beta: outer direction i
  int inner_dir = 0;  // Beta only: inner direction j, i < j
  TreePath pos;

  std::string str() const;
  friend bool operator==(const Move& a, const Move& b) {
    return a.kind == b.kind && a.dir == b.dir && a.inner_dir == b.inner_dir && a.pos == b.pos;
  }
};

enum class Orientation { Forward, Inverse };

struct PathStep {
  Move move;
  Orientation orient = Orientation::Forward;
};

/// A walk in the move graph: `steps` applied in order starting at `start`.
struct MovePath {
  TreePtr start;
  std::vector<PathStep> steps;

  /// Endpoint after all steps (validates applicability on the way).
  TreePtr end() const;
  /// Same walk traversed backwards.
  MovePath inverted() const;
};

struct TreeReport {
  bool ok = true;
  std::vector<std::string> issues;
};

TreeReport validate_tree(const TreePtr& tree, const GluingDiagram& grid);

/// All guillotine composition trees of the grid, deterministically ordered
/// (split direction ascending, then split position, then left/right subtree
/// order). Throws CapacityError when the count exceeds `max_trees`.
std::vector<TreePtr> enumerate_trees(const GluingDiagram& grid,
                                     long long max_trees = 1000000);

/// Tree count by the same recursion without materializing trees.
long long count_trees(const GluingDiagram& grid, long long cap = -1);

/// Every position admitting a forward Alpha or Beta, ordered by position.
std::vector<Move> applicable_moves(const TreePtr& tree);

/// Whether `move` matches `tree` at its position in the given orientation.
bool move_applies(const TreePtr& tree, const Move& move, Orientation orient);

TreePtr apply_move(const TreePtr& tree, const Move& move,
                   Orientation orient = Orientation::Forward);

/// Box spanned by the tree (meaningful on valid trees).
Box tree_box(const TreePtr& t);

}  // namespace nfold
