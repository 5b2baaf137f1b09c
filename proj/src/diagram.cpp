#include "nfold/diagram.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace nfold {

long long GluingDiagram::cell_count() const {
  long long p = 1;
  for (int e : extents) p *= e;
  return p;
}

bool GluingDiagram::contains_cell(const std::vector<int>& cell) const {
  if (cell.size() != extents.size()) return false;
  for (std::size_t i = 0; i < cell.size(); ++i)
    if (cell[i] < 0 || cell[i] >= extents[i]) return false;
  return true;
}

std::vector<std::vector<int>> GluingDiagram::cells() const {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(extents.size(), 0);
  for (;;) {
    out.push_back(cur);
    int d = static_cast<int>(extents.size()) - 1;
    while (d >= 0) {
      if (++cur[d] < extents[d]) break;
      cur[d] = 0;
      --d;
    }
    if (d < 0) break;
  }
  return out;
}

GluingDiagram make_grid(const std::vector<int>& extents) {
  if (extents.empty()) throw InputError("grid needs at least one extent");
  for (int e : extents)
    if (e < 1) throw InputError("grid extents must be positive");
  return GluingDiagram{extents};
}

Box Box::cell(const std::vector<int>& coords) {
  Box b;
  b.lo = coords;
  b.hi = coords;
  for (int& h : b.hi) ++h;
  return b;
}

bool Box::valid_in(const GluingDiagram& grid) const {
  if (lo.size() != grid.extents.size() || hi.size() != grid.extents.size()) return false;
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (lo[i] < 0 || hi[i] > grid.extents[i] || lo[i] >= hi[i]) return false;
  return true;
}

long long Box::volume() const {
  long long v = 1;
  for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
  return v;
}

std::optional<Box> Box::join(const Box& a, const Box& b, Direction dir) {
  if (a.lo.size() != b.lo.size()) return std::nullopt;
  int d = dir - 1;
  if (d < 0 || d >= static_cast<int>(a.lo.size())) return std::nullopt;
  if (a.hi[d] != b.lo[d]) return std::nullopt;  // a must sit on the lower side
  for (std::size_t i = 0; i < a.lo.size(); ++i) {
    if (static_cast<int>(i) == d) continue;
    if (a.lo[i] != b.lo[i] || a.hi[i] != b.hi[i]) return std::nullopt;
  }
  Box out = a;
  out.hi[d] = b.hi[d];
  return out;
}

TreePtr make_leaf(const std::vector<int>& cell) {
  auto t = std::make_shared<CompTree>();
  t->cell = cell;
  return t;
}

TreePtr make_node(Direction dir, TreePtr left, TreePtr right) {
  if (dir < 1) throw InputError("node direction must be >= 1");
  if (!left || !right) throw InputError("node needs two children");
  auto t = std::make_shared<CompTree>();
  t->dir = dir;
  t->left = std::move(left);
  t->right = std::move(right);
  return t;
}

bool tree_equal(const TreePtr& a, const TreePtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->dir != b->dir) return false;
  if (a->is_leaf()) return a->cell == b->cell;
  return tree_equal(a->left, b->left) && tree_equal(a->right, b->right);
}

static void tree_key_rec(const TreePtr& t, std::ostringstream& os) {
  if (t->is_leaf()) {
    os << '[';
    for (std::size_t i = 0; i < t->cell.size(); ++i) {
      if (i) os << ',';
      os << t->cell[i];
    }
    os << ']';
  } else {
    os << '(' << t->dir << ' ';
    tree_key_rec(t->left, os);
    os << ' ';
    tree_key_rec(t->right, os);
    os << ')';
  }
}

std::string tree_key(const TreePtr& t) {
  std::ostringstream os;
  tree_key_rec(t, os);
  return os.str();
}

int tree_leaf_count(const TreePtr& t) {
  if (t->is_leaf()) return 1;
  return tree_leaf_count(t->left) + tree_leaf_count(t->right);
}

TreePtr subtree_at(const TreePtr& t, const TreePath& pos) {
  TreePtr cur = t;
  for (char c : pos) {
    if (!cur || cur->is_leaf()) throw ApplicationError("position leaves the tree: " + pos);
    cur = (c == 'L') ? cur->left : cur->right;
  }
  if (!cur) throw ApplicationError("position leaves the tree: " + pos);
  return cur;
}

TreePtr replace_at(const TreePtr& t, const TreePath& pos, const TreePtr& sub) {
  if (pos.empty()) return sub;
  if (t->is_leaf()) throw ApplicationError("position leaves the tree: " + pos);
  if (pos[0] == 'L')
    return make_node(t->dir, replace_at(t->left, pos.substr(1), sub), t->right);
  return make_node(t->dir, t->left, replace_at(t->right, pos.substr(1), sub));
}

std::string Move::str() const {
  std::ostringstream os;
  if (kind == Kind::Alpha)
    os << "alpha(" << dir << ")";
  else
    os << "beta(" << dir << "," << inner_dir << ")";
  os << "@" << (pos.empty() ? "." : pos);
  return os.str();
}

TreePtr MovePath::end() const {
  TreePtr cur = start;
  for (const auto& s : steps) cur = apply_move(cur, s.move, s.orient);
  return cur;
}

MovePath MovePath::inverted() const {
  MovePath out;
  out.start = end();
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    PathStep s = *it;
    s.orient = s.orient == Orientation::Forward ? Orientation::Inverse : Orientation::Forward;
    out.steps.push_back(s);
  }
  return out;
}

// Recomputes the box below each node, recording every structural defect.
static std::optional<Box> check_tree_rec(const TreePtr& t, const GluingDiagram& grid,
                                         const TreePath& pos, TreeReport& report,
                                         std::map<std::vector<int>, int>& leaf_uses) {
  auto complain = [&](const std::string& msg) {
    report.ok = false;
    report.issues.push_back(msg + " at position " + (pos.empty() ? "." : pos));
    return std::nullopt;
  };
  if (t->is_leaf()) {
    if (!grid.contains_cell(t->cell)) return complain("leaf outside grid");
    ++leaf_uses[t->cell];
    return Box::cell(t->cell);
  }
  if (t->dir < 1 || t->dir > grid.arity()) return complain("direction out of range");
  auto lb = check_tree_rec(t->left, grid, pos + "L", report, leaf_uses);
  auto rb = check_tree_rec(t->right, grid, pos + "R", report, leaf_uses);
  if (!lb || !rb) return std::nullopt;
  auto joined = Box::join(*lb, *rb, t->dir);
  if (!joined) return complain("children are not adjacent boxes along direction " +
                               std::to_string(t->dir));
  return joined;
}

TreeReport validate_tree(const TreePtr& tree, const GluingDiagram& grid) {
  TreeReport report;
  if (!tree) {
    report.ok = false;
    report.issues.push_back("null tree");
    return report;
  }
  std::map<std::vector<int>, int> leaf_uses;
  auto box = check_tree_rec(tree, grid, "", report, leaf_uses);
  for (const auto& [cell, uses] : leaf_uses)
    if (uses > 1) {
      report.ok = false;
      report.issues.push_back("duplicated leaf cell");
    }
  if (report.ok && box) {
    Box whole;
    whole.lo.assign(grid.arity(), 0);
    whole.hi = grid.extents;
    if (!(*box == whole)) {
      report.ok = false;
      report.issues.push_back("tree does not cover the whole grid");
    }
  }
  if (report.ok && static_cast<long long>(leaf_uses.size()) != grid.cell_count()) {
    report.ok = false;
    report.issues.push_back("leaves do not partition the grid cells");
  }
  return report;
}

namespace {

std::string box_key(const Box& b) {
  std::ostringstream os;
  for (int v : b.lo) os << v << ',';
  os << '|';
  for (int v : b.hi) os << v << ',';
  return os.str();
}

// All guillotine trees of a box, memoized per box. Order: split direction
// ascending, split offset ascending, then left-major over subtree lists.
struct TreeEnumerator {
  long long cap;
  long long produced = 0;
  std::map<std::string, std::vector<TreePtr>> memo;

  std::vector<TreePtr> trees_of(const Box& box) {
    std::string key = box_key(box);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<TreePtr> out;
    if (box.volume() == 1) {
      out.push_back(make_leaf(box.lo));
    } else {
      for (std::size_t d = 0; d < box.lo.size(); ++d) {
        for (int cut = box.lo[d] + 1; cut < box.hi[d]; ++cut) {
          Box lower = box, upper = box;
          lower.hi[d] = cut;
          upper.lo[d] = cut;
          auto ls = trees_of(lower);
          auto rs = trees_of(upper);
          for (const auto& l : ls)
            for (const auto& r : rs) {
              out.push_back(make_node(static_cast<int>(d) + 1, l, r));
              if (++produced > cap)
                throw CapacityError("tree enumeration exceeds cap of " + std::to_string(cap));
            }
        }
      }
    }
    memo[key] = out;
    return out;
  }
};

long long count_trees_box(const Box& box, std::map<std::string, long long>& memo,
                          long long cap) {
  std::string key = box_key(box);
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;
  long long total = 0;
  if (box.volume() == 1) {
    total = 1;
  } else {
    for (std::size_t d = 0; d < box.lo.size(); ++d) {
      for (int cut = box.lo[d] + 1; cut < box.hi[d]; ++cut) {
        Box lower = box, upper = box;
        lower.hi[d] = cut;
        upper.lo[d] = cut;
        total += count_trees_box(lower, memo, cap) * count_trees_box(upper, memo, cap);
        if (cap > 0 && total > cap)
          throw CapacityError("tree count exceeds cap of " + std::to_string(cap));
      }
    }
  }
  memo[key] = total;
  return total;
}

}  // namespace

std::vector<TreePtr> enumerate_trees(const GluingDiagram& grid, long long max_trees) {
  Box whole;
  whole.lo.assign(grid.arity(), 0);
  whole.hi = grid.extents;
  TreeEnumerator en;
  en.cap = max_trees;
  return en.trees_of(whole);
}

long long count_trees(const GluingDiagram& grid, long long cap) {
  Box whole;
  whole.lo.assign(grid.arity(), 0);
  whole.hi = grid.extents;
  std::map<std::string, long long> memo;
  return count_trees_box(whole, memo, cap);
}

// The four blocks of a beta pattern must tile an actual 2 x 2 arrangement
// of boxes: the inner cuts of the two children have to align. Without this
// the rewritten pairs are not composable in the diagram.
static bool beta_cuts_align(const TreePtr& left, const TreePtr& right, int cut_axis) {
  Box bx = tree_box(left->left);
  Box by = tree_box(right->left);
  return bx.hi[cut_axis - 1] == by.hi[cut_axis - 1];
}

static void collect_moves(const TreePtr& t, const TreePath& pos, std::vector<Move>& out) {
  if (t->is_leaf()) return;
  // At most one forward move matches a given node: the Alpha pattern wants
  // the left child rooted in the node's own direction, the Beta pattern
  // wants both children rooted in a common larger direction.
  if (!t->left->is_leaf() && t->left->dir == t->dir) {
    out.push_back(Move{Move::Kind::Alpha, t->dir, 0, pos});
  } else if (!t->left->is_leaf() && !t->right->is_leaf() &&
             t->left->dir == t->right->dir && t->dir < t->left->dir &&
             beta_cuts_align(t->left, t->right, t->left->dir)) {
    out.push_back(Move{Move::Kind::Beta, t->dir, t->left->dir, pos});
  }
  collect_moves(t->left, pos + "L", out);
  collect_moves(t->right, pos + "R", out);
}

std::vector<Move> applicable_moves(const TreePtr& tree) {
  std::vector<Move> out;
  collect_moves(tree, "", out);
  std::sort(out.begin(), out.end(), [](const Move& a, const Move& b) {
    if (a.pos != b.pos) return a.pos < b.pos;
    return a.kind < b.kind;
  });
  return out;
}

static TreePtr rewrite_local(const TreePtr& s, const Move& move, Orientation orient) {
  if (move.kind == Move::Kind::Alpha) {
    int i = move.dir;
    if (orient == Orientation::Forward) {
      // (x oi y) oi z -> x oi (y oi z)
      if (s->is_leaf() || s->dir != i || s->left->is_leaf() || s->left->dir != i)
        return nullptr;
      return make_node(i, s->left->left, make_node(i, s->left->right, s->right));
    }
    // x oi (y oi z) -> (x oi y) oi z
    if (s->is_leaf() || s->dir != i || s->right->is_leaf() || s->right->dir != i)
      return nullptr;
    return make_node(i, make_node(i, s->left, s->right->left), s->right->right);
  }
  int i = move.dir, j = move.inner_dir;
  if (i >= j) return nullptr;
  if (orient == Orientation::Forward) {
    // (x oj y) oi (x' oj y') -> (x oi x') oj (y oi y')
    if (s->is_leaf() || s->dir != i) return nullptr;
    if (s->left->is_leaf() || s->left->dir != j) return nullptr;
    if (s->right->is_leaf() || s->right->dir != j) return nullptr;
    if (!beta_cuts_align(s->left, s->right, j)) return nullptr;
    return make_node(j, make_node(i, s->left->left, s->right->left),
                     make_node(i, s->left->right, s->right->right));
  }
  // (x oi x') oj (y oi y') -> (x oj y) oi (x' oj y')
  if (s->is_leaf() || s->dir != j) return nullptr;
  if (s->left->is_leaf() || s->left->dir != i) return nullptr;
  if (s->right->is_leaf() || s->right->dir != i) return nullptr;
  if (!beta_cuts_align(s->left, s->right, i)) return nullptr;
  return make_node(i, make_node(j, s->left->left, s->right->left),
                   make_node(j, s->left->right, s->right->right));
}

bool move_applies(const TreePtr& tree, const Move& move, Orientation orient) {
  TreePtr s;
  try {
    s = subtree_at(tree, move.pos);
  } catch (const ApplicationError&) {
    return false;
  }
  return rewrite_local(s, move, orient) != nullptr;
}

TreePtr apply_move(const TreePtr& tree, const Move& move, Orientation orient) {
  TreePtr s = subtree_at(tree, move.pos);
  TreePtr replaced = rewrite_local(s, move, orient);
  if (!replaced)
    throw ApplicationError("move " + move.str() + " does not match" +
                           (orient == Orientation::Inverse ? " (inverse)" : ""));
  return replace_at(tree, move.pos, replaced);
}

Box tree_box(const TreePtr& t) {
  if (t->is_leaf()) return Box::cell(t->cell);
  Box lb = tree_box(t->left);
  Box rb = tree_box(t->right);
  auto j = Box::join(lb, rb, t->dir);
  if (!j) throw ApplicationError("tree children do not join into a box");
  return *j;
}

}  // namespace nfold
