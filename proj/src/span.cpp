#include "nfold/span.hpp"

#include <algorithm>
#include <sstream>

#include "nfold/rewrite.hpp"
#include "nfold/util.hpp"

namespace nfold {

// --- elements ---------------------------------------------------------------

Elem Elem::atom(const std::string& name) {
  if (name.empty()) throw InputError("empty atom name");
  for (char c : name)
    if (c == '(' || c == ')' || c == ',')
      throw InputError("atom name may not contain parentheses or commas: " + name);
  auto n = std::make_shared<Node>();
  n->atom = true;
  n->name = name;
  n->key = name;
  return wrap(n);
}

Elem Elem::pair(const Elem& a, const Elem& b) {
  auto n = std::make_shared<Node>();
  n->atom = false;
  n->a = a.node_;
  n->b = b.node_;
  n->key = "(" + a.key() + "," + b.key() + ")";
  return wrap(n);
}

const Elem& Elem::first() const {
  if (node_->atom) throw InternalError("first() on an atom");
  static thread_local std::map<const Node*, Elem> handles;
  auto it = handles.find(node_->a.get());
  if (it == handles.end()) it = handles.emplace(node_->a.get(), wrap(node_->a)).first;
  return it->second;
}

const Elem& Elem::second() const {
  if (node_->atom) throw InternalError("second() on an atom");
  static thread_local std::map<const Node*, Elem> handles;
  auto it = handles.find(node_->b.get());
  if (it == handles.end()) it = handles.emplace(node_->b.get(), wrap(node_->b)).first;
  return it->second;
}

ElemSet make_set(std::vector<Elem> elems) {
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  return elems;
}

bool set_contains(const ElemSet& s, const Elem& e) {
  return std::binary_search(s.begin(), s.end(), e);
}

ElemMap::ElemMap(std::vector<std::pair<Elem, Elem>> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 0; i + 1 < pairs_.size(); ++i)
    if (pairs_[i].first == pairs_[i + 1].first)
      throw InternalError("map defined twice on " + pairs_[i].first.key());
}

const Elem& ElemMap::apply(const Elem& e) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), e,
                             [](const auto& p, const Elem& x) { return p.first < x; });
  if (it == pairs_.end() || !(it->first == e))
    throw InternalError("map undefined on " + e.key());
  return it->second;
}

bool ElemMap::defined_on(const Elem& e) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), e,
                             [](const auto& p, const Elem& x) { return p.first < x; });
  return it != pairs_.end() && it->first == e;
}

ElemMap ElemMap::inverse_of_bijection() const {
  std::vector<std::pair<Elem, Elem>> inv;
  inv.reserve(pairs_.size());
  for (const auto& [a, b] : pairs_) inv.emplace_back(b, a);
  ElemMap out(inv);
  if (out.pairs().size() != pairs_.size()) throw InternalError("map is not a bijection");
  return out;
}

Bijection Bijection::then(const Bijection& next) const {
  std::vector<std::pair<Elem, Elem>> composed;
  composed.reserve(forward.pairs().size());
  for (const auto& [a, b] : forward.pairs()) composed.emplace_back(a, next.forward.apply(b));
  return Bijection{ElemMap(std::move(composed))};
}

Bijection Bijection::inverted() const { return Bijection{forward.inverse_of_bijection()}; }

// --- faces ------------------------------------------------------------------

FaceSpec core_face(int arity) { return FaceSpec(static_cast<std::size_t>(arity), '*'); }

std::vector<FaceSpec> all_faces(int arity) {
  std::vector<FaceSpec> out;
  const char digits[] = {'0', '1', '*'};
  std::vector<int> idx(static_cast<std::size_t>(arity), 0);
  FaceSpec cur(static_cast<std::size_t>(arity), '0');
  for (;;) {
    for (int a = 0; a < arity; ++a) cur[a] = digits[idx[a]];
    out.push_back(cur);
    int a = arity - 1;
    while (a >= 0) {
      if (++idx[a] < 3) break;
      idx[a] = 0;
      --a;
    }
    if (a < 0) break;
  }
  return out;
}

namespace {

// Covering pairs: faces reached by pinning one free axis.
std::vector<std::pair<FaceSpec, FaceSpec>> covers(const FaceSpec& face) {
  std::vector<std::pair<FaceSpec, FaceSpec>> out;
  for (std::size_t a = 0; a < face.size(); ++a) {
    if (face[a] != '*') continue;
    FaceSpec lo = face, hi = face;
    lo[a] = '0';
    hi[a] = '1';
    out.emplace_back(face, lo);
    out.emplace_back(face, hi);
  }
  return out;
}

FaceSpec pin(const FaceSpec& face, int axis, char v) {
  FaceSpec out = face;
  out[axis] = v;
  return out;
}

}  // namespace

int FiniteSpan::axis_of(int dir) const {
  for (std::size_t a = 0; a < directions.size(); ++a)
    if (directions[a] == dir) return static_cast<int>(a);
  throw InputError("span does not extend in direction " + std::to_string(dir));
}

const ElemSet& FiniteSpan::core() const { return sets.at(core_face(arity())); }

int FiniteCospan::axis_of(int dir) const {
  for (std::size_t a = 0; a < directions.size(); ++a)
    if (directions[a] == dir) return static_cast<int>(a);
  throw InputError("cospan does not extend in direction " + std::to_string(dir));
}

const ElemSet& FiniteCospan::core() const { return sets.at(core_face(arity())); }

namespace {

template <typename Diagram>
SpanValidation validate_cubical(const Diagram& s, bool maps_outward) {
  SpanValidation v;
  auto complain = [&](const std::string& msg) {
    v.ok = false;
    v.issues.push_back(msg);
  };
  if (!std::is_sorted(s.directions.begin(), s.directions.end()) ||
      std::adjacent_find(s.directions.begin(), s.directions.end()) != s.directions.end())
    complain("directions must be strictly increasing");
  auto faces = all_faces(s.arity());
  for (const auto& f : faces)
    if (!s.sets.count(f)) complain("missing set at face " + f);
  if (!v.ok) return v;
  for (const auto& f : faces) {
    for (auto [hi, lo] : covers(f)) {
      auto key = maps_outward ? std::make_pair(hi, lo) : std::make_pair(lo, hi);
      auto it = s.maps.find(key);
      if (it == s.maps.end()) {
        complain("missing map " + key.first + " -> " + key.second);
        continue;
      }
      const ElemSet& dom = s.sets.at(key.first);
      const ElemSet& cod = s.sets.at(key.second);
      for (const Elem& e : dom) {
        if (!it->second.defined_on(e)) {
          complain("map " + key.first + " -> " + key.second + " undefined on " + e.key());
          break;
        }
        if (!set_contains(cod, it->second.apply(e))) {
          complain("map " + key.first + " -> " + key.second + " leaves the codomain");
          break;
        }
      }
    }
  }
  if (!v.ok) return v;
  // All codimension-2 squares commute.
  for (const auto& f : faces) {
    for (std::size_t a = 0; a < f.size(); ++a) {
      if (f[a] != '*') continue;
      for (std::size_t b = a + 1; b < f.size(); ++b) {
        if (f[b] != '*') continue;
        for (char ea : {'0', '1'})
          for (char eb : {'0', '1'}) {
            FaceSpec fa = pin(f, static_cast<int>(a), ea);
            FaceSpec fb = pin(f, static_cast<int>(b), eb);
            FaceSpec fab = pin(fa, static_cast<int>(b), eb);
            if (maps_outward) {
              const ElemMap &m1 = s.maps.at({f, fa}), &m2 = s.maps.at({fa, fab});
              const ElemMap &n1 = s.maps.at({f, fb}), &n2 = s.maps.at({fb, fab});
              for (const Elem& e : s.sets.at(f))
                if (!(m2.apply(m1.apply(e)) == n2.apply(n1.apply(e)))) {
                  complain("square " + f + " -> " + fab + " does not commute at " + e.key());
                  break;
                }
            } else {
              const ElemMap &m1 = s.maps.at({fab, fa}), &m2 = s.maps.at({fa, f});
              const ElemMap &n1 = s.maps.at({fab, fb}), &n2 = s.maps.at({fb, f});
              for (const Elem& e : s.sets.at(fab))
                if (!(m2.apply(m1.apply(e)) == n2.apply(n1.apply(e)))) {
                  complain("square " + fab + " -> " + f + " does not commute at " + e.key());
                  break;
                }
            }
          }
      }
    }
  }
  return v;
}

}  // namespace

SpanValidation validate_span(const FiniteSpan& s) { return validate_cubical(s, true); }
SpanValidation validate_cospan(const FiniteCospan& s) { return validate_cubical(s, false); }

// --- sources, targets, units ------------------------------------------------

namespace {

FiniteSpan face_restrict(const FiniteSpan& s, int dir, char side) {
  int ax = s.axis_of(dir);
  FiniteSpan out;
  out.directions = s.directions;
  out.directions.erase(out.directions.begin() + ax);
  for (const auto& f : all_faces(out.arity())) {
    FaceSpec full = f;
    full.insert(full.begin() + ax, side);
    out.sets[f] = s.sets.at(full);
    for (auto [hi, lo] : covers(f)) {
      FaceSpec hi_full = hi, lo_full = lo;
      hi_full.insert(hi_full.begin() + ax, side);
      lo_full.insert(lo_full.begin() + ax, side);
      out.maps[{hi, lo}] = s.maps.at({hi_full, lo_full});
    }
  }
  return out;
}

}  // namespace

SpanMor as_morphism(const FiniteSpan& s) { return SpanMor{s, {}}; }

SpanMor formal_unit(const SpanMor& x, int dir) {
  if (x.unit_dirs.count(dir))
    throw InputError("already a unit in direction " + std::to_string(dir));
  for (int d : x.base.directions)
    if (d == dir) throw InputError("span already extends in direction " + std::to_string(dir));
  SpanMor out = x;
  out.unit_dirs.insert(dir);
  return out;
}

SpanMor source_of(const SpanMor& x, int dir) {
  if (x.unit_dirs.count(dir)) {
    SpanMor out = x;
    out.unit_dirs.erase(dir);
    return out;
  }
  return SpanMor{face_restrict(x.base, dir, '0'), x.unit_dirs};
}

SpanMor target_of(const SpanMor& x, int dir) {
  if (x.unit_dirs.count(dir)) {
    SpanMor out = x;
    out.unit_dirs.erase(dir);
    return out;
  }
  return SpanMor{face_restrict(x.base, dir, '1'), x.unit_dirs};
}

// --- composition ------------------------------------------------------------

FiniteSpan compose_spans(const FiniteSpan& x, const FiniteSpan& y, int dir) {
  if (x.directions != y.directions)
    throw InputError("composition needs spans in the same directions");
  int ax = x.axis_of(dir);
  if (!(face_restrict(x, dir, '1') == face_restrict(y, dir, '0')))
    throw InputError("target face of the first span does not match source face of the second");

  FiniteSpan out;
  out.directions = x.directions;
  for (const auto& f : all_faces(x.arity())) {
    if (f[ax] == '0') {
      out.sets[f] = x.sets.at(f);
    } else if (f[ax] == '1') {
      out.sets[f] = y.sets.at(f);
    } else {
      const ElemMap& to_seam_x = x.maps.at({f, pin(f, ax, '1')});
      const ElemMap& to_seam_y = y.maps.at({f, pin(f, ax, '0')});
      std::vector<Elem> pairs;
      for (const Elem& a : x.sets.at(f))
        for (const Elem& b : y.sets.at(f))
          if (to_seam_x.apply(a) == to_seam_y.apply(b)) pairs.push_back(Elem::pair(a, b));
      out.sets[f] = make_set(std::move(pairs));
    }
  }
  for (const auto& f : all_faces(x.arity())) {
    for (auto [hi, lo] : covers(f)) {
      std::size_t a2 = 0;
      while (hi[a2] == lo[a2]) ++a2;
      if (f[ax] == '0') {
        out.maps[{hi, lo}] = x.maps.at({hi, lo});
      } else if (f[ax] == '1') {
        out.maps[{hi, lo}] = y.maps.at({hi, lo});
      } else if (static_cast<int>(a2) == ax) {
        // Collapse the pullback pair onto the chosen side.
        std::vector<std::pair<Elem, Elem>> m;
        const ElemMap& side = lo[ax] == '0' ? x.maps.at({hi, lo}) : y.maps.at({hi, lo});
        for (const Elem& e : out.sets.at(hi))
          m.emplace_back(e, side.apply(lo[ax] == '0' ? e.first() : e.second()));
        out.maps[{hi, lo}] = ElemMap(std::move(m));
      } else {
        const ElemMap& mx = x.maps.at({hi, lo});
        const ElemMap& my = y.maps.at({hi, lo});
        std::vector<std::pair<Elem, Elem>> m;
        for (const Elem& e : out.sets.at(hi))
          m.emplace_back(e, Elem::pair(mx.apply(e.first()), my.apply(e.second())));
        out.maps[{hi, lo}] = ElemMap(std::move(m));
      }
    }
  }
  return out;
}

SpanMor compose_spans(const SpanMor& x, const SpanMor& y, int dir) {
  bool xu = x.is_unit_in(dir), yu = y.is_unit_in(dir);
  if (xu && yu) {
    SpanMor x0 = x, y0 = y;
    x0.unit_dirs.erase(dir);
    y0.unit_dirs.erase(dir);
    if (!(x0 == y0)) throw InputError("unit-unit composition with mismatched bases");
    return x;
  }
  if (xu) {
    SpanMor x0 = x;
    x0.unit_dirs.erase(dir);
    if (!(x0 == source_of(y, dir)))
      throw InputError("left unit does not match the source in direction " +
                       std::to_string(dir));
    return y;
  }
  if (yu) {
    SpanMor y0 = y;
    y0.unit_dirs.erase(dir);
    if (!(y0 == target_of(x, dir)))
      throw InputError("right unit does not match the target in direction " +
                       std::to_string(dir));
    return x;
  }
  if (x.unit_dirs != y.unit_dirs)
    throw InputError("composition of morphisms with different unit directions");
  return SpanMor{compose_spans(x.base, y.base, dir), x.unit_dirs};
}

namespace {

FiniteCospan face_restrict_cospan(const FiniteCospan& s, int dir, char side) {
  int ax = s.axis_of(dir);
  FiniteCospan out;
  out.directions = s.directions;
  out.directions.erase(out.directions.begin() + ax);
  for (const auto& f : all_faces(out.arity())) {
    FaceSpec full = f;
    full.insert(full.begin() + ax, side);
    out.sets[f] = s.sets.at(full);
    for (auto [hi, lo] : covers(f)) {
      FaceSpec hi_full = hi, lo_full = lo;
      hi_full.insert(hi_full.begin() + ax, side);
      lo_full.insert(lo_full.begin() + ax, side);
      out.maps[{lo, hi}] = s.maps.at({lo_full, hi_full});
    }
  }
  return out;
}

// Union-find over element keys; the smallest key acts as class representative.
struct UnionFind {
  std::map<std::string, std::string> parent;
  std::map<std::string, Elem> elems;

  void add(const Elem& e) {
    if (!parent.count(e.key())) {
      parent[e.key()] = e.key();
      elems.emplace(e.key(), e);
    }
  }
  std::string find(const std::string& k) {
    std::string cur = k;
    while (parent.at(cur) != cur) cur = parent.at(cur);
    std::string walk = k;
    while (parent.at(walk) != cur) {
      std::string next = parent.at(walk);
      parent[walk] = cur;
      walk = next;
    }
    return cur;
  }
  void join(const Elem& a, const Elem& b) {
    std::string ra = find(a.key()), rb = find(b.key());
    if (ra == rb) return;
    if (rb < ra) std::swap(ra, rb);
    parent[rb] = ra;
  }
  Elem rep(const Elem& e) { return elems.at(find(e.key())); }
};

Elem inl(const Elem& e) { return Elem::pair(Elem::atom("inl"), e); }
Elem inr(const Elem& e) { return Elem::pair(Elem::atom("inr"), e); }

}  // namespace

FiniteCospan compose_cospans(const FiniteCospan& x, const FiniteCospan& y, int dir) {
  if (x.directions != y.directions)
    throw InputError("composition needs cospans in the same directions");
  int ax = x.axis_of(dir);
  if (!(face_restrict_cospan(x, dir, '1') == face_restrict_cospan(y, dir, '0')))
    throw InputError("shared face mismatch for cospan composition");

  // One union-find per glued face: inl(x-elem) ~ inr(y-elem) whenever some
  // seam element maps to both.
  std::map<FaceSpec, UnionFind> glue;
  auto faces = all_faces(x.arity());
  for (const auto& f : faces) {
    if (f[ax] != '*') continue;
    UnionFind uf;
    for (const Elem& e : x.sets.at(f)) uf.add(inl(e));
    for (const Elem& e : y.sets.at(f)) uf.add(inr(e));
    const ElemMap& from_seam_x = x.maps.at({pin(f, ax, '1'), f});
    const ElemMap& from_seam_y = y.maps.at({pin(f, ax, '0'), f});
    for (const Elem& s : x.sets.at(pin(f, ax, '1')))
      uf.join(inl(from_seam_x.apply(s)), inr(from_seam_y.apply(s)));
    glue.emplace(f, std::move(uf));
  }

  FiniteCospan out;
  out.directions = x.directions;
  for (const auto& f : faces) {
    if (f[ax] == '0') {
      out.sets[f] = x.sets.at(f);
    } else if (f[ax] == '1') {
      out.sets[f] = y.sets.at(f);
    } else {
      std::vector<Elem> reps;
      auto& uf = glue.at(f);
      for (const Elem& e : x.sets.at(f)) reps.push_back(uf.rep(inl(e)));
      for (const Elem& e : y.sets.at(f)) reps.push_back(uf.rep(inr(e)));
      out.sets[f] = make_set(std::move(reps));
    }
  }
  for (const auto& f : faces) {
    for (auto [hi, lo] : covers(f)) {
      std::size_t a2 = 0;
      while (hi[a2] == lo[a2]) ++a2;
      if (f[ax] == '0') {
        out.maps[{lo, hi}] = x.maps.at({lo, hi});
      } else if (f[ax] == '1') {
        out.maps[{lo, hi}] = y.maps.at({lo, hi});
      } else if (static_cast<int>(a2) == ax) {
        auto& uf = glue.at(hi);
        const ElemMap& side = lo[ax] == '0' ? x.maps.at({lo, hi}) : y.maps.at({lo, hi});
        std::vector<std::pair<Elem, Elem>> m;
        for (const Elem& e : out.sets.at(lo))
          m.emplace_back(e, uf.rep(lo[ax] == '0' ? inl(side.apply(e)) : inr(side.apply(e))));
        out.maps[{lo, hi}] = ElemMap(std::move(m));
      } else {
        auto& uf_hi = glue.at(hi);
        const ElemMap& mx = x.maps.at({lo, hi});
        const ElemMap& my = y.maps.at({lo, hi});
        std::vector<std::pair<Elem, Elem>> m;
        for (const Elem& e : out.sets.at(lo)) {
          const Elem& tag = e.first();
          Elem image =
              tag.name() == "inl" ? inl(mx.apply(e.second())) : inr(my.apply(e.second()));
          m.emplace_back(e, uf_hi.rep(image));
        }
        out.maps[{lo, hi}] = ElemMap(std::move(m));
      }
    }
  }
  return out;
}

// --- tensor and braiding ------------------------------------------------------

FiniteSpan tensor(const FiniteSpan& x, const FiniteSpan& y) {
  if (x.directions != y.directions)
    throw InputError("tensor needs spans of the same arity and directions");
  FiniteSpan out;
  out.directions = x.directions;
  for (const auto& f : all_faces(x.arity())) {
    std::vector<Elem> prod;
    for (const Elem& a : x.sets.at(f))
      for (const Elem& b : y.sets.at(f)) prod.push_back(Elem::pair(a, b));
    out.sets[f] = make_set(std::move(prod));
  }
  for (const auto& f : all_faces(x.arity())) {
    for (auto [hi, lo] : covers(f)) {
      const ElemMap& mx = x.maps.at({hi, lo});
      const ElemMap& my = y.maps.at({hi, lo});
      std::vector<std::pair<Elem, Elem>> m;
      for (const Elem& a : x.sets.at(hi))
        for (const Elem& b : y.sets.at(hi))
          m.emplace_back(Elem::pair(a, b), Elem::pair(mx.apply(a), my.apply(b)));
      out.maps[{hi, lo}] = ElemMap(std::move(m));
    }
  }
  return out;
}

Bijection braiding(const FiniteSpan& x, const FiniteSpan& y) {
  std::vector<std::pair<Elem, Elem>> m;
  for (const Elem& a : x.core())
    for (const Elem& b : y.core()) m.emplace_back(Elem::pair(a, b), Elem::pair(b, a));
  return Bijection{ElemMap(std::move(m))};
}

// --- grid instances -----------------------------------------------------------

SpanValidation validate_instance(const SpanGridInstance& inst) {
  SpanValidation v;
  auto complain = [&](const std::string& msg) {
    v.ok = false;
    v.issues.push_back(msg);
  };
  int k = inst.grid.arity();
  for (const auto& cell : inst.grid.cells()) {
    auto it = inst.cells.find(cell);
    if (it == inst.cells.end()) {
      complain("missing span for a grid cell");
      continue;
    }
    if (it->second.arity() != k) complain("cell span arity differs from grid arity");
    auto sv = validate_span(it->second);
    if (!sv.ok) {
      complain("invalid cell span: " + sv.issues.front());
      continue;
    }
    for (int d = 1; d <= k; ++d) {
      std::vector<int> next = cell;
      next[d - 1]++;
      if (!inst.grid.contains_cell(next)) continue;
      auto jt = inst.cells.find(next);
      if (jt == inst.cells.end()) continue;
      if (!(face_restrict(it->second, d, '1') == face_restrict(jt->second, d, '0')))
        complain("adjacent cells disagree on their shared face in direction " +
                 std::to_string(d));
    }
  }
  return v;
}

namespace {

Elem rebracket_at(const Elem& e, const TreePath& pos, std::size_t i, Move::Kind kind,
                  Orientation orient) {
  if (i < pos.size()) {
    if (e.is_atom()) throw InternalError("re-bracketing path leaves the tuple");
    if (pos[i] == 'L')
      return Elem::pair(rebracket_at(e.first(), pos, i + 1, kind, orient), e.second());
    return Elem::pair(e.first(), rebracket_at(e.second(), pos, i + 1, kind, orient));
  }
  if (kind == Move::Kind::Alpha) {
    if (orient == Orientation::Forward) {
      // ((a,b),c) -> (a,(b,c))
      const Elem& ab = e.first();
      return Elem::pair(ab.first(), Elem::pair(ab.second(), e.second()));
    }
    const Elem& bc = e.second();
    return Elem::pair(Elem::pair(e.first(), bc.first()), bc.second());
  }
  // ((a,b),(c,d)) -> ((a,c),(b,d)); the same swap serves both orientations.
  const Elem& ab = e.first();
  const Elem& cd = e.second();
  return Elem::pair(Elem::pair(ab.first(), cd.first()),
                    Elem::pair(ab.second(), cd.second()));
}

// Cutting a composite down to one side of a hyperplane. Leaves of the
// result are the surviving cells; their face within the slice is tracked by
// the caller via a global face spec.
TreePtr restrict_tree(const TreePtr& t, int dir, char side) {
  if (t->is_leaf()) return t;
  if (t->dir == dir) return restrict_tree(side == '0' ? t->left : t->right, dir, side);
  return make_node(t->dir, restrict_tree(t->left, dir, side),
                   restrict_tree(t->right, dir, side));
}

// Evaluation of grid composites. Parallel bracketings of a sub-box induce
// differently nested boundary tuples, so seam values are compared after
// re-bracketing both sides to the slice's normal-form tree; the coherence
// of the model makes that canonical form independent of the chosen path.
struct TreeEvaluator {
  const SpanGridInstance& inst;
  std::map<std::string, NormalizeResult> nf_cache;
  std::map<std::string, ElemSet> set_cache;  // key: tree key + face

  explicit TreeEvaluator(const SpanGridInstance& i) : inst(i) {}

  const NormalizeResult& normal_form(const TreePtr& t) {
    std::string key = tree_key(t);
    auto it = nf_cache.find(key);
    if (it == nf_cache.end()) it = nf_cache.emplace(key, normalize(t)).first;
    return it->second;
  }

  Elem canonical(const TreePtr& slice, Elem v) {
    for (const auto& step : normal_form(slice).path.steps)
      v = rebracket_at(v, step.move.pos, 0, step.move.kind, step.orient);
    return v;
  }

  // Boundary value of `v` on the `side`-face of `t` in direction `dir`,
  // shaped like restrict_tree(t, dir, side).
  Elem restrict_value(const TreePtr& t, const FaceSpec& face, const Elem& v, int dir,
                      char side) {
    if (t->is_leaf()) {
      const FiniteSpan& cell = inst.cells.at(t->cell);
      int ax = cell.axis_of(dir);
      return cell.maps.at({face, pin(face, ax, side)}).apply(v);
    }
    if (t->dir == dir)
      return restrict_value(side == '0' ? t->left : t->right, face,
                            side == '0' ? v.first() : v.second(), dir, side);
    return Elem::pair(restrict_value(t->left, face, v.first(), dir, side),
                      restrict_value(t->right, face, v.second(), dir, side));
  }

  // All compatible nested tuples over `t` at the (global) face `face`.
  const ElemSet& eval(const TreePtr& t, const FaceSpec& face) {
    std::string key = tree_key(t) + "@" + face;
    auto hit = set_cache.find(key);
    if (hit != set_cache.end()) return hit->second;
    ElemSet out;
    if (t->is_leaf()) {
      out = inst.cells.at(t->cell).sets.at(face);
    } else {
      const ElemSet& ls = eval(t->left, face);
      const ElemSet& rs = eval(t->right, face);
      int d = t->dir;
      TreePtr lslice = restrict_tree(t->left, d, '1');
      TreePtr rslice = restrict_tree(t->right, d, '0');
      std::map<std::string, std::vector<Elem>> right_by_seam;
      for (const Elem& b : rs)
        right_by_seam[canonical(rslice, restrict_value(t->right, face, b, d, '0')).key()]
            .push_back(b);
      std::vector<Elem> pairs;
      for (const Elem& a : ls) {
        auto bucket = right_by_seam.find(
            canonical(lslice, restrict_value(t->left, face, a, d, '1')).key());
        if (bucket == right_by_seam.end()) continue;
        for (const Elem& b : bucket->second) pairs.push_back(Elem::pair(a, b));
      }
      out = make_set(std::move(pairs));
    }
    return set_cache.emplace(key, std::move(out)).first->second;
  }
};

}  // namespace

FiniteSpan evaluate_tree(const SpanGridInstance& inst, const TreePtr& tree) {
  if (tree->is_leaf()) {
    auto it = inst.cells.find(tree->cell);
    if (it == inst.cells.end()) throw InputError("tree leaf outside the instance");
    return it->second;
  }
  int k = inst.grid.arity();
  TreeEvaluator ev(inst);

  // Face representatives: the input tree at the core, the slice's
  // normal-form tree everywhere else.
  std::map<FaceSpec, TreePtr> face_tree;
  for (const auto& f : all_faces(k)) {
    TreePtr t = tree;
    for (int a = 0; a < k; ++a)
      if (f[a] != '*') t = restrict_tree(t, a + 1, f[a]);
    face_tree[f] = f == core_face(k) ? t : ev.normal_form(t).tree;
  }

  FiniteSpan out;
  for (int d = 1; d <= k; ++d) out.directions.push_back(d);
  for (const auto& f : all_faces(k)) out.sets[f] = ev.eval(face_tree.at(f), f);
  for (const auto& f : all_faces(k)) {
    for (auto [hi, lo] : covers(f)) {
      std::size_t a2 = 0;
      while (hi[a2] == lo[a2]) ++a2;
      int dir = static_cast<int>(a2) + 1;
      const TreePtr& src_tree = face_tree.at(hi);
      TreePtr sliced = restrict_tree(src_tree, dir, lo[a2]);
      std::vector<std::pair<Elem, Elem>> m;
      for (const Elem& v : out.sets.at(hi))
        m.emplace_back(v, ev.canonical(sliced, ev.restrict_value(src_tree, hi, v, dir, lo[a2])));
      out.maps[{hi, lo}] = ElemMap(std::move(m));
    }
  }
  return out;
}

Bijection evaluate_path(const SpanGridInstance& inst, const MovePath& path) {
  ElemSet current = evaluate_tree(inst, path.start).core();
  std::vector<std::pair<Elem, Elem>> id_pairs;
  for (const Elem& e : current) id_pairs.emplace_back(e, e);
  Bijection total{ElemMap(std::move(id_pairs))};

  TreePtr tree = path.start;
  for (const auto& step : path.steps) {
    TreePtr next_tree = apply_move(tree, step.move, step.orient);
    std::vector<std::pair<Elem, Elem>> m;
    std::vector<Elem> imgs;
    for (const Elem& e : current) {
      Elem img = rebracket_at(e, step.move.pos, 0, step.move.kind, step.orient);
      m.emplace_back(e, img);
      imgs.push_back(img);
    }
    ElemSet next_set = make_set(imgs);
    if (next_set.size() != current.size())
      throw InternalError("re-bracketing was not injective");
    ElemSet expected = evaluate_tree(inst, next_tree).core();
    if (next_set != expected)
      throw InternalError("re-bracketing image differs from the composite core");
    total = total.then(Bijection{ElemMap(std::move(m))});
    current = std::move(next_set);
    tree = next_tree;
  }
  return total;
}

// --- instance generation ------------------------------------------------------

namespace {

struct AxisZigzag {
  // sets[2c] at integer position c, sets[2c+1] over the open cell (c, c+1);
  // maps from each half position onto its two integer neighbours.
  std::vector<std::vector<Elem>> sets;
  std::map<std::pair<int, int>, ElemMap> maps;
};

ElemMap random_surjection(Rng& rng, const std::vector<Elem>& dom,
                          const std::vector<Elem>& cod) {
  // Hit every codomain element at least once, then fill freely.
  std::vector<std::size_t> order(dom.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<std::pair<Elem, Elem>> m;
  m.reserve(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const Elem& target = i < cod.size() ? cod[i] : cod[rng.below(cod.size())];
    m.emplace_back(dom[order[i]], target);
  }
  return ElemMap(std::move(m));
}

std::vector<Elem> axis_atoms(int axis, int pos2x, int count) {
  std::vector<Elem> out;
  for (int i = 0; i < count; ++i)
    out.push_back(Elem::atom("d" + std::to_string(axis) + "_" + std::to_string(pos2x) +
                             "_" + std::to_string(i)));
  return out;
}

}  // namespace

namespace {

// Every proper face is one atom keyed by its global half-integer position,
// so adjacent cells agree on shared faces and pullback constraints are
// vacuous; cores are free per-cell sets.
SpanGridInstance singleton_face_instance(const GluingDiagram& grid, int core_size) {
  int k = grid.arity();
  SpanGridInstance inst;
  inst.grid = grid;
  for (const auto& cell : grid.cells()) {
    FiniteSpan span;
    for (int d = 1; d <= k; ++d) span.directions.push_back(d);
    auto face_atom = [&](const FaceSpec& f) {
      std::string name = "f";
      for (int a = 0; a < k; ++a)
        name += "_" + std::to_string(2 * cell[a] + (f[a] == '0' ? 0 : f[a] == '1' ? 2 : 1));
      return Elem::atom(name);
    };
    std::string cell_tag = "c";
    for (int a = 0; a < k; ++a) cell_tag += "_" + std::to_string(cell[a]);
    for (const auto& f : all_faces(k)) {
      if (f == core_face(k)) {
        std::vector<Elem> core;
        for (int i = 0; i < core_size; ++i)
          core.push_back(Elem::atom(cell_tag + "_e" + std::to_string(i)));
        span.sets[f] = make_set(std::move(core));
      } else {
        span.sets[f] = {face_atom(f)};
      }
    }
    for (const auto& f : all_faces(k)) {
      for (auto [hi, lo] : covers(f)) {
        const Elem& target = span.sets.at(lo).front();
        std::vector<std::pair<Elem, Elem>> m;
        for (const Elem& e : span.sets.at(hi)) m.emplace_back(e, target);
        span.maps[{hi, lo}] = ElemMap(std::move(m));
      }
    }
    inst.cells[cell] = std::move(span);
  }
  return inst;
}

}  // namespace

SpanGridInstance make_instance(const GluingDiagram& grid, std::uint64_t seed, int max_core,
                               InstanceKind kind) {
  if (max_core < 1) throw InputError("max_core must be positive");
  if (kind == InstanceKind::SingletonFaces)
    return singleton_face_instance(grid, std::min(max_core, 2));
  Rng rng(seed);
  int k = grid.arity();
  // One axis carries nontrivial sets so every cell core stays within
  // max_core; the remaining axes contribute singleton factors.
  int rich = k == 1 ? 0 : static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));

  std::vector<AxisZigzag> axes(k);
  for (int a = 0; a < k; ++a) {
    int p = grid.extents[a];
    axes[a].sets.resize(2 * p + 1);
    for (int c = 0; c < p; ++c) {
      int size = 1;
      if (a == rich) {
        if (kind == InstanceKind::Random)
          size = rng.range(1, max_core);
        else
          size = std::min(max_core, 2);
      }
      axes[a].sets[2 * c + 1] = axis_atoms(a + 1, 2 * c + 1, size);
    }
    for (int c = 0; c <= p; ++c) {
      int left = 2 * c - 1, right = 2 * c + 1;
      std::size_t bound = SIZE_MAX;
      if (c > 0) bound = std::min(bound, axes[a].sets[left].size());
      if (c < p) bound = std::min(bound, axes[a].sets[right].size());
      int size = 1;
      switch (kind) {
        case InstanceKind::Random:
          size = 1 + static_cast<int>(rng.below(bound));
          break;
        case InstanceKind::SingletonFaces:
          size = 1;
          break;
        case InstanceKind::IdentityMaps:
          size = static_cast<int>(bound);
          break;
      }
      axes[a].sets[2 * c] = axis_atoms(a + 1, 2 * c, size);
      auto attach = [&](int half) {
        if (kind == InstanceKind::IdentityMaps) {
          std::vector<std::pair<Elem, Elem>> m;
          for (std::size_t i = 0; i < axes[a].sets[half].size(); ++i)
            m.emplace_back(axes[a].sets[half][i],
                           axes[a].sets[2 * c][i % static_cast<std::size_t>(size)]);
          axes[a].maps[{half, 2 * c}] = ElemMap(std::move(m));
        } else {
          axes[a].maps[{half, 2 * c}] =
              random_surjection(rng, axes[a].sets[half], axes[a].sets[2 * c]);
        }
      };
      if (c > 0) attach(left);
      if (c < p) attach(right);
    }
  }

  auto product_elems = [&](const std::vector<int>& positions) {
    std::vector<Elem> out;
    std::vector<std::size_t> idx(positions.size(), 0);
    for (;;) {
      std::string name;
      for (int a = 0; a < k; ++a) {
        if (a) name += ".";
        name += axes[a].sets[positions[a]][idx[a]].name();
      }
      out.push_back(Elem::atom(name));
      int a = k - 1;
      while (a >= 0) {
        if (++idx[a] < axes[a].sets[positions[a]].size()) break;
        idx[a] = 0;
        --a;
      }
      if (a < 0) break;
    }
    return out;
  };

  SpanGridInstance inst;
  inst.grid = grid;
  for (const auto& cell : grid.cells()) {
    FiniteSpan span;
    for (int d = 1; d <= k; ++d) span.directions.push_back(d);
    auto face_positions = [&](const FaceSpec& f) {
      std::vector<int> pos(k);
      for (int a = 0; a < k; ++a)
        pos[a] =
            f[a] == '*' ? 2 * cell[a] + 1 : (f[a] == '0' ? 2 * cell[a] : 2 * cell[a] + 2);
      return pos;
    };
    for (const auto& f : all_faces(k)) span.sets[f] = make_set(product_elems(face_positions(f)));
    for (const auto& f : all_faces(k)) {
      for (auto [hi, lo] : covers(f)) {
        std::size_t a2 = 0;
        while (hi[a2] == lo[a2]) ++a2;
        auto hp = face_positions(hi);
        auto lp = face_positions(lo);
        const ElemMap& axis_map = axes[a2].maps.at({hp[a2], lp[a2]});
        std::vector<std::pair<Elem, Elem>> m;
        for (const Elem& e : span.sets.at(hi)) {
          // Split the product atom, map one component, rejoin.
          std::vector<std::string> parts;
          std::string cur;
          for (char ch : e.name()) {
            if (ch == '.') {
              parts.push_back(cur);
              cur.clear();
            } else {
              cur += ch;
            }
          }
          parts.push_back(cur);
          parts[a2] = axis_map.apply(Elem::atom(parts[a2])).name();
          std::string name;
          for (int a = 0; a < k; ++a) {
            if (a) name += ".";
            name += parts[a];
          }
          m.emplace_back(e, Elem::atom(name));
        }
        span.maps[{hi, lo}] = ElemMap(std::move(m));
      }
    }
    inst.cells[cell] = std::move(span);
  }
  return inst;
}

// --- axiom checking -----------------------------------------------------------

AxiomReport check_pseudo_axioms(const SpanGridInstance& inst, long long max_trees) {
  AxiomReport report;
  auto iv = validate_instance(inst);
  if (!iv.ok) throw InputError("invalid instance: " + iv.issues.front());
  auto cx = build_coherence_complex(inst.grid, max_trees);
  for (const auto& cell : cx.cells) {
    MovePath pa, pb;
    pa.start = cx.graph.vertices[cell.source];
    pb.start = pa.start;
    for (int e : cell.side_a)
      pa.steps.push_back(PathStep{cx.graph.edges[e].move, Orientation::Forward});
    for (int e : cell.side_b)
      pb.steps.push_back(PathStep{cx.graph.edges[e].move, Orientation::Forward});
    Bijection ba = evaluate_path(inst, pa);
    Bijection bb = evaluate_path(inst, pb);
    report.cells_checked++;
    report.by_kind[cell_kind_name(cell.kind)]++;
    if (!(ba == bb)) {
      report.ok = false;
      for (const auto& [e, va] : ba.forward.pairs()) {
        if (!(bb.forward.apply(e) == va)) {
          report.failures.push_back(cell_kind_name(cell.kind) + " cell at vertex " +
                                    std::to_string(cell.source) + " disagrees on " +
                                    e.key());
          break;
        }
      }
    }
  }
  // Interchangers invert: beta then its inverse is the identity, pointwise.
  for (std::size_t v = 0; v < cx.graph.vertices.size(); ++v) {
    for (const Move& m : applicable_moves(cx.graph.vertices[v])) {
      if (m.kind != Move::Kind::Beta) continue;
      MovePath there_back;
      there_back.start = cx.graph.vertices[v];
      there_back.steps.push_back(PathStep{m, Orientation::Forward});
      there_back.steps.push_back(PathStep{m, Orientation::Inverse});
      Bijection round = evaluate_path(inst, there_back);
      for (const auto& [e, img] : round.forward.pairs())
        if (!(e == img)) {
          report.ok = false;
          report.failures.push_back("beta inverse failed at " + e.key());
        }
    }
  }
  return report;
}

UnitLawReport check_unit_laws(const SpanGridInstance& inst) {
  UnitLawReport rep;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.failures.push_back(msg);
  };
  int k = inst.grid.arity();
  int fresh_dir = k + 1;  // a direction none of the cell spans extend in

  for (const auto& [cell, span] : inst.cells) {
    SpanMor x = as_morphism(span);
    for (int i = 1; i <= k; ++i) {
      SpanMor lu = formal_unit(source_of(x, i), i);
      SpanMor ru = formal_unit(target_of(x, i), i);
      if (!(compose_spans(lu, x, i) == x))
        fail("left unit law failed in direction " + std::to_string(i));
      if (!(compose_spans(x, ru, i) == x))
        fail("right unit law failed in direction " + std::to_string(i));
      SpanMor idx = formal_unit(x, fresh_dir);
      if (!(source_of(idx, fresh_dir) == x) || !(target_of(idx, fresh_dir) == x))
        fail("source/target of identity is not the base");
      if (!(source_of(idx, i) == formal_unit(source_of(x, i), fresh_dir)))
        fail("source does not commute with a foreign identity");
      if (!(target_of(idx, i) == formal_unit(target_of(x, i), fresh_dir)))
        fail("target does not commute with a foreign identity");
      SpanMor two_a = formal_unit(formal_unit(x, fresh_dir), fresh_dir + 1);
      SpanMor two_b = formal_unit(formal_unit(x, fresh_dir + 1), fresh_dir);
      if (!(two_a == two_b)) fail("iterated identities depend on their order");
      for (int j = 1; j <= k; ++j) {
        if (j == i) continue;
        if (!(source_of(source_of(x, j), i) == source_of(source_of(x, i), j)))
          fail("sources in different directions do not commute");
        if (!(target_of(source_of(x, j), i) == source_of(target_of(x, i), j)))
          fail("mixed source/target do not commute");
        if (!(target_of(target_of(x, j), i) == target_of(target_of(x, i), j)))
          fail("targets in different directions do not commute");
      }
    }
  }
  for (const auto& [cell, span] : inst.cells) {
    for (int i = 1; i <= k; ++i) {
      std::vector<int> next = cell;
      next[i - 1]++;
      auto it = inst.cells.find(next);
      if (it == inst.cells.end()) continue;
      SpanMor x = as_morphism(span), y = as_morphism(it->second);
      SpanMor xy = compose_spans(x, y, i);
      if (!(source_of(xy, i) == source_of(x, i))) fail("source of composite is wrong");
      if (!(target_of(xy, i) == target_of(y, i))) fail("target of composite is wrong");
      for (int j = 1; j <= k; ++j) {
        if (j == i) continue;
        if (!(source_of(xy, j) == compose_spans(source_of(x, j), source_of(y, j), i)))
          fail("source does not distribute over a foreign composition");
        if (!(target_of(xy, j) == compose_spans(target_of(x, j), target_of(y, j), i)))
          fail("target does not distribute over a foreign composition");
      }
      SpanMor lhs = formal_unit(xy, fresh_dir);
      SpanMor rhs = compose_spans(formal_unit(x, fresh_dir), formal_unit(y, fresh_dir), i);
      if (!(lhs == rhs)) fail("identity does not distribute over composition");
      // Unit coherences: associators on unit-laden triples are literal
      // identities because units absorb strictly.
      SpanMor lu = formal_unit(source_of(x, i), i);
      if (!(compose_spans(compose_spans(lu, x, i), y, i) ==
            compose_spans(lu, compose_spans(x, y, i), i)))
        fail("unit-laden associator is not the identity");
      SpanMor mu = formal_unit(target_of(x, i), i);
      if (!(compose_spans(compose_spans(x, mu, i), y, i) ==
            compose_spans(x, compose_spans(mu, y, i), i)))
        fail("middle-unit associator is not the identity");
    }
  }
  return rep;
}

}  // namespace nfold
