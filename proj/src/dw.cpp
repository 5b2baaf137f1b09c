#include "nfold/dw.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace nfold {

// --- groups ---------------------------------------------------------------------

GroupTable load_group_table(const std::string& name,
                            const std::vector<std::string>& element_names,
                            const std::vector<std::vector<int>>& mul) {
  GroupTable g;
  g.name = name;
  g.order = static_cast<int>(element_names.size());
  g.element_names = element_names;
  g.mul = mul;
  if (g.order == 0) throw InputError("group must have at least one element");
  if (static_cast<int>(mul.size()) != g.order)
    throw InputError("multiplication table has wrong shape");
  for (const auto& row : mul) {
    if (static_cast<int>(row.size()) != g.order)
      throw InputError("multiplication table has wrong shape");
    for (int v : row)
      if (v < 0 || v >= g.order) throw InputError("table entry out of range");
  }
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      for (int c = 0; c < g.order; ++c)
        if (mul[mul[a][b]][c] != mul[a][mul[b][c]])
          throw InputError("non-associative table at triple (" + element_names[a] + "," +
                           element_names[b] + "," + element_names[c] + ")");
  g.identity = -1;
  for (int e = 0; e < g.order; ++e) {
    bool ok = true;
    for (int a = 0; a < g.order; ++a)
      if (mul[e][a] != a || mul[a][e] != a) ok = false;
    if (ok) {
      g.identity = e;
      break;
    }
  }
  if (g.identity < 0) throw InputError("table has no identity element");
  g.inverse.assign(g.order, -1);
  for (int a = 0; a < g.order; ++a) {
    for (int b = 0; b < g.order; ++b)
      if (mul[a][b] == g.identity && mul[b][a] == g.identity) g.inverse[a] = b;
    if (g.inverse[a] < 0)
      throw InputError("element " + element_names[a] + " has no inverse");
  }
  return g;
}

namespace {

GroupTable from_permutations(const std::string& name,
                             const std::vector<std::vector<int>>& perms,
                             const std::vector<std::string>& names) {
  std::vector<std::vector<int>> mul(perms.size(), std::vector<int>(perms.size(), -1));
  for (std::size_t a = 0; a < perms.size(); ++a)
    for (std::size_t b = 0; b < perms.size(); ++b) {
      std::vector<int> ab(perms[a].size());
      for (std::size_t i = 0; i < ab.size(); ++i) ab[i] = perms[a][perms[b][i]];
      for (std::size_t c = 0; c < perms.size(); ++c)
        if (perms[c] == ab) mul[a][b] = static_cast<int>(c);
    }
  return load_group_table(name, names, mul);
}

}  // namespace

GroupTable load_group(const std::string& name) {
  if (name.size() >= 2 && (name[0] == 'Z' || name[0] == 'z')) {
    int n = std::stoi(name.substr(1));
    if (n < 1) throw InputError("cyclic group order must be positive");
    std::vector<std::string> names;
    std::vector<std::vector<int>> mul(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i) {
      names.push_back("r" + std::to_string(i));
      for (int j = 0; j < n; ++j) mul[i][j] = (i + j) % n;
    }
    return load_group_table("Z" + std::to_string(n), names, mul);
  }
  if (name == "S3" || name == "s3") {
    std::vector<std::vector<int>> perms = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                                           {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
    return from_permutations("S3", perms, {"e", "r", "r2", "s01", "s12", "s02"});
  }
  if (name == "D4" || name == "d4") {
    // Symmetries of the square as permutations of its four corners.
    std::vector<std::vector<int>> perms = {{0, 1, 2, 3}, {1, 2, 3, 0}, {2, 3, 0, 1},
                                           {3, 0, 1, 2}, {1, 0, 3, 2}, {3, 2, 1, 0},
                                           {0, 3, 2, 1}, {2, 1, 0, 3}};
    return from_permutations("D4", perms, {"e", "r", "r2", "r3", "m1", "m2", "d1", "d2"});
  }
  if (name == "Q8" || name == "q8") {
    // 1, -1, i, -i, j, -j, k, -k.
    auto idx = [](int sign, int axis) { return axis * 2 + (sign < 0 ? 1 : 0); };
    std::vector<std::string> names = {"1", "-1", "i", "-i", "j", "-j", "k", "-k"};
    std::vector<std::vector<int>> mul(8, std::vector<int>(8));
    // Quaternion units: table over (sign, axis) with axes 0=1, 1=i, 2=j, 3=k.
    auto quat = [](int a, int b) {
      // returns (sign, axis) of unit product
      static const int axis[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
      static const int sign[4][4] = {{+1, +1, +1, +1},
                                     {+1, -1, +1, -1},
                                     {+1, -1, -1, +1},
                                     {+1, +1, -1, -1}};
      return std::make_pair(sign[a][b], axis[a][b]);
    };
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b) {
        int sa = a % 2 ? -1 : 1, xa = a / 2;
        int sb = b % 2 ? -1 : 1, xb = b / 2;
        auto [s, x] = quat(xa, xb);
        mul[a][b] = idx(sa * sb * s, x);
      }
    return load_group_table("Q8", names, mul);
  }
  throw InputError("unknown builtin group: " + name);
}

std::vector<std::vector<int>> conjugacy_classes(const GroupTable& g) {
  std::vector<int> cls(g.order, -1);
  std::vector<std::vector<int>> out;
  for (int a = 0; a < g.order; ++a) {
    if (cls[a] >= 0) continue;
    std::vector<int> orbit;
    for (int h = 0; h < g.order; ++h) {
      int c = g.times(g.times(h, a), g.inv(h));
      if (cls[c] < 0) {
        cls[c] = static_cast<int>(out.size());
        orbit.push_back(c);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    out.push_back(orbit);
  }
  return out;
}

std::vector<int> irrep_dimensions(const GroupTable& g) {
  // Commutator subgroup by closure.
  std::set<int> comm;
  for (int a = 0; a < g.order; ++a)
    for (int b = 0; b < g.order; ++b)
      comm.insert(g.times(g.times(a, b), g.times(g.inv(a), g.inv(b))));
  std::set<int> sub = comm;
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<int> cur(sub.begin(), sub.end());
    for (int a : cur)
      for (int b : cur)
        if (sub.insert(g.times(a, b)).second) grew = true;
  }
  int one_dim = g.order / static_cast<int>(sub.size());
  int classes = static_cast<int>(conjugacy_classes(g).size());
  int higher = classes - one_dim;
  std::vector<int> dims(one_dim, 1);
  int remaining = g.order - one_dim;
  if (higher == 0) {
    if (remaining != 0) throw InternalError("irrep dimension bookkeeping failed");
    return dims;
  }
  // Every group of order <= 8 has all higher irreps 2-dimensional.
  if (remaining != 4 * higher)
    throw CapacityError("irrep dimensions are only derived for groups of order <= 8");
  for (int i = 0; i < higher; ++i) dims.push_back(2);
  return dims;
}

namespace {

Rational rational_pow(const Rational& base, int e) {
  Rational out(1);
  Rational b = base;
  int n = e < 0 ? -e : e;
  for (int i = 0; i < n; ++i) out = out * b;
  if (e < 0) {
    if (out.num == 0) throw InputError("zero to a negative power");
    return Rational(out.den, out.num);
  }
  return out;
}

}  // namespace

Rational mednykh_value(const GroupTable& g, int genus) {
  Rational total(0);
  for (int d : irrep_dimensions(g))
    total = total + rational_pow(Rational(g.order, d), 2 * genus - 2);
  return total;
}

// --- presentations ----------------------------------------------------------------

namespace {

int word_tail(const CobPresentation& p, int signed_edge) {
  int e = std::abs(signed_edge) - 1;
  return signed_edge > 0 ? p.edges[e].src : p.edges[e].dst;
}

int word_head(const CobPresentation& p, int signed_edge) {
  int e = std::abs(signed_edge) - 1;
  return signed_edge > 0 ? p.edges[e].dst : p.edges[e].src;
}

}  // namespace

PresentationValidation validate_presentation(const CobPresentation& p) {
  PresentationValidation v;
  auto complain = [&](const std::string& msg) {
    v.ok = false;
    v.issues.push_back(msg);
  };
  for (const auto& e : p.edges)
    if (e.src < 0 || e.src >= p.num_vertices || e.dst < 0 || e.dst >= p.num_vertices)
      complain("edge " + e.id + " has endpoints outside the vertex set");
  for (std::size_t r = 0; r < p.relators.size(); ++r) {
    const auto& w = p.relators[r];
    if (w.empty()) {
      complain("relator " + std::to_string(r) + " is empty");
      continue;
    }
    bool in_range = true;
    for (int se : w)
      if (se == 0 || std::abs(se) > static_cast<int>(p.edges.size())) in_range = false;
    if (!in_range) {
      complain("relator " + std::to_string(r) + " references a missing edge");
      continue;
    }
    for (std::size_t i = 0; i < w.size(); ++i)
      if (word_head(p, w[i]) != word_tail(p, w[(i + 1) % w.size()]))
        complain("relator " + std::to_string(r) + " is not a closed loop");
  }
  for (const auto& [key, part] : p.boundaries) {
    std::set<int> vs(part.vertices.begin(), part.vertices.end());
    if (vs.size() != part.vertices.size()) complain("boundary part repeats a vertex");
    for (int vtx : part.vertices)
      if (vtx < 0 || vtx >= p.num_vertices) complain("boundary vertex out of range");
    for (int e : part.edges) {
      if (e < 0 || e >= static_cast<int>(p.edges.size())) {
        complain("boundary edge out of range");
        continue;
      }
      if (!vs.count(p.edges[e].src) || !vs.count(p.edges[e].dst))
        complain("boundary edge " + p.edges[e].id + " leaves the boundary vertex set");
    }
    std::set<int> es(part.edges.begin(), part.edges.end());
    for (int r : part.relators) {
      if (r < 0 || r >= static_cast<int>(p.relators.size())) {
        complain("boundary relator out of range");
        continue;
      }
      for (int se : p.relators[r])
        if (!es.count(std::abs(se) - 1))
          complain("boundary relator uses an edge outside the boundary");
    }
  }
  for (const auto& [key, part] : p.boundaries) {
    if (key.second != +1) continue;
    auto other = p.boundaries.find({key.first, -1});
    if (other == p.boundaries.end()) continue;
    std::set<int> vs(part.vertices.begin(), part.vertices.end());
    for (int vtx : other->second.vertices)
      if (vs.count(vtx))
        complain("boundaries (" + std::to_string(key.first) + ",+) and (-) intersect");
  }
  return v;
}

CobPresentation induced_presentation(const CobPresentation& p,
                                     const CobPresentation::BoundaryPart& part,
                                     const std::string& name) {
  CobPresentation out;
  out.name = name;
  out.dim = p.dim - 1;
  out.num_vertices = static_cast<int>(part.vertices.size());
  std::map<int, int> vmap, emap;
  for (std::size_t i = 0; i < part.vertices.size(); ++i)
    vmap[part.vertices[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < part.edges.size(); ++i) {
    const auto& e = p.edges[part.edges[i]];
    emap[part.edges[i]] = static_cast<int>(i);
    out.edges.push_back({e.id, vmap.at(e.src), vmap.at(e.dst)});
  }
  for (int r : part.relators) {
    std::vector<int> w;
    for (int se : p.relators[r]) {
      int e = emap.at(std::abs(se) - 1);
      w.push_back(se > 0 ? e + 1 : -(e + 1));
    }
    out.relators.push_back(std::move(w));
  }
  return out;
}

bool structurally_equal(const CobPresentation& a, const CobPresentation& b) {
  if (a.num_vertices != b.num_vertices) return false;
  if (a.edges.size() != b.edges.size()) return false;
  for (std::size_t i = 0; i < a.edges.size(); ++i)
    if (a.edges[i].src != b.edges[i].src || a.edges[i].dst != b.edges[i].dst) return false;
  return a.relators == b.relators;
}

// --- flat fields and gauge classes ------------------------------------------------

namespace {

int evaluate_word(const GroupTable& g, const FlatField& field,
                  const std::vector<int>& word) {
  // Transport composition: the last letter acts first.
  int acc = g.identity;
  for (int se : word) {
    int e = std::abs(se) - 1;
    int val = se > 0 ? field[e] : g.inv(field[e]);
    acc = g.times(val, acc);
  }
  return acc;
}

long long checked_pow(long long base, int e, long long cap) {
  long long out = 1;
  for (int i = 0; i < e; ++i) {
    out *= base;
    if (out > cap) return cap + 1;
  }
  return out;
}

}  // namespace

std::vector<FlatField> flat_fields(const CobPresentation& m, const GroupTable& g,
                                   long long cap) {
  auto pv = validate_presentation(m);
  if (!pv.ok) throw InputError("invalid presentation: " + pv.issues.front());
  int ne = static_cast<int>(m.edges.size());
  if (checked_pow(g.order, ne, cap) > cap)
    throw CapacityError("flat field search space exceeds the cap");

  // Relators become checkable once their last edge is assigned.
  std::vector<std::vector<int>> by_last_edge(ne);
  for (std::size_t r = 0; r < m.relators.size(); ++r) {
    int last = -1;
    for (int se : m.relators[r]) last = std::max(last, std::abs(se) - 1);
    if (last >= 0) by_last_edge[last].push_back(static_cast<int>(r));
  }
  if (ne == 0) {
    // No edges: the unique empty assignment is flat iff there is no
    // (necessarily empty) relator; empty relators were rejected above.
    return {FlatField{}};
  }

  auto search_from = [&](int first_value) {
    std::vector<FlatField> found;
    FlatField field(ne, 0);
    field[0] = first_value;
    std::function<void(int)> rec = [&](int pos) {
      for (int r : by_last_edge[pos - 1])
        if (evaluate_word(g, field, m.relators[r]) != g.identity) return;
      if (pos == ne) {
        found.push_back(field);
        return;
      }
      for (int val = 0; val < g.order; ++val) {
        field[pos] = val;
        rec(pos + 1);
      }
      field[pos] = 0;
    };
    rec(1);
    return found;
  };

  auto chunks = parallel_map<std::vector<FlatField>>(
      static_cast<std::size_t>(g.order),
      [&](std::size_t v) { return search_from(static_cast<int>(v)); });
  std::vector<FlatField> out;
  for (auto& chunk : chunks)
    for (auto& f : chunk) out.push_back(std::move(f));
  return out;
}

namespace {

FlatField apply_vertex_gauge(const CobPresentation& m, const GroupTable& g,
                             const FlatField& field, int vertex, int h) {
  FlatField out = field;
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    int val = out[e];
    if (m.edges[e].dst == vertex) val = g.times(h, val);
    if (m.edges[e].src == vertex) val = g.times(val, g.inv(h));
    out[e] = val;
  }
  return out;
}

FlatField apply_full_gauge(const CobPresentation& m, const GroupTable& g,
                           const FlatField& field, const std::vector<int>& h) {
  FlatField out = field;
  for (std::size_t e = 0; e < m.edges.size(); ++e)
    out[e] = g.times(g.times(h[m.edges[e].dst], out[e]), g.inv(h[m.edges[e].src]));
  return out;
}

}  // namespace

GaugeClasses gauge_classes(const CobPresentation& m, const GroupTable& g, long long cap) {
  GaugeClasses out;
  out.fields = flat_fields(m, g, cap);
  std::map<FlatField, int> index;
  for (std::size_t i = 0; i < out.fields.size(); ++i)
    index[out.fields[i]] = static_cast<int>(i);

  // Union-find over fields under elementary vertex gauges.
  std::vector<int> parent(out.fields.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto join = [&](int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  };
  for (std::size_t i = 0; i < out.fields.size(); ++i)
    for (int v = 0; v < m.num_vertices; ++v)
      for (int h = 0; h < g.order; ++h) {
        FlatField moved = apply_vertex_gauge(m, g, out.fields[i], v, h);
        auto it = index.find(moved);
        if (it == index.end())
          throw InternalError("gauge action left the flat field set");
        join(static_cast<int>(i), it->second);
      }

  out.orbit_of.assign(out.fields.size(), -1);
  for (std::size_t i = 0; i < out.fields.size(); ++i) {
    int root = find(static_cast<int>(i));
    if (out.orbit_of[root] < 0) {
      out.orbit_of[root] = static_cast<int>(out.representative.size());
      // Enumeration is lexicographic, so the root (smallest index) is the
      // lexicographically least field of its orbit.
      out.representative.push_back(root);
    }
    out.orbit_of[i] = out.orbit_of[root];
  }
  return out;
}

Rational burnside_average(const CobPresentation& m, const GroupTable& g, long long cap) {
  auto fields = flat_fields(m, g, cap);
  long long gauge_count = checked_pow(g.order, m.num_vertices, cap);
  if (gauge_count > cap) throw CapacityError("gauge group too large for the Burnside check");
  long long total_fixed = 0;
  std::vector<int> h(m.num_vertices, 0);
  for (long long idx = 0; idx < gauge_count; ++idx) {
    long long rest = idx;
    for (int v = 0; v < m.num_vertices; ++v) {
      h[v] = static_cast<int>(rest % g.order);
      rest /= g.order;
    }
    for (const auto& f : fields)
      if (apply_full_gauge(m, g, f, h) == f) ++total_fixed;
  }
  return Rational(total_fixed, gauge_count);
}

Rational dw_invariant(const CobPresentation& m, const GroupTable& g, long long cap) {
  auto fields = flat_fields(m, g, cap);
  long long denom = checked_pow(g.order, m.num_vertices, cap);
  if (denom > cap) throw CapacityError("vertex gauge group too large");
  return Rational(static_cast<long long>(fields.size()), denom);
}

// --- composition -------------------------------------------------------------------

Composite compose_cobordisms(const CobPresentation& m, const CobPresentation& n, int dir) {
  auto bm_it = m.boundaries.find({dir, +1});
  auto bn_it = n.boundaries.find({dir, -1});
  if (bm_it == m.boundaries.end())
    throw InputError(m.name + " has no (+" + std::to_string(dir) + ") boundary");
  if (bn_it == n.boundaries.end())
    throw InputError(n.name + " has no (-" + std::to_string(dir) + ") boundary");
  const auto& bm = bm_it->second;
  const auto& bn = bn_it->second;
  CobPresentation sm = induced_presentation(m, bm, "seam");
  CobPresentation sn = induced_presentation(n, bn, "seam");
  if (!structurally_equal(sm, sn)) {
    std::ostringstream os;
    os << "seam mismatch composing " << m.name << " o" << dir << " " << n.name << ": left ("
       << sm.num_vertices << " vertices, " << sm.edges.size() << " edges, "
       << sm.relators.size() << " relators) vs right (" << sn.num_vertices << " vertices, "
       << sn.edges.size() << " edges, " << sn.relators.size() << " relators)";
    throw InputError(os.str());
  }

  Composite out;
  CobPresentation& c = out.glued;
  c.name = m.name + "o" + std::to_string(dir) + n.name;
  c.dim = m.dim;

  out.left_vertex.resize(m.num_vertices);
  out.left_edge.resize(m.edges.size());
  for (int v = 0; v < m.num_vertices; ++v) out.left_vertex[v] = v;
  c.num_vertices = m.num_vertices;
  std::set<std::string> used_ids;
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    out.left_edge[e] = static_cast<int>(e);
    c.edges.push_back(m.edges[e]);
    used_ids.insert(m.edges[e].id);
  }
  c.relators = m.relators;

  // Vertices and edges of n: seam cells land on their m counterparts.
  std::map<int, int> seam_vertex, seam_edge;
  for (std::size_t i = 0; i < bn.vertices.size(); ++i)
    seam_vertex[bn.vertices[i]] = bm.vertices[i];
  for (std::size_t i = 0; i < bn.edges.size(); ++i) seam_edge[bn.edges[i]] = bm.edges[i];
  out.right_vertex.assign(n.num_vertices, -1);
  for (int v = 0; v < n.num_vertices; ++v) {
    auto it = seam_vertex.find(v);
    out.right_vertex[v] = it != seam_vertex.end() ? it->second : c.num_vertices++;
  }
  out.right_edge.assign(n.edges.size(), -1);
  for (std::size_t e = 0; e < n.edges.size(); ++e) {
    auto it = seam_edge.find(static_cast<int>(e));
    if (it != seam_edge.end()) {
      out.right_edge[e] = it->second;
      continue;
    }
    std::string id = n.edges[e].id;
    while (used_ids.count(id)) id += "'";
    used_ids.insert(id);
    out.right_edge[e] = static_cast<int>(c.edges.size());
    c.edges.push_back({id, out.right_vertex[n.edges[e].src], out.right_vertex[n.edges[e].dst]});
  }
  // Relators of n, mapped; exact duplicates (seam relators) appear once.
  std::map<std::vector<int>, int> relator_index;
  for (std::size_t r = 0; r < c.relators.size(); ++r)
    relator_index[c.relators[r]] = static_cast<int>(r);
  std::vector<int> right_relator(n.relators.size(), -1);
  for (std::size_t r = 0; r < n.relators.size(); ++r) {
    std::vector<int> w;
    for (int se : n.relators[r]) {
      int e = out.right_edge[std::abs(se) - 1];
      w.push_back(se > 0 ? e + 1 : -(e + 1));
    }
    auto it = relator_index.find(w);
    if (it != relator_index.end()) {
      right_relator[r] = it->second;
    } else {
      right_relator[r] = static_cast<int>(c.relators.size());
      relator_index[w] = right_relator[r];
      c.relators.push_back(std::move(w));
    }
  }

  // Boundaries: the composed direction keeps the outer faces, the others
  // take unions; the seam itself cancels.
  auto map_part = [&](const CobPresentation::BoundaryPart& part, bool right) {
    CobPresentation::BoundaryPart out_part;
    for (int v : part.vertices)
      out_part.vertices.push_back(right ? out.right_vertex[v] : out.left_vertex[v]);
    for (int e : part.edges)
      out_part.edges.push_back(right ? out.right_edge[e] : out.left_edge[e]);
    for (int r : part.relators)
      out_part.relators.push_back(right ? right_relator[r] : r);
    return out_part;
  };
  auto union_parts = [](const CobPresentation::BoundaryPart& a,
                        const CobPresentation::BoundaryPart& b) {
    CobPresentation::BoundaryPart u = a;
    std::set<int> vs(a.vertices.begin(), a.vertices.end());
    std::set<int> es(a.edges.begin(), a.edges.end());
    std::set<int> rs(a.relators.begin(), a.relators.end());
    for (int v : b.vertices)
      if (vs.insert(v).second) u.vertices.push_back(v);
    for (int e : b.edges)
      if (es.insert(e).second) u.edges.push_back(e);
    for (int r : b.relators)
      if (rs.insert(r).second) u.relators.push_back(r);
    return u;
  };
  std::set<std::pair<int, int>> keys;
  for (const auto& [k, part] : m.boundaries) keys.insert(k);
  for (const auto& [k, part] : n.boundaries) keys.insert(k);
  for (auto key : keys) {
    if (key == std::make_pair(dir, +1)) {
      if (n.boundaries.count(key)) c.boundaries[key] = map_part(n.boundaries.at(key), true);
    } else if (key == std::make_pair(dir, -1)) {
      if (m.boundaries.count(key)) c.boundaries[key] = map_part(m.boundaries.at(key), false);
    } else {
      bool has_m = m.boundaries.count(key), has_n = n.boundaries.count(key);
      if (has_m && has_n)
        c.boundaries[key] =
            union_parts(map_part(m.boundaries.at(key), false), map_part(n.boundaries.at(key), true));
      else if (has_m)
        c.boundaries[key] = map_part(m.boundaries.at(key), false);
      else if (has_n)
        c.boundaries[key] = map_part(n.boundaries.at(key), true);
    }
  }
  auto cv = validate_presentation(c);
  if (!cv.ok) throw InternalError("composition produced an invalid presentation: " + cv.issues.front());
  return out;
}

Composite disjoint_union(const CobPresentation& m, const CobPresentation& n) {
  Composite out;
  CobPresentation& c = out.glued;
  c.name = m.name + "+" + n.name;
  c.dim = std::max(m.dim, n.dim);
  c.num_vertices = m.num_vertices + n.num_vertices;
  out.left_vertex.resize(m.num_vertices);
  for (int v = 0; v < m.num_vertices; ++v) out.left_vertex[v] = v;
  out.right_vertex.resize(n.num_vertices);
  for (int v = 0; v < n.num_vertices; ++v) out.right_vertex[v] = m.num_vertices + v;
  std::set<std::string> used_ids;
  out.left_edge.resize(m.edges.size());
  for (std::size_t e = 0; e < m.edges.size(); ++e) {
    out.left_edge[e] = static_cast<int>(e);
    c.edges.push_back(m.edges[e]);
    used_ids.insert(m.edges[e].id);
  }
  out.right_edge.resize(n.edges.size());
  for (std::size_t e = 0; e < n.edges.size(); ++e) {
    std::string id = n.edges[e].id;
    while (used_ids.count(id)) id += "'";
    used_ids.insert(id);
    out.right_edge[e] = static_cast<int>(c.edges.size());
    c.edges.push_back({id, out.right_vertex[n.edges[e].src], out.right_vertex[n.edges[e].dst]});
  }
  c.relators = m.relators;
  std::vector<int> right_relator(n.relators.size());
  for (std::size_t r = 0; r < n.relators.size(); ++r) {
    std::vector<int> w;
    for (int se : n.relators[r]) {
      int e = out.right_edge[std::abs(se) - 1];
      w.push_back(se > 0 ? e + 1 : -(e + 1));
    }
    right_relator[r] = static_cast<int>(c.relators.size());
    c.relators.push_back(std::move(w));
  }
  std::set<std::pair<int, int>> keys;
  for (const auto& [k, part] : m.boundaries) keys.insert(k);
  for (const auto& [k, part] : n.boundaries) keys.insert(k);
  for (auto key : keys) {
    CobPresentation::BoundaryPart part;
    if (m.boundaries.count(key)) {
      for (int v : m.boundaries.at(key).vertices) part.vertices.push_back(v);
      for (int e : m.boundaries.at(key).edges) part.edges.push_back(e);
      for (int r : m.boundaries.at(key).relators) part.relators.push_back(r);
    }
    if (n.boundaries.count(key)) {
      for (int v : n.boundaries.at(key).vertices) part.vertices.push_back(out.right_vertex[v]);
      for (int e : n.boundaries.at(key).edges) part.edges.push_back(out.right_edge[e]);
      for (int r : n.boundaries.at(key).relators) part.relators.push_back(right_relator[r]);
    }
    c.boundaries[key] = std::move(part);
  }
  return out;
}

// --- restriction spans and coherence ------------------------------------------------

namespace {

FlatField restrict_field(const FlatField& field, const std::vector<int>& edge_indices) {
  FlatField out;
  out.reserve(edge_indices.size());
  for (int e : edge_indices) out.push_back(field[e]);
  return out;
}

int class_of_field(const GaugeClasses& classes, const FlatField& f) {
  for (std::size_t i = 0; i < classes.fields.size(); ++i)
    if (classes.fields[i] == f) return classes.orbit_of[i];
  throw InternalError("field not found among flat fields");
}

}  // namespace

GaugeClassSpan phi_span(const CobPresentation& m, const GroupTable& g, long long cap) {
  GaugeClassSpan span;
  span.core = gauge_classes(m, g, cap);
  for (const auto& [key, part] : m.boundaries) {
    GaugeClassSpan::BoundaryData data;
    data.presentation = induced_presentation(
        m, part,
        m.name + "@" + (key.second > 0 ? "+" : "-") + std::to_string(key.first));
    data.classes = gauge_classes(data.presentation, g, cap);
    data.restriction.assign(span.core.count(), -1);
    // The restriction must be constant on orbits: check every field.
    for (std::size_t i = 0; i < span.core.fields.size(); ++i) {
      int orbit = span.core.orbit_of[i];
      int restricted = class_of_field(data.classes, restrict_field(span.core.fields[i], part.edges));
      if (data.restriction[orbit] < 0)
        data.restriction[orbit] = restricted;
      else if (data.restriction[orbit] != restricted)
        throw InternalError("boundary restriction is not constant on a gauge orbit");
    }
    span.boundaries[key] = std::move(data);
  }
  return span;
}

CoherenceReport check_functor_coherence(const CobPresentation& m, const CobPresentation& n,
                                        int dir, const GroupTable& g, long long cap) {
  CoherenceReport rep;
  Composite comp = compose_cobordisms(m, n, dir);
  GaugeClasses comp_classes = gauge_classes(comp.glued, g, cap);
  GaugeClasses m_classes = gauge_classes(m, g, cap);
  GaugeClasses n_classes = gauge_classes(n, g, cap);

  const auto& bm = m.boundaries.at({dir, +1});
  const auto& bn = n.boundaries.at({dir, -1});
  CobPresentation seam = induced_presentation(m, bm, "seam");
  GaugeClasses seam_classes = gauge_classes(seam, g, cap);

  // Seam restrictions of the operand classes.
  auto seam_class_of_m = [&](int orbit) {
    return class_of_field(seam_classes,
                          restrict_field(m_classes.fields[m_classes.representative[orbit]],
                                         bm.edges));
  };
  auto seam_class_of_n = [&](int orbit) {
    return class_of_field(seam_classes,
                          restrict_field(n_classes.fields[n_classes.representative[orbit]],
                                         bn.edges));
  };

  // Decompose every composite field and check the pair map is constant on
  // orbits and injective across them.
  std::vector<std::pair<int, int>> orbit_pair(comp_classes.count(), {-1, -1});
  for (std::size_t i = 0; i < comp_classes.fields.size(); ++i) {
    int orbit = comp_classes.orbit_of[i];
    FlatField fm = restrict_field(comp_classes.fields[i], comp.left_edge);
    FlatField fn = restrict_field(comp_classes.fields[i], comp.right_edge);
    std::pair<int, int> pair{class_of_field(m_classes, fm), class_of_field(n_classes, fn)};
    if (orbit_pair[orbit].first < 0)
      orbit_pair[orbit] = pair;
    else if (orbit_pair[orbit] != pair) {
      rep.ok = false;
      rep.failures.push_back("restriction pair is not constant on composite orbit " +
                             std::to_string(orbit));
    }
  }
  std::set<std::pair<int, int>> seen;
  for (int orbit = 0; orbit < comp_classes.count(); ++orbit) {
    if (!seen.insert(orbit_pair[orbit]).second) {
      rep.ok = false;
      rep.failures.push_back("two composite classes restrict to the same pair");
    }
    if (seam_class_of_m(orbit_pair[orbit].first) != seam_class_of_n(orbit_pair[orbit].second)) {
      rep.ok = false;
      rep.failures.push_back("composite class restricts to a seam-incompatible pair");
    }
  }
  // Count the fiber product.
  for (int a = 0; a < m_classes.count(); ++a)
    for (int b = 0; b < n_classes.count(); ++b)
      if (seam_class_of_m(a) == seam_class_of_n(b)) ++rep.fiber_pairs;
  rep.composite_classes = comp_classes.count();
  if (rep.composite_classes != rep.fiber_pairs) {
    rep.ok = false;
    rep.failures.push_back("composite classes: " + std::to_string(rep.composite_classes) +
                           ", seam-compatible pairs: " + std::to_string(rep.fiber_pairs));
  }
  return rep;
}

CoherenceReport check_triple_coherence(const CobPresentation& m, const CobPresentation& n,
                                       const CobPresentation& p, int dir,
                                       const GroupTable& g, long long cap) {
  CoherenceReport rep;
  // Left bracketing: (m o n) o p.
  Composite mn = compose_cobordisms(m, n, dir);
  Composite left = compose_cobordisms(mn.glued, p, dir);
  // Right bracketing: m o (n o p).
  Composite np = compose_cobordisms(n, p, dir);
  Composite right = compose_cobordisms(m, np.glued, dir);

  GaugeClasses mc = gauge_classes(m, g, cap), nc = gauge_classes(n, g, cap),
               pc = gauge_classes(p, g, cap);

  auto compose_maps = [](const std::vector<int>& outer, const std::vector<int>& inner) {
    std::vector<int> out(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
    return out;
  };

  auto triples_of = [&](const CobPresentation& whole, const std::vector<int>& em,
                        const std::vector<int>& en, const std::vector<int>& ep) {
    GaugeClasses classes = gauge_classes(whole, g, cap);
    std::vector<std::tuple<int, int, int>> triple(classes.count(), {-1, -1, -1});
    for (std::size_t i = 0; i < classes.fields.size(); ++i) {
      int orbit = classes.orbit_of[i];
      std::tuple<int, int, int> t{
          class_of_field(mc, restrict_field(classes.fields[i], em)),
          class_of_field(nc, restrict_field(classes.fields[i], en)),
          class_of_field(pc, restrict_field(classes.fields[i], ep))};
      if (std::get<0>(triple[orbit]) < 0)
        triple[orbit] = t;
      else if (triple[orbit] != t) {
        rep.ok = false;
        rep.failures.push_back("triple restriction not constant on an orbit of " + whole.name);
      }
    }
    std::set<std::tuple<int, int, int>> out(triple.begin(), triple.end());
    if (static_cast<int>(out.size()) != classes.count()) {
      rep.ok = false;
      rep.failures.push_back("triple restriction not injective on classes of " + whole.name);
    }
    return out;
  };

  auto left_triples = triples_of(left.glued, compose_maps(left.left_edge, mn.left_edge),
                                 compose_maps(left.left_edge, mn.right_edge), left.right_edge);
  auto right_triples = triples_of(right.glued, right.left_edge,
                                  compose_maps(right.right_edge, np.left_edge),
                                  compose_maps(right.right_edge, np.right_edge));
  rep.composite_classes = static_cast<int>(left_triples.size());
  rep.fiber_pairs = static_cast<int>(right_triples.size());
  if (left_triples != right_triples) {
    rep.ok = false;
    rep.failures.push_back("the two bracketings decompose into different class triples");
  }
  return rep;
}

CoherenceReport check_union_interchange(const CobPresentation& m, const CobPresentation& n,
                                        const CobPresentation& m2,
                                        const CobPresentation& n2, int dir,
                                        const GroupTable& g, long long cap) {
  CoherenceReport rep;
  // (m o n) u (m2 o n2).
  Composite mn = compose_cobordisms(m, n, dir);
  Composite m2n2 = compose_cobordisms(m2, n2, dir);
  Composite via_comp = disjoint_union(mn.glued, m2n2.glued);
  // (m u m2) o (n u n2).
  Composite mm2 = disjoint_union(m, m2);
  Composite nn2 = disjoint_union(n, n2);
  Composite via_union = compose_cobordisms(mm2.glued, nn2.glued, dir);

  GaugeClasses mc = gauge_classes(m, g, cap), nc = gauge_classes(n, g, cap);
  GaugeClasses mc2 = gauge_classes(m2, g, cap), nc2 = gauge_classes(n2, g, cap);

  auto compose_maps = [](const std::vector<int>& outer, const std::vector<int>& inner) {
    std::vector<int> out(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
    return out;
  };
  auto quads_of = [&](const CobPresentation& whole, const std::vector<int>& em,
                      const std::vector<int>& en, const std::vector<int>& em2,
                      const std::vector<int>& en2) {
    GaugeClasses classes = gauge_classes(whole, g, cap);
    std::set<std::tuple<int, int, int, int>> out;
    for (int orbit = 0; orbit < classes.count(); ++orbit) {
      const FlatField& f = classes.fields[classes.representative[orbit]];
      out.insert({class_of_field(mc, restrict_field(f, em)),
                  class_of_field(nc, restrict_field(f, en)),
                  class_of_field(mc2, restrict_field(f, em2)),
                  class_of_field(nc2, restrict_field(f, en2))});
    }
    if (static_cast<int>(out.size()) != classes.count()) {
      rep.ok = false;
      rep.failures.push_back("quadruple restriction not injective on classes of " + whole.name);
    }
    return out;
  };

  auto a = quads_of(via_comp.glued, compose_maps(via_comp.left_edge, mn.left_edge),
                    compose_maps(via_comp.left_edge, mn.right_edge),
                    compose_maps(via_comp.right_edge, m2n2.left_edge),
                    compose_maps(via_comp.right_edge, m2n2.right_edge));
  auto b = quads_of(via_union.glued,
                    compose_maps(via_union.left_edge, mm2.left_edge),
                    compose_maps(via_union.right_edge, nn2.left_edge),
                    compose_maps(via_union.left_edge, mm2.right_edge),
                    compose_maps(via_union.right_edge, nn2.right_edge));
  rep.composite_classes = static_cast<int>(a.size());
  rep.fiber_pairs = static_cast<int>(b.size());
  if (a != b) {
    rep.ok = false;
    rep.failures.push_back("union/composition interchange decompositions differ");
  }
  return rep;
}

// --- fixtures -----------------------------------------------------------------------

CobPresentation point_presentation() {
  CobPresentation p;
  p.name = "point";
  p.dim = 0;
  p.num_vertices = 1;
  return p;
}

CobPresentation circle_presentation() {
  CobPresentation p;
  p.name = "circle";
  p.dim = 1;
  p.num_vertices = 1;
  p.edges.push_back({"a", 0, 0});
  return p;
}

CobPresentation interval_presentation(const std::string& name) {
  CobPresentation p;
  p.name = name;
  p.dim = 1;
  p.num_vertices = 2;
  p.edges.push_back({"a", 0, 1});
  p.boundaries[{1, -1}] = {{0}, {}, {}};
  p.boundaries[{1, +1}] = {{1}, {}, {}};
  return p;
}

CobPresentation cylinder_presentation(const std::string& name) {
  CobPresentation p;
  p.name = name;
  p.dim = 2;
  p.num_vertices = 2;
  p.edges.push_back({"a", 0, 0});  // incoming circle
  p.edges.push_back({"b", 1, 1});  // outgoing circle
  p.edges.push_back({"c", 0, 1});  // seam-to-seam arc
  p.relators.push_back({+1, +3, -2, -3});  // b = c a c^-1
  p.boundaries[{1, -1}] = {{0}, {0}, {}};
  p.boundaries[{1, +1}] = {{1}, {1}, {}};
  return p;
}

CobPresentation sphere_presentation() {
  CobPresentation p;
  p.name = "sphere";
  p.dim = 2;
  p.num_vertices = 1;
  p.edges.push_back({"a", 0, 0});
  p.relators.push_back({+1});
  return p;
}

CobPresentation torus_presentation() {
  CobPresentation p;
  p.name = "torus";
  p.dim = 2;
  p.num_vertices = 1;
  p.edges.push_back({"a", 0, 0});
  p.edges.push_back({"b", 0, 0});
  p.relators.push_back({+1, +2, -1, -2});
  return p;
}

CobPresentation torus_two_vertex_presentation() {
  // The loop a subdivided into a1: v0 -> v1 and a2: v1 -> v0.
  CobPresentation p;
  p.name = "torus-subdivided";
  p.dim = 2;
  p.num_vertices = 2;
  p.edges.push_back({"a1", 0, 1});
  p.edges.push_back({"a2", 1, 0});
  p.edges.push_back({"b", 0, 0});
  p.relators.push_back({+1, +2, +3, -2, -1, -3});
  return p;
}

CobPresentation surface_presentation(int genus) {
  if (genus < 1) throw InputError("surface fixtures need genus >= 1");
  CobPresentation p;
  p.name = "genus" + std::to_string(genus);
  p.dim = 2;
  p.num_vertices = 1;
  std::vector<int> relator;
  for (int i = 0; i < genus; ++i) {
    int a = static_cast<int>(p.edges.size()) + 1;
    p.edges.push_back({"a" + std::to_string(i + 1), 0, 0});
    int b = static_cast<int>(p.edges.size()) + 1;
    p.edges.push_back({"b" + std::to_string(i + 1), 0, 0});
    relator.push_back(+a);
    relator.push_back(+b);
    relator.push_back(-a);
    relator.push_back(-b);
  }
  p.relators.push_back(std::move(relator));
  return p;
}

}  // namespace nfold
