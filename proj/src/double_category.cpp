#include "nfold/double_category.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace nfold {

// --- finite categories --------------------------------------------------------

FiniteCategory chain_category(int length) {
  // Objects 0..length; one morphism per pair i <= j.
  FiniteCategory c;
  c.num_objects = length + 1;
  std::map<std::pair<int, int>, int> id_of;
  for (int i = 0; i <= length; ++i)
    for (int j = i; j <= length; ++j) {
      id_of[{i, j}] = static_cast<int>(c.morphisms.size());
      c.morphisms.push_back({"le" + std::to_string(i) + "_" + std::to_string(j), i, j});
    }
  c.identity.resize(c.num_objects);
  for (int i = 0; i <= length; ++i) c.identity[i] = id_of.at({i, i});
  c.comp.assign(c.morphisms.size(), std::vector<int>(c.morphisms.size(), -1));
  for (const auto& [ab, f] : id_of)
    for (const auto& [bc, g] : id_of)
      if (ab.second == bc.first) c.comp[f][g] = id_of.at({ab.first, bc.second});
  return c;
}

FiniteCategory cyclic_group_category(int order) {
  FiniteCategory c;
  c.num_objects = 1;
  for (int i = 0; i < order; ++i) c.morphisms.push_back({"g" + std::to_string(i), 0, 0});
  c.identity = {0};
  c.comp.assign(order, std::vector<int>(order, -1));
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) c.comp[i][j] = (i + j) % order;
  return c;
}

FiniteCategory poset_category(int n, const std::vector<std::pair<int, int>>& relations) {
  // Reflexive-transitive closure of the given covers.
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n, false));
  for (int i = 0; i < n; ++i) le[i][i] = true;
  for (auto [a, b] : relations) le[a][b] = true;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (le[i][k] && le[k][j]) le[i][j] = true;
  FiniteCategory c;
  c.num_objects = n;
  std::map<std::pair<int, int>, int> id_of;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (le[i][j]) {
        id_of[{i, j}] = static_cast<int>(c.morphisms.size());
        c.morphisms.push_back({"le" + std::to_string(i) + "_" + std::to_string(j), i, j});
      }
  c.identity.resize(n);
  for (int i = 0; i < n; ++i) c.identity[i] = id_of.at({i, i});
  c.comp.assign(c.morphisms.size(), std::vector<int>(c.morphisms.size(), -1));
  for (const auto& [ab, f] : id_of)
    for (const auto& [bc, g] : id_of)
      if (ab.second == bc.first) c.comp[f][g] = id_of.at({ab.first, bc.second});
  return c;
}

// --- double category builders ---------------------------------------------------

FiniteDoubleCategory squares_of_poset(const FiniteCategory& poset, const std::string& name) {
  FiniteDoubleCategory d;
  d.name = name;
  for (int i = 0; i < poset.num_objects; ++i) d.objects.push_back("x" + std::to_string(i));
  std::map<std::pair<int, int>, int> arrow_of;
  for (std::size_t m = 0; m < poset.morphisms.size(); ++m) {
    const auto& mor = poset.morphisms[m];
    arrow_of[{mor.src, mor.dst}] = static_cast<int>(m);
    d.hmor.push_back({mor.name, mor.src, mor.dst});
    d.vmor.push_back({mor.name, mor.src, mor.dst});
  }
  d.id_h.resize(poset.num_objects);
  d.id_v.resize(poset.num_objects);
  for (int i = 0; i < poset.num_objects; ++i) d.id_h[i] = d.id_v[i] = poset.identity[i];
  // Squares: quadruples (bottom: w<=x, top: y<=z, left: w<=y, right: x<=z).
  std::map<std::tuple<int, int, int, int>, int> sq_of;  // (left, right, bottom, top)
  for (std::size_t l = 0; l < d.vmor.size(); ++l)
    for (std::size_t r = 0; r < d.vmor.size(); ++r)
      for (std::size_t b = 0; b < d.hmor.size(); ++b)
        for (std::size_t t = 0; t < d.hmor.size(); ++t) {
          if (d.hmor[b].src != d.vmor[l].src || d.hmor[b].dst != d.vmor[r].src) continue;
          if (d.hmor[t].src != d.vmor[l].dst || d.hmor[t].dst != d.vmor[r].dst) continue;
          sq_of[{static_cast<int>(l), static_cast<int>(r), static_cast<int>(b),
                 static_cast<int>(t)}] = static_cast<int>(d.squares.size());
          d.squares.push_back({"sq" + std::to_string(d.squares.size()), static_cast<int>(l),
                               static_cast<int>(r), static_cast<int>(b),
                               static_cast<int>(t)});
        }
  d.id1_sq.resize(d.vmor.size());
  for (std::size_t v = 0; v < d.vmor.size(); ++v)
    d.id1_sq[v] = sq_of.at({static_cast<int>(v), static_cast<int>(v),
                            d.id_h[d.vmor[v].src], d.id_h[d.vmor[v].dst]});
  d.id2_sq.resize(d.hmor.size());
  for (std::size_t h = 0; h < d.hmor.size(); ++h)
    d.id2_sq[h] = sq_of.at({d.id_v[d.hmor[h].src], d.id_v[d.hmor[h].dst],
                            static_cast<int>(h), static_cast<int>(h)});
  d.comp_h = poset.comp;
  d.comp_v = poset.comp;
  std::size_t ns = d.squares.size();
  d.comp_sq1.assign(ns, std::vector<int>(ns, -1));
  d.comp_sq2.assign(ns, std::vector<int>(ns, -1));
  for (std::size_t a = 0; a < ns; ++a)
    for (std::size_t b = 0; b < ns; ++b) {
      const auto &sa = d.squares[a], &sb = d.squares[b];
      if (sa.t1 == sb.s1) {
        int bot = d.comp_h[sa.s2][sb.s2], top = d.comp_h[sa.t2][sb.t2];
        d.comp_sq1[a][b] = sq_of.at({sa.s1, sb.t1, bot, top});
      }
      if (sa.t2 == sb.s2) {
        int left = d.comp_v[sa.s1][sb.s1], right = d.comp_v[sa.t1][sb.t1];
        d.comp_sq2[a][b] = sq_of.at({left, right, sa.s2, sb.t2});
      }
    }
  return d;
}

FiniteDoubleCategory product_double_category(const FiniteCategory& a,
                                             const FiniteCategory& b,
                                             const std::string& name) {
  FiniteDoubleCategory d;
  d.name = name;
  auto obj = [&](int i, int j) { return i * b.num_objects + j; };
  for (int i = 0; i < a.num_objects; ++i)
    for (int j = 0; j < b.num_objects; ++j)
      d.objects.push_back("x" + std::to_string(i) + "_" + std::to_string(j));
  // Horizontal: (morphism of a, object of b); vertical: (object of a, mor of b).
  auto hid = [&](int m, int j) { return m * b.num_objects + j; };
  auto vid = [&](int i, int m) { return i * static_cast<int>(b.morphisms.size()) + m; };
  for (std::size_t m = 0; m < a.morphisms.size(); ++m)
    for (int j = 0; j < b.num_objects; ++j)
      d.hmor.push_back({a.morphisms[m].name + "|" + std::to_string(j),
                        obj(a.morphisms[m].src, j), obj(a.morphisms[m].dst, j)});
  for (int i = 0; i < a.num_objects; ++i)
    for (std::size_t m = 0; m < b.morphisms.size(); ++m)
      d.vmor.push_back({std::to_string(i) + "|" + b.morphisms[m].name, obj(i, b.morphisms[m].src),
                        obj(i, b.morphisms[m].dst)});
  // Squares: pairs of morphisms.
  auto sqid = [&](int ma, int mb) { return ma * static_cast<int>(b.morphisms.size()) + mb; };
  for (std::size_t ma = 0; ma < a.morphisms.size(); ++ma)
    for (std::size_t mb = 0; mb < b.morphisms.size(); ++mb) {
      FiniteDoubleCategory::Square s;
      s.name = a.morphisms[ma].name + "*" + b.morphisms[mb].name;
      s.s1 = vid(a.morphisms[ma].src, static_cast<int>(mb));
      s.t1 = vid(a.morphisms[ma].dst, static_cast<int>(mb));
      s.s2 = hid(static_cast<int>(ma), b.morphisms[mb].src);
      s.t2 = hid(static_cast<int>(ma), b.morphisms[mb].dst);
      d.squares.push_back(s);
    }
  d.id_h.resize(d.objects.size());
  d.id_v.resize(d.objects.size());
  for (int i = 0; i < a.num_objects; ++i)
    for (int j = 0; j < b.num_objects; ++j) {
      d.id_h[obj(i, j)] = hid(a.identity[i], j);
      d.id_v[obj(i, j)] = vid(i, b.identity[j]);
    }
  d.id1_sq.resize(d.vmor.size());
  for (int i = 0; i < a.num_objects; ++i)
    for (std::size_t mb = 0; mb < b.morphisms.size(); ++mb)
      d.id1_sq[vid(i, static_cast<int>(mb))] = sqid(a.identity[i], static_cast<int>(mb));
  d.id2_sq.resize(d.hmor.size());
  for (std::size_t ma = 0; ma < a.morphisms.size(); ++ma)
    for (int j = 0; j < b.num_objects; ++j)
      d.id2_sq[hid(static_cast<int>(ma), j)] = sqid(static_cast<int>(ma), b.identity[j]);
  std::size_t nh = d.hmor.size(), nv = d.vmor.size(), ns = d.squares.size();
  d.comp_h.assign(nh, std::vector<int>(nh, -1));
  for (std::size_t m = 0; m < a.morphisms.size(); ++m)
    for (std::size_t m2 = 0; m2 < a.morphisms.size(); ++m2)
      if (a.comp[m][m2] >= 0)
        for (int j = 0; j < b.num_objects; ++j)
          d.comp_h[hid(static_cast<int>(m), j)][hid(static_cast<int>(m2), j)] =
              hid(a.comp[m][m2], j);
  d.comp_v.assign(nv, std::vector<int>(nv, -1));
  for (int i = 0; i < a.num_objects; ++i)
    for (std::size_t m = 0; m < b.morphisms.size(); ++m)
      for (std::size_t m2 = 0; m2 < b.morphisms.size(); ++m2)
        if (b.comp[m][m2] >= 0)
          d.comp_v[vid(i, static_cast<int>(m))][vid(i, static_cast<int>(m2))] =
              vid(i, b.comp[m][m2]);
  d.comp_sq1.assign(ns, std::vector<int>(ns, -1));
  d.comp_sq2.assign(ns, std::vector<int>(ns, -1));
  for (std::size_t ma = 0; ma < a.morphisms.size(); ++ma)
    for (std::size_t mb = 0; mb < b.morphisms.size(); ++mb)
      for (std::size_t mc = 0; mc < a.morphisms.size(); ++mc)
        for (std::size_t md = 0; md < b.morphisms.size(); ++md) {
          // (ma,mb) then (mc,md) along direction 1 composes the a-parts.
          if (mb == md && a.comp[ma][mc] >= 0)
            d.comp_sq1[sqid(static_cast<int>(ma), static_cast<int>(mb))]
                      [sqid(static_cast<int>(mc), static_cast<int>(md))] =
                sqid(a.comp[ma][mc], static_cast<int>(mb));
          if (ma == mc && b.comp[mb][md] >= 0)
            d.comp_sq2[sqid(static_cast<int>(ma), static_cast<int>(mb))]
                      [sqid(static_cast<int>(mc), static_cast<int>(md))] =
                sqid(static_cast<int>(ma), b.comp[mb][md]);
        }
  return d;
}

// --- axiom checking -------------------------------------------------------------

StrictAxiomReport check_strict_axioms(const FiniteDoubleCategory& c) {
  StrictAxiomReport rep;
  auto violate = [&](const std::string& axiom, const std::string& witness) {
    rep.ok = false;
    if (rep.violations.size() < 50) rep.violations.push_back({axiom, witness});
  };
  auto tick = [&] { ++rep.checks; };

  std::size_t nh = c.hmor.size(), nv = c.vmor.size(), ns = c.squares.size();

  // Composability closure of the tables.
  for (std::size_t f = 0; f < nh; ++f)
    for (std::size_t g = 0; g < nh; ++g) {
      tick();
      bool composable = c.hmor[f].dst == c.hmor[g].src;
      int r = c.comp_h[f][g];
      if (composable && r < 0)
        violate("composition totality", c.hmor[f].name + " o1 " + c.hmor[g].name);
      if (!composable && r >= 0)
        violate("composition on non-composable pair", c.hmor[f].name + "," + c.hmor[g].name);
      if (r >= 0 && (c.hmor[r].src != c.hmor[f].src || c.hmor[r].dst != c.hmor[g].dst))
        violate("source/target of composition", c.hmor[f].name + " o1 " + c.hmor[g].name);
    }
  for (std::size_t f = 0; f < nv; ++f)
    for (std::size_t g = 0; g < nv; ++g) {
      tick();
      bool composable = c.vmor[f].dst == c.vmor[g].src;
      int r = c.comp_v[f][g];
      if (composable && r < 0)
        violate("composition totality", c.vmor[f].name + " o2 " + c.vmor[g].name);
      if (!composable && r >= 0)
        violate("composition on non-composable pair", c.vmor[f].name + "," + c.vmor[g].name);
      if (r >= 0 && (c.vmor[r].src != c.vmor[f].src || c.vmor[r].dst != c.vmor[g].dst))
        violate("source/target of composition", c.vmor[f].name + " o2 " + c.vmor[g].name);
    }

  // Corner consistency: s_i s_j (x) = s_j s_i (x) and friends, on squares.
  for (const auto& s : c.squares) {
    tick();
    if (c.hmor[s.s2].src != c.vmor[s.s1].src)
      violate("s1 s2 = s2 s1", s.name);
    if (c.hmor[s.s2].dst != c.vmor[s.t1].src)
      violate("t1 s2 = s2 t1", s.name);
    if (c.hmor[s.t2].src != c.vmor[s.s1].dst)
      violate("s1 t2 = t2 s1", s.name);
    if (c.hmor[s.t2].dst != c.vmor[s.t1].dst)
      violate("t1 t2 = t2 t1", s.name);
  }

  // Square composition tables respect sources and targets.
  for (std::size_t x = 0; x < ns; ++x)
    for (std::size_t y = 0; y < ns; ++y) {
      const auto &sx = c.squares[x], &sy = c.squares[y];
      tick();
      bool comp1 = sx.t1 == sy.s1;
      int r1 = c.comp_sq1[x][y];
      if (comp1 && r1 < 0) violate("composition totality (squares o1)", sx.name + "," + sy.name);
      if (!comp1 && r1 >= 0)
        violate("composition on non-composable pair (squares o1)", sx.name + "," + sy.name);
      if (r1 >= 0) {
        const auto& sr = c.squares[r1];
        if (sr.s1 != sx.s1 || sr.t1 != sy.t1)
          violate("s1/t1 of o1 composite", sx.name + "," + sy.name);
        if (sr.s2 != c.comp_h[sx.s2][sy.s2] || sr.t2 != c.comp_h[sx.t2][sy.t2])
          violate("s2/t2 of o1 composite distribute", sx.name + "," + sy.name);
      }
      bool comp2 = sx.t2 == sy.s2;
      int r2 = c.comp_sq2[x][y];
      if (comp2 && r2 < 0) violate("composition totality (squares o2)", sx.name + "," + sy.name);
      if (!comp2 && r2 >= 0)
        violate("composition on non-composable pair (squares o2)", sx.name + "," + sy.name);
      if (r2 >= 0) {
        const auto& sr = c.squares[r2];
        if (sr.s2 != sx.s2 || sr.t2 != sy.t2)
          violate("s2/t2 of o2 composite", sx.name + "," + sy.name);
        if (sr.s1 != c.comp_v[sx.s1][sy.s1] || sr.t1 != c.comp_v[sx.t1][sy.t1])
          violate("s1/t1 of o2 composite distribute", sx.name + "," + sy.name);
      }
    }

  // Associativity in each layer.
  auto assoc = [&](const std::vector<std::vector<int>>& comp, const std::string& what,
                   auto name_of) {
    std::size_t n = comp.size();
    for (std::size_t x = 0; x < n; ++x)
      for (std::size_t y = 0; y < n; ++y) {
        if (comp[x][y] < 0) continue;
        for (std::size_t z = 0; z < n; ++z) {
          if (comp[y][z] < 0) continue;
          tick();
          if (comp[comp[x][y]][z] != comp[x][comp[y][z]])
            violate("associativity (" + what + ")",
                    name_of(x) + "," + name_of(y) + "," + name_of(z));
        }
      }
  };
  assoc(c.comp_h, "o1 on 1-morphisms", [&](std::size_t i) { return c.hmor[i].name; });
  assoc(c.comp_v, "o2 on 1-morphisms", [&](std::size_t i) { return c.vmor[i].name; });
  assoc(c.comp_sq1, "o1 on squares", [&](std::size_t i) { return c.squares[i].name; });
  assoc(c.comp_sq2, "o2 on squares", [&](std::size_t i) { return c.squares[i].name; });

  // Unit laws.
  for (std::size_t f = 0; f < nh; ++f) {
    tick();
    if (c.comp_h[c.id_h[c.hmor[f].src]][f] != static_cast<int>(f) ||
        c.comp_h[f][c.id_h[c.hmor[f].dst]] != static_cast<int>(f))
      violate("unit law (1-morphisms o1)", c.hmor[f].name);
  }
  for (std::size_t f = 0; f < nv; ++f) {
    tick();
    if (c.comp_v[c.id_v[c.vmor[f].src]][f] != static_cast<int>(f) ||
        c.comp_v[f][c.id_v[c.vmor[f].dst]] != static_cast<int>(f))
      violate("unit law (1-morphisms o2)", c.vmor[f].name);
  }
  for (std::size_t s = 0; s < ns; ++s) {
    tick();
    if (c.comp_sq1[c.id1_sq[c.squares[s].s1]][s] != static_cast<int>(s) ||
        c.comp_sq1[s][c.id1_sq[c.squares[s].t1]] != static_cast<int>(s))
      violate("unit law (squares o1)", c.squares[s].name);
    if (c.comp_sq2[c.id2_sq[c.squares[s].s2]][s] != static_cast<int>(s) ||
        c.comp_sq2[s][c.id2_sq[c.squares[s].t2]] != static_cast<int>(s))
      violate("unit law (squares o2)", c.squares[s].name);
  }

  // Identities of identities and their faces.
  for (std::size_t v = 0; v < nv; ++v) {
    tick();
    const auto& sq = c.squares[c.id1_sq[v]];
    if (sq.s1 != static_cast<int>(v) || sq.t1 != static_cast<int>(v))
      violate("s1 id1 = t1 id1 = id base", c.vmor[v].name);
    if (sq.s2 != c.id_h[c.vmor[v].src] || sq.t2 != c.id_h[c.vmor[v].dst])
      violate("s2 id1 = id1 s2", c.vmor[v].name);
  }
  for (std::size_t h = 0; h < nh; ++h) {
    tick();
    const auto& sq = c.squares[c.id2_sq[h]];
    if (sq.s2 != static_cast<int>(h) || sq.t2 != static_cast<int>(h))
      violate("s2 id2 = t2 id2 = id base", c.hmor[h].name);
    if (sq.s1 != c.id_v[c.hmor[h].src] || sq.t1 != c.id_v[c.hmor[h].dst])
      violate("s1 id2 = id2 s1", c.hmor[h].name);
  }
  for (std::size_t o = 0; o < c.objects.size(); ++o) {
    tick();
    if (c.id1_sq[c.id_v[o]] != c.id2_sq[c.id_h[o]])
      violate("id1 id2 = id2 id1", c.objects[o]);
  }

  // id_i (x o_j y) = id_i(x) o_j id_i(y).
  for (std::size_t f = 0; f < nv; ++f)
    for (std::size_t g = 0; g < nv; ++g) {
      if (c.comp_v[f][g] < 0) continue;
      tick();
      if (c.id1_sq[c.comp_v[f][g]] != c.comp_sq2[c.id1_sq[f]][c.id1_sq[g]])
        violate("id1 distributes over o2", c.vmor[f].name + "," + c.vmor[g].name);
    }
  for (std::size_t f = 0; f < nh; ++f)
    for (std::size_t g = 0; g < nh; ++g) {
      if (c.comp_h[f][g] < 0) continue;
      tick();
      if (c.id2_sq[c.comp_h[f][g]] != c.comp_sq1[c.id2_sq[f]][c.id2_sq[g]])
        violate("id2 distributes over o1", c.hmor[f].name + "," + c.hmor[g].name);
    }

  // The interchange law on all 2x2 composable blocks.
  for (std::size_t a = 0; a < ns; ++a)
    for (std::size_t b = 0; b < ns; ++b) {
      if (c.comp_sq1[a][b] < 0) continue;
      for (std::size_t x = 0; x < ns; ++x) {
        if (c.comp_sq2[a][x] < 0) continue;
        for (std::size_t y = 0; y < ns; ++y) {
          if (c.comp_sq1[x][y] < 0 || c.comp_sq2[b][y] < 0) continue;
          tick();
          if (c.comp_sq2[c.comp_sq1[a][b]][c.comp_sq1[x][y]] !=
              c.comp_sq1[c.comp_sq2[a][x]][c.comp_sq2[b][y]])
            violate("interchange law", c.squares[a].name + "," + c.squares[b].name + "," +
                                           c.squares[x].name + "," + c.squares[y].name);
        }
      }
    }
  return rep;
}

// --- nerve ----------------------------------------------------------------------

const std::vector<int>& MultiSimplicialSet::face_map(int dir, int p, int q, int i) const {
  auto it = face.find({dir, p, q, i});
  if (it == face.end()) throw InternalError("missing face table");
  return it->second;
}

const std::vector<int>& MultiSimplicialSet::degeneracy_map(int dir, int p, int q, int i) const {
  auto it = degeneracy.find({dir, p, q, i});
  if (it == degeneracy.end()) throw InternalError("missing degeneracy table");
  return it->second;
}

namespace {

// Structured multisimplices during nerve construction.
struct NerveData {
  // parts[p][q][idx]: constituent ids. (0,0): object; (p,0): hmor chain;
  // (0,q): vmor chain; (p,q): row-major squares, sq[c + r*p].
  std::vector<std::vector<std::vector<std::vector<int>>>> parts;
  std::vector<std::vector<std::map<std::vector<int>, int>>> index;
};

std::vector<std::vector<int>> enumerate_chains(int length, std::size_t count,
                                               const std::function<int(int)>& src,
                                               const std::function<int(int)>& dst) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void()> rec = [&] {
    if (static_cast<int>(cur.size()) == length) {
      out.push_back(cur);
      return;
    }
    for (std::size_t m = 0; m < count; ++m) {
      if (!cur.empty() && dst(cur.back()) != src(static_cast<int>(m))) continue;
      cur.push_back(static_cast<int>(m));
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

}  // namespace

MultiSimplicialSet nerve(const FiniteDoubleCategory& c, int cap_p, int cap_q) {
  MultiSimplicialSet n;
  n.cap_p = cap_p;
  n.cap_q = cap_q;
  NerveData data;
  data.parts.assign(cap_p + 1, std::vector<std::vector<std::vector<int>>>(cap_q + 1));
  data.index.assign(cap_p + 1, std::vector<std::map<std::vector<int>, int>>(cap_q + 1));
  n.elems.assign(cap_p + 1, std::vector<std::vector<std::string>>(cap_q + 1));

  auto add = [&](int p, int q, const std::vector<int>& part, const std::string& name) {
    data.index[p][q][part] = static_cast<int>(data.parts[p][q].size());
    data.parts[p][q].push_back(part);
    n.elems[p][q].push_back(name);
  };

  // (0,0): objects.
  for (std::size_t o = 0; o < c.objects.size(); ++o)
    add(0, 0, {static_cast<int>(o)}, c.objects[o]);
  // (p,0) and (0,q): chains.
  for (int p = 1; p <= cap_p; ++p) {
    auto chains = enumerate_chains(
        p, c.hmor.size(), [&](int m) { return c.hmor[m].src; },
        [&](int m) { return c.hmor[m].dst; });
    for (const auto& ch : chains) {
      std::string name = "h";
      for (int m : ch) name += "." + std::to_string(m);
      add(p, 0, ch, name);
    }
  }
  for (int q = 1; q <= cap_q; ++q) {
    auto chains = enumerate_chains(
        q, c.vmor.size(), [&](int m) { return c.vmor[m].src; },
        [&](int m) { return c.vmor[m].dst; });
    for (const auto& ch : chains) {
      std::string name = "v";
      for (int m : ch) name += "." + std::to_string(m);
      add(0, q, ch, name);
    }
  }
  // (p,q) grids of squares, p,q >= 1.
  for (int p = 1; p <= cap_p; ++p)
    for (int q = 1; q <= cap_q; ++q) {
      std::vector<int> grid(p * q, -1);
      std::function<void(int)> rec = [&](int pos) {
        if (pos == p * q) {
          std::string name = "g";
          for (int s : grid) name += "." + std::to_string(s);
          add(p, q, grid, name);
          return;
        }
        int col = pos % p, row = pos / p;
        for (std::size_t s = 0; s < c.squares.size(); ++s) {
          if (col > 0 && c.squares[grid[pos - 1]].t1 != c.squares[s].s1) continue;
          if (row > 0 && c.squares[grid[pos - p]].t2 != c.squares[s].s2) continue;
          grid[pos] = static_cast<int>(s);
          rec(pos + 1);
        }
        grid[pos] = -1;
      };
      rec(0);
    }

  // Vertex objects of a chain / grid, used by degeneracies.
  auto chain_vertex_h = [&](const std::vector<int>& ch, int i) {
    return i == 0 ? c.hmor[ch[0]].src : c.hmor[ch[i - 1]].dst;
  };
  auto chain_vertex_v = [&](const std::vector<int>& ch, int i) {
    return i == 0 ? c.vmor[ch[0]].src : c.vmor[ch[i - 1]].dst;
  };

  // Face tables.
  for (int p = 0; p <= cap_p; ++p)
    for (int q = 0; q <= cap_q; ++q) {
      const auto& here = data.parts[p][q];
      if (p >= 1)
        for (int i = 0; i <= p; ++i) {
          std::vector<int> table(here.size());
          for (std::size_t e = 0; e < here.size(); ++e) {
            const auto& part = here[e];
            std::vector<int> out;
            if (q == 0) {
              if (p == 1) {
                out = {i == 0 ? c.hmor[part[0]].dst : c.hmor[part[0]].src};
              } else if (i == 0) {
                out.assign(part.begin() + 1, part.end());
              } else if (i == p) {
                out.assign(part.begin(), part.end() - 1);
              } else {
                out.assign(part.begin(), part.end());
                out[i - 1] = c.comp_h[out[i - 1]][out[i]];
                out.erase(out.begin() + i);
              }
            } else if (p == 1) {
              // Dropping the only column leaves the vmor chain on one side.
              out.reserve(q);
              for (int r = 0; r < q; ++r)
                out.push_back(i == 0 ? c.squares[part[r]].t1 : c.squares[part[r]].s1);
            } else {
              // Grid: drop or merge columns.
              for (int r = 0; r < q; ++r)
                for (int col = 0; col < p; ++col) {
                  if (i == 0 && col == 0) continue;
                  if (i == p && col == p - 1) continue;
                  if (i > 0 && i < p && col == i - 1) {
                    out.push_back(c.comp_sq1[part[col + r * p]][part[col + 1 + r * p]]);
                    continue;
                  }
                  if (i > 0 && i < p && col == i) continue;
                  out.push_back(part[col + r * p]);
                }
            }
            table[e] = data.index[p - 1][q].at(out);
          }
          n.face[{1, p, q, i}] = std::move(table);
        }
      if (q >= 1)
        for (int j = 0; j <= q; ++j) {
          std::vector<int> table(here.size());
          for (std::size_t e = 0; e < here.size(); ++e) {
            const auto& part = here[e];
            std::vector<int> out;
            if (p == 0) {
              if (q == 1) {
                out = {j == 0 ? c.vmor[part[0]].dst : c.vmor[part[0]].src};
              } else if (j == 0) {
                out.assign(part.begin() + 1, part.end());
              } else if (j == q) {
                out.assign(part.begin(), part.end() - 1);
              } else {
                out.assign(part.begin(), part.end());
                out[j - 1] = c.comp_v[out[j - 1]][out[j]];
                out.erase(out.begin() + j);
              }
            } else if (q == 1) {
              out.reserve(p);
              for (int col = 0; col < p; ++col)
                out.push_back(j == 0 ? c.squares[part[col]].t2 : c.squares[part[col]].s2);
            } else {
              for (int r = 0; r < q; ++r) {
                if (j == 0 && r == 0) continue;
                if (j == q && r == q - 1) continue;
                if (j > 0 && j < q && r == j) continue;
                for (int col = 0; col < p; ++col) {
                  if (j > 0 && j < q && r == j - 1) {
                    out.push_back(c.comp_sq2[part[col + r * p]][part[col + (r + 1) * p]]);
                  } else {
                    out.push_back(part[col + r * p]);
                  }
                }
              }
            }
            table[e] = data.index[p][q - 1].at(out);
          }
          n.face[{2, p, q, j}] = std::move(table);
        }
    }

  // Degeneracy tables.
  for (int p = 0; p <= cap_p; ++p)
    for (int q = 0; q <= cap_q; ++q) {
      const auto& here = data.parts[p][q];
      if (p + 1 <= cap_p)
        for (int i = 0; i <= p; ++i) {
          std::vector<int> table(here.size());
          for (std::size_t e = 0; e < here.size(); ++e) {
            const auto& part = here[e];
            std::vector<int> out;
            if (q == 0) {
              int vertex = p == 0 ? part[0] : chain_vertex_h(part, i);
              out.assign(part.begin(), part.end());
              if (p == 0) out.clear();
              out.insert(out.begin() + i, c.id_h[vertex]);
            } else if (p == 0) {
              out.reserve(q);
              for (int r = 0; r < q; ++r) out.push_back(c.id1_sq[part[r]]);
            } else {
              for (int r = 0; r < q; ++r) {
                for (int col = 0; col < p + 1; ++col) {
                  if (col == i) {
                    int v = i == 0 ? c.squares[part[0 + r * p]].s1
                                   : c.squares[part[i - 1 + r * p]].t1;
                    out.push_back(c.id1_sq[v]);
                  } else {
                    out.push_back(part[(col > i ? col - 1 : col) + r * p]);
                  }
                }
              }
            }
            table[e] = data.index[p + 1][q].at(out);
          }
          n.degeneracy[{1, p, q, i}] = std::move(table);
        }
      if (q + 1 <= cap_q)
        for (int j = 0; j <= q; ++j) {
          std::vector<int> table(here.size());
          for (std::size_t e = 0; e < here.size(); ++e) {
            const auto& part = here[e];
            std::vector<int> out;
            if (p == 0) {
              int vertex = q == 0 ? part[0] : chain_vertex_v(part, j);
              out.assign(part.begin(), part.end());
              if (q == 0) out.clear();
              out.insert(out.begin() + j, c.id_v[vertex]);
            } else if (q == 0) {
              out.reserve(p);
              for (int col = 0; col < p; ++col) out.push_back(c.id2_sq[part[col]]);
            } else {
              for (int r = 0; r < q + 1; ++r) {
                if (r == j) {
                  for (int col = 0; col < p; ++col) {
                    int h = j == 0 ? c.squares[part[col]].s2
                                   : c.squares[part[col + (j - 1) * p]].t2;
                    out.push_back(c.id2_sq[h]);
                  }
                } else {
                  int rr = r > j ? r - 1 : r;
                  for (int col = 0; col < p; ++col) out.push_back(part[col + rr * p]);
                }
              }
            }
            table[e] = data.index[p][q + 1].at(out);
          }
          n.degeneracy[{2, p, q, j}] = std::move(table);
        }
    }
  return n;
}

SimplicialIdentityReport check_simplicial_identities(const MultiSimplicialSet& n) {
  SimplicialIdentityReport rep;
  auto violate = [&](const std::string& msg) {
    rep.ok = false;
    if (rep.violations.size() < 20) rep.violations.push_back(msg);
  };
  for (int p = 0; p <= n.cap_p; ++p)
    for (int q = 0; q <= n.cap_q; ++q) {
      int count = n.size(p, q);
      if (count == 0) continue;
      // d_i d_j = d_{j-1} d_i (i < j), per direction.
      if (p >= 2)
        for (int i = 0; i <= p - 1; ++i)
          for (int j = i + 1; j <= p; ++j)
            for (int e = 0; e < count; ++e)
              if (n.face_map(1, p - 1, q, i)[n.face_map(1, p, q, j)[e]] !=
                  n.face_map(1, p - 1, q, j - 1)[n.face_map(1, p, q, i)[e]])
                violate("d1 d1 identity at (" + std::to_string(p) + "," + std::to_string(q) + ")");
      if (q >= 2)
        for (int i = 0; i <= q - 1; ++i)
          for (int j = i + 1; j <= q; ++j)
            for (int e = 0; e < count; ++e)
              if (n.face_map(2, p, q - 1, i)[n.face_map(2, p, q, j)[e]] !=
                  n.face_map(2, p, q - 1, j - 1)[n.face_map(2, p, q, i)[e]])
                violate("d2 d2 identity at (" + std::to_string(p) + "," + std::to_string(q) + ")");
      // Cross-direction faces commute.
      if (p >= 1 && q >= 1)
        for (int i = 0; i <= p; ++i)
          for (int j = 0; j <= q; ++j)
            for (int e = 0; e < count; ++e)
              if (n.face_map(2, p - 1, q, j)[n.face_map(1, p, q, i)[e]] !=
                  n.face_map(1, p, q - 1, i)[n.face_map(2, p, q, j)[e]])
                violate("d1 d2 commute at (" + std::to_string(p) + "," + std::to_string(q) + ")");
      // d s identities within direction 1.
      if (p + 1 <= n.cap_p)
        for (int i = 0; i <= p + 1; ++i)
          for (int j = 0; j <= p; ++j)
            for (int e = 0; e < count; ++e) {
              int se = n.degeneracy_map(1, p, q, j)[e];
              int r = n.face_map(1, p + 1, q, i)[se];
              int expect;
              if (i == j || i == j + 1)
                expect = e;
              else if (i < j)
                expect = n.degeneracy_map(1, p - 1, q, j - 1)[n.face_map(1, p, q, i)[e]];
              else
                expect = n.degeneracy_map(1, p - 1, q, j)[n.face_map(1, p, q, i - 1)[e]];
              if (r != expect)
                violate("d1 s1 identity at (" + std::to_string(p) + "," + std::to_string(q) + ")");
            }
      if (q + 1 <= n.cap_q)
        for (int i = 0; i <= q + 1; ++i)
          for (int j = 0; j <= q; ++j)
            for (int e = 0; e < count; ++e) {
              int se = n.degeneracy_map(2, p, q, j)[e];
              int r = n.face_map(2, p, q + 1, i)[se];
              int expect;
              if (i == j || i == j + 1)
                expect = e;
              else if (i < j)
                expect = n.degeneracy_map(2, p, q - 1, j - 1)[n.face_map(2, p, q, i)[e]];
              else
                expect = n.degeneracy_map(2, p, q - 1, j)[n.face_map(2, p, q, i - 1)[e]];
              if (r != expect)
                violate("d2 s2 identity at (" + std::to_string(p) + "," + std::to_string(q) + ")");
            }
      // Cross-direction face/degeneracy commute.
      if (p >= 1 && q + 1 <= n.cap_q)
        for (int i = 0; i <= p; ++i)
          for (int j = 0; j <= q; ++j)
            for (int e = 0; e < count; ++e)
              if (n.face_map(1, p, q + 1, i)[n.degeneracy_map(2, p, q, j)[e]] !=
                  n.degeneracy_map(2, p - 1, q, j)[n.face_map(1, p, q, i)[e]])
                violate("d1 s2 commute at (" + std::to_string(p) + "," + std::to_string(q) + ")");
      if (q >= 1 && p + 1 <= n.cap_p)
        for (int i = 0; i <= q; ++i)
          for (int j = 0; j <= p; ++j)
            for (int e = 0; e < count; ++e)
              if (n.face_map(2, p + 1, q, i)[n.degeneracy_map(1, p, q, j)[e]] !=
                  n.degeneracy_map(1, p, q - 1, j)[n.face_map(2, p, q, i)[e]])
                violate("d2 s1 commute at (" + std::to_string(p) + "," + std::to_string(q) + ")");
      // s s identities per direction.
      if (p + 2 <= n.cap_p)
        for (int i = 0; i <= p; ++i)
          for (int j = i; j <= p; ++j)
            for (int e = 0; e < count; ++e)
              if (n.degeneracy_map(1, p + 1, q, i)[n.degeneracy_map(1, p, q, j)[e]] !=
                  n.degeneracy_map(1, p + 1, q, j + 1)[n.degeneracy_map(1, p, q, i)[e]])
                violate("s1 s1 identity at (" + std::to_string(p) + "," + std::to_string(q) + ")");
      if (q + 2 <= n.cap_q)
        for (int i = 0; i <= q; ++i)
          for (int j = i; j <= q; ++j)
            for (int e = 0; e < count; ++e)
              if (n.degeneracy_map(2, p, q + 1, i)[n.degeneracy_map(2, p, q, j)[e]] !=
                  n.degeneracy_map(2, p, q + 1, j + 1)[n.degeneracy_map(2, p, q, i)[e]])
                violate("s2 s2 identity at (" + std::to_string(p) + "," + std::to_string(q) + ")");
    }
  return rep;
}

// --- horn filling ----------------------------------------------------------------

std::string HornShape::str() const {
  std::ostringstream os;
  os << (is_horn1() ? "horn(" + std::to_string(k1) + "," + std::to_string(inner1) + ")"
                    : "simplex(" + std::to_string(k1) + ")");
  os << " x ";
  os << (is_horn2() ? "horn(" + std::to_string(k2) + "," + std::to_string(inner2) + ")"
                    : "simplex(" + std::to_string(k2) + ")");
  return os.str();
}

std::vector<HornShape> inner_horn_shapes(int cap_p, int cap_q) {
  std::vector<HornShape> out;
  auto horns1 = [&] {
    std::vector<std::pair<int, int>> h;
    for (int k = 2; k <= cap_p; ++k)
      for (int j = 1; j < k; ++j) h.emplace_back(k, j);
    return h;
  }();
  auto horns2 = [&] {
    std::vector<std::pair<int, int>> h;
    for (int k = 2; k <= cap_q; ++k)
      for (int j = 1; j < k; ++j) h.emplace_back(k, j);
    return h;
  }();
  for (auto [k1, j1] : horns1)
    for (int m = 0; m <= cap_q; ++m) out.push_back({k1, j1, m, -1});
  for (auto [k2, j2] : horns2)
    for (int m = 0; m <= cap_p; ++m) out.push_back({m, -1, k2, j2});
  for (auto [k1, j1] : horns1)
    for (auto [k2, j2] : horns2) out.push_back({k1, j1, k2, j2});
  return out;
}

namespace {

// Key of one horn datum: the retained faces in index order.
std::string datum_key(const std::vector<int>& xs) {
  std::string key;
  for (int x : xs) key += std::to_string(x) + ";";
  return key;
}

}  // namespace

HornReport check_unique_inner_horns(const MultiSimplicialSet& n) {
  HornReport rep;
  for (const HornShape& shape : inner_horn_shapes(n.cap_p, n.cap_q)) {
    long long data_count = 0, filler_count = 0;
    std::vector<std::string> local_failures;

    if (shape.is_horn1() && !shape.is_horn2()) {
      int k = shape.k1, j = shape.inner1, m = shape.k2;
      std::vector<int> idxs;
      for (int a = 0; a <= k; ++a)
        if (a != j) idxs.push_back(a);
      int lv_p = k - 1, lv_q = m;
      // Data from fillers.
      std::map<std::string, std::vector<int>> fillers;
      for (int y = 0; y < n.size(k, m); ++y) {
        std::vector<int> xs;
        for (int a : idxs) xs.push_back(n.face_map(1, k, m, a)[y]);
        fillers[datum_key(xs)].push_back(y);
        ++filler_count;
      }
      // All abstract data by incremental join.
      std::vector<std::vector<int>> partial = {{}};
      for (std::size_t pos = 0; pos < idxs.size(); ++pos) {
        std::vector<std::vector<int>> next;
        for (const auto& tuple : partial) {
          for (int cand = 0; cand < n.size(lv_p, lv_q); ++cand) {
            bool ok = true;
            for (std::size_t prev = 0; prev < tuple.size() && ok; ++prev) {
              int a = idxs[prev], b = idxs[pos];  // a < b
              if (lv_p >= 1) {
                if (n.face_map(1, lv_p, lv_q, a)[cand] !=
                    n.face_map(1, lv_p, lv_q, b - 1)[tuple[prev]])
                  ok = false;
              }
            }
            if (ok) {
              auto t = tuple;
              t.push_back(cand);
              next.push_back(std::move(t));
            }
          }
        }
        partial = std::move(next);
        if (partial.size() > 2000000)
          throw CapacityError("horn datum enumeration exceeded its cap");
      }
      data_count = static_cast<long long>(partial.size());
      std::set<std::string> enumerated;
      for (const auto& tuple : partial) {
        enumerated.insert(datum_key(tuple));
        auto it = fillers.find(datum_key(tuple));
        if (it == fillers.end())
          local_failures.push_back(shape.str() + ": horn datum with no filler");
        else if (it->second.size() != 1)
          local_failures.push_back(shape.str() + ": horn datum with " +
                                   std::to_string(it->second.size()) + " fillers");
      }
      // Every filler restricts to a datum the enumeration must produce.
      for (const auto& [key, ys] : fillers)
        if (!enumerated.count(key))
          throw InternalError("horn enumeration missed a filler's datum at " + shape.str());
    } else if (!shape.is_horn1() && shape.is_horn2()) {
      int k = shape.k2, j = shape.inner2, m = shape.k1;
      std::vector<int> idxs;
      for (int a = 0; a <= k; ++a)
        if (a != j) idxs.push_back(a);
      int lv_p = m, lv_q = k - 1;
      std::map<std::string, std::vector<int>> fillers;
      for (int y = 0; y < n.size(m, k); ++y) {
        std::vector<int> xs;
        for (int a : idxs) xs.push_back(n.face_map(2, m, k, a)[y]);
        fillers[datum_key(xs)].push_back(y);
        ++filler_count;
      }
      std::vector<std::vector<int>> partial = {{}};
      for (std::size_t pos = 0; pos < idxs.size(); ++pos) {
        std::vector<std::vector<int>> next;
        for (const auto& tuple : partial) {
          for (int cand = 0; cand < n.size(lv_p, lv_q); ++cand) {
            bool ok = true;
            for (std::size_t prev = 0; prev < tuple.size() && ok; ++prev) {
              int a = idxs[prev], b = idxs[pos];
              if (lv_q >= 1) {
                if (n.face_map(2, lv_p, lv_q, a)[cand] !=
                    n.face_map(2, lv_p, lv_q, b - 1)[tuple[prev]])
                  ok = false;
              }
            }
            if (ok) {
              auto t = tuple;
              t.push_back(cand);
              next.push_back(std::move(t));
            }
          }
        }
        partial = std::move(next);
        if (partial.size() > 2000000)
          throw CapacityError("horn datum enumeration exceeded its cap");
      }
      data_count = static_cast<long long>(partial.size());
      std::set<std::string> enumerated;
      for (const auto& tuple : partial) {
        enumerated.insert(datum_key(tuple));
        auto it = fillers.find(datum_key(tuple));
        if (it == fillers.end())
          local_failures.push_back(shape.str() + ": horn datum with no filler");
        else if (it->second.size() != 1)
          local_failures.push_back(shape.str() + ": horn datum with " +
                                   std::to_string(it->second.size()) + " fillers");
      }
      // Every filler restricts to a datum the enumeration must produce.
      for (const auto& [key, ys] : fillers)
        if (!enumerated.count(key))
          throw InternalError("horn enumeration missed a filler's datum at " + shape.str());
    } else {
      // Horns in both directions: data indexed by pairs (a,b).
      int k1 = shape.k1, j1 = shape.inner1, k2 = shape.k2, j2 = shape.inner2;
      std::vector<int> as, bs;
      for (int a = 0; a <= k1; ++a)
        if (a != j1) as.push_back(a);
      for (int b = 0; b <= k2; ++b)
        if (b != j2) bs.push_back(b);
      int lv_p = k1 - 1, lv_q = k2 - 1;
      std::vector<std::pair<int, int>> slots;
      for (int a : as)
        for (int b : bs) slots.emplace_back(a, b);
      std::map<std::string, std::vector<int>> fillers;
      for (int y = 0; y < n.size(k1, k2); ++y) {
        std::vector<int> xs;
        for (auto [a, b] : slots)
          xs.push_back(n.face_map(1, k1, k2 - 1, a)[n.face_map(2, k1, k2, b)[y]]);
        fillers[datum_key(xs)].push_back(y);
        ++filler_count;
      }
      auto compatible = [&](const std::pair<int, int>& sa, int xa,
                            const std::pair<int, int>& sb, int xb) {
        auto [a, b] = sa;
        auto [a2, b2] = sb;
        // Shared double-face of the two retained faces, with index shifts.
        int da = a2 > a ? a2 - 1 : a2, da2 = a > a2 ? a - 1 : a;
        int db = b2 > b ? b2 - 1 : b2, db2 = b > b2 ? b - 1 : b;
        int u = xa, v = xb;
        if (b2 != b) {
          u = n.face_map(2, lv_p, lv_q, db)[u];
          v = n.face_map(2, lv_p, lv_q, db2)[v];
          if (a2 != a) {
            u = n.face_map(1, lv_p, lv_q - 1, da)[u];
            v = n.face_map(1, lv_p, lv_q - 1, da2)[v];
          }
        } else if (a2 != a) {
          u = n.face_map(1, lv_p, lv_q, da)[u];
          v = n.face_map(1, lv_p, lv_q, da2)[v];
        } else {
          return xa == xb;
        }
        return u == v;
      };
      std::vector<std::vector<int>> partial = {{}};
      for (std::size_t pos = 0; pos < slots.size(); ++pos) {
        std::vector<std::vector<int>> next;
        for (const auto& tuple : partial) {
          for (int cand = 0; cand < n.size(lv_p, lv_q); ++cand) {
            bool ok = true;
            for (std::size_t prev = 0; prev < tuple.size() && ok; ++prev)
              if (!compatible(slots[prev], tuple[prev], slots[pos], cand)) ok = false;
            if (ok) {
              auto t = tuple;
              t.push_back(cand);
              next.push_back(std::move(t));
            }
          }
        }
        partial = std::move(next);
        if (partial.size() > 2000000)
          throw CapacityError("horn datum enumeration exceeded its cap");
      }
      data_count = static_cast<long long>(partial.size());
      std::set<std::string> enumerated;
      for (const auto& tuple : partial) {
        enumerated.insert(datum_key(tuple));
        auto it = fillers.find(datum_key(tuple));
        if (it == fillers.end())
          local_failures.push_back(shape.str() + ": horn datum with no filler");
        else if (it->second.size() != 1)
          local_failures.push_back(shape.str() + ": horn datum with " +
                                   std::to_string(it->second.size()) + " fillers");
      }
      // Every filler restricts to a datum the enumeration must produce.
      for (const auto& [key, ys] : fillers)
        if (!enumerated.count(key))
          throw InternalError("horn enumeration missed a filler's datum at " + shape.str());
    }

    rep.horns_checked += data_count;
    rep.shapes.push_back(shape.str() + ": " + std::to_string(data_count) + " horns, " +
                         std::to_string(filler_count) + " fillers");
    if (!local_failures.empty()) {
      rep.ok = false;
      for (std::size_t i = 0; i < std::min<std::size_t>(local_failures.size(), 5); ++i)
        rep.failures.push_back(local_failures[i]);
    }
  }
  return rep;
}

MultiSimplicialSet remove_element(const MultiSimplicialSet& n, int p, int q, int idx) {
  // Mark the element, then cascade: delete anything whose face or
  // degeneracy image was deleted, until stable.
  std::vector<std::vector<std::vector<bool>>> dead(
      n.cap_p + 1, std::vector<std::vector<bool>>(n.cap_q + 1));
  for (int a = 0; a <= n.cap_p; ++a)
    for (int b = 0; b <= n.cap_q; ++b) dead[a][b].assign(n.elems[a][b].size(), false);
  dead[p][q][idx] = true;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [key, table] : n.face) {
      auto [dir, a, b, i] = key;
      int tp = dir == 1 ? a - 1 : a, tq = dir == 1 ? b : b - 1;
      for (std::size_t e = 0; e < table.size(); ++e)
        if (!dead[a][b][e] && dead[tp][tq][table[e]]) {
          dead[a][b][e] = true;
          changed = true;
        }
    }
    for (const auto& [key, table] : n.degeneracy) {
      auto [dir, a, b, i] = key;
      int tp = dir == 1 ? a + 1 : a, tq = dir == 1 ? b : b + 1;
      for (std::size_t e = 0; e < table.size(); ++e)
        if (!dead[a][b][e] && dead[tp][tq][table[e]]) {
          dead[a][b][e] = true;
          changed = true;
        }
    }
  }
  MultiSimplicialSet out;
  out.cap_p = n.cap_p;
  out.cap_q = n.cap_q;
  out.elems.assign(n.cap_p + 1, std::vector<std::vector<std::string>>(n.cap_q + 1));
  std::vector<std::vector<std::vector<int>>> renum(
      n.cap_p + 1, std::vector<std::vector<int>>(n.cap_q + 1));
  for (int a = 0; a <= n.cap_p; ++a)
    for (int b = 0; b <= n.cap_q; ++b) {
      renum[a][b].assign(n.elems[a][b].size(), -1);
      for (std::size_t e = 0; e < n.elems[a][b].size(); ++e)
        if (!dead[a][b][e]) {
          renum[a][b][e] = static_cast<int>(out.elems[a][b].size());
          out.elems[a][b].push_back(n.elems[a][b][e]);
        }
    }
  for (const auto& [key, table] : n.face) {
    auto [dir, a, b, i] = key;
    int tp = dir == 1 ? a - 1 : a, tq = dir == 1 ? b : b - 1;
    std::vector<int> nt;
    for (std::size_t e = 0; e < table.size(); ++e)
      if (!dead[a][b][e]) nt.push_back(renum[tp][tq][table[e]]);
    out.face[key] = std::move(nt);
  }
  for (const auto& [key, table] : n.degeneracy) {
    auto [dir, a, b, i] = key;
    int tp = dir == 1 ? a + 1 : a, tq = dir == 1 ? b : b + 1;
    std::vector<int> nt;
    for (std::size_t e = 0; e < table.size(); ++e)
      if (!dead[a][b][e]) nt.push_back(renum[tp][tq][table[e]]);
    out.degeneracy[key] = std::move(nt);
  }
  return out;
}

int find_nondegenerate(const MultiSimplicialSet& n, int p, int q) {
  std::set<int> degenerate;
  for (const auto& [key, table] : n.degeneracy) {
    auto [dir, a, b, i] = key;
    int tp = dir == 1 ? a + 1 : a, tq = dir == 1 ? b : b + 1;
    if (tp == p && tq == q)
      for (int img : table) degenerate.insert(img);
  }
  for (int e = 0; e < n.size(p, q); ++e)
    if (!degenerate.count(e)) return e;
  return -1;
}

}  // namespace nfold
