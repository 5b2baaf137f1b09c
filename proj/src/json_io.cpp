#include "nfold/json_io.hpp"

#include <algorithm>

namespace nfold {

json grid_to_json(const GluingDiagram& g) {
  json j;
  j["extents"] = g.extents;
  return j;
}

GluingDiagram grid_from_json(const json& j) {
  if (!j.contains("extents") || !j["extents"].is_array())
    throw InputError("grid JSON needs an \"extents\" array");
  return make_grid(j["extents"].get<std::vector<int>>());
}

GluingDiagram parse_grid_spec(const std::string& spec) {
  std::vector<int> extents;
  std::string cur;
  for (char c : spec + "x") {
    if (c == 'x' || c == 'X') {
      if (cur.empty()) throw InputError("bad grid spec: " + spec);
      extents.push_back(std::stoi(cur));
      cur.clear();
    } else if (c >= '0' && c <= '9') {
      cur += c;
    } else {
      throw InputError("bad grid spec: " + spec);
    }
  }
  return make_grid(extents);
}

json tree_to_json(const TreePtr& t) {
  json j;
  if (t->is_leaf()) {
    j["cell"] = t->cell;
  } else {
    j["dir"] = t->dir;
    j["left"] = tree_to_json(t->left);
    j["right"] = tree_to_json(t->right);
  }
  return j;
}

TreePtr tree_from_json(const json& j) {
  if (j.contains("cell")) return make_leaf(j["cell"].get<std::vector<int>>());
  if (!j.contains("dir") || !j.contains("left") || !j.contains("right"))
    throw InputError("tree JSON node needs dir/left/right or cell");
  return make_node(j["dir"].get<int>(), tree_from_json(j["left"]),
                   tree_from_json(j["right"]));
}

// --- spans ---------------------------------------------------------------------

namespace {

Elem elem_from_key(const std::string& key, std::size_t& pos) {
  if (pos >= key.size()) throw InputError("truncated element key: " + key);
  if (key[pos] == '(') {
    ++pos;  // consume '('
    Elem a = elem_from_key(key, pos);
    if (pos >= key.size() || key[pos] != ',') throw InputError("bad element key: " + key);
    ++pos;
    Elem b = elem_from_key(key, pos);
    if (pos >= key.size() || key[pos] != ')') throw InputError("bad element key: " + key);
    ++pos;
    return Elem::pair(a, b);
  }
  std::size_t start = pos;
  while (pos < key.size() && key[pos] != ',' && key[pos] != ')' && key[pos] != '(') ++pos;
  return Elem::atom(key.substr(start, pos - start));
}

Elem elem_from_key(const std::string& key) {
  std::size_t pos = 0;
  Elem e = elem_from_key(key, pos);
  if (pos != key.size()) throw InputError("trailing characters in element key: " + key);
  return e;
}

}  // namespace

json span_to_json(const FiniteSpan& s) {
  json j;
  j["directions"] = s.directions;
  json sets = json::object();
  for (const auto& [face, set] : s.sets) {
    std::vector<std::string> keys;
    for (const Elem& e : set) keys.push_back(e.key());
    sets[face] = keys;
  }
  j["sets"] = sets;
  json maps = json::object();
  for (const auto& [fromto, m] : s.maps) {
    json pairs = json::array();
    for (const auto& [a, b] : m.pairs()) pairs.push_back({a.key(), b.key()});
    maps[fromto.first + ">" + fromto.second] = pairs;
  }
  j["maps"] = maps;
  return j;
}

FiniteSpan span_from_json(const json& j) {
  FiniteSpan s;
  s.directions = j.at("directions").get<std::vector<int>>();
  for (const auto& [face, arr] : j.at("sets").items()) {
    std::vector<Elem> elems;
    for (const auto& k : arr) elems.push_back(elem_from_key(k.get<std::string>()));
    s.sets[face] = make_set(std::move(elems));
  }
  for (const auto& [key, arr] : j.at("maps").items()) {
    auto sep = key.find('>');
    if (sep == std::string::npos) throw InputError("bad map key: " + key);
    std::vector<std::pair<Elem, Elem>> pairs;
    for (const auto& p : arr)
      pairs.emplace_back(elem_from_key(p.at(0).get<std::string>()),
                         elem_from_key(p.at(1).get<std::string>()));
    s.maps[{key.substr(0, sep), key.substr(sep + 1)}] = ElemMap(std::move(pairs));
  }
  auto v = validate_span(s);
  if (!v.ok) throw InputError("invalid span JSON: " + v.issues.front());
  return s;
}

json instance_to_json(const SpanGridInstance& inst) {
  json j;
  j["grid"] = grid_to_json(inst.grid);
  json cells = json::array();
  for (const auto& [cell, span] : inst.cells) {
    json c;
    c["cell"] = cell;
    c["span"] = span_to_json(span);
    cells.push_back(c);
  }
  j["cells"] = cells;
  return j;
}

SpanGridInstance instance_from_json(const json& j) {
  SpanGridInstance inst;
  inst.grid = grid_from_json(j.at("grid"));
  for (const auto& c : j.at("cells"))
    inst.cells[c.at("cell").get<std::vector<int>>()] = span_from_json(c.at("span"));
  auto v = validate_instance(inst);
  if (!v.ok) throw InputError("invalid instance JSON: " + v.issues.front());
  return inst;
}

// --- cobordisms -----------------------------------------------------------------

json cobordism_to_json(const CobPresentation& p) {
  json j;
  if (!p.name.empty()) j["name"] = p.name;
  j["dim"] = p.dim;
  j["vertices"] = p.num_vertices;
  json edges = json::array();
  for (const auto& e : p.edges) edges.push_back({{"id", e.id}, {"src", e.src}, {"dst", e.dst}});
  j["edges"] = edges;
  json relators = json::array();
  for (const auto& w : p.relators) {
    json word = json::array();
    for (int se : w) {
      std::string id = p.edges[std::abs(se) - 1].id;
      if (se < 0 && !id.empty()) id[0] = static_cast<char>(std::toupper(id[0]));
      word.push_back(id);
    }
    relators.push_back(word);
  }
  j["relators"] = relators;
  json bounds = json::object();
  for (const auto& [key, part] : p.boundaries) {
    std::string bkey = std::to_string(key.first) + (key.second > 0 ? "+" : "-");
    json b;
    b["vertices"] = part.vertices;
    std::vector<std::string> edge_ids;
    for (int e : part.edges) edge_ids.push_back(p.edges[e].id);
    b["edges"] = edge_ids;
    b["relators"] = part.relators;
    bounds[bkey] = b;
  }
  j["boundaries"] = bounds;
  return j;
}

CobPresentation cobordism_from_json(const json& j) {
  CobPresentation p;
  p.name = j.value("name", std::string("cobordism"));
  p.dim = j.at("dim").get<int>();
  p.num_vertices = j.at("vertices").get<int>();
  std::map<std::string, int> edge_of;
  for (const auto& e : j.at("edges")) {
    std::string id = e.at("id").get<std::string>();
    if (edge_of.count(id)) throw InputError("duplicate edge id: " + id);
    edge_of[id] = static_cast<int>(p.edges.size());
    p.edges.push_back({id, e.at("src").get<int>(), e.at("dst").get<int>()});
  }
  auto parse_letter = [&](const std::string& word) {
    auto it = edge_of.find(word);
    if (it != edge_of.end()) return +(it->second + 1);
    std::string lowered = word;
    if (!lowered.empty()) lowered[0] = static_cast<char>(std::tolower(lowered[0]));
    it = edge_of.find(lowered);
    if (it == edge_of.end()) throw InputError("relator references unknown edge: " + word);
    return -(it->second + 1);
  };
  for (const auto& w : j.value("relators", json::array())) {
    std::vector<int> word;
    for (const auto& letter : w) word.push_back(parse_letter(letter.get<std::string>()));
    p.relators.push_back(std::move(word));
  }
  const json bounds = j.value("boundaries", json::object());
  for (const auto& [bkey, b] : bounds.items()) {
    if (bkey.size() < 2 || (bkey.back() != '+' && bkey.back() != '-'))
      throw InputError("boundary key must look like \"1+\": " + bkey);
    int dir = std::stoi(bkey.substr(0, bkey.size() - 1));
    int sign = bkey.back() == '+' ? +1 : -1;
    CobPresentation::BoundaryPart part;
    part.vertices = b.value("vertices", std::vector<int>{});
    for (const auto& id : b.value("edges", std::vector<std::string>{})) {
      auto it = edge_of.find(id);
      if (it == edge_of.end()) throw InputError("boundary references unknown edge: " + id);
      part.edges.push_back(it->second);
    }
    part.relators = b.value("relators", std::vector<int>{});
    p.boundaries[{dir, sign}] = std::move(part);
  }
  auto v = validate_presentation(p);
  if (!v.ok) throw InputError("invalid cobordism JSON: " + v.issues.front());
  return p;
}

json group_to_json(const GroupTable& g) {
  json j;
  j["name"] = g.name;
  j["elements"] = g.element_names;
  j["table"] = g.mul;
  return j;
}

GroupTable group_from_json(const json& j) {
  return load_group_table(j.value("name", std::string("group")),
                          j.at("elements").get<std::vector<std::string>>(),
                          j.at("table").get<std::vector<std::vector<int>>>());
}

// --- double categories and multisimplicial sets -----------------------------------

json double_category_to_json(const FiniteDoubleCategory& dc) {
  json j;
  j["kind"] = "double-category";
  j["name"] = dc.name;
  j["objects"] = dc.objects;
  auto arrows = [](const std::vector<FiniteDoubleCategory::Arrow>& v) {
    json out = json::array();
    for (const auto& a : v) out.push_back({{"name", a.name}, {"src", a.src}, {"dst", a.dst}});
    return out;
  };
  j["hmor"] = arrows(dc.hmor);
  j["vmor"] = arrows(dc.vmor);
  json squares = json::array();
  for (const auto& s : dc.squares)
    squares.push_back({{"name", s.name},
                       {"s1", s.s1},
                       {"t1", s.t1},
                       {"s2", s.s2},
                       {"t2", s.t2}});
  j["squares"] = squares;
  j["id_h"] = dc.id_h;
  j["id_v"] = dc.id_v;
  j["id1_sq"] = dc.id1_sq;
  j["id2_sq"] = dc.id2_sq;
  j["comp_h"] = dc.comp_h;
  j["comp_v"] = dc.comp_v;
  j["comp_sq1"] = dc.comp_sq1;
  j["comp_sq2"] = dc.comp_sq2;
  return j;
}

FiniteDoubleCategory double_category_from_json(const json& j) {
  FiniteDoubleCategory dc;
  dc.name = j.value("name", std::string("double-category"));
  dc.objects = j.at("objects").get<std::vector<std::string>>();
  auto arrows = [](const json& arr) {
    std::vector<FiniteDoubleCategory::Arrow> out;
    for (const auto& a : arr)
      out.push_back({a.at("name").get<std::string>(), a.at("src").get<int>(),
                     a.at("dst").get<int>()});
    return out;
  };
  dc.hmor = arrows(j.at("hmor"));
  dc.vmor = arrows(j.at("vmor"));
  for (const auto& s : j.at("squares"))
    dc.squares.push_back({s.at("name").get<std::string>(), s.at("s1").get<int>(),
                          s.at("t1").get<int>(), s.at("s2").get<int>(),
                          s.at("t2").get<int>()});
  dc.id_h = j.at("id_h").get<std::vector<int>>();
  dc.id_v = j.at("id_v").get<std::vector<int>>();
  dc.id1_sq = j.at("id1_sq").get<std::vector<int>>();
  dc.id2_sq = j.at("id2_sq").get<std::vector<int>>();
  dc.comp_h = j.at("comp_h").get<std::vector<std::vector<int>>>();
  dc.comp_v = j.at("comp_v").get<std::vector<std::vector<int>>>();
  dc.comp_sq1 = j.at("comp_sq1").get<std::vector<std::vector<int>>>();
  dc.comp_sq2 = j.at("comp_sq2").get<std::vector<std::vector<int>>>();
  return dc;
}

json multisimplicial_to_json(const MultiSimplicialSet& n) {
  json j;
  j["kind"] = "multisimplicial-set";
  j["cap"] = {n.cap_p, n.cap_q};
  j["elems"] = n.elems;
  auto tables = [](const std::map<std::tuple<int, int, int, int>, std::vector<int>>& maps) {
    json out = json::array();
    for (const auto& [key, table] : maps) {
      auto [dir, p, q, i] = key;
      out.push_back({{"dir", dir}, {"p", p}, {"q", q}, {"i", i}, {"table", table}});
    }
    return out;
  };
  j["faces"] = tables(n.face);
  j["degeneracies"] = tables(n.degeneracy);
  return j;
}

MultiSimplicialSet multisimplicial_from_json(const json& j) {
  MultiSimplicialSet n;
  n.cap_p = j.at("cap").at(0).get<int>();
  n.cap_q = j.at("cap").at(1).get<int>();
  n.elems = j.at("elems").get<std::vector<std::vector<std::vector<std::string>>>>();
  auto tables = [](const json& arr) {
    std::map<std::tuple<int, int, int, int>, std::vector<int>> out;
    for (const auto& t : arr)
      out[{t.at("dir").get<int>(), t.at("p").get<int>(), t.at("q").get<int>(),
           t.at("i").get<int>()}] = t.at("table").get<std::vector<int>>();
    return out;
  };
  n.face = tables(j.at("faces"));
  n.degeneracy = tables(j.at("degeneracies"));
  return n;
}

}  // namespace nfold
