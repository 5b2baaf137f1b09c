#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nfold/json_io.hpp"
#include "nfold/report.hpp"
#include "nfold/rewrite.hpp"
#include "nfold/span.hpp"
#include "nfold/util.hpp"

namespace {

using nfold::json;

constexpr int kExitOk = 0;
constexpr int kExitFalsified = 1;
constexpr int kExitInputError = 2;
constexpr int kExitCapacityError = 3;

struct Emitter {
  std::string format = "text";
  json report;
  std::vector<std::string> text_lines;

  void line(const std::string& s) { text_lines.push_back(s); }

  void flush() const {
    if (format == "json") {
      std::cout << report.dump(2) << "\n";
    } else {
      for (const auto& l : text_lines) std::cout << l << "\n";
    }
  }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nfold::InputError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json load_json_file(const std::string& path, Emitter& em) {
  std::string bytes = read_file(path);
  em.report["inputs"][path] = nfold::fnv1a_hex(bytes);
  try {
    return json::parse(bytes);
  } catch (const std::exception& e) {
    throw nfold::InputError("invalid JSON in " + path + ": " + e.what());
  }
}

nfold::GroupTable resolve_group(const std::string& spec, Emitter& em) {
  std::ifstream probe(spec);
  if (probe.good()) return nfold::group_from_json(load_json_file(spec, em));
  return nfold::load_group(spec);
}

json move_to_json(const nfold::Move& m) {
  json j;
  j["kind"] = m.kind == nfold::Move::Kind::Alpha ? "alpha" : "beta";
  j["dir"] = m.dir;
  if (m.kind == nfold::Move::Kind::Beta) j["inner_dir"] = m.inner_dir;
  j["pos"] = m.pos;
  return j;
}

int run_coherence(const std::string& grid_spec, long long max_trees,
                  const std::string& emit_complex, Emitter& em) {
  auto grid = nfold::parse_grid_spec(grid_spec);
  em.report["params"] = {{"grid", grid.extents}, {"max_trees", max_trees}};
  auto cx = nfold::build_coherence_complex(grid, max_trees);
  auto term = nfold::check_termination(cx.graph);
  auto nf = nfold::check_unique_normal_form(cx.graph);
  auto cp = nfold::critical_pairs(cx);
  int h1 = nfold::coherence_h1(cx);

  json result;
  result["trees"] = cx.graph.vertices.size();
  result["edges"] = cx.graph.edges.size();
  result["cells"] = cx.cell_counts;
  result["acyclic"] = term.acyclic;
  result["longest_path"] = term.longest_path;
  result["connected"] = nf.connected;
  result["terminal_count"] = nf.terminals.size();
  if (nf.terminal >= 0) result["terminal"] = nfold::tree_to_json(cx.graph.vertices[nf.terminal]);
  result["terminal_matches_normalize"] = nf.matches_normalize;
  result["terminal_is_stratified"] = nf.matches_stratified;
  result["critical_pairs"] = {{"total", cp.certificates.size()},
                              {"by_class", cp.class_counts},
                              {"all_joinable", cp.all_joinable},
                              {"all_tiled", cp.all_tiled}};
  result["h1"] = h1;
  em.report["result"] = result;

  bool ok = term.acyclic && nf.ok && cp.all_joinable && cp.all_tiled && h1 == 0;
  json witness = json::object();
  if (!term.acyclic) witness["cycle"] = term.cycle;
  if (nf.terminals.size() > 1) witness["terminals"] = nf.terminals;
  if (!ok) em.report["witness"] = witness;

  if (!emit_complex.empty()) {
    json cj;
    cj["grid"] = nfold::grid_to_json(grid);
    json vertices = json::array();
    for (const auto& t : cx.graph.vertices) vertices.push_back(nfold::tree_to_json(t));
    cj["vertices"] = vertices;
    json edges = json::array();
    for (const auto& e : cx.graph.edges)
      edges.push_back({{"from", e.from}, {"to", e.to}, {"move", move_to_json(e.move)}});
    cj["edges"] = edges;
    json cells = json::array();
    for (const auto& c : cx.cells)
      cells.push_back({{"kind", nfold::cell_kind_name(c.kind)},
                       {"source", c.source},
                       {"sink", c.sink},
                       {"side_a", c.side_a},
                       {"side_b", c.side_b}});
    cj["cells"] = cells;
    std::ofstream out(emit_complex, std::ios::binary);
    if (!out) throw nfold::InputError("cannot write " + emit_complex);
    out << cj.dump(2) << "\n";
    em.line("complex written to " + emit_complex);
  }

  std::ostringstream os;
  os << "grid " << grid_spec << ": " << cx.graph.vertices.size() << " trees, "
     << cx.graph.edges.size() << " edges, H1=" << h1;
  em.line(os.str());
  em.line(std::string("termination: ") + (term.acyclic ? "acyclic" : "CYCLE FOUND"));
  em.line(std::string("unique terminal: ") + (nf.ok ? "yes" : "NO"));
  em.line("critical pairs: " + std::to_string(cp.certificates.size()) +
          (cp.all_tiled ? ", all tiled" : ", TILING FAILED"));
  return ok ? kExitOk : kExitFalsified;
}

int run_axioms(const std::string& shape, std::uint64_t seed, int core_size, int instances,
               Emitter& em) {
  std::vector<int> extents;
  std::string cell_kind;
  if (shape == "pentagon") {
    extents = {4};
    cell_kind = "pentagon";
  } else if (shape == "hexagon1") {
    extents = {2, 3};
    cell_kind = "hexagon-1";
  } else if (shape == "hexagon2") {
    extents = {2, 2, 2};
    cell_kind = "hexagon-2";
  } else {
    throw nfold::InputError("unknown shape: " + shape +
                            " (expected pentagon|hexagon1|hexagon2)");
  }
  em.report["params"] = {{"shape", shape},
                         {"seed", seed},
                         {"core_size", core_size},
                         {"instances", instances}};
  auto grid = nfold::make_grid(extents);
  bool ok = true;
  long long cells_checked = 0;
  json failures = json::array();
  for (int i = 0; i < instances; ++i) {
    auto inst = nfold::make_instance(grid, seed + static_cast<std::uint64_t>(i), core_size);
    auto rep = nfold::check_pseudo_axioms(inst);
    auto units = nfold::check_unit_laws(inst);
    cells_checked += rep.by_kind[cell_kind];
    if (!rep.ok || !units.ok) {
      ok = false;
      for (const auto& f : rep.failures) failures.push_back(f);
      for (const auto& f : units.failures) failures.push_back(f);
    }
  }
  em.report["result"] = {{"instances", instances},
                         {"cells_of_shape", cells_checked},
                         {"ok", ok}};
  if (!ok) em.report["witness"] = failures;
  em.line("shape " + shape + ": " + std::to_string(instances) + " instances, " +
          std::to_string(cells_checked) + " " + cell_kind + " cells, " +
          (ok ? "all equal pointwise" : "FAILED"));
  return ok ? kExitOk : kExitFalsified;
}

int run_nerve_check(const std::string& input, const std::string& cap_spec, Emitter& em) {
  int cap_p = 3, cap_q = 3;
  if (!cap_spec.empty()) {
    auto comma = cap_spec.find(',');
    if (comma == std::string::npos)
      throw nfold::InputError("--cap expects \"P,Q\"");
    cap_p = std::stoi(cap_spec.substr(0, comma));
    cap_q = std::stoi(cap_spec.substr(comma + 1));
  }
  em.report["params"] = {{"input", input}, {"cap", {cap_p, cap_q}}};
  json j = load_json_file(input, em);
  std::string kind = j.value("kind", std::string("double-category"));
  nfold::MultiSimplicialSet n;
  json result;
  if (kind == "double-category") {
    auto dc = nfold::double_category_from_json(j);
    auto ax = nfold::check_strict_axioms(dc);
    result["axioms_ok"] = ax.ok;
    if (!ax.ok) {
      json violations = json::array();
      for (const auto& v : ax.violations)
        violations.push_back({{"axiom", v.axiom}, {"witness", v.witness}});
      em.report["witness"] = violations;
      em.report["result"] = result;
      em.line("strict axioms FAILED: " + ax.violations.front().axiom);
      return kExitFalsified;
    }
    n = nfold::nerve(dc, cap_p, cap_q);
  } else if (kind == "multisimplicial-set") {
    n = nfold::multisimplicial_from_json(j);
  } else {
    throw nfold::InputError("unknown input kind: " + kind);
  }
  auto si = nfold::check_simplicial_identities(n);
  auto horns = nfold::check_unique_inner_horns(n);
  result["simplicial_identities"] = si.ok;
  result["horns_checked"] = horns.horns_checked;
  result["unique_filling"] = horns.ok;
  result["shapes"] = horns.shapes;
  em.report["result"] = result;
  bool ok = si.ok && horns.ok;
  if (!ok) {
    json witness = json::array();
    for (const auto& v : si.violations) witness.push_back(v);
    for (const auto& f : horns.failures) witness.push_back(f);
    em.report["witness"] = witness;
  }
  em.line("simplicial identities: " + std::string(si.ok ? "ok" : "FAILED"));
  em.line("inner horns: " + std::to_string(horns.horns_checked) +
          (horns.ok ? ", uniquely filled" : ", FAILURES FOUND"));
  return ok ? kExitOk : kExitFalsified;
}

int run_dw(const std::string& cobordism_file, const std::string& group_spec, long long cap,
           Emitter& em) {
  em.report["params"] = {{"cobordism", cobordism_file}, {"group", group_spec}, {"cap", cap}};
  auto p = nfold::cobordism_from_json(load_json_file(cobordism_file, em));
  auto g = resolve_group(group_spec, em);
  auto span = nfold::phi_span(p, g, cap);
  auto z = nfold::dw_invariant(p, g, cap);
  json result;
  result["cobordism"] = p.name;
  result["group"] = g.name;
  result["flat_fields"] = span.core.fields.size();
  result["gauge_classes"] = span.core.count();
  result["Z"] = z.str();
  json bounds = json::object();
  for (const auto& [key, data] : span.boundaries) {
    std::string bkey = std::to_string(key.first) + (key.second > 0 ? "+" : "-");
    bounds[bkey] = {{"classes", data.classes.count()}, {"restriction", data.restriction}};
  }
  result["boundaries"] = bounds;
  em.report["result"] = result;
  em.line(p.name + " with " + g.name + ": " + std::to_string(span.core.fields.size()) +
          " flat fields, " + std::to_string(span.core.count()) + " gauge classes, Z = " +
          z.str());
  return kExitOk;
}

int run_dw_compose(const std::string& left_file, const std::string& right_file, int dir,
                   const std::string& group_spec, bool check_coherence, long long cap,
                   Emitter& em) {
  em.report["params"] = {{"left", left_file},
                         {"right", right_file},
                         {"dir", dir},
                         {"group", group_spec},
                         {"check_coherence", check_coherence}};
  auto m = nfold::cobordism_from_json(load_json_file(left_file, em));
  auto n = nfold::cobordism_from_json(load_json_file(right_file, em));
  auto comp = nfold::compose_cobordisms(m, n, dir);
  json result;
  result["composite"] = nfold::cobordism_to_json(comp.glued);
  bool ok = true;
  if (!group_spec.empty()) {
    auto g = resolve_group(group_spec, em);
    result["Z"] = nfold::dw_invariant(comp.glued, g, cap).str();
    if (check_coherence) {
      auto rep = nfold::check_functor_coherence(m, n, dir, g, cap);
      result["coherence"] = {{"composite_classes", rep.composite_classes},
                             {"seam_compatible_pairs", rep.fiber_pairs},
                             {"bijection", rep.ok}};
      if (!rep.ok) {
        ok = false;
        em.report["witness"] = rep.failures;
      }
    }
  }
  em.report["result"] = result;
  em.line("composed " + m.name + " o" + std::to_string(dir) + " " + n.name + " -> " +
          std::to_string(comp.glued.num_vertices) + " vertices, " +
          std::to_string(comp.glued.edges.size()) + " edges");
  if (result.contains("Z")) em.line("Z = " + result["Z"].get<std::string>());
  if (check_coherence)
    em.line(std::string("gluing coherence: ") + (ok ? "bijection" : "FAILED"));
  return ok ? kExitOk : kExitFalsified;
}

int run_report(std::uint64_t seed, Emitter& em) {
  nfold::report::AcceptanceOptions opts;
  opts.seed = seed;
  auto results = nfold::report::run_acceptance(opts);
  em.report["result"] = nfold::report::results_to_json(results);
  bool ok = true;
  for (const auto& r : results) {
    em.line(std::string(r.pass ? "PASS " : "FAIL ") + r.id);
    ok = ok && r.pass;
  }
  return ok ? kExitOk : kExitFalsified;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rewriting-based coherence checks for composition diagrams, with "
               "finite-set span semantics and finite-group gauge sums"};
  app.require_subcommand(1);

  std::string format = "text";
  std::uint64_t seed = 1;
  long long cap = 0;  // 0: per-module defaults
  app.add_option("--format", format, "Output format: json or text")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", seed, "Seed for all randomized checks");
  app.add_option("--cap", cap,
                 "Capacity bound for enumerations (default: per-module limits)");

  auto* coherence = app.add_subcommand("coherence", "Rewrite graph, normal forms, H1");
  std::string grid_spec;
  long long max_trees = 1000000;
  std::string emit_complex;
  coherence->add_option("--grid", grid_spec, "Grid extents, e.g. 2x2x2")->required();
  coherence->add_option("--max-trees", max_trees, "Tree enumeration cap");
  coherence->add_option("--emit-complex", emit_complex, "Write the 2-complex as JSON");

  auto* axioms = app.add_subcommand("axioms", "Pointwise axiom checks in the span model");
  std::string shape;
  int core_size = 3;
  int instances = 20;
  axioms->add_option("--shape", shape, "pentagon|hexagon1|hexagon2")->required();
  axioms->add_option("--core-size", core_size, "Maximum cell core size");
  axioms->add_option("--instances", instances, "Number of seeded instances");

  auto* nerve_check = app.add_subcommand("nerve-check", "Strict axioms and horn filling");
  std::string input;
  std::string cap_spec;
  nerve_check->add_option("--input", input, "Double category or multisimplicial set JSON")
      ->required();
  nerve_check->add_option("--cap", cap_spec, "Bidegree cap, e.g. 3,3");

  auto* dw = app.add_subcommand("dw", "Flat gauge fields and the partition function");
  std::string cobordism_file, group_spec;
  dw->add_option("--cobordism", cobordism_file, "Cobordism presentation JSON");
  dw->add_option("--group", group_spec, "Builtin group name or group table JSON");
  auto* dw_compose_sub = dw->add_subcommand("compose", "Glue two cobordisms along a seam");
  std::string left_file, right_file;
  int dir = 1;
  bool check_coherence = false;
  auto add_compose_opts = [&](CLI::App* cmd) {
    cmd->add_option("--left", left_file, "Left cobordism JSON")->required();
    cmd->add_option("--right", right_file, "Right cobordism JSON")->required();
    cmd->add_option("--dir", dir, "Gluing direction");
    cmd->add_flag("--check-coherence", check_coherence,
                  "Verify the gauge-class gluing bijection");
    cmd->add_option("--group", group_spec, "Builtin group name or group table JSON");
  };
  add_compose_opts(dw_compose_sub);
  auto* dw_compose_top = app.add_subcommand("dw-compose", "Alias of `dw compose`");
  add_compose_opts(dw_compose_top);

  auto* report_cmd = app.add_subcommand("report", "Run the full acceptance battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInputError;
  }

  Emitter em;
  em.format = format;
  em.report["tool"] = {{"name", nfold::report::kToolName},
                       {"version", nfold::report::kToolVersion}};
  em.report["inputs"] = json::object();
  em.report["seed"] = seed;

  int exit_code = kExitOk;
  try {
    if (coherence->parsed()) {
      em.report["command"] = "coherence";
      if (cap > 0 && coherence->count("--max-trees") == 0) max_trees = cap;
      exit_code = run_coherence(grid_spec, max_trees, emit_complex, em);
    } else if (axioms->parsed()) {
      em.report["command"] = "axioms";
      exit_code = run_axioms(shape, seed, core_size, instances, em);
    } else if (nerve_check->parsed()) {
      em.report["command"] = "nerve-check";
      exit_code = run_nerve_check(input, cap_spec, em);
    } else if (dw->parsed()) {
      long long dw_cap = cap > 0 ? cap : 100000000LL;
      if (dw_compose_sub->parsed()) {
        em.report["command"] = "dw-compose";
        exit_code = run_dw_compose(left_file, right_file, dir, group_spec, check_coherence,
                                   dw_cap, em);
      } else {
        em.report["command"] = "dw";
        if (cobordism_file.empty() || group_spec.empty())
          throw nfold::InputError("dw needs --cobordism and --group");
        exit_code = run_dw(cobordism_file, group_spec, dw_cap, em);
      }
    } else if (dw_compose_top->parsed()) {
      em.report["command"] = "dw-compose";
      exit_code = run_dw_compose(left_file, right_file, dir, group_spec, check_coherence,
                                 cap > 0 ? cap : 100000000LL, em);
    } else if (report_cmd->parsed()) {
      em.report["command"] = "report";
      exit_code = run_report(seed, em);
    }
  } catch (const nfold::InputError& e) {
    em.report["witness"] = e.what();
    em.line(std::string("input error: ") + e.what());
    exit_code = kExitInputError;
  } catch (const nfold::CapacityError& e) {
    em.report["witness"] = e.what();
    em.line(std::string("capacity error: ") + e.what());
    exit_code = kExitCapacityError;
  } catch (const std::exception& e) {
    em.report["witness"] = e.what();
    em.line(std::string("invariant failure: ") + e.what());
    exit_code = kExitFalsified;
  }
  em.report["status"] = exit_code == kExitOk            ? "ok"
                        : exit_code == kExitFalsified   ? "falsified"
                        : exit_code == kExitInputError  ? "input-error"
                                                        : "capacity-error";
  em.flush();
  return exit_code;
}
