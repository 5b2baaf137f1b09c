#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nfold/diagram.hpp"

namespace nfold {

/// Directed graph of all composition trees of one grid, with an edge per
/// applicable forward move.
struct RewriteGraph {
  GluingDiagram grid;
  std::vector<TreePtr> vertices;       // enumeration order of enumerate_trees
  std::map<std::string, int> index;    // tree_key -> vertex id

  struct Edge {
    int from = -1, to = -1;
    Move move;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> out_edges, in_edges;  // edge ids per vertex

  int vertex_id(const TreePtr& t) const;
};

RewriteGraph build_rewrite_graph(const GluingDiagram& grid, long long max_trees = 1000000);

/// A 2-cell of the coherence complex. `side_a` and `side_b` are forward
/// walks from `source` to `sink` whose composite loop bounds the cell.
struct TwoCell {
  enum class Kind { DisjointCommute, Pentagon, Hexagon1, Hexagon2 };
  Kind kind = Kind::DisjointCommute;
  int source = -1, sink = -1;
  std::vector<int> side_a, side_b;  // edge ids
  /// Closed walk source -> sink -> source: side_a forward, side_b reversed.
  /// Entries are (edge id, +1/-1).
  std::vector<std::pair<int, int>> boundary() const;
};

std::string cell_kind_name(TwoCell::Kind k);

struct CoherenceComplex {
  RewriteGraph graph;
  std::vector<TwoCell> cells;
  std::map<std::string, int> cell_counts;  // by kind name
};

/// Builds the rewrite graph plus every naturality square, pentagon and
/// hexagon 2-cell instance, deduplicated by boundary.
CoherenceComplex build_coherence_complex(const GluingDiagram& grid,
                                         long long max_trees = 1000000);

struct NormalizeResult {
  TreePtr tree;    // terminal form
  MovePath path;   // directed path of forward moves from the input
};

/// Repeatedly applies the first applicable forward move. Terminates for
/// every valid tree; the guard cap turns a non-terminating loop into a
/// reported violation instead of a hang.
NormalizeResult normalize(const TreePtr& tree, long long step_cap = -1);

/// The direction-stratified right-nested terminal tree of a box: largest
/// direction outermost, right-associated within each direction.
TreePtr stratified_normal_form(const GluingDiagram& grid);

struct TerminationReport {
  bool acyclic = false;
  int longest_path = 0;
  std::vector<int> cycle;  // vertex ids of a counterexample cycle, if any
};

TerminationReport check_termination(const RewriteGraph& graph);

struct NormalFormReport {
  bool ok = false;
  bool connected = false;
  std::vector<int> terminals;  // all terminal vertices found
  int terminal = -1;           // the unique one when ok
  bool matches_normalize = false;   // normalize() of every vertex lands there
  bool matches_stratified = false;  // equals stratified_normal_form(grid)
};

NormalFormReport check_unique_normal_form(const RewriteGraph& graph);

/// Undirected path t1 -> NF -> t2 assembled from the two normalization
/// paths, the second one inverted.
MovePath connect_trees(const TreePtr& t1, const TreePtr& t2, const GluingDiagram& grid);

/// One substitution step in a path-homotopy witness: a segment of the
/// current walk was traded for the complementary part of a 2-cell boundary.
struct TilingStep {
  int cell = -1;        // index into CoherenceComplex::cells
  int at = 0;           // segment start offset in the walk
  int removed = 0;      // number of walk entries replaced
  int inserted = 0;     // number of walk entries substituted in
};

struct EquivalenceVerdict {
  bool decided = false;
  bool equivalent = false;
  std::vector<TilingStep> witness;
};

/// Signed edge walk through the rewrite graph.
using SignedWalk = std::vector<std::pair<int, int>>;

SignedWalk walk_of_path(const RewriteGraph& graph, const MovePath& path);

/// Bounded search rewriting walk `a` into walk `b` modulo 2-cell boundary
/// substitutions and cancellation of f^-1 f backtracks. `bound` limits the
/// number of substitutions tried per branch.
EquivalenceVerdict paths_equivalent(const CoherenceComplex& cx, const SignedWalk& a,
                                    const SignedWalk& b, int from_vertex, int bound = 8);

EquivalenceVerdict paths_equivalent(const CoherenceComplex& cx, const MovePath& p1,
                                    const MovePath& p2, int bound = 8);

/// Joinability certificate for one diverging pair of forward moves.
struct DiamondCertificate {
  enum class PairClass { Disjoint, Pentagon, Hexagon1, Hexagon2, InductiveComposite };
  int peak = -1;
  int edge_a = -1, edge_b = -1;      // the diverging edges
  std::vector<int> completion_a, completion_b;  // forward edge ids to `join`
  int join = -1;
  PairClass cls = PairClass::Disjoint;
  bool tiled = false;                // loop certified null-homotopic
  std::vector<TilingStep> witness;
};

std::string pair_class_name(DiamondCertificate::PairClass c);

struct CriticalPairReport {
  std::vector<DiamondCertificate> certificates;
  std::map<std::string, int> class_counts;
  bool all_joinable = true;
  bool all_tiled = true;
};

/// Certifies every vertex with >= 2 outgoing edges: completions exist and
/// the resulting loop is tiled by 2-cells.
CriticalPairReport critical_pairs(const CoherenceComplex& cx, int tiling_bound = 10);

/// Rank of the first integral homology of the coherence complex; 0 means
/// every cycle of moves bounds, the machine proxy for uniqueness of
/// coherence maps.
int coherence_h1(const CoherenceComplex& cx);

}  // namespace nfold
