#pragma once

#include <json.hpp>

#include "nfold/diagram.hpp"
#include "nfold/double_category.hpp"
#include "nfold/dw.hpp"
#include "nfold/span.hpp"

namespace nfold {

using json = nlohmann::ordered_json;

// Grids and trees: {"extents":[2,3]},
// {"dir":d,"left":...,"right":...} / {"cell":[i,j]}.
json grid_to_json(const GluingDiagram& g);
GluingDiagram grid_from_json(const json& j);
GluingDiagram parse_grid_spec(const std::string& spec);  // "2x3x2"

json tree_to_json(const TreePtr& t);
TreePtr tree_from_json(const json& j);

// Spans: sets as sorted string lists, maps as explicit pairs.
json span_to_json(const FiniteSpan& s);
FiniteSpan span_from_json(const json& j);
json instance_to_json(const SpanGridInstance& inst);
SpanGridInstance instance_from_json(const json& j);

// Cobordisms: edges with string ids, relators as words with uppercase
// denoting inverses, boundaries keyed "1+" / "1-".
json cobordism_to_json(const CobPresentation& p);
CobPresentation cobordism_from_json(const json& j);

json group_to_json(const GroupTable& g);
GroupTable group_from_json(const json& j);

// Double categories and truncated bisimplicial sets, keyed by "kind".
json double_category_to_json(const FiniteDoubleCategory& dc);
FiniteDoubleCategory double_category_from_json(const json& j);
json multisimplicial_to_json(const MultiSimplicialSet& n);
MultiSimplicialSet multisimplicial_from_json(const json& j);

}  // namespace nfold
