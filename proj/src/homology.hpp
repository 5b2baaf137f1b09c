#pragma once

#include <utility>
#include <vector>

namespace nfold::homology {

/// Rank of an integer matrix via fraction-free (Bareiss) elimination.
long rank(std::vector<std::vector<long>> rows_in);

/// Rank of H1 of a 2-complex: edges as (from,to) vertex pairs, cells as
/// net signed edge coefficients.
long h1_rank(long num_vertices, const std::vector<std::pair<int, int>>& edges,
             const std::vector<std::vector<std::pair<int, int>>>& cell_edge_coeffs);

}  // namespace nfold::homology
