#include "homology.hpp"

#include <gmpxx.h>

namespace nfold::homology {

namespace {

// Bareiss fraction-free elimination; exact over the integers, so the rank
// needs no pivoting tolerance.
// TODO: switch to a sparse elimination; the dense pass dominates wall time
// once complexes reach ~1000 edges (e.g. the [2,5] grid).
long rank_mpz(std::vector<std::vector<mpz_class>>& m) {
  if (m.empty()) return 0;
  std::size_t rows = m.size(), cols = m[0].size();
  mpz_class prev_pivot = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && m[pivot][c] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        mpz_class num = m[r][c] * m[i][j] - m[i][c] * m[r][j];
        m[i][j] = num / prev_pivot;  // exact by Bareiss
      }
      m[i][c] = 0;
    }
    prev_pivot = m[r][c];
    ++r;
  }
  return static_cast<long>(r);
}

}  // namespace

long rank(std::vector<std::vector<long>> rows_in) {
  std::vector<std::vector<mpz_class>> m(rows_in.size());
  for (std::size_t i = 0; i < rows_in.size(); ++i)
    m[i].assign(rows_in[i].begin(), rows_in[i].end());
  return rank_mpz(m);
}

long h1_rank(long num_vertices, const std::vector<std::pair<int, int>>& edges,
             const std::vector<std::vector<std::pair<int, int>>>& cell_edge_coeffs) {
  long e = static_cast<long>(edges.size());
  // d1: V x E incidence, d1(edge u->v) = v - u.
  std::vector<std::vector<mpz_class>> d1(num_vertices, std::vector<mpz_class>(edges.size(), 0));
  for (std::size_t k = 0; k < edges.size(); ++k) {
    auto [u, v] = edges[k];
    if (u == v) continue;
    d1[u][k] -= 1;
    d1[v][k] += 1;
  }
  // d2: E x C.
  std::vector<std::vector<mpz_class>> d2(edges.size(),
                                         std::vector<mpz_class>(cell_edge_coeffs.size(), 0));
  for (std::size_t c = 0; c < cell_edge_coeffs.size(); ++c)
    for (auto [edge, coeff] : cell_edge_coeffs[c]) d2[edge][c] += coeff;

  long rank_d1 = rank_mpz(d1);
  long rank_d2 = d2.empty() || cell_edge_coeffs.empty() ? 0 : rank_mpz(d2);
  return (e - rank_d1) - rank_d2;
}

}  // namespace nfold::homology
