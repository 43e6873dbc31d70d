#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/graph.hpp"
#include "core/matrix.hpp"
#include "core/pattern.hpp"

namespace qr {

// Number of (not necessarily injective) edge-preserving maps V(F) -> V(G).
// Cycles go through trace(A^t), paths through 1^T A^(t-1) 1; everything else
// uses backtracking over pattern vertices with a deterministic visited-node
// budget. Requires a simple graph. Counts are exact below 2^53.
double hom_count(const SimpleGraphPattern& f, const WeightedGraph& g,
                 long long budget = 200'000'000);

// hom_count / n^s.
double hom_density(const SimpleGraphPattern& f, const WeightedGraph& g,
                   long long budget = 200'000'000);

// Number of ordered injective s-tuples whose induced edge pattern equals F
// exactly (edges and non-edges both enforced).
long long induced_count(const SimpleGraphPattern& f, const WeightedGraph& g,
                        long long budget = 200'000'000);

struct ClusterDegrees {
  Matrix n1;              // n x k: N_1(u; U_j)
  SymMatrix block_cut;    // k x k: a(U_i, U_j), ordered-pair sums
  SymMatrix block_density;  // k x k: a(U_i, U_j) / (n_i n_j)
};

ClusterDegrees cluster_degrees(const WeightedGraph& g, const Partition& p);

// N_2(u, v; s) = number of common neighbors of u and v inside s.
double codegree(const WeightedGraph& g, int u, int v, const VertexSet& s);

struct CodegreeReport {
  int k = 0;
  int n = 0;
  // All matrices below are indexed by the ordered pair (i, j): the sums run
  // over ordered pairs u, v in U_i (u = v included) against targets in U_j,
  // so (i, j) and (j, i) are genuinely different statistics.
  Matrix sum_abs_deviation;  // sum_{u,v in U_i} |N_2(u,v;U_j) - p_ij^2 n_j|
  Matrix normalized_n3;      // deviation / n^3
  Matrix normalized_model;   // deviation / (p_ij^2 n_i^2 n_j); may hold inf
  Matrix n1;                 // per-vertex degree table
  SymMatrix p_used;
  bool p_estimated = false;  // true when block densities stood in for P
};

// Codegree deviation sums: per cluster pair (i,j),
// sum_{u,v in U_i} |N_2(u,v;U_j) - p_ij^2 n_j| over ordered pairs including
// u = v, computed through block Gram products.
CodegreeReport codegree_report(const WeightedGraph& g, const Partition& p,
                               const std::optional<SymMatrix>& p_hat = std::nullopt);

}  // namespace qr
