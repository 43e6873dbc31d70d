#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/graph.hpp"

namespace qr {

// md(X,Y;U_i,U_j) = |a(X,Y) - rho(U_i,U_j) Vol(X) Vol(Y)| / sqrt(Vol(X) Vol(Y)).
// X must be a nonempty subset of ui, Y of uj, both with positive volume.
double pair_discrepancy(const WeightedGraph& g, const VertexSet& x, const VertexSet& y,
                        const VertexSet& ui, const VertexSet& uj);

struct DiscrepancyResult {
  double value = 0.0;
  std::vector<int> witness_x;
  std::vector<int> witness_y;
  int pair_i = 0;
  int pair_j = 0;
  std::string method;  // "exact" or "heuristic"
};

// Exact md(G; U_1..U_k) with witnesses, by nested Gray-code enumeration of
// X then Y with O(1) incremental cut updates. Requires n_i + n_j <= cap for
// every cluster pair (diagonal pairs count twice).
DiscrepancyResult partition_discrepancy_exact(const WeightedGraph& g, const Partition& p,
                                              int cap = 24);

// Lower bound on md(G; U_1..U_k): multi-start hill climbing that flips
// single vertices in/out of X and Y per cluster pair. Deterministic given
// the seed; the value never exceeds the exact maximum.
DiscrepancyResult partition_discrepancy_heuristic(const WeightedGraph& g, const Partition& p,
                                                  uint64_t seed, int iters = 50);

enum class MinKMode { exact, spectral_seeded };

struct MinKResult {
  double value = 0.0;
  Partition partition;
  bool exact = false;  // true: value is md_k(G); false: md(G; partition), an upper bound
  std::string method;  // how the inner maximum was evaluated
};

// Exact mode enumerates proper k-partitions (one canonical representative
// per labeling orbit, first-occurrence labels) with branch-and-bound on the
// inner maximum; feasible for n <= 12, k <= 3. Spectral-seeded mode
// evaluates the weighted-k-variance partition instead and is flagged as an
// upper bound.
MinKResult min_k_discrepancy(const WeightedGraph& g, int k, MinKMode mode, int cap = 24,
                             uint64_t seed = 0, int restarts = 20, int heuristic_iters = 50);

// RHS of the converse spectral bound: 9 md (k+2 - 9k ln md), valid for
// md in (0,1). Returns nothing outside that domain.
std::optional<double> converse_bound_rhs(double md, int k);

// Smallest m in the increasing branch of the RHS with rhs(m) = mu_abs; a
// necessary lower bound on md_k given |mu_k| = mu_abs. Returns nothing when
// mu_abs exceeds the maximum of the increasing branch.
std::optional<double> converse_bound_inverse(double mu_abs, int k);

struct SpectralBoundsOptions {
  std::optional<double> c;  // degree lower ratio; estimated when absent
  std::optional<double> C;  // degree upper ratio; estimated when absent
  double exception_fraction = 0.05;
  int restarts = 20;
  uint64_t seed = 0;
};

struct SpectralBounds {
  double upper = 0.0;  // 2 (C/c) (sqrt(2k) s + |mu_k|), o(1) term dropped
  bool upper_asymptotic = true;
  double mu_k = 0.0;
  double s_tilde = 0.0;  // sqrt of the weighted k-variance of the partition
  double c = 0.0;
  double C = 0.0;
  int exceptional_count = 0;
  std::optional<double> lower_md_k;  // inverse converse bound from |mu_k|
  std::string lower_note;
};

// Upper bound on md(G; p) for the weighted-variance-minimizing partition p,
// plus the certified lower-bound information on md_k. When no partition is
// given the weighted k-variance partition is computed internally.
SpectralBounds discrepancy_spectral_bounds(const WeightedGraph& g, int k,
                                           const std::optional<Partition>& p,
                                           const SpectralBoundsOptions& opts = {});

struct JumbledReport {
  bool holds = true;
  double worst_excess = 0.0;  // max over subsets of deviation - beta * slack
  double witness_deviation = 0.0;
  std::vector<int> witness_x;
  std::vector<int> witness_y;  // empty for the unipartite check
};

// (p-beta)-jumbledness: |e(X) - p C(|X|,2)| <= beta |X| for every X.
// Exhaustive over all subsets; n <= cap (default 22).
JumbledReport jumbledness(const WeightedGraph& g, double p, double beta, int cap = 22);

// (p-beta)-bi-jumbledness over X in u1, Y in u2 (disjoint):
// |e(X,Y) - p |X||Y|| <= beta sqrt(|X||Y|). |u1| + |u2| <= cap (default 24).
JumbledReport bi_jumbledness(const WeightedGraph& g, const VertexSet& u1, const VertexSet& u2,
                             double p, double beta, int cap = 24);

}  // namespace qr
