#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/graph.hpp"
#include "core/matrix.hpp"
#include "core/numerics.hpp"

namespace qr {

// Spectral vertex representatives: one row per vertex, one column per
// retained eigendirection. Weights are 1 for the adjacency embedding and
// the (normalized) degrees for the modularity embedding.
struct Embedding {
  Matrix points;
  std::vector<double> weights;
  std::string source;  // "adjacency" or "modularity"
  std::optional<std::string> warning;
};

// Rows of the n x k matrix of the top-|value| adjacency eigenvectors.
// Eigenvector signs are fixed (largest-|coordinate| entry positive).
Embedding adjacency_representatives(const WeightedGraph& g, int k);
Embedding adjacency_representatives(const EigenSystem& adjacency_eigs, int k);

// Rows of the n x (k-1) matrix D^(-1/2) [u_1 .. u_{k-1}] with degree
// weights; requires k >= 2 and warns when |mu_{k-1}| == |mu_k|.
Embedding modularity_representatives(const WeightedGraph& g, int k);
Embedding modularity_representatives(const EigenSystem& modularity_eigs,
                                     const std::vector<double>& normalized_degrees, int k);

struct KMeansResult {
  Partition partition;
  Matrix centers;
  double objective = 0.0;
  int restarts_used = 0;
};

// Weighted Lloyd iterations with k-means++ seeding per restart; returns the
// best objective over restarts. Deterministic given the seed.
KMeansResult kmeans(const Embedding& e, int k, int restarts, uint64_t seed);

// Weighted k-means objective of a fixed partition, centers at the weighted
// cluster means.
double kmeans_objective(const Embedding& e, const Partition& p);

enum class VarianceKind { plain, weighted };

struct KVarianceResult {
  double value = 0.0;
  Partition partition;
  std::optional<std::string> warning;
};

// S_k^2 (plain, adjacency embedding) or S-tilde_k^2 (weighted, modularity
// embedding): best k-means objective plus the minimizing partition.
KVarianceResult k_variance(const WeightedGraph& g, int k, VarianceKind kind, int restarts,
                           uint64_t seed);

struct MatchResult {
  double accuracy = 0.0;
  std::vector<int> permutation;  // relabels q to best match p
};

// Best agreement fraction over all k! label permutations (k <= 8).
MatchResult match_partitions(const Partition& p, const Partition& q);

}  // namespace qr
