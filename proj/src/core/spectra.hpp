#pragma once

#include <vector>

#include "core/generator.hpp"
#include "core/graph.hpp"
#include "core/matrix.hpp"
#include "core/numerics.hpp"

namespace qr {

// M = A - d d^T on the graph with weights normalized to sum 1. Requires a
// connected graph (irreducible A).
SymMatrix modularity_matrix(const WeightedGraph& g);

// M_D = D^(-1/2) M D^(-1/2) = A_D - sqrt(d) sqrt(d)^T. Spectrum lies in
// [-1, 1] with eigenvalue 0 at sqrt(d).
SymMatrix normalized_modularity_matrix(const WeightedGraph& g);

// Matrix-level variant without the zero-diagonal/connectivity constraints of
// WeightedGraph (row sums must be positive). Used for block matrices that
// keep p_ii on the diagonal.
SymMatrix normalized_modularity_from_matrix(const SymMatrix& a);

enum class SpectrumKind { adjacency, modularity };

struct StructuralSelection {
  int count = 0;
  std::vector<int> indices;  // positions in |value|-descending order
  double threshold = 0.0;    // the cut actually applied
};

// Adjacency mode counts |lambda_i| > c_thr * sqrt(n ln n); modularity mode
// counts |mu_i| > delta.
StructuralSelection structural_eigs(const EigenSystem& es, SpectrumKind kind, int n,
                                    double delta, double c_thr);

struct SpectralSummary {
  EigenSystem adjacency_eigs;
  EigenSystem modularity_eigs;
  int structural_count_adj = 0;
  int structural_count_mod = 0;
  std::vector<double> gap_table_adj;  // |value_i| / |value_{i+1}|; 0/0 -> 0
  std::vector<double> gap_table_mod;
  double delta = 0.5;
  double c_thr = 1.0;
};

SpectralSummary analyze_spectra(const WeightedGraph& g, double delta, double c_thr);

std::vector<double> gap_table(const std::vector<double>& values);

struct ModelDeviation {
  std::vector<double> structural_abs_error;  // |mu_i - limit_i| for i < k-1
  double max_remaining = 0.0;                // max |mu_i| over i >= k-1
};

// Compares the sample's normalized modularity spectrum against the planted
// model's limit values.
ModelDeviation spectrum_vs_model(const LabeledSample& s);
ModelDeviation spectrum_vs_model(const EigenSystem& modularity_eigs, const ModelGraph& h);

}  // namespace qr
