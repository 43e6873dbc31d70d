#pragma once

#include <string>
#include <vector>

#include "core/matrix.hpp"
#include "core/numerics.hpp"
#include "core/pattern.hpp"

namespace qr {

// Model graph on k classes: positive class ratios r summing to 1 and a
// symmetric connection-probability matrix P of full rank k.
struct ModelGraph {
  int k = 0;
  std::vector<double> r;
  SymMatrix P;

  // Expected normalized degree of class i: D_i = sum_l p_il r_l.
  std::vector<double> class_degrees() const;
};

ModelGraph make_model(int k, std::vector<double> r, SymMatrix P);
ModelGraph model_from_json(const std::string& text);
std::string model_to_json(const ModelGraph& h);

// n x n block-constant matrix with value p_ij on the U_i x U_j block,
// diagonal entries of diagonal blocks included, so the result has rank
// exactly rank(P).
SymMatrix blow_up(const ModelGraph& h, const std::vector<int>& sizes);

// Nonzero spectrum of blow_up(h, sizes) as the k eigenvalues of
// diag(sizes)^(1/2) P diag(sizes)^(1/2), sorted by descending |value|.
std::vector<double> blowup_spectrum(const ModelGraph& h, const std::vector<int>& sizes);

// Limit of the normalized modularity spectrum of graphs sampled from h.
// Computed from the k x k matrix B_ij = p_ij sqrt(r_i r_j) / sqrt(D_i D_j):
// its top eigenvalue is the trivial 1, the remaining k-1 eigenvalues are the
// structural limit values (see README for the derivation).
struct ModelSpectrum {
  double trivial_value = 1.0;
  std::vector<double> structural_values;  // sorted by descending |value|
};
ModelSpectrum model_spectrum(const ModelGraph& h);

// Step-function graphon of h evaluated at (x, y) in [0,1)^2.
double graphon_value(const ModelGraph& h, double x, double y);

// Exact homomorphism density of F in h: sum over all k^s maps of the
// product of class ratios and edge probabilities.
double model_hom_density(const SimpleGraphPattern& f, const ModelGraph& h);

}  // namespace qr
