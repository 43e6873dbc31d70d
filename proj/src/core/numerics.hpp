#pragma once

#include <vector>

#include "core/matrix.hpp"

namespace qr {

// Full symmetric eigendecomposition. Eigenvalues are sorted by descending
// absolute value, ties broken by descending signed value, then by the
// pre-sort index, so downstream structural-set selection is deterministic.
// Column j of `vectors` is the unit eigenvector of values[j].
struct EigenSystem {
  std::vector<double> values;
  Matrix vectors;
};

// Cyclic Jacobi sweeps until the off-diagonal Frobenius mass drops below
// 1e-12 * ||A||_F. Deterministic for identical input (fixed sweep order).
EigenSystem eigh(const SymMatrix& m);

// max |eigenvalue|; equals eigh(m).values[0] in absolute value.
double spectral_norm(const SymMatrix& m);

struct CutNormResult {
  double value = 0.0;
  std::vector<int> row_witness;
  std::vector<int> col_witness;
};

// Exact matrix cut norm max_{X,Y} |sum_{i in X, j in Y} m_ij| by Gray-code
// enumeration of subsets of the smaller dimension; for a fixed X the optimal
// Y keeps exactly the columns whose X-restricted sums share a sign. The
// returned value is re-summed directly over the witnesses. rows+cols must
// not exceed `cap` (default 24).
CutNormResult cut_norm_exact(const Matrix& m, int cap = 24);

// Upper bound (1/n) * ||m|| on the cut norm of the n-step graphon of m,
// via ||W_m||_box <= ||m||_box / n^2 <= ||m|| / n.
double graphon_cut_norm_bound(const SymMatrix& m);

}  // namespace qr
