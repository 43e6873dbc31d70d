#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "core/error.hpp"

namespace qr {

// Dense row-major rectangular matrix.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  double& at(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double at(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }
  double* row(int i) { return data.data() + static_cast<size_t>(i) * cols; }
  const double* row(int i) const { return data.data() + static_cast<size_t>(i) * cols; }
};

// Dense symmetric matrix; entries must agree across the diagonal within
// 1e-12 absolute. Stored in full for simple cache-friendly access.
struct SymMatrix {
  int n = 0;
  std::vector<double> data;

  SymMatrix() = default;
  explicit SymMatrix(int dim) : n(dim), data(static_cast<size_t>(dim) * dim, 0.0) {}

  double& at(int i, int j) { return data[static_cast<size_t>(i) * n + j]; }
  double at(int i, int j) const { return data[static_cast<size_t>(i) * n + j]; }
  double* row(int i) { return data.data() + static_cast<size_t>(i) * n; }
  const double* row(int i) const { return data.data() + static_cast<size_t>(i) * n; }

  void set_sym(int i, int j, double v) {
    at(i, j) = v;
    at(j, i) = v;
  }

  double max_asymmetry() const {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        worst = std::max(worst, std::abs(at(i, j) - at(j, i)));
    return worst;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : data) s += v * v;
    return std::sqrt(s);
  }

  Matrix as_matrix() const {
    Matrix m(n, n);
    m.data = data;
    return m;
  }
};

inline void check_symmetric(const SymMatrix& m, const char* who) {
  if (m.max_asymmetry() > 1e-12)
    fail(ErrorCode::invalid_argument, std::string(who) + ": matrix is not symmetric");
}

}  // namespace qr
