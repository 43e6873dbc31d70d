#include "core/numerics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace qr {

namespace {

double offdiag_frobenius(const std::vector<double>& a, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = a[static_cast<size_t>(i) * n + j];
      s += 2.0 * v * v;
    }
  return std::sqrt(s);
}

}  // namespace

EigenSystem eigh(const SymMatrix& m) {
  check_symmetric(m, "eigh");
  const int n = m.n;
  if (n == 0) fail(ErrorCode::invalid_argument, "eigh: empty matrix");

  std::vector<double> a(m.data);
  // Exact symmetry for the sweep arithmetic.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double v = 0.5 * (a[static_cast<size_t>(i) * n + j] + a[static_cast<size_t>(j) * n + i]);
      a[static_cast<size_t>(i) * n + j] = v;
      a[static_cast<size_t>(j) * n + i] = v;
    }

  // vt holds eigenvectors as rows so rotations touch contiguous memory.
  std::vector<double> vt(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) vt[static_cast<size_t>(i) * n + i] = 1.0;

  const double norm = m.frobenius_norm();
  const double target = 1e-12 * norm;
  const int max_sweeps = 64;

  if (norm > 0.0) {
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      if (offdiag_frobenius(a, n) <= target) break;
      for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
          double* rp = a.data() + static_cast<size_t>(p) * n;
          double* rq = a.data() + static_cast<size_t>(q) * n;
          const double apq = rp[q];
          const double app = rp[p];
          const double aqq = rq[q];
          if (std::abs(apq) <= 1e-300) {
            rp[q] = 0.0;
            rq[p] = 0.0;
            continue;
          }
          // Stable rotation choice (smaller root of t^2 + 2t*theta - 1 = 0).
          const double theta = 0.5 * (aqq - app) / apq;
          double t;
          if (std::abs(theta) > 1e150) {
            t = 0.5 / theta;
          } else {
            t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
            if (theta < 0.0) t = -t;
          }
          const double c = 1.0 / std::sqrt(t * t + 1.0);
          const double s = t * c;

          for (int i = 0; i < n; ++i) {
            if (i == p || i == q) continue;
            const double aip = rp[i];
            const double aiq = rq[i];
            const double np = c * aip - s * aiq;
            const double nq = s * aip + c * aiq;
            rp[i] = np;
            rq[i] = nq;
            a[static_cast<size_t>(i) * n + p] = np;
            a[static_cast<size_t>(i) * n + q] = nq;
          }
          rp[p] = app - t * apq;
          rq[q] = aqq + t * apq;
          rp[q] = 0.0;
          rq[p] = 0.0;

          double* vp = vt.data() + static_cast<size_t>(p) * n;
          double* vq = vt.data() + static_cast<size_t>(q) * n;
          for (int i = 0; i < n; ++i) {
            const double xp = vp[i];
            const double xq = vq[i];
            vp[i] = c * xp - s * xq;
            vq[i] = s * xp + c * xq;
          }
        }
      }
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    const double lx = a[static_cast<size_t>(x) * n + x];
    const double ly = a[static_cast<size_t>(y) * n + y];
    const double ax = std::abs(lx), ay = std::abs(ly);
    if (ax != ay) return ax > ay;
    if (lx != ly) return lx > ly;
    return x < y;
  });

  EigenSystem out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    const int src = order[j];
    out.values[j] = a[static_cast<size_t>(src) * n + src];
    const double* v = vt.data() + static_cast<size_t>(src) * n;
    for (int i = 0; i < n; ++i) out.vectors.at(i, j) = v[i];
  }
  return out;
}

double spectral_norm(const SymMatrix& m) {
  if (m.n == 0) return 0.0;
  if (m.frobenius_norm() == 0.0) return 0.0;
  return std::abs(eigh(m).values[0]);
}

CutNormResult cut_norm_exact(const Matrix& m, int cap) {
  const int rows = m.rows, cols = m.cols;
  if (rows <= 0 || cols <= 0)
    fail(ErrorCode::invalid_argument, "cut_norm_exact: empty matrix");
  if (rows + cols > cap)
    fail(ErrorCode::cap_exceeded,
         "cut_norm_exact: dimension above enumeration cap; use cut_norm_bound");

  // Enumerate subsets of the smaller side; the other side is chosen greedily
  // per sign, which is optimal for a fixed subset.
  const bool by_rows = rows <= cols;
  const int e = by_rows ? rows : cols;   // enumerated side
  const int f = by_rows ? cols : rows;   // free side

  std::vector<double> sums(f, 0.0);
  double best = 0.0;
  uint32_t best_mask = 0;
  int best_sign = 1;

  const uint32_t limit = 1u << e;
  uint32_t mask = 0;
  for (uint32_t t = 1; t < limit; ++t) {
    const int flip = std::countr_zero(t);
    const bool add = !(mask & (1u << flip));
    mask ^= 1u << flip;
    const double sgn = add ? 1.0 : -1.0;
    if (by_rows) {
      const double* r = m.row(flip);
      for (int j = 0; j < f; ++j) sums[j] += sgn * r[j];
    } else {
      for (int j = 0; j < f; ++j) sums[j] += sgn * m.at(j, flip);
    }
    double pos = 0.0, neg = 0.0;
    for (int j = 0; j < f; ++j) {
      if (sums[j] > 0.0) pos += sums[j];
      else neg -= sums[j];
    }
    if (pos > best) { best = pos; best_mask = mask; best_sign = 1; }
    if (neg > best) { best = neg; best_mask = mask; best_sign = -1; }
  }

  CutNormResult res;
  std::vector<int> chosen_e, chosen_f;
  for (int i = 0; i < e; ++i)
    if (best_mask & (1u << i)) chosen_e.push_back(i);
  if (!chosen_e.empty()) {
    std::fill(sums.begin(), sums.end(), 0.0);
    for (int i : chosen_e) {
      if (by_rows) {
        const double* r = m.row(i);
        for (int j = 0; j < f; ++j) sums[j] += r[j];
      } else {
        for (int j = 0; j < f; ++j) sums[j] += m.at(j, i);
      }
    }
    for (int j = 0; j < f; ++j)
      if (best_sign * sums[j] > 0.0) chosen_f.push_back(j);
  }
  res.row_witness = by_rows ? chosen_e : chosen_f;
  res.col_witness = by_rows ? chosen_f : chosen_e;

  // Report the directly re-summed witness value; re-evaluation is then exact.
  double direct = 0.0;
  for (int i : res.row_witness)
    for (int j : res.col_witness) direct += m.at(i, j);
  res.value = std::abs(direct);
  return res;
}

double graphon_cut_norm_bound(const SymMatrix& m) {
  if (m.n == 0) fail(ErrorCode::invalid_argument, "graphon_cut_norm_bound: empty matrix");
  return spectral_norm(m) / static_cast<double>(m.n);
}

}  // namespace qr
