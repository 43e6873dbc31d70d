#include "core/spectra.hpp"

#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace qr {

namespace {

SymMatrix modularity_from_normalized(const std::vector<double>& a, const std::vector<double>& d,
                                     int n) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.at(i, j) = a[static_cast<size_t>(i) * n + j] - d[i] * d[j];
  return m;
}

}  // namespace

SymMatrix modularity_matrix(const WeightedGraph& g) {
  if (!is_connected(g)) fail(ErrorCode::disconnected, "M_D requires irreducible A");
  const WeightedGraph gn = normalize_weights(g);
  return modularity_from_normalized(gn.weights(), gn.degrees(), gn.n());
}

SymMatrix normalized_modularity_matrix(const WeightedGraph& g) {
  if (!is_connected(g)) fail(ErrorCode::disconnected, "M_D requires irreducible A");
  const WeightedGraph gn = normalize_weights(g);
  const int n = gn.n();
  for (int i = 0; i < n; ++i)
    if (!(gn.degree(i) > 0.0)) fail(ErrorCode::degenerate_subset, "zero-degree vertex");
  std::vector<double> rootd(n);
  for (int i = 0; i < n; ++i) rootd[i] = std::sqrt(gn.degree(i));
  SymMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.at(i, j) = gn.weight(i, j) / (rootd[i] * rootd[j]) - rootd[i] * rootd[j];
  return m;
}

SymMatrix normalized_modularity_from_matrix(const SymMatrix& a) {
  check_symmetric(a, "normalized_modularity_from_matrix");
  const int n = a.n;
  double total = 0.0;
  for (double v : a.data) total += v;
  if (!(total > 0.0)) fail(ErrorCode::empty_graph, "empty graph");
  std::vector<double> d(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* r = a.row(i);
    for (int j = 0; j < n; ++j) d[i] += r[j];
    d[i] /= total;
    if (!(d[i] > 0.0)) fail(ErrorCode::degenerate_subset, "zero-degree vertex");
  }
  std::vector<double> rootd(n);
  for (int i = 0; i < n; ++i) rootd[i] = std::sqrt(d[i]);
  SymMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.at(i, j) = (a.at(i, j) / total) / (rootd[i] * rootd[j]) - rootd[i] * rootd[j];
  return m;
}

StructuralSelection structural_eigs(const EigenSystem& es, SpectrumKind kind, int n,
                                    double delta, double c_thr) {
  StructuralSelection sel;
  if (kind == SpectrumKind::adjacency) {
    sel.threshold = c_thr * std::sqrt(n * std::log(std::max(2, n)));
  } else {
    sel.threshold = delta;
  }
  for (size_t i = 0; i < es.values.size(); ++i) {
    if (std::abs(es.values[i]) > sel.threshold) {
      ++sel.count;
      sel.indices.push_back(static_cast<int>(i));
    }
  }
  return sel;
}

std::vector<double> gap_table(const std::vector<double>& values) {
  std::vector<double> gaps;
  for (size_t i = 0; i + 1 < values.size(); ++i) {
    const double a = std::abs(values[i]);
    const double b = std::abs(values[i + 1]);
    gaps.push_back(b > 0.0 ? a / b : (a > 0.0 ? std::numeric_limits<double>::infinity() : 0.0));
  }
  return gaps;
}

SpectralSummary analyze_spectra(const WeightedGraph& g, double delta, double c_thr) {
  SpectralSummary s;
  s.delta = delta;
  s.c_thr = c_thr;
  s.adjacency_eigs = eigh(g.adjacency());
  s.modularity_eigs = eigh(normalized_modularity_matrix(g));
  s.structural_count_adj =
      structural_eigs(s.adjacency_eigs, SpectrumKind::adjacency, g.n(), delta, c_thr).count;
  s.structural_count_mod =
      structural_eigs(s.modularity_eigs, SpectrumKind::modularity, g.n(), delta, c_thr).count;
  s.gap_table_adj = gap_table(s.adjacency_eigs.values);
  s.gap_table_mod = gap_table(s.modularity_eigs.values);
  return s;
}

ModelDeviation spectrum_vs_model(const EigenSystem& modularity_eigs, const ModelGraph& h) {
  const ModelSpectrum limit = model_spectrum(h);
  ModelDeviation dev;
  const int k = h.k;
  for (int i = 0; i + 1 < k; ++i)
    dev.structural_abs_error.push_back(
        std::abs(modularity_eigs.values[i] - limit.structural_values[i]));
  for (size_t i = k - 1; i < modularity_eigs.values.size(); ++i)
    dev.max_remaining = std::max(dev.max_remaining, std::abs(modularity_eigs.values[i]));
  return dev;
}

ModelDeviation spectrum_vs_model(const LabeledSample& s) {
  return spectrum_vs_model(eigh(normalized_modularity_matrix(s.graph)), s.spec.model);
}

}  // namespace qr
