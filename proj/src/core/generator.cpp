#include "core/generator.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace qr {

LabeledSample sample(const SampleSpec& spec) {
  const ModelGraph& h = spec.model;
  const int n = spec.n;
  if (n < h.k) fail(ErrorCode::invalid_argument, "sample: n must be at least k");

  std::vector<int> labels(n);
  RandomStream stream(spec.seed);

  if (spec.fixed_sizes) {
    const auto& sizes = *spec.fixed_sizes;
    if (static_cast<int>(sizes.size()) != h.k)
      fail(ErrorCode::invalid_argument, "sample: fixed_sizes must have length k");
    int total = 0;
    for (int s : sizes) {
      if (s <= 0) fail(ErrorCode::invalid_argument, "sample: fixed_sizes must be positive");
      total += s;
    }
    if (total != n) fail(ErrorCode::invalid_argument, "sample: fixed_sizes must sum to n");
    int pos = 0;
    for (int i = 0; i < h.k; ++i)
      for (int c = 0; c < sizes[i]; ++c) labels[pos++] = i;
  } else {
    bool ok = false;
    for (int attempt = 0; attempt < 100 && !ok; ++attempt) {
      std::vector<int> counts(h.k, 0);
      for (int v = 0; v < n; ++v) {
        labels[v] = stream.categorical(h.r);
        ++counts[labels[v]];
      }
      ok = std::all_of(counts.begin(), counts.end(), [](int c) { return c > 0; });
    }
    if (!ok)
      fail(ErrorCode::resample_exhausted,
           "sample: empty cluster after 100 membership draws; resample or use fixed_sizes");
  }

  std::vector<double> w(static_cast<size_t>(n) * n, 0.0);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const double p = h.P.at(labels[u], labels[v]);
      if (stream.uniform01() < p) {
        w[static_cast<size_t>(u) * n + v] = 1.0;
        w[static_cast<size_t>(v) * n + u] = 1.0;
      }
    }
  }

  return LabeledSample{WeightedGraph(n, std::move(w)), Partition(std::move(labels), h.k), spec};
}

std::pair<SymMatrix, SymMatrix> decompose(const LabeledSample& s) {
  const int n = s.graph.n();
  SymMatrix b(n), w(n);
  for (int u = 0; u < n; ++u) {
    const int cu = s.partition.label(u);
    for (int v = 0; v < n; ++v) {
      const double p = s.spec.model.P.at(cu, s.partition.label(v));
      b.at(u, v) = p;
      w.at(u, v) = s.graph.weight(u, v) - p;
    }
  }
  return {std::move(b), std::move(w)};
}

BalancingReport balancing_report(const std::vector<LabeledSample>& samples, double weak_c) {
  if (samples.size() < 2)
    fail(ErrorCode::invalid_argument, "balancing_report: need at least 2 samples");

  BalancingReport rep;
  rep.weak_constant = weak_c;
  for (const auto& s : samples) {
    const auto& r = s.spec.model.r;
    const auto sizes = s.partition.sizes();
    BalancingEntry e;
    e.n = s.graph.n();
    e.min_ratio = 1.0;
    for (size_t i = 0; i < r.size(); ++i) {
      const double ratio = static_cast<double>(sizes[i]) / e.n;
      e.max_deviation = std::max(e.max_deviation, std::abs(ratio - r[i]));
      e.min_ratio = std::min(e.min_ratio, ratio);
    }
    rep.entries.push_back(e);
  }
  std::stable_sort(rep.entries.begin(), rep.entries.end(),
                   [](const BalancingEntry& a, const BalancingEntry& b) { return a.n < b.n; });

  rep.weak_condition_holds = std::all_of(rep.entries.begin(), rep.entries.end(),
                                         [&](const BalancingEntry& e) { return e.min_ratio >= weak_c; });
  rep.deviation_monotone = true;
  for (size_t i = 1; i < rep.entries.size(); ++i)
    if (rep.entries[i].max_deviation > rep.entries[i - 1].max_deviation)
      rep.deviation_monotone = false;

  bool positive = std::all_of(rep.entries.begin(), rep.entries.end(),
                              [](const BalancingEntry& e) { return e.max_deviation > 0.0; });
  if (positive) {
    // Least-squares slope of log(deviation) against log(n).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(rep.entries.size());
    for (const auto& e : rep.entries) {
      const double x = std::log(static_cast<double>(e.n));
      const double y = std::log(e.max_deviation);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double denom = m * sxx - sx * sx;
    if (denom > 0.0) rep.trend_slope = (m * sxy - sx * sy) / denom;
  }
  return rep;
}

}  // namespace qr
