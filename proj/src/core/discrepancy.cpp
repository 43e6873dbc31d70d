#include "core/discrepancy.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>

#include "core/clustering.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/spectra.hpp"

namespace qr {

namespace {

struct PairFrame {
  const WeightedGraph* g = nullptr;
  std::vector<int> ui, uj;
  double rho = 0.0;
};

double direct_pair_value(const PairFrame& f, const std::vector<int>& x,
                         const std::vector<int>& y) {
  double cut = 0.0, vx = 0.0, vy = 0.0;
  for (int u : x) {
    vx += f.g->degree(u);
    const double* r = f.g->row(u);
    for (int v : y) cut += r[v];
  }
  for (int v : y) vy += f.g->degree(v);
  if (!(vx > 0.0) || !(vy > 0.0)) return 0.0;
  return std::abs(cut - f.rho * vx * vy) / std::sqrt(vx * vy);
}

struct PairBest {
  double val2 = 0.0;
  uint32_t mask_x = 0;
  uint32_t mask_y = 0;
};

// Exhaustive max of md(X,Y;U_i,U_j)^2 over subset pairs. Outer Gray code
// walks X maintaining per-vertex cross sums; inner Gray code walks Y with
// O(1) cut/volume updates. Returns true (aborted) as soon as the running
// maximum exceeds abort_above2 (disabled when negative).
bool enumerate_pair_max(const PairFrame& f, PairBest& best, double abort_above2) {
  const int a = static_cast<int>(f.ui.size());
  const int b = static_cast<int>(f.uj.size());
  const WeightedGraph& g = *f.g;

  std::vector<double> cross(b, 0.0);  // sum over u in X of w(u, uj[t])
  std::vector<double> dj(b);
  for (int t = 0; t < b; ++t) dj[t] = g.degree(f.uj[t]);

  double vol_x = 0.0;
  uint32_t mask_x = 0;
  const uint32_t limit_x = 1u << a;
  for (uint32_t tx = 1; tx < limit_x; ++tx) {
    const int flip = std::countr_zero(tx);
    const int u = f.ui[flip];
    const bool add = !(mask_x & (1u << flip));
    mask_x ^= 1u << flip;
    const double sgn = add ? 1.0 : -1.0;
    vol_x += sgn * g.degree(u);
    const double* r = g.row(u);
    for (int t = 0; t < b; ++t) cross[t] += sgn * r[f.uj[t]];

    if (!(vol_x > 0.0)) continue;
    double cut = 0.0, vol_y = 0.0;
    uint32_t mask_y = 0;
    const uint32_t limit_y = 1u << b;
    for (uint32_t ty = 1; ty < limit_y; ++ty) {
      const int fy = std::countr_zero(ty);
      const bool addy = !(mask_y & (1u << fy));
      mask_y ^= 1u << fy;
      const double sy = addy ? 1.0 : -1.0;
      cut += sy * cross[fy];
      vol_y += sy * dj[fy];
      if (!(vol_y > 0.0)) continue;
      const double dev = cut - f.rho * vol_x * vol_y;
      const double val2 = dev * dev / (vol_x * vol_y);
      if (val2 > best.val2) {
        best.val2 = val2;
        best.mask_x = mask_x;
        best.mask_y = mask_y;
        if (abort_above2 >= 0.0 && best.val2 > abort_above2) return true;
      }
    }
  }
  return false;
}

PairFrame make_frame(const WeightedGraph& g, std::vector<int> ui, std::vector<int> uj) {
  PairFrame f;
  f.g = &g;
  f.ui = std::move(ui);
  f.uj = std::move(uj);
  double vi = 0.0, vj = 0.0, cut = 0.0;
  for (int u : f.ui) vi += g.degree(u);
  for (int v : f.uj) vj += g.degree(v);
  if (!(vi > 0.0) || !(vj > 0.0))
    fail(ErrorCode::degenerate_subset, "discrepancy: cluster with zero volume");
  for (int u : f.ui) {
    const double* r = g.row(u);
    for (int v : f.uj) cut += r[v];
  }
  f.rho = cut / (vi * vj);
  return f;
}

std::vector<int> mask_to_members(uint32_t mask, const std::vector<int>& base) {
  std::vector<int> out;
  for (size_t i = 0; i < base.size(); ++i)
    if (mask & (1u << i)) out.push_back(base[i]);
  return out;
}

struct PartitionMaxResult {
  double val2 = 0.0;
  int pair_i = 0, pair_j = 0;
  uint32_t mask_x = 0, mask_y = 0;
  bool aborted = false;
};

PartitionMaxResult partition_max(const WeightedGraph& g,
                                 const std::vector<std::vector<int>>& clusters, int cap,
                                 double abort_above2) {
  PartitionMaxResult res;
  const int k = static_cast<int>(clusters.size());
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j) {
      const int total = static_cast<int>(clusters[i].size() + clusters[j].size());
      if (total > cap)
        fail(ErrorCode::cap_exceeded,
             "discrepancy: cluster pair above enumeration cap; use heuristic");
      PairFrame f = make_frame(g, clusters[i], clusters[j]);
      PairBest best;
      best.val2 = res.val2;  // only improvements over the current max matter
      const double before = best.val2;
      const bool aborted = enumerate_pair_max(f, best, abort_above2);
      if (best.val2 > before) {
        res.val2 = best.val2;
        res.pair_i = i;
        res.pair_j = j;
        res.mask_x = best.mask_x;
        res.mask_y = best.mask_y;
      }
      if (aborted) {
        res.aborted = true;
        return res;
      }
    }
  }
  return res;
}

}  // namespace

double pair_discrepancy(const WeightedGraph& g, const VertexSet& x, const VertexSet& y,
                        const VertexSet& ui, const VertexSet& uj) {
  if (x.empty() || y.empty()) fail(ErrorCode::degenerate_subset, "degenerate subset");
  if (!x.subset_of(ui) || !y.subset_of(uj))
    fail(ErrorCode::invalid_argument, "pair_discrepancy: X must lie in U_i and Y in U_j");
  const double vx = volume(g, x);
  const double vy = volume(g, y);
  const double vi = volume(g, ui);
  const double vj = volume(g, uj);
  if (!(vx > 0.0) || !(vy > 0.0) || !(vi > 0.0) || !(vj > 0.0))
    fail(ErrorCode::degenerate_subset, "degenerate subset");
  const double rho = weighted_cut(g, ui, uj) / (vi * vj);
  return std::abs(weighted_cut(g, x, y) - rho * vx * vy) / std::sqrt(vx * vy);
}

DiscrepancyResult partition_discrepancy_exact(const WeightedGraph& g, const Partition& p,
                                              int cap) {
  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < p.k(); ++i) clusters.push_back(p.cluster_members(i));
  PartitionMaxResult r = partition_max(g, clusters, cap, -1.0);

  DiscrepancyResult out;
  out.method = "exact";
  out.pair_i = r.pair_i;
  out.pair_j = r.pair_j;
  out.witness_x = mask_to_members(r.mask_x, clusters[r.pair_i]);
  out.witness_y = mask_to_members(r.mask_y, clusters[r.pair_j]);
  if (out.witness_x.empty() || out.witness_y.empty()) {
    // Every deviation vanishes; the improper subsets are a valid witness of 0.
    out.witness_x = clusters[r.pair_i];
    out.witness_y = clusters[r.pair_j];
    out.value = 0.0;
    return out;
  }
  PairFrame f = make_frame(g, clusters[r.pair_i], clusters[r.pair_j]);
  out.value = direct_pair_value(f, out.witness_x, out.witness_y);
  return out;
}

DiscrepancyResult partition_discrepancy_heuristic(const WeightedGraph& g, const Partition& p,
                                                  uint64_t seed, int iters) {
  if (iters < 1) fail(ErrorCode::invalid_argument, "heuristic: iters must be positive");
  const int k = p.k();
  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < k; ++i) clusters.push_back(p.cluster_members(i));

  DiscrepancyResult out;
  out.method = "heuristic";
  out.value = 0.0;
  out.pair_i = 0;
  out.pair_j = std::min(1, k - 1);
  out.witness_x = clusters[0];
  out.witness_y = clusters[out.pair_j];

  int pair_index = 0;
  for (int i = 0; i < k; ++i) {
    for (int j = i; j < k; ++j, ++pair_index) {
      PairFrame f = make_frame(g, clusters[i], clusters[j]);
      const int a = static_cast<int>(f.ui.size());
      const int b = static_cast<int>(f.uj.size());
      RandomStream stream(child_seed(seed, static_cast<uint64_t>(pair_index)));

      std::vector<char> in_x(a), in_y(b);
      std::vector<double> cross_x(a), cross_y(b);  // vs current Y / current X

      auto value_of = [&](double vx, double vy, double cut) {
        if (!(vx > 0.0) || !(vy > 0.0)) return 0.0;
        const double dev = cut - f.rho * vx * vy;
        return std::abs(dev) / std::sqrt(vx * vy);
      };

      for (int start = 0; start < iters; ++start) {
        if (start == 0) {
          std::fill(in_x.begin(), in_x.end(), 1);
          std::fill(in_y.begin(), in_y.end(), 1);
        } else {
          for (int s = 0; s < a; ++s) in_x[s] = stream.uniform01() < 0.5;
          for (int t = 0; t < b; ++t) in_y[t] = stream.uniform01() < 0.5;
        }
        double vx = 0.0, vy = 0.0, cut = 0.0;
        for (int s = 0; s < a; ++s)
          if (in_x[s]) vx += g.degree(f.ui[s]);
        for (int t = 0; t < b; ++t)
          if (in_y[t]) vy += g.degree(f.uj[t]);
        std::fill(cross_x.begin(), cross_x.end(), 0.0);
        std::fill(cross_y.begin(), cross_y.end(), 0.0);
        for (int s = 0; s < a; ++s) {
          const double* r = g.row(f.ui[s]);
          for (int t = 0; t < b; ++t) {
            const double w = r[f.uj[t]];
            if (in_y[t]) cross_x[s] += w;
            if (in_x[s]) cross_y[t] += w;
            if (in_x[s] && in_y[t]) cut += w;
          }
        }
        double cur = value_of(vx, vy, cut);

        const int flip_cap = 4 * (a + b) + 16;
        for (int step = 0; step < flip_cap; ++step) {
          int best_kind = -1, best_pos = -1;
          double best_val = cur + 1e-15;
          for (int s = 0; s < a; ++s) {
            const double sg = in_x[s] ? -1.0 : 1.0;
            const double val =
                value_of(vx + sg * g.degree(f.ui[s]), vy, cut + sg * cross_x[s]);
            if (val > best_val) {
              best_val = val;
              best_kind = 0;
              best_pos = s;
            }
          }
          for (int t = 0; t < b; ++t) {
            const double sg = in_y[t] ? -1.0 : 1.0;
            const double val =
                value_of(vx, vy + sg * g.degree(f.uj[t]), cut + sg * cross_y[t]);
            if (val > best_val) {
              best_val = val;
              best_kind = 1;
              best_pos = t;
            }
          }
          if (best_kind < 0) break;
          if (best_kind == 0) {
            const int s = best_pos;
            const double sg = in_x[s] ? -1.0 : 1.0;
            vx += sg * g.degree(f.ui[s]);
            cut += sg * cross_x[s];
            in_x[s] = !in_x[s];
            const double* r = g.row(f.ui[s]);
            for (int t = 0; t < b; ++t) cross_y[t] += sg * r[f.uj[t]];
          } else {
            const int t = best_pos;
            const double sg = in_y[t] ? -1.0 : 1.0;
            vy += sg * g.degree(f.uj[t]);
            cut += sg * cross_y[t];
            in_y[t] = !in_y[t];
            for (int s = 0; s < a; ++s) cross_x[s] += sg * g.weight(f.ui[s], f.uj[t]);
          }
          cur = best_val;
        }

        if (cur > out.value) {
          std::vector<int> wx, wy;
          for (int s = 0; s < a; ++s)
            if (in_x[s]) wx.push_back(f.ui[s]);
          for (int t = 0; t < b; ++t)
            if (in_y[t]) wy.push_back(f.uj[t]);
          if (!wx.empty() && !wy.empty()) {
            out.value = direct_pair_value(f, wx, wy);
            out.pair_i = i;
            out.pair_j = j;
            out.witness_x = std::move(wx);
            out.witness_y = std::move(wy);
          }
        }
      }
    }
  }
  return out;
}

MinKResult min_k_discrepancy(const WeightedGraph& g, int k, MinKMode mode, int cap,
                             uint64_t seed, int restarts, int heuristic_iters) {
  const int n = g.n();
  if (k < 1 || k > n) fail(ErrorCode::invalid_argument, "min_k_discrepancy: bad k");

  if (mode == MinKMode::spectral_seeded) {
    Partition part = k == 1 ? Partition(std::vector<int>(n, 0), 1)
                            : k_variance(g, k, VarianceKind::weighted, restarts, seed).partition;
    bool feasible = true;
    const auto sizes = part.sizes();
    for (int i = 0; i < k && feasible; ++i)
      for (int j = i; j < k && feasible; ++j)
        if (sizes[i] + sizes[j] > cap) feasible = false;
    DiscrepancyResult d = feasible ? partition_discrepancy_exact(g, part, cap)
                                   : partition_discrepancy_heuristic(g, part, seed, heuristic_iters);
    MinKResult res{d.value, std::move(part), false, d.method};
    return res;
  }

  if (n > 12 || k > 3)
    fail(ErrorCode::budget_exceeded,
         "min_k_discrepancy: exact enumeration needs n <= 12 and k <= 3");

  // Proper k-partitions as restricted growth strings with exactly k labels.
  std::vector<int> labels(n, 0);
  std::vector<int> best_labels;
  double best_val2 = std::numeric_limits<double>::infinity();

  std::vector<std::vector<int>> clusters(k);
  auto evaluate = [&](const std::vector<int>& lab) {
    for (auto& c : clusters) c.clear();
    for (int v = 0; v < n; ++v) clusters[lab[v]].push_back(v);
    PartitionMaxResult r = partition_max(g, clusters, cap, best_val2);
    if (!r.aborted && r.val2 < best_val2) {
      best_val2 = r.val2;
      best_labels = lab;
    }
  };

  // Iterative RGS enumeration: labels[0] = 0, labels[v] <= max(labels[0..v-1]) + 1.
  std::vector<int> maxsofar(n, 0);
  int v = 1;
  if (n == 1) {
    if (k == 1) evaluate(labels);
  } else {
    labels[0] = 0;
    while (v >= 1) {
      if (v == n) {
        if (maxsofar[n - 1] == k - 1) evaluate(labels);
        --v;
        ++labels[v];
        continue;
      }
      const int limit = std::min(maxsofar[v - 1] + 1, k - 1);
      if (labels[v] > limit) {
        labels[v] = 0;
        --v;
        if (v >= 1) ++labels[v];
        continue;
      }
      maxsofar[v] = std::max(maxsofar[v - 1], labels[v]);
      ++v;
      if (v < n) labels[v] = 0;
    }
  }

  if (best_labels.empty())
    fail(ErrorCode::internal, "min_k_discrepancy: no proper k-partition found");
  Partition best(best_labels, k);
  DiscrepancyResult d = partition_discrepancy_exact(g, best, cap);
  return MinKResult{d.value, std::move(best), true, "exact"};
}

std::optional<double> converse_bound_rhs(double md, int k) {
  if (!(md > 0.0 && md < 1.0)) return std::nullopt;
  return 9.0 * md * (k + 2.0 - 9.0 * k * std::log(md));
}

std::optional<double> converse_bound_inverse(double mu_abs, int k) {
  if (mu_abs <= 0.0) return 0.0;
  // The RHS increases on (0, m_max] with m_max = exp((18 - 72k) / (81k)).
  const double m_max = std::exp((18.0 - 72.0 * k) / (81.0 * k));
  const double f_max = *converse_bound_rhs(m_max, k);
  if (mu_abs > f_max) return std::nullopt;
  double lo = 0.0, hi = m_max;
  for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const auto f = converse_bound_rhs(mid, k);
    if (f && *f < mu_abs)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

SpectralBounds discrepancy_spectral_bounds(const WeightedGraph& g, int k,
                                           const std::optional<Partition>& p,
                                           const SpectralBoundsOptions& opts) {
  const int n = g.n();
  if (k < 1 || k >= n) fail(ErrorCode::invalid_argument, "spectral_bounds: need 1 <= k < n");

  SpectralBounds out;

  // Degree ratio range with the exception list trimmed from both ends.
  std::vector<double> ratios(n);
  for (int v = 0; v < n; ++v) ratios[v] = g.degree(v) / n;
  std::sort(ratios.begin(), ratios.end());
  const int trim = static_cast<int>(opts.exception_fraction * n / 2.0);
  out.exceptional_count = 2 * trim;
  out.c = opts.c ? *opts.c : ratios[trim];
  out.C = opts.C ? *opts.C : ratios[n - 1 - trim];
  if (!(out.c > 0.0))
    fail(ErrorCode::degenerate_subset, "spectral_bounds: trimmed minimum degree is zero");

  const EigenSystem es = eigh(normalized_modularity_matrix(g));
  out.mu_k = std::abs(es.values[k - 1]);

  if (k == 1) {
    out.s_tilde = 0.0;  // representatives of the trivial eigenvector coincide
  } else {
    const WeightedGraph gn = normalize_weights(g);
    const Embedding e = modularity_representatives(es, gn.degrees(), k);
    const double variance =
        p ? kmeans_objective(e, *p)
          : kmeans(e, k, opts.restarts, opts.seed).objective;
    out.s_tilde = std::sqrt(variance);
  }

  out.upper = 2.0 * (out.C / out.c) * (std::sqrt(2.0 * k) * out.s_tilde + out.mu_k);
  out.upper_asymptotic = true;

  out.lower_md_k = converse_bound_inverse(out.mu_k, k);
  out.lower_note = out.lower_md_k
                       ? "necessary lower bound on md_k from |mu_k| via the converse bound"
                       : "not invertible: |mu_k| above the increasing branch of the bound";
  return out;
}

JumbledReport jumbledness(const WeightedGraph& g, double p, double beta, int cap) {
  const int n = g.n();
  if (n > cap) fail(ErrorCode::cap_exceeded, "jumbledness: n above enumeration cap");

  JumbledReport rep;
  rep.worst_excess = -std::numeric_limits<double>::infinity();

  std::vector<int> base(n);
  for (int i = 0; i < n; ++i) base[i] = i;
  std::vector<double> cross(n, 0.0);  // sum over u in X of w(u, v)
  double edges = 0.0;                 // e(X): each unordered pair once
  int size = 0;
  uint32_t mask = 0;
  const uint32_t limit = 1u << n;
  for (uint32_t t = 1; t < limit; ++t) {
    const int v = std::countr_zero(t);
    const bool add = !(mask & (1u << v));
    mask ^= 1u << v;
    const double* r = g.row(v);
    if (add) {
      edges += cross[v];
      for (int w = 0; w < n; ++w) cross[w] += r[w];
      ++size;
    } else {
      for (int w = 0; w < n; ++w) cross[w] -= r[w];
      edges -= cross[v];
      --size;
    }
    const double target = p * (static_cast<double>(size) * (size - 1) / 2.0);
    const double dev = std::abs(edges - target);
    const double excess = dev - beta * size;
    if (excess > rep.worst_excess) {
      rep.worst_excess = excess;
      rep.witness_deviation = dev;
      rep.witness_x = mask_to_members(mask, base);
    }
  }
  rep.holds = rep.worst_excess <= 1e-9;
  return rep;
}

JumbledReport bi_jumbledness(const WeightedGraph& g, const VertexSet& u1, const VertexSet& u2,
                             double p, double beta, int cap) {
  for (int v : u1.members())
    if (u2.contains(v))
      fail(ErrorCode::invalid_argument, "bi_jumbledness: U_1 and U_2 must be disjoint");
  const int a = static_cast<int>(u1.size());
  const int b = static_cast<int>(u2.size());
  if (a + b > cap) fail(ErrorCode::cap_exceeded, "bi_jumbledness: sides above enumeration cap");
  if (a == 0 || b == 0) fail(ErrorCode::invalid_argument, "bi_jumbledness: empty side");

  JumbledReport rep;
  rep.worst_excess = -std::numeric_limits<double>::infinity();

  const auto& mx = u1.members();
  const auto& my = u2.members();
  std::vector<double> cross(b, 0.0);
  uint32_t mask_x = 0;
  int size_x = 0;
  const uint32_t limit_x = 1u << a;
  for (uint32_t tx = 1; tx < limit_x; ++tx) {
    const int s = std::countr_zero(tx);
    const bool add = !(mask_x & (1u << s));
    mask_x ^= 1u << s;
    const double sg = add ? 1.0 : -1.0;
    size_x += add ? 1 : -1;
    const double* r = g.row(mx[s]);
    for (int t = 0; t < b; ++t) cross[t] += sg * r[my[t]];
    if (size_x == 0) continue;

    double cut = 0.0;
    int size_y = 0;
    uint32_t mask_y = 0;
    const uint32_t limit_y = 1u << b;
    for (uint32_t ty = 1; ty < limit_y; ++ty) {
      const int t = std::countr_zero(ty);
      const bool addy = !(mask_y & (1u << t));
      mask_y ^= 1u << t;
      cut += (addy ? 1.0 : -1.0) * cross[t];
      size_y += addy ? 1 : -1;
      if (size_y == 0) continue;
      const double dev = std::abs(cut - p * size_x * size_y);
      const double excess = dev - beta * std::sqrt(static_cast<double>(size_x) * size_y);
      if (excess > rep.worst_excess) {
        rep.worst_excess = excess;
        rep.witness_deviation = dev;
        rep.witness_x = mask_to_members(mask_x, mx);
        rep.witness_y = mask_to_members(mask_y, my);
      }
    }
  }
  rep.holds = rep.worst_excess <= 1e-9;
  return rep;
}

}  // namespace qr
