#include "core/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/spectra.hpp"

namespace qr {

namespace {

void fix_sign(Matrix& points, int col) {
  int arg = 0;
  double best = -1.0;
  for (int i = 0; i < points.rows; ++i) {
    const double a = std::abs(points.at(i, col));
    if (a > best) {
      best = a;
      arg = i;
    }
  }
  if (points.at(arg, col) < 0.0)
    for (int i = 0; i < points.rows; ++i) points.at(i, col) = -points.at(i, col);
}

int distinct_rows(const Matrix& m) {
  std::set<std::vector<double>> rows;
  for (int i = 0; i < m.rows; ++i)
    rows.insert(std::vector<double>(m.row(i), m.row(i) + m.cols));
  return static_cast<int>(rows.size());
}

double sqdist(const double* a, const double* b, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    const double t = a[i] - b[i];
    s += t * t;
  }
  return s;
}

}  // namespace

Embedding adjacency_representatives(const EigenSystem& es, int k) {
  const int n = static_cast<int>(es.values.size());
  if (k < 1 || k >= n)
    fail(ErrorCode::invalid_argument, "adjacency_representatives: need 1 <= k < n");
  Embedding e;
  e.source = "adjacency";
  e.points = Matrix(n, k);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) e.points.at(i, j) = es.vectors.at(i, j);
  for (int j = 0; j < k; ++j) fix_sign(e.points, j);
  e.weights.assign(n, 1.0);
  if (std::abs(std::abs(es.values[k - 1]) - std::abs(es.values[k])) <= 1e-10)
    e.warning = "unstable subspace: |lambda_k| == |lambda_{k+1}|";
  return e;
}

Embedding adjacency_representatives(const WeightedGraph& g, int k) {
  return adjacency_representatives(eigh(g.adjacency()), k);
}

Embedding modularity_representatives(const EigenSystem& es,
                                     const std::vector<double>& normalized_degrees, int k) {
  const int n = static_cast<int>(es.values.size());
  if (k < 2)
    fail(ErrorCode::invalid_argument,
         "modularity_representatives: k must be at least 2 (no representatives for k=1)");
  if (k > n) fail(ErrorCode::invalid_argument, "modularity_representatives: k exceeds n");
  Embedding e;
  e.source = "modularity";
  e.points = Matrix(n, k - 1);
  for (int j = 0; j < k - 1; ++j)
    for (int i = 0; i < n; ++i)
      e.points.at(i, j) = es.vectors.at(i, j) / std::sqrt(normalized_degrees[i]);
  for (int j = 0; j < k - 1; ++j) fix_sign(e.points, j);
  e.weights = normalized_degrees;
  if (std::abs(std::abs(es.values[k - 2]) - std::abs(es.values[k - 1])) <= 1e-10)
    e.warning = "unstable subspace: |mu_{k-1}| == |mu_k|";
  return e;
}

Embedding modularity_representatives(const WeightedGraph& g, int k) {
  const WeightedGraph gn = normalize_weights(g);
  return modularity_representatives(eigh(normalized_modularity_matrix(g)), gn.degrees(), k);
}

KMeansResult kmeans(const Embedding& e, int k, int restarts, uint64_t seed) {
  const int n = e.points.rows;
  const int d = e.points.cols;
  if (k < 1) fail(ErrorCode::invalid_argument, "kmeans: k must be positive");
  if (restarts < 1) fail(ErrorCode::invalid_argument, "kmeans: restarts must be positive");
  if (distinct_rows(e.points) < k)
    fail(ErrorCode::invalid_argument, "kmeans: k exceeds the number of distinct points");
  for (double w : e.weights)
    if (!(w >= 0.0)) fail(ErrorCode::invalid_argument, "kmeans: negative weight");

  const int max_iters = 500;
  const double rel_tol = 1e-9;

  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<int> best_assign;
  Matrix best_centers;
  int best_restart = -1;

  std::vector<double> dist2(n);
  std::vector<int> assign(n);
  Matrix centers(k, d);
  std::vector<double> cweight(k);

  for (int rep = 0; rep < restarts; ++rep) {
    RandomStream stream(child_seed(seed, rep));

    // k-means++ seeding over the weighted points.
    int first = stream.categorical(e.weights);
    for (int j = 0; j < d; ++j) centers.at(0, j) = e.points.at(first, j);
    for (int v = 0; v < n; ++v) dist2[v] = sqdist(e.points.row(v), centers.row(0), d);
    for (int c = 1; c < k; ++c) {
      std::vector<double> mass(n);
      double total = 0.0;
      for (int v = 0; v < n; ++v) {
        mass[v] = e.weights[v] * dist2[v];
        total += mass[v];
      }
      int pick;
      if (total > 0.0) {
        pick = stream.categorical(mass);
      } else {
        // All remaining mass sits on existing centers; take the first point
        // distinct from them.
        pick = 0;
        for (int v = 0; v < n; ++v)
          if (dist2[v] > 0.0) { pick = v; break; }
      }
      for (int j = 0; j < d; ++j) centers.at(c, j) = e.points.at(pick, j);
      for (int v = 0; v < n; ++v)
        dist2[v] = std::min(dist2[v], sqdist(e.points.row(v), centers.row(c), d));
    }

    double prev_obj = std::numeric_limits<double>::infinity();
    double obj = 0.0;
    bool last_reseeded = false;
    for (int iter = 0; iter < max_iters; ++iter) {
      // Assignment step; ties go to the lowest center index.
      obj = 0.0;
      for (int v = 0; v < n; ++v) {
        int arg = 0;
        double best = sqdist(e.points.row(v), centers.row(0), d);
        for (int c = 1; c < k; ++c) {
          const double dd = sqdist(e.points.row(v), centers.row(c), d);
          if (dd < best) {
            best = dd;
            arg = c;
          }
        }
        assign[v] = arg;
        obj += e.weights[v] * best;
      }
      if (!last_reseeded && obj > prev_obj * (1.0 + 1e-12) + 1e-15)
        fail(ErrorCode::internal, "kmeans: objective increased across Lloyd iteration");

      // Reseed empty clusters at the point farthest (weighted) from its center.
      std::vector<int> counts(k, 0);
      for (int v = 0; v < n; ++v) ++counts[assign[v]];
      bool reseeded = false;
      for (int c = 0; c < k; ++c) {
        if (counts[c] > 0) continue;
        int arg = -1;
        double best = -1.0;
        for (int v = 0; v < n; ++v) {
          if (counts[assign[v]] <= 1) continue;  // keep donor clusters nonempty
          const double dd = e.weights[v] * sqdist(e.points.row(v), centers.row(assign[v]), d);
          if (dd > best) {
            best = dd;
            arg = v;
          }
        }
        if (arg < 0) fail(ErrorCode::internal, "kmeans: cannot repair empty cluster");
        --counts[assign[arg]];
        assign[arg] = c;
        counts[c] = 1;
        reseeded = true;
      }

      // Weighted centroid update.
      std::fill(centers.data.begin(), centers.data.end(), 0.0);
      std::fill(cweight.begin(), cweight.end(), 0.0);
      for (int v = 0; v < n; ++v) {
        cweight[assign[v]] += e.weights[v];
        for (int j = 0; j < d; ++j) centers.at(assign[v], j) += e.weights[v] * e.points.at(v, j);
      }
      for (int c = 0; c < k; ++c) {
        if (cweight[c] > 0.0)
          for (int j = 0; j < d; ++j) centers.at(c, j) /= cweight[c];
      }

      if (!reseeded && std::isfinite(prev_obj) &&
          prev_obj - obj <= rel_tol * std::max(prev_obj, 1e-300))
        break;
      prev_obj = obj;
      last_reseeded = reseeded;
    }

    // Final objective against the weighted means of the final assignment.
    obj = 0.0;
    for (int v = 0; v < n; ++v)
      obj += e.weights[v] * sqdist(e.points.row(v), centers.row(assign[v]), d);

    if (obj < best_obj) {
      best_obj = obj;
      best_assign = assign;
      best_centers = centers;
      best_restart = rep;
    }
  }
  (void)best_restart;

  KMeansResult res{Partition(best_assign, k), best_centers, best_obj, restarts};
  return res;
}

double kmeans_objective(const Embedding& e, const Partition& p) {
  const int n = e.points.rows;
  const int d = e.points.cols;
  if (p.n() != n) fail(ErrorCode::invalid_argument, "kmeans_objective: partition size mismatch");
  Matrix centers(p.k(), d);
  std::vector<double> cw(p.k(), 0.0);
  for (int v = 0; v < n; ++v) {
    cw[p.label(v)] += e.weights[v];
    for (int j = 0; j < d; ++j) centers.at(p.label(v), j) += e.weights[v] * e.points.at(v, j);
  }
  for (int c = 0; c < p.k(); ++c) {
    if (!(cw[c] > 0.0)) fail(ErrorCode::degenerate_subset, "kmeans_objective: zero-weight cluster");
    for (int j = 0; j < d; ++j) centers.at(c, j) /= cw[c];
  }
  double obj = 0.0;
  for (int v = 0; v < n; ++v)
    obj += e.weights[v] * sqdist(e.points.row(v), centers.row(p.label(v)), d);
  return obj;
}

KVarianceResult k_variance(const WeightedGraph& g, int k, VarianceKind kind, int restarts,
                           uint64_t seed) {
  const Embedding e = kind == VarianceKind::plain ? adjacency_representatives(g, k)
                                                  : modularity_representatives(g, k);
  KMeansResult km = kmeans(e, k, restarts, seed);
  return KVarianceResult{km.objective, std::move(km.partition), e.warning};
}

MatchResult match_partitions(const Partition& p, const Partition& q) {
  if (p.n() != q.n()) fail(ErrorCode::invalid_argument, "match_partitions: size mismatch");
  if (p.k() != q.k()) fail(ErrorCode::invalid_argument, "match_partitions: k mismatch");
  const int k = p.k();
  if (k > 8) fail(ErrorCode::invalid_argument, "match_partitions: k must be at most 8");

  std::vector<std::vector<int>> conf(k, std::vector<int>(k, 0));
  for (int v = 0; v < p.n(); ++v) ++conf[q.label(v)][p.label(v)];

  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> best_perm = perm;
  long long best = -1;
  do {
    long long agree = 0;
    for (int c = 0; c < k; ++c) agree += conf[c][perm[c]];
    if (agree > best) {
      best = agree;
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  return MatchResult{static_cast<double>(best) / p.n(), best_perm};
}

}  // namespace qr
