#include "core/subgraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "core/error.hpp"

namespace qr {

namespace {

std::vector<double> mat_vec(const WeightedGraph& g, const std::vector<double>& x) {
  const int n = g.n();
  std::vector<double> y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double* r = g.row(i);
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i) {
    const double* ra = a.row(i);
    double* rc = c.row(i);
    for (int l = 0; l < a.cols; ++l) {
      const double v = ra[l];
      if (v == 0.0) continue;
      const double* rb = b.row(l);
      for (int j = 0; j < b.cols; ++j) rc[j] += v * rb[j];
    }
  }
  return c;
}

// trace(A^t) via at most two explicit powers: trace(A^t) = <A^a, A^b>_F
// with a + b = t (A symmetric).
double trace_power(const WeightedGraph& g, int t) {
  const Matrix a1 = [&] {
    Matrix m(g.n(), g.n());
    m.data = g.weights();
    return m;
  }();
  if (t == 1) return 0.0;  // zero diagonal
  const Matrix a2 = mat_mul(a1, a1);
  auto dot = [](const Matrix& x, const Matrix& y) {
    double s = 0.0;
    for (size_t i = 0; i < x.data.size(); ++i) s += x.data[i] * y.data[i];
    return s;
  };
  switch (t) {
    case 2: return dot(a1, a1);
    case 3: return dot(a2, a1);
    case 4: return dot(a2, a2);
    default: break;
  }
  const Matrix a3 = mat_mul(a2, a1);
  switch (t) {
    case 5: return dot(a3, a2);
    case 6: return dot(a3, a3);
    case 7: return dot(mat_mul(a3, a1), a3);
    case 8: { const Matrix a4 = mat_mul(a2, a2); return dot(a4, a4); }
    default:
      fail(ErrorCode::budget_exceeded, "hom_count: cycle length above 8");
  }
}

struct Backtracker {
  const WeightedGraph* g = nullptr;
  const SimpleGraphPattern* f = nullptr;
  std::vector<std::vector<int>> earlier;  // pattern neighbors with smaller order
  std::vector<int> order;                 // visit order of pattern vertices
  std::vector<int> image;                 // image[pattern vertex] or -1
  long long nodes = 0;
  long long budget = 0;

  void check_budget() {
    if (++nodes > budget)
      fail(ErrorCode::budget_exceeded, "subgraph enumeration budget exceeded");
  }
};

// Pattern vertices are visited components together, highest degree first,
// then BFS, so every later vertex in a connected component has at least one
// already-assigned neighbor to prune against.
std::vector<int> pattern_order(const SimpleGraphPattern& f) {
  std::vector<std::vector<int>> adj(f.s);
  for (auto [u, v] : f.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  const auto deg = f.degrees();
  std::vector<int> order;
  std::vector<char> seen(f.s, 0);
  for (int round = 0; round < f.s; ++round) {
    int root = -1;
    for (int v = 0; v < f.s; ++v)
      if (!seen[v] && (root == -1 || deg[v] > deg[root])) root = v;
    if (root == -1) break;
    std::vector<int> queue{root};
    seen[root] = 1;
    for (size_t h = 0; h < queue.size(); ++h) {
      const int u = queue[h];
      order.push_back(u);
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = 1;
          queue.push_back(v);
        }
    }
  }
  return order;
}

double hom_backtrack(Backtracker& bt, size_t depth) {
  const int n = bt.g->n();
  if (depth == bt.order.size()) return 1.0;
  const int pv = bt.order[depth];
  const auto& req = bt.earlier[pv];
  double total = 0.0;
  for (int cand = 0; cand < n; ++cand) {
    bool ok = true;
    for (int r : req)
      if (bt.g->weight(bt.image[r], cand) == 0.0) {
        ok = false;
        break;
      }
    if (!ok) continue;
    bt.check_budget();
    bt.image[pv] = cand;
    total += hom_backtrack(bt, depth + 1);
  }
  bt.image[pv] = -1;
  return total;
}

}  // namespace

double hom_count(const SimpleGraphPattern& f, const WeightedGraph& g, long long budget) {
  if (!g.simple()) fail(ErrorCode::invalid_argument, "hom_count: requires a simple graph");
  if (f.s == 1) return static_cast<double>(g.n());
  if (f.is_cycle()) return trace_power(g, f.s);
  if (f.is_path()) {
    std::vector<double> x(g.n(), 1.0);
    for (int step = 0; step + 1 < f.s; ++step) x = mat_vec(g, x);
    return std::accumulate(x.begin(), x.end(), 0.0);
  }

  Backtracker bt;
  bt.g = &g;
  bt.f = &f;
  bt.order = pattern_order(f);
  std::vector<int> rank(f.s);
  for (size_t i = 0; i < bt.order.size(); ++i) rank[bt.order[i]] = static_cast<int>(i);
  bt.earlier.assign(f.s, {});
  for (auto [u, v] : f.edges) {
    if (rank[u] < rank[v])
      bt.earlier[v].push_back(u);
    else
      bt.earlier[u].push_back(v);
  }
  bt.image.assign(f.s, -1);
  bt.budget = budget;
  return hom_backtrack(bt, 0);
}

double hom_density(const SimpleGraphPattern& f, const WeightedGraph& g, long long budget) {
  return hom_count(f, g, budget) / std::pow(static_cast<double>(g.n()), f.s);
}

namespace {

long long induced_backtrack(Backtracker& bt, size_t depth, std::vector<char>& used) {
  const int n = bt.g->n();
  if (depth == static_cast<size_t>(bt.f->s)) return 1;
  const int pv = static_cast<int>(depth);  // natural order: exact match prunes hard
  long long total = 0;
  for (int cand = 0; cand < n; ++cand) {
    if (used[cand]) continue;
    bool ok = true;
    for (int prev = 0; prev < pv && ok; ++prev) {
      const std::pair<int, int> key{std::min(prev, pv), std::max(prev, pv)};
      const bool want = std::binary_search(bt.f->edges.begin(), bt.f->edges.end(), key);
      const bool have = bt.g->weight(bt.image[prev], cand) != 0.0;
      ok = want == have;
    }
    if (!ok) continue;
    bt.check_budget();
    bt.image[pv] = cand;
    used[cand] = 1;
    total += induced_backtrack(bt, depth + 1, used);
    used[cand] = 0;
  }
  bt.image[pv] = -1;
  return total;
}

}  // namespace

long long induced_count(const SimpleGraphPattern& f, const WeightedGraph& g, long long budget) {
  if (!g.simple()) fail(ErrorCode::invalid_argument, "induced_count: requires a simple graph");
  Backtracker bt;
  bt.g = &g;
  bt.f = &f;
  bt.image.assign(f.s, -1);
  bt.budget = budget;
  std::vector<char> used(g.n(), 0);
  return induced_backtrack(bt, 0, used);
}

ClusterDegrees cluster_degrees(const WeightedGraph& g, const Partition& p) {
  if (p.n() != g.n()) fail(ErrorCode::invalid_argument, "cluster_degrees: partition size mismatch");
  const int n = g.n();
  const int k = p.k();
  ClusterDegrees out;
  out.n1 = Matrix(n, k);
  out.block_cut = SymMatrix(k);
  out.block_density = SymMatrix(k);
  for (int u = 0; u < n; ++u) {
    const double* r = g.row(u);
    double* t = out.n1.row(u);
    for (int v = 0; v < n; ++v) t[p.label(v)] += r[v];
  }
  for (int u = 0; u < n; ++u)
    for (int j = 0; j < k; ++j) out.block_cut.at(p.label(u), j) += out.n1.at(u, j);
  const auto sizes = p.sizes();
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      out.block_density.at(i, j) =
          out.block_cut.at(i, j) / (static_cast<double>(sizes[i]) * sizes[j]);
  return out;
}

double codegree(const WeightedGraph& g, int u, int v, const VertexSet& s) {
  double total = 0.0;
  const double* ru = g.row(u);
  const double* rv = g.row(v);
  for (int t : s.members()) total += ru[t] * rv[t];
  return total;
}

CodegreeReport codegree_report(const WeightedGraph& g, const Partition& p,
                               const std::optional<SymMatrix>& p_hat) {
  const int n = g.n();
  const int k = p.k();
  CodegreeReport rep;
  rep.k = k;
  rep.n = n;
  const ClusterDegrees cd = cluster_degrees(g, p);
  rep.n1 = cd.n1;
  if (p_hat) {
    if (p_hat->n != k)
      fail(ErrorCode::invalid_argument, "codegree_report: P_hat must be k x k");
    rep.p_used = *p_hat;
    rep.p_estimated = false;
  } else {
    rep.p_used = cd.block_density;
    rep.p_estimated = true;
  }

  rep.sum_abs_deviation = Matrix(k, k);
  rep.normalized_n3 = Matrix(k, k);
  rep.normalized_model = Matrix(k, k);

  const auto sizes = p.sizes();
  std::vector<std::vector<int>> members(k);
  for (int i = 0; i < k; ++i) members[i] = p.cluster_members(i);
  const double n3 = static_cast<double>(n) * n * n;

  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const auto& mi = members[i];
      const auto& mj = members[j];
      const double target = rep.p_used.at(i, j) * rep.p_used.at(i, j) * sizes[j];
      // Gram rows of the U_i x U_j block: N_2(u, v; U_j) for u, v in U_i.
      double sum = 0.0;
      std::vector<double> row_u(mj.size());
      for (size_t ui = 0; ui < mi.size(); ++ui) {
        const double* ru = g.row(mi[ui]);
        for (size_t t = 0; t < mj.size(); ++t) row_u[t] = ru[mj[t]];
        for (size_t vi = 0; vi < mi.size(); ++vi) {
          const double* rv = g.row(mi[vi]);
          double n2 = 0.0;
          for (size_t t = 0; t < mj.size(); ++t) n2 += row_u[t] * rv[mj[t]];
          sum += std::abs(n2 - target);
        }
      }
      rep.sum_abs_deviation.at(i, j) = sum;
      rep.normalized_n3.at(i, j) = sum / n3;
      const double scale = target * static_cast<double>(sizes[i]) * sizes[i];
      rep.normalized_model.at(i, j) =
          scale > 0.0 ? sum / scale
                      : (sum > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    }
  }
  return rep;
}

}  // namespace qr
