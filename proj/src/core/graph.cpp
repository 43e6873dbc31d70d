#include "core/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "core/error.hpp"

namespace qr {

WeightedGraph::WeightedGraph(int n, std::vector<double> weights) : n_(n) {
  if (n <= 0) fail(ErrorCode::invalid_argument, "graph: vertex count must be positive");
  if (weights.size() != static_cast<size_t>(n) * n)
    fail(ErrorCode::invalid_argument, "graph: weight matrix size mismatch");
  weights_ = std::move(weights);
  simple_ = true;
  for (int i = 0; i < n_; ++i) {
    if (weights_[static_cast<size_t>(i) * n_ + i] != 0.0)
      fail(ErrorCode::invalid_argument, "graph: self-loops are not allowed (a_ii must be 0)");
    for (int j = 0; j < n_; ++j) {
      const double w = weights_[static_cast<size_t>(i) * n_ + j];
      if (!(w >= 0.0) || !std::isfinite(w))
        fail(ErrorCode::invalid_argument, "graph: weights must be finite and nonnegative");
      if (w != weights_[static_cast<size_t>(j) * n_ + i])
        fail(ErrorCode::invalid_argument, "graph: weight matrix must be symmetric");
      if (w != 0.0 && w != 1.0) simple_ = false;
    }
  }
  degrees_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    double d = 0.0;
    const double* r = row(i);
    for (int j = 0; j < n_; ++j) d += r[j];
    degrees_[i] = d;
    total_ += d;
  }
}

SymMatrix WeightedGraph::adjacency() const {
  SymMatrix m(n_);
  m.data = weights_;
  return m;
}

VertexSet::VertexSet(std::vector<int> members, int n) {
  std::sort(members.begin(), members.end());
  for (size_t i = 0; i < members.size(); ++i) {
    if (members[i] < 0 || members[i] >= n)
      fail(ErrorCode::invalid_argument, "vertex set: member out of range");
    if (i > 0 && members[i] == members[i - 1])
      fail(ErrorCode::invalid_argument, "vertex set: duplicate member");
  }
  members_ = std::move(members);
}

VertexSet VertexSet::full(int n) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i;
  return VertexSet(std::move(all), n);
}

bool VertexSet::contains(int v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

bool VertexSet::subset_of(const VertexSet& other) const {
  return std::includes(other.members_.begin(), other.members_.end(),
                       members_.begin(), members_.end());
}

Partition::Partition(std::vector<int> labels, int k) : k_(k) {
  if (k <= 0) fail(ErrorCode::invalid_argument, "partition: k must be positive");
  if (labels.empty()) fail(ErrorCode::invalid_argument, "partition: empty assignment");
  sizes_.assign(k, 0);
  for (int c : labels) {
    if (c < 0 || c >= k)
      fail(ErrorCode::invalid_argument, "partition: label out of range");
    ++sizes_[c];
  }
  for (int i = 0; i < k; ++i)
    if (sizes_[i] == 0)
      fail(ErrorCode::invalid_argument, "partition: cluster " + std::to_string(i) + " is empty");
  labels_ = std::move(labels);
}

std::vector<int> Partition::cluster_members(int i) const {
  std::vector<int> out;
  out.reserve(sizes_[i]);
  for (int v = 0; v < n(); ++v)
    if (labels_[v] == i) out.push_back(v);
  return out;
}

VertexSet Partition::cluster(int i) const { return VertexSet(cluster_members(i), n()); }

WeightedGraph normalize_weights(const WeightedGraph& g) {
  const double total = g.total_weight();
  if (!(total > 0.0)) fail(ErrorCode::empty_graph, "empty graph");
  std::vector<double> w = g.weights();
  for (double& v : w) v /= total;
  return WeightedGraph(g.n(), std::move(w));
}

double volume(const WeightedGraph& g, const VertexSet& x) {
  double s = 0.0;
  for (int v : x.members()) s += g.degree(v);
  return s;
}

double weighted_cut(const WeightedGraph& g, const VertexSet& x, const VertexSet& y) {
  double s = 0.0;
  for (int i : x.members()) {
    const double* r = g.row(i);
    for (int j : y.members()) s += r[j];
  }
  return s;
}

double volume_density(const WeightedGraph& g, const VertexSet& x, const VertexSet& y) {
  const double vx = volume(g, x);
  const double vy = volume(g, y);
  if (!(vx > 0.0) || !(vy > 0.0)) fail(ErrorCode::degenerate_subset, "degenerate subset");
  return weighted_cut(g, x, y) / (vx * vy);
}

bool is_connected(const WeightedGraph& g) {
  const int n = g.n();
  std::vector<char> seen(n, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    const double* r = g.row(u);
    for (int v = 0; v < n; ++v) {
      if (!seen[v] && r[v] > 0.0) {
        seen[v] = 1;
        ++count;
        stack.push_back(v);
      }
    }
  }
  return count == n;
}

WeightedGraph parse_edge_list(const std::string& text) {
  struct Edge { int u, v; double w; };
  std::vector<Edge> edges;
  std::set<std::pair<int, int>> seen;
  int max_id = -1;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u)) continue;  // blank or comment-only line
    if (!(ls >> v))
      fail(ErrorCode::parse, "edge list line " + std::to_string(lineno) + ": expected 'u v [w]'");
    double w = 1.0;
    if (ls >> w) {
      std::string rest;
      if (ls >> rest)
        fail(ErrorCode::parse, "edge list line " + std::to_string(lineno) + ": trailing tokens");
    }
    if (u < 0 || v < 0)
      fail(ErrorCode::parse, "edge list line " + std::to_string(lineno) + ": negative vertex id");
    if (u == v)
      fail(ErrorCode::parse, "edge list line " + std::to_string(lineno) + ": self-loop");
    if (!(w >= 0.0) || !std::isfinite(w))
      fail(ErrorCode::parse, "edge list line " + std::to_string(lineno) + ": bad weight");
    const int lo = static_cast<int>(std::min(u, v));
    const int hi = static_cast<int>(std::max(u, v));
    if (!seen.insert({lo, hi}).second)
      fail(ErrorCode::parse, "edge list line " + std::to_string(lineno) + ": duplicate edge");
    edges.push_back({static_cast<int>(u), static_cast<int>(v), w});
    max_id = std::max(max_id, hi);
  }
  if (max_id < 0) fail(ErrorCode::parse, "edge list: no edges");

  const int n = max_id + 1;
  std::vector<double> wmat(static_cast<size_t>(n) * n, 0.0);
  for (const auto& e : edges) {
    wmat[static_cast<size_t>(e.u) * n + e.v] = e.w;
    wmat[static_cast<size_t>(e.v) * n + e.u] = e.w;
  }
  return WeightedGraph(n, std::move(wmat));
}

std::string write_edge_list(const WeightedGraph& g) {
  std::string out;
  char buf[64];
  for (int u = 0; u < g.n(); ++u) {
    for (int v = u + 1; v < g.n(); ++v) {
      const double w = g.weight(u, v);
      if (w == 0.0) continue;
      out += std::to_string(u);
      out += ' ';
      out += std::to_string(v);
      if (w != 1.0) {
        auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), w);
        (void)ec;
        out += ' ';
        out.append(buf, p);
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace qr
