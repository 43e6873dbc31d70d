#pragma once

#include <string>
#include <vector>

#include "core/matrix.hpp"

namespace qr {

// Undirected edge-weighted graph: symmetric nonnegative weights, zero
// diagonal. Immutable after construction; degrees are materialized once.
class WeightedGraph {
 public:
  WeightedGraph(int n, std::vector<double> weights);

  int n() const { return n_; }
  double weight(int i, int j) const { return weights_[static_cast<size_t>(i) * n_ + j]; }
  const std::vector<double>& weights() const { return weights_; }
  const double* row(int i) const { return weights_.data() + static_cast<size_t>(i) * n_; }
  double degree(int i) const { return degrees_[i]; }
  const std::vector<double>& degrees() const { return degrees_; }
  double total_weight() const { return total_; }  // sum of all entries
  bool simple() const { return simple_; }

  SymMatrix adjacency() const;

 private:
  int n_;
  std::vector<double> weights_;
  std::vector<double> degrees_;
  double total_ = 0.0;
  bool simple_ = false;
};

// Sorted duplicate-free subset of {0..n-1}.
class VertexSet {
 public:
  VertexSet() = default;
  VertexSet(std::vector<int> members, int n);
  static VertexSet full(int n);

  const std::vector<int>& members() const { return members_; }
  size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(int v) const;
  bool subset_of(const VertexSet& other) const;

 private:
  std::vector<int> members_;
};

// Proper k-partition: every label in {0..k-1}, every cluster nonempty.
class Partition {
 public:
  Partition(std::vector<int> labels, int k);

  int n() const { return static_cast<int>(labels_.size()); }
  int k() const { return k_; }
  int label(int v) const { return labels_[v]; }
  const std::vector<int>& labels() const { return labels_; }
  const std::vector<int>& sizes() const { return sizes_; }
  std::vector<int> cluster_members(int i) const;
  VertexSet cluster(int i) const;

 private:
  std::vector<int> labels_;
  int k_;
  std::vector<int> sizes_;
};

WeightedGraph normalize_weights(const WeightedGraph& g);
double volume(const WeightedGraph& g, const VertexSet& x);
double weighted_cut(const WeightedGraph& g, const VertexSet& x, const VertexSet& y);
double volume_density(const WeightedGraph& g, const VertexSet& x, const VertexSet& y);
bool is_connected(const WeightedGraph& g);

// Edge-list text: lines "u v w" with 0-based ids, optional weight (default
// 1.0), '#' starts a comment. The symmetric closure is applied; a repeated
// unordered pair is an error. Vertex count is max id + 1.
WeightedGraph parse_edge_list(const std::string& text);
std::string write_edge_list(const WeightedGraph& g);

}  // namespace qr
