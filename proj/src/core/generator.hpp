#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/graph.hpp"
#include "core/matrix.hpp"
#include "core/model.hpp"

namespace qr {

// Sampling request. In multinomial mode memberships are i.i.d. draws from r;
// fixed_sizes assigns consecutive blocks of the given sizes instead.
struct SampleSpec {
  ModelGraph model;
  int n = 0;
  uint64_t seed = 0;
  std::optional<std::vector<int>> fixed_sizes;
};

struct LabeledSample {
  WeightedGraph graph;
  Partition partition;
  SampleSpec spec;
};

// Draw order (pinned for reproducibility): memberships by vertex index,
// then one uniform per unordered pair {u,v} in lexicographic order, edge
// present iff the draw is below p_{c_u c_v}. Multinomial mode redraws the
// whole membership vector (continuing the stream) up to 100 times on an
// empty-cluster event before failing.
LabeledSample sample(const SampleSpec& spec);

// A = B + W exactly: B is the blow-up of P in the sample's vertex order
// (diagonal keeps p_ii), W is the centered noise with -p_ii on the diagonal.
std::pair<SymMatrix, SymMatrix> decompose(const LabeledSample& s);

struct BalancingEntry {
  int n = 0;
  double max_deviation = 0.0;  // max_i |n_i/n - r_i|
  double min_ratio = 0.0;      // min_i n_i/n
};

struct BalancingReport {
  std::vector<BalancingEntry> entries;  // sorted by n
  bool weak_condition_holds = false;    // min ratio >= c for every sample
  double weak_constant = 0.0;
  bool deviation_monotone = false;      // max deviation non-increasing in n
  std::optional<double> trend_slope;    // log-log slope of max deviation vs n
};

BalancingReport balancing_report(const std::vector<LabeledSample>& samples, double weak_c);

}  // namespace qr
