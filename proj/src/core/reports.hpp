#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/generator.hpp"
#include "core/graph.hpp"
#include "core/model.hpp"
#include "core/verify.hpp"

namespace qr {

extern const char* const kToolVersion;

struct AnalyzeOptions {
  int k = 2;
  double delta = 0.5;
  double c_thr = 1.0;
  double epsilon = 0.25;  // k-clusterable ratio cut
  int restarts = 20;
  uint64_t seed = 0;
};

// Spectral summary + k-variances + partitions + structure classification,
// serialized as the analyze report JSON.
std::string analyze_report_json(const WeightedGraph& g, const AnalyzeOptions& opts);

struct DiscrepancyOptions {
  std::optional<std::vector<int>> partition;  // labels; absent -> min-k mode
  std::optional<int> min_k;
  std::string mode = "exact";  // "exact" | "heuristic" | "spectral_seeded" (min-k)
  int cap = 24;
  uint64_t seed = 0;
  int iters = 50;
  bool bounds = false;  // attach the spectral bracket
  double exception_fraction = 0.05;
  int restarts = 20;
};

std::string discrepancy_report_json(const WeightedGraph& g, const DiscrepancyOptions& opts);

struct VerifyOptions {
  std::vector<std::string> properties;  // subset of PI, PI+, PII, PIII, PIV, P0
  std::optional<ModelGraph> model;
  std::optional<std::vector<int>> partition;
  Thresholds thresholds;
  int k = 0;  // 0 -> model's k (required if no model)
};

struct VerifyOutcome {
  std::string json;
  std::string table;         // human-readable summary
  int first_fail_index = -1; // position in the requested property order
  bool all_pass = true;
};

VerifyOutcome run_verify(const WeightedGraph& g, const VerifyOptions& opts);

struct SweepOptions {
  std::vector<int> sizes;
  std::vector<uint64_t> seeds;
  std::vector<std::string> metrics;
  Thresholds thresholds;
  int jobs = 1;
};

struct SweepOutcome {
  std::string csv;           // columns n,seed,metric,value
  std::string summary_json;  // per-metric means and fitted slopes
};

SweepOutcome run_sweep(const ModelGraph& h, const SweepOptions& opts);

// Sidecar JSON written next to generated edge lists: the sampling spec, the
// planted partition and per-block edge counts/densities.
std::string sample_sidecar_json(const LabeledSample& s);
std::string partition_to_json(const Partition& p);

}  // namespace qr
