#include "core/reports.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "core/clustering.hpp"
#include "core/discrepancy.hpp"
#include "core/error.hpp"
#include "core/spectra.hpp"
#include "core/subgraph.hpp"

namespace qr {

const char* const kToolVersion = "0.1.0";

namespace {

using nlohmann::json;

json eigen_values_json(const std::vector<double>& v) {
  return json(v);
}

json gap_json(const std::vector<double>& gaps) {
  json out = json::array();
  for (double g : gaps) {
    if (std::isinf(g))
      out.push_back(nullptr);
    else
      out.push_back(g);
  }
  return out;
}

}  // namespace

std::string analyze_report_json(const WeightedGraph& g, const AnalyzeOptions& opts) {
  json rep;
  rep["tool_version"] = kToolVersion;
  rep["params"] = {{"k", opts.k},       {"delta", opts.delta},     {"c_thr", opts.c_thr},
                   {"epsilon", opts.epsilon}, {"restarts", opts.restarts}, {"seed", opts.seed}};
  rep["graph"] = {{"n", g.n()}, {"simple", g.simple()}, {"total_weight", g.total_weight()}};

  std::vector<std::string> warnings;
  const SpectralSummary s = analyze_spectra(g, opts.delta, opts.c_thr);

  rep["adjacency"] = {
      {"eigenvalues", eigen_values_json(s.adjacency_eigs.values)},
      {"structural_count", s.structural_count_adj},
      {"threshold", opts.c_thr * std::sqrt(g.n() * std::log(std::max(2, g.n())))},
      {"gap_table", gap_json(s.gap_table_adj)},
  };
  rep["modularity"] = {
      {"eigenvalues", eigen_values_json(s.modularity_eigs.values)},
      {"structural_count", s.structural_count_mod},
      {"threshold", opts.delta},
      {"gap_table", gap_json(s.gap_table_mod)},
  };

  const int k = opts.k;
  json kv = json::object();
  {
    const Embedding e = adjacency_representatives(s.adjacency_eigs, k);
    if (e.warning) warnings.push_back(*e.warning);
    const KMeansResult km = kmeans(e, k, opts.restarts, opts.seed);
    kv["plain"] = {{"value", km.objective}, {"partition", km.partition.labels()}};

    // k-clusterable criterion: S_k^2 <= epsilon^2 S_{k-1}^2.
    if (k >= 2) {
      const Embedding em1 = adjacency_representatives(s.adjacency_eigs, k - 1);
      const KMeansResult kmm1 = kmeans(em1, k - 1, opts.restarts, opts.seed);
      json cl = {{"s_k2", km.objective}, {"s_km1_2", kmm1.objective}, {"epsilon", opts.epsilon}};
      if (kmm1.objective > 0.0) {
        const double ratio2 = km.objective / kmm1.objective;
        cl["ratio_squared"] = ratio2;
        cl["k_clusterable"] = ratio2 <= opts.epsilon * opts.epsilon;
      } else {
        cl["ratio_squared"] = nullptr;
        cl["k_clusterable"] = km.objective <= 0.0;
      }
      rep["clusterable"] = cl;
    }
  }
  if (k >= 2) {
    const WeightedGraph gn = normalize_weights(g);
    const Embedding e = modularity_representatives(s.modularity_eigs, gn.degrees(), k);
    if (e.warning) warnings.push_back(*e.warning);
    const KMeansResult km = kmeans(e, k, opts.restarts, opts.seed);
    kv["weighted"] = {{"value", km.objective}, {"partition", km.partition.labels()}};
  } else {
    kv["weighted"] = {{"value", 0.0}, {"partition", std::vector<int>(g.n(), 0)}};
  }
  rep["kvariance"] = kv;

  try {
    rep["classification"] = to_string(classify_structure(s.modularity_eigs, k, opts.delta));
  } catch (const Error& e) {
    rep["classification"] = nullptr;
    warnings.push_back(e.what());
  }
  rep["warnings"] = warnings;
  return rep.dump(2) + "\n";
}

std::string discrepancy_report_json(const WeightedGraph& g, const DiscrepancyOptions& opts) {
  json rep;
  rep["tool_version"] = kToolVersion;
  rep["params"] = {{"mode", opts.mode}, {"cap", opts.cap},    {"seed", opts.seed},
                   {"iters", opts.iters}, {"bounds", opts.bounds}};

  int k = 0;
  std::optional<Partition> part;
  if (opts.partition) {
    int maxl = 0;
    for (int l : *opts.partition) maxl = std::max(maxl, l);
    part = Partition(*opts.partition, maxl + 1);
    k = part->k();
    DiscrepancyResult d;
    if (opts.mode == "heuristic")
      d = partition_discrepancy_heuristic(g, *part, opts.seed, opts.iters);
    else
      d = partition_discrepancy_exact(g, *part, opts.cap);
    rep["value"] = d.value;
    rep["method"] = d.method;
    rep["pair"] = {d.pair_i, d.pair_j};
    rep["witness_x"] = d.witness_x;
    rep["witness_y"] = d.witness_y;
    rep["kind"] = "partition_discrepancy";
  } else if (opts.min_k) {
    k = *opts.min_k;
    const MinKMode mode = opts.mode == "spectral_seeded" ? MinKMode::spectral_seeded
                                                         : MinKMode::exact;
    const MinKResult r = min_k_discrepancy(g, k, mode, opts.cap, opts.seed, opts.restarts,
                                           opts.iters);
    rep["value"] = r.value;
    rep["method"] = r.method;
    rep["exact_minimum"] = r.exact;
    rep["partition"] = r.partition.labels();
    rep["kind"] = "min_k_discrepancy";
    if (!r.exact)
      rep["note"] = r.method == "exact"
                        ? "md(G; spectral partition): an upper bound on md_k"
                        : "heuristic estimate of md(G; spectral partition); not a certified bound";
    part = r.partition;
  } else {
    fail(ErrorCode::invalid_argument, "discrepancy: need a partition or min_k");
  }

  if (opts.bounds) {
    SpectralBoundsOptions bo;
    bo.exception_fraction = opts.exception_fraction;
    bo.restarts = opts.restarts;
    bo.seed = opts.seed;
    const SpectralBounds b = discrepancy_spectral_bounds(g, k, part, bo);
    json jb;
    jb["upper"] = b.upper;
    jb["upper_note"] = "2 (C/c) (sqrt(2k) s + |mu_k|); asymptotic o(1) term dropped";
    jb["mu_k"] = b.mu_k;
    jb["s_tilde"] = b.s_tilde;
    jb["c"] = b.c;
    jb["C"] = b.C;
    jb["exceptional_count"] = b.exceptional_count;
    if (b.lower_md_k)
      jb["lower_md_k"] = *b.lower_md_k;
    else
      jb["lower_md_k"] = nullptr;
    jb["lower_note"] = b.lower_note;
    rep["bounds"] = jb;
  }
  return rep.dump(2) + "\n";
}

VerifyOutcome run_verify(const WeightedGraph& g, const VerifyOptions& opts) {
  VerifyOutcome out;
  json rep;
  rep["tool_version"] = kToolVersion;
  rep["thresholds"] = json::parse(thresholds_to_json(opts.thresholds));

  int k = opts.k;
  if (k <= 0) {
    if (!opts.model)
      fail(ErrorCode::invalid_argument, "verify: k is required when no model is given");
    k = opts.model->k;
  }
  rep["k"] = k;

  std::optional<Partition> part;
  if (opts.partition) {
    int maxl = 0;
    for (int l : *opts.partition) maxl = std::max(maxl, l);
    part = Partition(*opts.partition, maxl + 1);
  }

  auto partition_for_checks = [&]() -> Partition {
    if (part) return *part;
    if (k == 1) return Partition(std::vector<int>(g.n(), 0), 1);
    return k_variance(g, k, VarianceKind::weighted, opts.thresholds.restarts,
                      opts.thresholds.seed)
        .partition;
  };

  json items = json::array();
  std::ostringstream table;
  table << std::left << std::setw(11) << "property" << std::setw(9) << "status" << "details\n";
  int index = 0;
  for (const std::string& prop : opts.properties) {
    json item;
    std::string status;
    try {
      PropertyVerdict v;
      if (prop == "PI") {
        v = check_PI(g, k, opts.thresholds);
      } else if (prop == "PI+") {
        if (!opts.model) throw Error(ErrorCode::invalid_argument, "PI+ requires a model");
        v = check_PI_plus(g, k, *opts.model, opts.thresholds);
      } else if (prop == "PII") {
        v = check_PII(g, k, opts.thresholds);
      } else if (prop == "PIII") {
        Partition p = partition_for_checks();
        v = check_PIII(g, p, opts.thresholds);
        if (!part) v.notes.push_back("partition: weighted k-variance minimizer (none supplied)");
      } else if (prop == "PIV") {
        Partition p = partition_for_checks();
        v = check_PIV(g, p, std::nullopt, opts.thresholds);
        if (!part) v.notes.push_back("partition: weighted k-variance minimizer (none supplied)");
      } else if (prop == "P0") {
        if (!opts.model) throw Error(ErrorCode::invalid_argument, "P0 proxy requires a model");
        v = check_P0_proxy(g, k, *opts.model, opts.thresholds);
      } else {
        throw Error(ErrorCode::invalid_argument, "unknown property: " + prop);
      }
      status = v.pass ? "pass" : "fail";
      if (!v.pass) {
        out.all_pass = false;
        if (out.first_fail_index < 0) out.first_fail_index = index;
      }
      item["property"] = v.property;
      item["status"] = status;
      item["metrics"] = v.metrics;
      item["thresholds_used"] = v.thresholds;
      item["notes"] = v.notes;
      std::ostringstream det;
      int shown = 0;
      for (const auto& [key, value] : v.metrics) {
        if (shown++ == 3) break;
        det << key << "=" << value << " ";
      }
      table << std::left << std::setw(11) << prop << std::setw(9) << status << det.str()
            << "\n";
    } catch (const Error& e) {
      status = "skipped";
      item["property"] = prop;
      item["status"] = status;
      item["notes"] = {std::string("skipped: ") + e.what()};
      table << std::left << std::setw(11) << prop << std::setw(9) << status << e.what()
            << "\n";
    }
    items.push_back(item);
    ++index;
  }
  rep["properties"] = items;
  rep["all_pass"] = out.all_pass;
  rep["first_fail_index"] = out.first_fail_index;
  out.json = rep.dump(2) + "\n";
  out.table = table.str();
  return out;
}

SweepOutcome run_sweep(const ModelGraph& h, const SweepOptions& opts) {
  if (opts.sizes.size() < 3)
    fail(ErrorCode::invalid_argument, "sweep: need at least 3 sizes");
  if (opts.seeds.empty()) fail(ErrorCode::invalid_argument, "sweep: need at least 1 seed");
  if (opts.metrics.empty()) fail(ErrorCode::invalid_argument, "sweep: need at least 1 metric");

  SweepOutcome out;
  std::ostringstream csv;
  csv << "n,seed,metric,value\n";
  json summary;
  summary["tool_version"] = kToolVersion;
  summary["sizes"] = opts.sizes;
  summary["seeds"] = opts.seeds;
  json per_metric = json::array();

  for (const std::string& name : opts.metrics) {
    const SweepMetric metric = sweep_metric_from_string(name);
    const RateReport rep =
        rate_sweep(h, opts.sizes, opts.seeds, metric, opts.thresholds, opts.jobs);
    for (const auto& cell : rep.cells) {
      std::ostringstream v;
      v.precision(17);
      v << cell.value;
      csv << cell.n << "," << cell.seed << "," << name << "," << v.str() << "\n";
    }
    json jm;
    jm["metric"] = name;
    jm["target_exponent"] = rep.target_exponent;
    if (rep.slope)
      jm["slope"] = *rep.slope;
    else
      jm["slope"] = nullptr;
    json means = json::array();
    for (const auto& [n, mean] : rep.means) means.push_back({{"n", n}, {"mean", mean}});
    jm["means"] = means;
    per_metric.push_back(jm);
  }
  summary["metrics"] = per_metric;
  out.csv = csv.str();
  out.summary_json = summary.dump(2) + "\n";
  return out;
}

std::string sample_sidecar_json(const LabeledSample& s) {
  json j;
  j["tool_version"] = kToolVersion;
  json spec;
  spec["model"] = json::parse(model_to_json(s.spec.model));
  spec["n"] = s.spec.n;
  spec["seed"] = s.spec.seed;
  spec["membership_mode"] = s.spec.fixed_sizes ? "fixed_sizes" : "multinomial";
  if (s.spec.fixed_sizes) spec["fixed_sizes"] = *s.spec.fixed_sizes;
  j["spec"] = spec;
  j["partition"] = s.partition.labels();

  const ClusterDegrees cd = cluster_degrees(s.graph, s.partition);
  const int k = s.partition.k();
  json counts = json::array();
  json densities = json::array();
  for (int i = 0; i < k; ++i) {
    json crow = json::array(), drow = json::array();
    for (int jx = 0; jx < k; ++jx) {
      // a(U_i, U_j) counts ordered pairs; undirected edge counts halve the
      // diagonal blocks.
      const double cut = cd.block_cut.at(i, jx);
      crow.push_back(i == jx ? cut / 2.0 : cut);
      drow.push_back(cd.block_density.at(i, jx));
    }
    counts.push_back(crow);
    densities.push_back(drow);
  }
  j["block_edge_counts"] = counts;
  j["block_densities"] = densities;
  return j.dump(2) + "\n";
}

std::string partition_to_json(const Partition& p) {
  return json(p.labels()).dump() + "\n";
}

}  // namespace qr
