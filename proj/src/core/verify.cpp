#include "core/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include <json.hpp>

#include "core/discrepancy.hpp"
#include "core/error.hpp"
#include "core/rng.hpp"
#include "core/spectra.hpp"
#include "core/subgraph.hpp"

namespace qr {

Thresholds thresholds_from_json(const std::string& text) {
  Thresholds t;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::parse, std::string("thresholds json: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::parse, "thresholds json: expected an object");
  auto get = [&](const char* key, double& slot) {
    if (j.contains(key)) {
      if (!j[key].is_number()) fail(ErrorCode::parse, std::string("thresholds json: ") + key);
      slot = j[key].get<double>();
    }
  };
  get("nonstructural_over_n", t.nonstructural_over_n);
  get("plain_variance_times_n", t.plain_variance_times_n);
  get("nonstructural_over_sqrt_n", t.nonstructural_over_sqrt_n);
  get("density_deviation", t.density_deviation);
  get("delta", t.delta);
  get("degree_c", t.degree_c);
  get("degree_C", t.degree_C);
  get("exception_fraction", t.exception_fraction);
  get("weighted_variance", t.weighted_variance);
  get("theta", t.theta);
  get("md_partition", t.md_partition);
  get("piv_normalized", t.piv_normalized);
  get("hom_tol", t.hom_tol);
  get("c_thr", t.c_thr);
  if (j.contains("cap")) t.cap = j["cap"].get<int>();
  if (j.contains("restarts")) t.restarts = j["restarts"].get<int>();
  if (j.contains("heuristic_iters")) t.heuristic_iters = j["heuristic_iters"].get<int>();
  if (j.contains("seed")) t.seed = j["seed"].get<uint64_t>();
  return t;
}

std::string thresholds_to_json(const Thresholds& t) {
  nlohmann::json j;
  j["nonstructural_over_n"] = t.nonstructural_over_n;
  j["plain_variance_times_n"] = t.plain_variance_times_n;
  j["nonstructural_over_sqrt_n"] = t.nonstructural_over_sqrt_n;
  j["density_deviation"] = t.density_deviation;
  j["delta"] = t.delta;
  j["degree_c"] = t.degree_c;
  j["degree_C"] = t.degree_C;
  j["exception_fraction"] = t.exception_fraction;
  j["weighted_variance"] = t.weighted_variance;
  j["theta"] = t.theta;
  j["md_partition"] = t.md_partition;
  j["piv_normalized"] = t.piv_normalized;
  j["hom_tol"] = t.hom_tol;
  j["c_thr"] = t.c_thr;
  j["cap"] = t.cap;
  j["restarts"] = t.restarts;
  j["heuristic_iters"] = t.heuristic_iters;
  j["seed"] = t.seed;
  return j.dump();
}

namespace {

double max_abs_from(const std::vector<double>& values, size_t start) {
  double m = 0.0;
  for (size_t i = start; i < values.size(); ++i) m = std::max(m, std::abs(values[i]));
  return m;
}

double min_cluster_ratio(const Partition& p) {
  double m = 1.0;
  for (int s : p.sizes()) m = std::min(m, static_cast<double>(s) / p.n());
  return m;
}

// Aligns estimated block densities with the model's P over all k! label
// permutations; returns the smallest max deviation.
double aligned_density_deviation(const SymMatrix& density, const SymMatrix& p) {
  const int k = p.n;
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double worst = 0.0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        worst = std::max(worst, std::abs(density.at(i, j) - p.at(perm[i], perm[j])));
    best = std::min(best, worst);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

PropertyVerdict check_PI(const WeightedGraph& g, int k, const Thresholds& t) {
  const int n = g.n();
  if (k < 1 || k >= n) fail(ErrorCode::invalid_argument, "check_PI: need 1 <= k < n");
  PropertyVerdict v;
  v.property = "PI";

  const EigenSystem es = eigh(g.adjacency());
  const auto sel = structural_eigs(es, SpectrumKind::adjacency, n, t.delta, t.c_thr);
  for (int i = 0; i < k; ++i)
    v.metrics["lambda_" + std::to_string(i + 1) + "_over_n"] = es.values[i] / n;
  v.metrics["structural_count"] = sel.count;
  v.metrics["max_nonstructural_over_n"] = max_abs_from(es.values, k) / n;

  const Embedding e = adjacency_representatives(es, k);
  const KMeansResult km = kmeans(e, k, t.restarts, t.seed);
  v.metrics["plain_kvariance"] = km.objective;
  v.metrics["balance_min_ratio"] = min_cluster_ratio(km.partition);

  v.thresholds["structural_count"] = k;
  v.thresholds["max_nonstructural_over_n"] = t.nonstructural_over_n;
  v.thresholds["plain_kvariance"] = t.plain_variance_times_n / n;

  v.pass = sel.count == k &&
           v.metrics["max_nonstructural_over_n"] <= t.nonstructural_over_n &&
           km.objective <= t.plain_variance_times_n / n;
  return v;
}

PropertyVerdict check_PI_plus(const WeightedGraph& g, int k, const ModelGraph& h,
                              const Thresholds& t) {
  const int n = g.n();
  if (h.k != k) fail(ErrorCode::invalid_argument, "check_PI_plus: model order mismatch");
  PropertyVerdict v = check_PI(g, k, t);
  v.property = "PI+";

  const double nonstructural_sqrt = v.metrics["max_nonstructural_over_n"] * n / std::sqrt(n);
  v.metrics["max_nonstructural_over_sqrt_n"] = nonstructural_sqrt;
  v.metrics["plain_kvariance_times_n"] = v.metrics["plain_kvariance"] * n;

  // Block densities of the variance-minimizing partition against P, labels
  // aligned by the best permutation.
  const Embedding e = adjacency_representatives(g, k);
  const KMeansResult km = kmeans(e, k, t.restarts, t.seed);
  const ClusterDegrees cd = cluster_degrees(g, km.partition);
  const double dens_dev = aligned_density_deviation(cd.block_density, h.P);
  v.metrics["density_max_deviation"] = dens_dev;

  v.thresholds["max_nonstructural_over_sqrt_n"] = t.nonstructural_over_sqrt_n;
  v.thresholds["density_max_deviation"] = t.density_deviation;

  v.pass = v.pass && nonstructural_sqrt <= t.nonstructural_over_sqrt_n &&
           dens_dev <= t.density_deviation;
  return v;
}

PropertyVerdict check_PII(const WeightedGraph& g, int k, const Thresholds& t) {
  const int n = g.n();
  if (k < 1 || k >= n) fail(ErrorCode::invalid_argument, "check_PII: need 1 <= k < n");
  PropertyVerdict v;
  v.property = "PII";

  int outliers = 0;
  for (int u = 0; u < n; ++u) {
    const double ratio = g.degree(u) / n;
    if (ratio < t.degree_c || ratio > t.degree_C) ++outliers;
  }
  v.metrics["degree_exception_fraction"] = static_cast<double>(outliers) / n;

  const EigenSystem es = eigh(normalized_modularity_matrix(g));
  const auto sel = structural_eigs(es, SpectrumKind::modularity, n, t.delta, t.c_thr);
  v.metrics["structural_count"] = sel.count;
  v.metrics["max_remaining_mu"] = max_abs_from(es.values, k - 1);

  double weighted_var = 0.0;
  double balance = 1.0;
  if (k >= 2) {
    const WeightedGraph gn = normalize_weights(g);
    const Embedding e = modularity_representatives(es, gn.degrees(), k);
    const KMeansResult km = kmeans(e, k, t.restarts, t.seed);
    weighted_var = km.objective;
    balance = min_cluster_ratio(km.partition);
  }
  v.metrics["weighted_kvariance"] = weighted_var;
  v.metrics["balance_min_ratio"] = balance;

  v.thresholds["degree_exception_fraction"] = t.exception_fraction;
  v.thresholds["structural_count"] = k - 1;
  v.thresholds["weighted_kvariance"] = t.weighted_variance;
  v.thresholds["delta"] = t.delta;

  v.pass = v.metrics["degree_exception_fraction"] <= t.exception_fraction &&
           sel.count == k - 1 && weighted_var <= t.weighted_variance;
  return v;
}

PropertyVerdict check_PIII(const WeightedGraph& g, const Partition& p, const Thresholds& t) {
  const int n = g.n();
  const int k = p.k();
  PropertyVerdict v;
  v.property = "PIII";

  const auto sizes = p.sizes();
  bool exact_ok = true;
  for (int i = 0; i < k && exact_ok; ++i)
    for (int j = i; j < k && exact_ok; ++j)
      if (sizes[i] + sizes[j] > t.cap) exact_ok = false;
  const DiscrepancyResult d =
      exact_ok ? partition_discrepancy_exact(g, p, t.cap)
               : partition_discrepancy_heuristic(g, p, t.seed, t.heuristic_iters);
  v.metrics["md_partition"] = d.value;
  v.notes.push_back("md(G;U_1..U_k) evaluated by " + d.method + " search" +
                    (exact_ok ? "" : " (lower-bound estimate; exact cap exceeded)"));

  bool lower_bounds_ok = true;
  const EigenSystem es = eigh(normalized_modularity_matrix(g));
  for (int j = 1; j < k; ++j) {
    const double mu_j = std::abs(es.values[j - 1]);
    v.metrics["mu_" + std::to_string(j)] = mu_j;
    double lb = 0.0;
    std::string source;
    if (n <= 12 && j <= 3) {
      lb = min_k_discrepancy(g, j, MinKMode::exact, t.cap).value;
      source = "exact md_" + std::to_string(j);
    } else {
      const auto inv = converse_bound_inverse(mu_j, j);
      lb = inv.value_or(0.0);
      source = inv ? "inverse converse bound from |mu_" + std::to_string(j) + "|"
                   : "converse bound not invertible";
      if (j == 1) {
        // md_1 has a single partition, so any witness pair is a lower bound.
        const Partition whole(std::vector<int>(n, 0), 1);
        const DiscrepancyResult h1 =
            partition_discrepancy_heuristic(g, whole, t.seed, t.heuristic_iters);
        if (h1.value > lb) {
          lb = h1.value;
          source = "heuristic witness on md_1";
        }
      }
    }
    v.metrics["lower_bound_md_" + std::to_string(j)] = lb;
    v.notes.push_back("md_" + std::to_string(j) + " lower bound: " + source);
    if (!(lb > t.theta)) lower_bounds_ok = false;
  }

  v.thresholds["md_partition"] = t.md_partition;
  v.thresholds["theta"] = t.theta;
  v.pass = d.value <= t.md_partition && lower_bounds_ok;
  if (k == 1) v.notes.push_back("k = 1: the theta clause is vacuous");
  return v;
}

PropertyVerdict check_PIV(const WeightedGraph& g, const Partition& p,
                          const std::optional<SymMatrix>& p_hat, const Thresholds& t) {
  PropertyVerdict v;
  v.property = "PIV";
  const CodegreeReport rep = codegree_report(g, p, p_hat);
  double max_n3 = 0.0, max_model = 0.0;
  for (int i = 0; i < rep.k; ++i)
    for (int j = 0; j < rep.k; ++j) {
      max_n3 = std::max(max_n3, rep.normalized_n3.at(i, j));
      max_model = std::max(max_model, rep.normalized_model.at(i, j));
    }
  v.metrics["max_normalized_n3"] = max_n3;
  v.metrics["max_normalized_model_scale"] = max_model;
  v.notes.push_back(rep.p_estimated ? "P estimated from observed block densities"
                                    : "P supplied by the caller");
  v.thresholds["max_normalized_n3"] = t.piv_normalized;
  v.pass = max_n3 <= t.piv_normalized;
  return v;
}

PropertyVerdict check_P0_proxy(const WeightedGraph& g, int k, const ModelGraph& h,
                               const Thresholds& t) {
  PropertyVerdict v;
  v.property = "P0_proxy";
  v.notes.push_back(
      "proxy only: hom-density agreement plus PI and PIV, not the convergence property itself");

  double worst = 0.0;
  for (const char* name : {"C3", "C4", "K3", "P3"}) {
    const SimpleGraphPattern f = parse_pattern(name);
    const double dev = std::abs(hom_density(f, g) - model_hom_density(f, h));
    v.metrics[std::string("hom_dev_") + name] = dev;
    worst = std::max(worst, dev);
  }

  const PropertyVerdict pi = check_PI(g, k, t);
  Partition part = k == 1 ? Partition(std::vector<int>(g.n(), 0), 1)
                          : k_variance(g, k, VarianceKind::weighted, t.restarts, t.seed).partition;
  const PropertyVerdict piv = check_PIV(g, part, std::nullopt, t);
  v.metrics["PI_pass"] = pi.pass ? 1.0 : 0.0;
  v.metrics["PIV_pass"] = piv.pass ? 1.0 : 0.0;

  v.thresholds["hom_tol"] = t.hom_tol;
  v.pass = worst <= t.hom_tol && pi.pass && piv.pass;
  return v;
}

const char* to_string(StructureClass c) {
  switch (c) {
    case StructureClass::community: return "community";
    case StructureClass::anticommunity: return "anticommunity";
    default: return "mixed";
  }
}

StructureClass classify_structure(const EigenSystem& es, int k, double delta) {
  const auto sel = structural_eigs(es, SpectrumKind::modularity,
                                   static_cast<int>(es.values.size()), delta, 1.0);
  if (sel.count != k - 1)
    fail(ErrorCode::no_structure, "no k-structure at this delta");
  bool all_pos = true, all_neg = true;
  for (int i = 0; i < k - 1; ++i) {
    if (es.values[i] <= 0.0) all_pos = false;
    if (es.values[i] >= 0.0) all_neg = false;
  }
  if (all_pos) return StructureClass::community;
  if (all_neg) return StructureClass::anticommunity;
  return StructureClass::mixed;
}

StructureClass classify_structure(const WeightedGraph& g, int k, double delta) {
  return classify_structure(eigh(normalized_modularity_matrix(g)), k, delta);
}

const char* to_string(SweepMetric m) {
  switch (m) {
    case SweepMetric::adjacency_nonstructural_sqrt: return "adjacency_nonstructural_sqrt";
    case SweepMetric::mu_k: return "mu_k";
    case SweepMetric::plain_kvariance: return "plain_kvariance";
    case SweepMetric::weighted_kvariance: return "weighted_kvariance";
    case SweepMetric::heuristic_md: return "heuristic_md";
    default: return "piv_statistic";
  }
}

SweepMetric sweep_metric_from_string(const std::string& s) {
  for (SweepMetric m : {SweepMetric::adjacency_nonstructural_sqrt, SweepMetric::mu_k,
                        SweepMetric::plain_kvariance, SweepMetric::weighted_kvariance,
                        SweepMetric::heuristic_md, SweepMetric::piv_statistic})
    if (s == to_string(m)) return m;
  fail(ErrorCode::invalid_argument, "unknown sweep metric: " + s);
}

double sweep_target_exponent(SweepMetric m) {
  switch (m) {
    case SweepMetric::adjacency_nonstructural_sqrt: return 0.0;
    case SweepMetric::mu_k: return -0.5;
    case SweepMetric::plain_kvariance: return -1.0;
    case SweepMetric::weighted_kvariance: return -1.0;
    case SweepMetric::heuristic_md: return -0.5;
    default: return -0.5;  // piv_statistic
  }
}

namespace {

double sweep_cell_value(const ModelGraph& h, int n, uint64_t seed, SweepMetric metric,
                        const Thresholds& t) {
  const LabeledSample s = sample(SampleSpec{h, n, seed, std::nullopt});
  const int k = h.k;
  switch (metric) {
    case SweepMetric::piv_statistic: {
      const CodegreeReport rep = codegree_report(s.graph, s.partition, h.P);
      double m = 0.0;
      for (double v : rep.normalized_n3.data) m = std::max(m, v);
      return m;
    }
    case SweepMetric::heuristic_md:
      return partition_discrepancy_heuristic(s.graph, s.partition, child_seed(seed, 1),
                                             t.heuristic_iters)
          .value;
    case SweepMetric::plain_kvariance:
      return k_variance(s.graph, k, VarianceKind::plain, t.restarts, t.seed).value;
    case SweepMetric::weighted_kvariance:
      return k == 1 ? 0.0
                    : k_variance(s.graph, k, VarianceKind::weighted, t.restarts, t.seed).value;
    case SweepMetric::mu_k:
      return std::abs(eigh(normalized_modularity_matrix(s.graph)).values[k - 1]);
    case SweepMetric::adjacency_nonstructural_sqrt: {
      const EigenSystem es = eigh(s.graph.adjacency());
      return max_abs_from(es.values, k) / std::sqrt(static_cast<double>(n));
    }
  }
  return 0.0;
}

}  // namespace

RateReport rate_sweep(const ModelGraph& h, const std::vector<int>& sizes,
                      const std::vector<uint64_t>& seeds, SweepMetric metric,
                      const Thresholds& t, int jobs) {
  if (sizes.size() < 3)
    fail(ErrorCode::invalid_argument, "rate_sweep: need at least 3 sizes");
  if (seeds.empty()) fail(ErrorCode::invalid_argument, "rate_sweep: need at least 1 seed");

  RateReport rep;
  rep.metric = metric;
  rep.target_exponent = sweep_target_exponent(metric);
  for (int n : sizes)
    for (uint64_t s : seeds) rep.cells.push_back(SweepCell{n, s, 0.0});

  const int workers = std::max(1, jobs);
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  auto run = [&] {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= rep.cells.size()) break;
      rep.cells[i].value = sweep_cell_value(h, rep.cells[i].n, rep.cells[i].seed, metric, t);
    }
  };
  if (workers == 1) {
    run();
  } else {
    for (int w = 0; w < workers; ++w) pool.emplace_back(run);
    for (auto& th : pool) th.join();
  }

  for (int n : sizes) {
    double sum = 0.0;
    int count = 0;
    for (const auto& c : rep.cells)
      if (c.n == n) {
        sum += c.value;
        ++count;
      }
    rep.means.push_back({n, sum / count});
  }

  bool positive = std::all_of(rep.means.begin(), rep.means.end(),
                              [](const auto& m) { return m.second > 0.0; });
  if (positive) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [n, mean] : rep.means) {
      const double x = std::log(static_cast<double>(n));
      const double y = std::log(mean);
      sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double m = static_cast<double>(rep.means.size());
    const double denom = m * sxx - sx * sx;
    if (denom > 0.0) rep.slope = (m * sxy - sx * sy) / denom;
  }
  return rep;
}

}  // namespace qr
