#include <doctest.h>

#include <cmath>

#include "core/discrepancy.hpp"
#include "core/error.hpp"
#include "core/generator.hpp"
#include "core/model.hpp"
#include "core/subgraph.hpp"
#include "core/verify.hpp"
#include "support/oracles.hpp"

using namespace qr;

namespace {

ModelGraph standard_model() {
  SymMatrix p(2);
  p.at(0, 0) = 0.8; p.at(1, 1) = 0.7;
  p.set_sym(0, 1, 0.1);
  return make_model(2, {0.5, 0.5}, p);
}

LabeledSample standard_sample(uint64_t seed) {
  return sample(SampleSpec{standard_model(), 500, seed, std::vector<int>{250, 250}});
}

WeightedGraph star_graph(int n) {
  std::vector<double> w(static_cast<size_t>(n) * n, 0.0);
  for (int v = 1; v < n; ++v) {
    w[v] = 1.0;
    w[static_cast<size_t>(v) * n] = 1.0;
  }
  return WeightedGraph(n, std::move(w));
}

}  // namespace

TEST_CASE("thresholds json round trip and partial override") {
  Thresholds t;
  t.delta = 0.4;
  const Thresholds back = thresholds_from_json(thresholds_to_json(t));
  CHECK(back.delta == 0.4);
  const Thresholds partial = thresholds_from_json(R"({"theta": 0.2})");
  CHECK(partial.theta == 0.2);
  CHECK(partial.delta == 0.5);  // default kept
  CHECK_THROWS_AS(thresholds_from_json("[1]"), Error);
}

TEST_CASE("check_PI on the standard instance, an ER graph, and a blow-up") {
  Thresholds t;
  const LabeledSample s = standard_sample(1);
  const PropertyVerdict v = check_PI(s.graph, 2, t);
  CHECK(v.pass);
  CHECK(v.metrics.at("lambda_1_over_n") == doctest::Approx(0.431).epsilon(0.05));
  CHECK(v.metrics.at("lambda_2_over_n") == doctest::Approx(0.319).epsilon(0.05));

  // Erdos-Renyi with k = 2 requested: only one Theta(n) eigenvalue
  SymMatrix p1(1);
  p1.at(0, 0) = 0.5;
  const LabeledSample er = sample(SampleSpec{make_model(1, {1.0}, p1), 400, 2, std::nullopt});
  const PropertyVerdict v2 = check_PI(er.graph, 2, t);
  CHECK_FALSE(v2.pass);
  CHECK(v2.metrics.at("structural_count") == 1.0);

  // deterministic blow-up: variance at machine precision
  SymMatrix b = blow_up(standard_model(), {40, 40});
  for (int i = 0; i < b.n; ++i) b.at(i, i) = 0.0;
  const WeightedGraph bg(b.n, std::move(b.data));
  const PropertyVerdict v3 = check_PI(bg, 2, t);
  CHECK(v3.pass);
  CHECK(v3.metrics.at("plain_kvariance") <= 1e-12);
}

TEST_CASE("check_PI_plus on the standard instance and a glued adversarial graph") {
  Thresholds t;
  const LabeledSample s = standard_sample(3);
  const PropertyVerdict v = check_PI_plus(s.graph, 2, standard_model(), t);
  CHECK(v.pass);
  CHECK(v.metrics.at("density_max_deviation") <= 0.03);

  // two SBM halves glued along a sparse cut do not match the model densities
  SymMatrix q(2);
  q.at(0, 0) = 0.3; q.at(1, 1) = 0.2;
  q.set_sym(0, 1, 0.05);
  const ModelGraph wrong = make_model(2, {0.5, 0.5}, q);
  const PropertyVerdict bad = check_PI_plus(s.graph, 2, wrong, t);
  CHECK_FALSE(bad.pass);
}

TEST_CASE("check_PII: pass on SBM, fail on star and K_n") {
  Thresholds t;
  const LabeledSample s = standard_sample(4);
  const PropertyVerdict v = check_PII(s.graph, 2, t);
  CHECK(v.pass);

  const PropertyVerdict star = check_PII(star_graph(60), 2, t);
  CHECK_FALSE(star.pass);
  CHECK(star.metrics.at("degree_exception_fraction") > t.exception_fraction);

  const PropertyVerdict kn = check_PII(oracle::complete_graph(40), 2, [] {
    Thresholds tt;
    tt.degree_c = 0.5;
    tt.degree_C = 1.0;
    return tt;
  }());
  CHECK_FALSE(kn.pass);  // no |mu| above delta
  CHECK(kn.metrics.at("structural_count") == 0.0);
}

TEST_CASE("check_PIII: K_{2,2} sides, SBM planted, and the k = 1 vacuous clause") {
  Thresholds t;
  t.theta = 0.1;
  const auto k22 = oracle::complete_bipartite(2, 2);
  const PropertyVerdict v = check_PIII(k22, Partition({0, 0, 1, 1}, 2), t);
  CHECK(v.pass);
  CHECK(v.metrics.at("md_partition") <= 1e-12);
  CHECK(v.metrics.at("lower_bound_md_1") > 0.1);  // exact md_1 fallback

  Thresholds ts;
  const LabeledSample s = standard_sample(5);
  const PropertyVerdict vs = check_PIII(s.graph, s.partition, ts);
  CHECK(vs.pass);
  CHECK(vs.metrics.at("lower_bound_md_1") > ts.theta);
  CHECK(vs.metrics.at("md_partition") <= ts.md_partition);

  const PropertyVerdict v1 = check_PIII(oracle::complete_graph(6),
                                        Partition(std::vector<int>(6, 0), 1), t);
  CHECK(v1.metrics.count("md_partition") == 1);
  CHECK(v1.metrics.count("lower_bound_md_1") == 0);  // vacuous theta clause
}

TEST_CASE("check_PIV: SBM pass, complete graph pass, bipartite fail") {
  Thresholds t;
  const LabeledSample s = standard_sample(6);
  const PropertyVerdict v = check_PIV(s.graph, s.partition, s.spec.model.P, t);
  CHECK(v.pass);
  CHECK(v.metrics.at("max_normalized_n3") <= 0.01);

  // Complete graph against p = 1: exact deviation sum is 2n(n-1) from the
  // off-diagonal pairs (|n-2 - n|) plus n from the diagonal (|n-1 - n|), so
  // the n^3-normalized statistic decays like 2/n.
  const int n = 24;
  SymMatrix ones(1);
  ones.at(0, 0) = 1.0;
  const PropertyVerdict kn =
      check_PIV(oracle::complete_graph(n), Partition(std::vector<int>(n, 0), 1), ones, t);
  const double expected = (2.0 * n * (n - 1) + n) / (static_cast<double>(n) * n * n);
  CHECK(kn.metrics.at("max_normalized_n3") == doctest::Approx(expected).epsilon(1e-12));

  // K_{m,m} with the trivial 1-partition: codegrees are bimodal
  const auto kmm = oracle::complete_bipartite(12, 12);
  SymMatrix half(1);
  half.at(0, 0) = 0.5;
  const PropertyVerdict bad =
      check_PIV(kmm, Partition(std::vector<int>(24, 0), 1), half, t);
  CHECK_FALSE(bad.pass);
}

TEST_CASE("check_PIV on a deterministic blow-up: exact diagonal-correction term") {
  // Weighted block-constant graph with zero diagonal. Off-diagonal blocks
  // deviate by 0; within block i the ordered pairs deviate by 2 p_ii^2
  // (u != v, both endpoints excluded from the common-neighbor sum) and by
  // p_ii^2 on the diagonal (one exclusion).
  const ModelGraph h = standard_model();
  SymMatrix b = blow_up(h, {20, 30});
  for (int i = 0; i < b.n; ++i) b.at(i, i) = 0.0;
  const WeightedGraph g(b.n, std::move(b.data));
  std::vector<int> labels(50, 0);
  for (int v = 20; v < 50; ++v) labels[v] = 1;
  const Partition planted(labels, 2);
  const CodegreeReport rep = codegree_report(g, planted, h.P);
  const std::vector<int> sizes{20, 30};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double p2 = h.P.at(i, i) * h.P.at(i, i);
      const double expected =
          i == j ? 2.0 * p2 * sizes[i] * (sizes[i] - 1) + p2 * sizes[i] : 0.0;
      CHECK(rep.sum_abs_deviation.at(i, j) == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("implication audit: PI+ pass implies PII and PIII pass at defaults") {
  Thresholds t;
  for (uint64_t seed : {7u, 8u}) {
    const LabeledSample s = standard_sample(seed);
    if (!check_PI_plus(s.graph, 2, standard_model(), t).pass) continue;
    CHECK(check_PII(s.graph, 2, t).pass);
    CHECK(check_PIII(s.graph, s.partition, t).pass);
  }
}

TEST_CASE("proposition-style bound audit on the standard instance") {
  Thresholds t;
  const LabeledSample s = standard_sample(9);
  const auto kv = k_variance(s.graph, 2, VarianceKind::weighted, t.restarts, t.seed);
  const double heur =
      partition_discrepancy_heuristic(s.graph, kv.partition, t.seed, t.heuristic_iters).value;
  const SpectralBounds b = discrepancy_spectral_bounds(s.graph, 2, kv.partition);
  CHECK(heur <= b.upper);
}

TEST_CASE("check_P0_proxy on the standard instance") {
  Thresholds t;
  const LabeledSample s = standard_sample(10);
  const PropertyVerdict v = check_P0_proxy(s.graph, 2, standard_model(), t);
  CHECK(v.pass);
  CHECK(v.notes.size() >= 1);  // labeled as a proxy
}

TEST_CASE("classify_structure") {
  const LabeledSample s = standard_sample(11);
  CHECK(classify_structure(s.graph, 2, 0.5) == StructureClass::community);

  SymMatrix p(2);
  p.at(0, 0) = 0.1; p.at(1, 1) = 0.1;
  p.set_sym(0, 1, 0.8);
  const ModelGraph dis = make_model(2, {0.5, 0.5}, p);
  const LabeledSample sd = sample(SampleSpec{dis, 300, 12, std::vector<int>{150, 150}});
  CHECK(classify_structure(sd.graph, 2, 0.5) == StructureClass::anticommunity);

  CHECK(classify_structure(oracle::complete_bipartite(2, 2), 2, 0.5) ==
        StructureClass::anticommunity);

  CHECK_THROWS_AS(classify_structure(oracle::complete_graph(6), 2, 0.5), Error);
}

TEST_CASE("rate sweep: PIV statistic decreases and jobs do not change values") {
  Thresholds t;
  t.restarts = 5;
  const std::vector<int> sizes{100, 200, 400};
  const std::vector<uint64_t> seeds{1, 2, 3};
  const RateReport a =
      rate_sweep(standard_model(), sizes, seeds, SweepMetric::piv_statistic, t, 1);
  const RateReport b =
      rate_sweep(standard_model(), sizes, seeds, SweepMetric::piv_statistic, t, 2);
  REQUIRE(a.cells.size() == b.cells.size());
  for (size_t i = 0; i < a.cells.size(); ++i) CHECK(a.cells[i].value == b.cells[i].value);
  for (size_t i = 1; i < a.means.size(); ++i) CHECK(a.means[i].second < a.means[i - 1].second);
  REQUIRE(a.slope.has_value());
  CHECK(*a.slope < 0.0);

  CHECK_THROWS_AS(rate_sweep(standard_model(), {100, 200}, seeds,
                             SweepMetric::piv_statistic, t, 1),
                  Error);
}

TEST_CASE("rate sweep: plain k-variance slope near -1") {
  Thresholds t;
  t.restarts = 8;
  const RateReport r = rate_sweep(standard_model(), {100, 200, 400}, {1, 2},
                                  SweepMetric::plain_kvariance, t, 2);
  REQUIRE(r.slope.has_value());
  CHECK(*r.slope <= -0.8);
  CHECK(r.target_exponent == -1.0);
}

TEST_CASE("sweep metric names round trip") {
  for (SweepMetric m : {SweepMetric::adjacency_nonstructural_sqrt, SweepMetric::mu_k,
                        SweepMetric::plain_kvariance, SweepMetric::weighted_kvariance,
                        SweepMetric::heuristic_md, SweepMetric::piv_statistic})
    CHECK(sweep_metric_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(sweep_metric_from_string("nope"), Error);
}
