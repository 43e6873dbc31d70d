#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "core/generator.hpp"
#include "core/numerics.hpp"

using namespace qr;

namespace {

ModelGraph standard_model() {
  SymMatrix p(2);
  p.at(0, 0) = 0.8; p.at(1, 1) = 0.7;
  p.set_sym(0, 1, 0.1);
  return make_model(2, {0.5, 0.5}, p);
}

// Bypasses validation: P = [[0]] is rank-deficient, which make_model rightly
// rejects, but the sampler itself must still handle degenerate probabilities.
ModelGraph constant_model(double value) {
  SymMatrix p(1);
  p.at(0, 0) = value;
  return ModelGraph{1, {1.0}, p};
}

}  // namespace

TEST_CASE("degenerate probabilities") {
  const LabeledSample all = sample(SampleSpec{constant_model(1.0), 6, 3, std::nullopt});
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      CHECK(all.graph.weight(i, j) == (i == j ? 0.0 : 1.0));

  const LabeledSample none = sample(SampleSpec{constant_model(0.0), 6, 3, std::nullopt});
  CHECK(none.graph.total_weight() == 0.0);
}

TEST_CASE("determinism: identical spec gives byte-identical edge lists") {
  const SampleSpec spec{standard_model(), 60, 17, std::nullopt};
  const LabeledSample a = sample(spec);
  const LabeledSample b = sample(spec);
  CHECK(write_edge_list(a.graph) == write_edge_list(b.graph));
  CHECK(a.partition.labels() == b.partition.labels());
  const LabeledSample c = sample(SampleSpec{standard_model(), 60, 18, std::nullopt});
  CHECK(write_edge_list(a.graph) != write_edge_list(c.graph));
}

TEST_CASE("fixed sizes give consecutive blocks and exact balancing") {
  const SampleSpec spec{standard_model(), 40, 5, std::vector<int>{25, 15}};
  const LabeledSample s = sample(spec);
  CHECK(s.partition.sizes() == std::vector<int>{25, 15});
  for (int v = 0; v < 25; ++v) CHECK(s.partition.label(v) == 0);
  for (int v = 25; v < 40; ++v) CHECK(s.partition.label(v) == 1);

  CHECK_THROWS_AS(sample(SampleSpec{standard_model(), 40, 5, std::vector<int>{41, -1}}), Error);
  CHECK_THROWS_AS(sample(SampleSpec{standard_model(), 40, 5, std::vector<int>{10, 10}}), Error);
}

TEST_CASE("cross-cluster edge counts concentrate") {
  // E = 0.1 * 250 * 250 = 6250, sigma = sqrt(62500 * 0.1 * 0.9) = 75.
  int within = 0;
  const int trials = 6;
  for (uint64_t seed = 1; seed <= trials; ++seed) {
    const LabeledSample s =
        sample(SampleSpec{standard_model(), 500, seed, std::vector<int>{250, 250}});
    double cross = 0.0;
    for (int u = 0; u < 250; ++u)
      for (int v = 250; v < 500; ++v) cross += s.graph.weight(u, v);
    if (std::abs(cross - 6250.0) <= 3.0 * 75.0) ++within;
  }
  CHECK(within >= trials - 1);
}

TEST_CASE("per-block edge counts within 4 sigma on all 20 acceptance seeds") {
  const ModelGraph h = standard_model();
  const int half = 250;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    const LabeledSample s = sample(SampleSpec{h, 500, seed, std::vector<int>{half, half}});
    for (int i = 0; i < 2; ++i) {
      for (int j = i; j < 2; ++j) {
        const double p = h.P.at(i, j);
        const double pairs = i == j ? half * (half - 1) / 2.0 : 1.0 * half * half;
        double count = 0.0;
        for (int u = 0; u < 500; ++u) {
          if (s.partition.label(u) != i) continue;
          for (int v = i == j ? u + 1 : 0; v < 500; ++v)
            if (s.partition.label(v) == j && (i != j || v > u))
              count += s.graph.weight(u, v);
        }
        const double sigma = std::sqrt(pairs * p * (1.0 - p));
        CHECK(std::abs(count - pairs * p) <= 4.0 * sigma);
      }
    }
  }
}

TEST_CASE("decompose: exactness and noise norm") {
  const LabeledSample ones = sample(SampleSpec{constant_model(1.0), 5, 1, std::nullopt});
  const auto [b1, w1] = decompose(ones);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      CHECK(b1.at(i, j) == 1.0);
      CHECK(w1.at(i, j) == (i == j ? -1.0 : 0.0));
    }

  const LabeledSample s = sample(SampleSpec{standard_model(), 120, 9, std::nullopt});
  const auto [b, w] = decompose(s);
  for (int i = 0; i < 120; ++i)
    for (int j = 0; j < 120; ++j)
      CHECK(s.graph.weight(i, j) == b.at(i, j) + w.at(i, j));  // A = B + W exactly
  CHECK(spectral_norm(w) <= 3.0 * std::sqrt(120.0));
}

TEST_CASE("multinomial mode errors after exhausting resamples") {
  SymMatrix p(2);
  p.at(0, 0) = 0.5; p.at(1, 1) = 0.5; p.set_sym(0, 1, 0.1);
  // The second class is so unlikely that n = 2 draws keep missing it; the
  // sampler must give up with the documented error.
  const ModelGraph h{2, {1.0 - 1e-9, 1e-9}, p};
  CHECK_THROWS_AS(sample(SampleSpec{h, 2, 4, std::nullopt}), Error);
  try {
    sample(SampleSpec{h, 2, 4, std::nullopt});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::resample_exhausted);
  }
}

TEST_CASE("balancing report") {
  const ModelGraph h = standard_model();
  std::vector<LabeledSample> fixed;
  for (int n : {40, 80, 160})
    fixed.push_back(sample(SampleSpec{h, n, 2, std::vector<int>{n / 2, n / 2}}));
  const BalancingReport r = balancing_report(fixed, 0.3);
  for (const auto& e : r.entries) CHECK(e.max_deviation == 0.0);
  CHECK(r.weak_condition_holds);
  CHECK(r.deviation_monotone);
  CHECK_FALSE(r.trend_slope.has_value());

  std::vector<LabeledSample> multi;
  for (int n : {200, 400, 800, 1600})
    multi.push_back(sample(SampleSpec{h, n, 11, std::nullopt}));
  const BalancingReport rm = balancing_report(multi, 0.3);
  CHECK(rm.entries.back().max_deviation <= 0.06);  // ~3 sigma at n = 1600
  CHECK(rm.weak_condition_holds);

  CHECK_THROWS_AS(balancing_report({fixed[0]}, 0.3), Error);
}

TEST_CASE("n below k is rejected") {
  CHECK_THROWS_AS(sample(SampleSpec{standard_model(), 1, 0, std::nullopt}), Error);
}
