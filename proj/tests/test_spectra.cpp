#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "core/generator.hpp"
#include "core/model.hpp"
#include "core/spectra.hpp"
#include "support/oracles.hpp"

using namespace qr;

namespace {

ModelGraph standard_model() {
  SymMatrix p(2);
  p.at(0, 0) = 0.8; p.at(1, 1) = 0.7;
  p.set_sym(0, 1, 0.1);
  return make_model(2, {0.5, 0.5}, p);
}

}  // namespace

TEST_CASE("modularity matrix: row sums vanish, K_2 closed form, scale invariance") {
  const auto k5 = oracle::complete_graph(5);
  const SymMatrix m = modularity_matrix(k5);
  for (int i = 0; i < 5; ++i) {
    double row = 0.0;
    for (int j = 0; j < 5; ++j) row += m.at(i, j);
    CHECK(std::abs(row) <= 1e-10);
  }

  const WeightedGraph k2(2, {0, 1, 1, 0});
  const SymMatrix m2 = modularity_matrix(k2);
  CHECK(m2.at(0, 0) == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(m2.at(0, 1) == doctest::Approx(0.25).epsilon(1e-12));

  const WeightedGraph k2scaled(2, {0, 7, 7, 0});
  const SymMatrix m2s = modularity_matrix(k2scaled);
  for (size_t i = 0; i < m2.data.size(); ++i)
    CHECK(m2s.data[i] == doctest::Approx(m2.data[i]).epsilon(1e-12));

  std::vector<double> w(16, 0.0);
  w[1] = w[4] = 1.0;
  w[11] = w[14] = 1.0;
  CHECK_THROWS_WITH_AS(modularity_matrix(WeightedGraph(4, std::move(w))),
                       doctest::Contains("irreducible"), Error);
}

TEST_CASE("normalized modularity matrix closed forms") {
  // K_4: spectrum {0, -1/3, -1/3, -1/3}
  const auto es = eigh(normalized_modularity_matrix(oracle::complete_graph(4)));
  for (int i = 0; i < 3; ++i) CHECK(es.values[i] == doctest::Approx(-1.0 / 3).epsilon(1e-9));
  CHECK(std::abs(es.values[3]) <= 1e-9);

  // K_{2,2} contains eigenvalue -1
  const auto eb = eigh(normalized_modularity_matrix(oracle::complete_bipartite(2, 2)));
  CHECK(eb.values[0] == doctest::Approx(-1.0).epsilon(1e-9));

  // spectrum within [-1, 1] and sqrt(d) in the kernel
  for (uint64_t seed = 0; seed < 4; ++seed) {
    auto g = oracle::erdos_renyi(20, 0.5, seed);
    if (!is_connected(g)) continue;
    const SymMatrix md = normalized_modularity_matrix(g);
    const auto e = eigh(md);
    for (double v : e.values) CHECK(std::abs(v) <= 1.0 + 1e-9);
    CHECK(std::abs(e.values.back()) <= 1e-9);
    const auto gn = normalize_weights(g);
    std::vector<double> rootd(20);
    for (int i = 0; i < 20; ++i) rootd[i] = std::sqrt(gn.degree(i));
    double res = 0.0;
    for (int i = 0; i < 20; ++i) {
      double s = 0.0;
      for (int j = 0; j < 20; ++j) s += md.at(i, j) * rootd[j];
      res += s * s;
    }
    CHECK(std::sqrt(res) <= 1e-8);
  }
}

TEST_CASE("structural_eigs thresholds") {
  EigenSystem es;
  es.values = {0.8, 0.05, 0.01, 0.0};
  es.vectors = Matrix(4, 4);
  const auto sel = structural_eigs(es, SpectrumKind::modularity, 4, 0.5, 1.0);
  CHECK(sel.count == 1);
  CHECK(sel.indices == std::vector<int>{0});
}

TEST_CASE("structural counts on the standard SBM instance") {
  int adj_ok = 0, mod_ok = 0;
  const int trials = 5;
  for (uint64_t seed = 1; seed <= trials; ++seed) {
    const LabeledSample s =
        sample(SampleSpec{standard_model(), 500, seed, std::vector<int>{250, 250}});
    const SpectralSummary sum = analyze_spectra(s.graph, 0.5, 1.0);
    if (sum.structural_count_adj == 2) ++adj_ok;
    if (sum.structural_count_mod == 1) ++mod_ok;
  }
  CHECK(adj_ok >= trials - 1);
  CHECK(mod_ok >= trials - 1);
}

TEST_CASE("scale invariance of modularity structural selection") {
  auto g = oracle::erdos_renyi(24, 0.5, 5);
  REQUIRE(is_connected(g));
  std::vector<double> scaled = g.weights();
  for (double& w : scaled) w *= 3.5;
  const WeightedGraph g2(24, std::move(scaled));
  const auto e1 = eigh(normalized_modularity_matrix(g));
  const auto e2 = eigh(normalized_modularity_matrix(g2));
  const auto s1 = structural_eigs(e1, SpectrumKind::modularity, 24, 0.2, 1.0);
  const auto s2 = structural_eigs(e2, SpectrumKind::modularity, 24, 0.2, 1.0);
  CHECK(s1.count == s2.count);
  CHECK(s1.indices == s2.indices);
}

TEST_CASE("blow-up matrix with loop diagonal matches the limit spectrum exactly") {
  const ModelGraph h = standard_model();
  const ModelSpectrum limit = model_spectrum(h);
  // sizes proportional to r: the k x k reduction equals the surrogate.
  const SymMatrix b = blow_up(h, {60, 60});
  const auto es = eigh(normalized_modularity_from_matrix(b));
  CHECK(std::abs(es.values[0] - limit.structural_values[0]) <= 1e-6);
  for (size_t i = 1; i < es.values.size(); ++i) CHECK(std::abs(es.values[i]) <= 1e-6);
}

TEST_CASE("spectrum_vs_model on samples and the k = 1 case") {
  const LabeledSample s =
      sample(SampleSpec{standard_model(), 500, 2, std::vector<int>{250, 250}});
  const ModelDeviation dev = spectrum_vs_model(s);
  REQUIRE(dev.structural_abs_error.size() == 1);
  CHECK(dev.structural_abs_error[0] <= 0.05);
  CHECK(dev.max_remaining <= 0.15);

  SymMatrix p1(1);
  p1.at(0, 0) = 0.5;
  const LabeledSample er = sample(SampleSpec{make_model(1, {1.0}, p1), 500, 3, std::nullopt});
  const ModelDeviation dev1 = spectrum_vs_model(er);
  CHECK(dev1.structural_abs_error.empty());
  CHECK(dev1.max_remaining <= 0.1);
}

TEST_CASE("gap table") {
  const auto gaps = gap_table({4.0, 2.0, 0.0});
  REQUIRE(gaps.size() == 2);
  CHECK(gaps[0] == doctest::Approx(2.0));
  CHECK(std::isinf(gaps[1]));
}
