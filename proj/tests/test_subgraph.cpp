#include <doctest.h>

#include <cmath>

#include "core/error.hpp"
#include "core/generator.hpp"
#include "core/model.hpp"
#include "core/numerics.hpp"
#include "core/subgraph.hpp"
#include "support/oracles.hpp"

using namespace qr;

TEST_CASE("hom_count closed forms") {
  const auto k3 = oracle::complete_graph(3);
  CHECK(hom_count(parse_pattern("C4"), k3) == doctest::Approx(18.0).epsilon(1e-12));
  CHECK(hom_count(parse_pattern("edge"), k3) == doctest::Approx(6.0));
  CHECK(hom_count(parse_pattern("vertex"), k3) == 3.0);

  const WeightedGraph empty(4, std::vector<double>(16, 0.0));
  CHECK(hom_count(parse_pattern("edge"), empty) == 0.0);
  CHECK(hom_count(parse_pattern("C3"), empty) == 0.0);
}

TEST_CASE("hom_count equals brute force for cycles, paths and ad-hoc patterns") {
  const auto patterns = {parse_pattern("C3"), parse_pattern("C4"), parse_pattern("P3"),
                         parse_pattern("P4"), parse_pattern("K3"),
                         parse_pattern("4; 0-1,1-2,2-3,3-0,0-2")};
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const auto g = oracle::erdos_renyi(9, 0.5, seed + 13);
    for (const auto& f : patterns)
      CHECK(hom_count(f, g) == doctest::Approx(oracle::hom_bruteforce(f, g)).epsilon(1e-9));
  }
}

TEST_CASE("hom(C_t) equals the eigenvalue power sum") {
  for (uint64_t seed = 0; seed < 4; ++seed) {
    const auto g = oracle::erdos_renyi(18, 0.45, seed + 21);
    const auto values = eigh(g.adjacency()).values;
    for (int t = 3; t <= 6; ++t) {
      double power_sum = 0.0;
      for (double v : values) power_sum += std::pow(v, t);
      const double hom = hom_count(parse_pattern("C" + std::to_string(t)), g);
      if (power_sum != 0.0)
        CHECK(hom == doctest::Approx(power_sum).epsilon(1e-6));
      else
        CHECK(std::abs(hom) <= 1e-6);
    }
  }
}

TEST_CASE("hom_density closed forms") {
  const int n = 20;
  const auto kn = oracle::complete_graph(n);
  CHECK(hom_density(parse_pattern("vertex"), kn) == 1.0);
  // hom(C4, K_n) = (n-1)^4 + (n-1)
  const double expected = (std::pow(n - 1.0, 4) + (n - 1.0)) / std::pow(n, 4);
  CHECK(hom_density(parse_pattern("C4"), kn) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("hom density converges to the model value on samples") {
  SymMatrix p(2);
  p.at(0, 0) = 0.8; p.at(1, 1) = 0.7;
  p.set_sym(0, 1, 0.1);
  const ModelGraph h = make_model(2, {0.5, 0.5}, p);
  const LabeledSample s = sample(SampleSpec{h, 500, 5, std::vector<int>{250, 250}});
  for (const char* name : {"edge", "C3", "C4"}) {
    const auto f = parse_pattern(name);
    CHECK(std::abs(hom_density(f, s.graph) - model_hom_density(f, h)) <= 0.05);
  }
}

TEST_CASE("induced_count") {
  const auto k3 = oracle::complete_graph(3);
  CHECK(induced_count(parse_pattern("edge"), k3) == 6);
  CHECK(induced_count(parse_pattern("2;"), k3) == 0);  // non-edge in K_3

  const auto g = oracle::erdos_renyi(100, 0.5, 3);
  const double frac =
      static_cast<double>(induced_count(parse_pattern("edge"), g)) / (100.0 * 99.0);
  CHECK(std::abs(frac - 0.5) <= 0.05);

  // N*(K_s) equals the number of injective homomorphisms of K_s
  for (uint64_t seed = 0; seed < 3; ++seed) {
    const auto gg = oracle::erdos_renyi(10, 0.6, seed + 31);
    // injective homs of K_3 = ordered triangles = hom(C3) (all C3 homs are injective)
    CHECK(static_cast<double>(induced_count(parse_pattern("K3"), gg)) ==
          doctest::Approx(hom_count(parse_pattern("C3"), gg)).epsilon(1e-12));
  }
}

TEST_CASE("cluster degrees") {
  const auto k22 = oracle::complete_bipartite(2, 2);
  const Partition sides({0, 0, 1, 1}, 2);
  const ClusterDegrees cd = cluster_degrees(k22, sides);
  CHECK(cd.n1.at(0, 1) == 2.0);  // toward the other side
  CHECK(cd.n1.at(0, 0) == 0.0);  // own side
  CHECK(cd.block_density.at(0, 1) == doctest::Approx(1.0));
  CHECK(cd.block_density.at(0, 0) == 0.0);
}

TEST_CASE("codegree values on C_4") {
  const auto c4 = oracle::cycle_graph(4);
  const VertexSet all = VertexSet::full(4);
  CHECK(codegree(c4, 0, 2, all) == 2.0);  // opposite pair
  CHECK(codegree(c4, 0, 1, all) == 0.0);  // adjacent pair
}

TEST_CASE("codegree identities hold exactly") {
  for (uint64_t seed = 0; seed < 6; ++seed) {
    const auto g = oracle::erdos_renyi(14, 0.5, seed + 61);
    std::mt19937_64 eng(seed);
    std::vector<int> labels(14);
    for (int v = 0; v < 14; ++v) labels[v] = static_cast<int>(eng() % 2);
    labels[0] = 0;
    labels[1] = 1;
    const Partition p(labels, 2);
    for (int i = 0; i < 2; ++i) {
      const auto ui = p.cluster_members(i);
      for (int j = 0; j < 2; ++j) {
        const auto uj = p.cluster_members(j);
        const VertexSet uj_set(uj, 14);
        // sum over ordered pairs u,v in U_i of N_2(u,v;U_j)
        double lhs = 0.0;
        for (int u : ui)
          for (int v : ui) lhs += codegree(g, u, v, uj_set);
        // equals sum over t in U_j of N_1(t;U_i)^2
        double rhs = 0.0;
        for (int t : uj) {
          double n1 = 0.0;
          for (int u : ui) n1 += g.weight(t, u);
          rhs += n1 * n1;
        }
        CHECK(lhs == rhs);  // exact: integer arithmetic in doubles

        // Cauchy-Schwarz lower bound with the block edge count
        double cut = 0.0;
        for (int u : ui)
          for (int t : uj) cut += g.weight(u, t);
        CHECK(lhs * uj.size() >= cut * cut - 1e-9);
      }
    }
  }
}

TEST_CASE("codegree report: estimate mode and planted mode") {
  SymMatrix p(2);
  p.at(0, 0) = 0.8; p.at(1, 1) = 0.7;
  p.set_sym(0, 1, 0.1);
  const ModelGraph h = make_model(2, {0.5, 0.5}, p);
  const LabeledSample s = sample(SampleSpec{h, 500, 1, std::vector<int>{250, 250}});

  const CodegreeReport planted = codegree_report(s.graph, s.partition, h.P);
  CHECK_FALSE(planted.p_estimated);
  double worst = 0.0;
  for (double v : planted.normalized_n3.data) worst = std::max(worst, v);
  CHECK(worst <= 0.01);

  const CodegreeReport est = codegree_report(s.graph, s.partition);
  CHECK(est.p_estimated);
  CHECK(est.p_used.at(0, 1) == doctest::Approx(0.1).epsilon(0.3));
}

TEST_CASE("budget guard") {
  const auto g = oracle::erdos_renyi(60, 0.9, 2);
  CHECK_THROWS_AS(hom_count(parse_pattern("5; 0-1,0-2,0-3,0-4"), g, 1000), Error);
  CHECK_THROWS_AS(induced_count(parse_pattern("P5"), g, 1000), Error);
}
