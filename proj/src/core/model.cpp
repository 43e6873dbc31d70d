#include "core/model.hpp"

#include <cmath>
#include <numeric>

#include <json.hpp>

#include "core/error.hpp"

namespace qr {

std::vector<double> ModelGraph::class_degrees() const {
  std::vector<double> d(k, 0.0);
  for (int i = 0; i < k; ++i)
    for (int l = 0; l < k; ++l) d[i] += P.at(i, l) * r[l];
  return d;
}

ModelGraph make_model(int k, std::vector<double> r, SymMatrix P) {
  if (k < 1) fail(ErrorCode::invalid_argument, "model: k must be at least 1");
  if (static_cast<int>(r.size()) != k)
    fail(ErrorCode::invalid_argument, "model: r must have length k");
  double sum = 0.0;
  for (double ri : r) {
    if (!(ri > 0.0)) fail(ErrorCode::invalid_argument, "model: every r_i must be positive");
    sum += ri;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    fail(ErrorCode::invalid_argument, "model: r must sum to 1 within 1e-12");
  if (P.n != k) fail(ErrorCode::invalid_argument, "model: P must be k x k");
  if (P.max_asymmetry() > 1e-12)
    fail(ErrorCode::invalid_argument, "model: P must be symmetric");
  for (double p : P.data)
    if (!(p >= 0.0 && p <= 1.0))
      fail(ErrorCode::invalid_argument, "model: P entries must lie in [0,1]");
  // Exact symmetry downstream.
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      const double v = 0.5 * (P.at(i, j) + P.at(j, i));
      P.set_sym(i, j, v);
    }
  const auto es = eigh(P);
  if (std::abs(es.values.back()) <= 1e-8)
    fail(ErrorCode::rank_deficient,
         "model: rank(P) = k violated (smallest |eigenvalue| <= 1e-8)");
  return ModelGraph{k, std::move(r), std::move(P)};
}

ModelGraph model_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::parse, std::string("model json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("k") || !j.contains("r") || !j.contains("P"))
    fail(ErrorCode::parse, "model json: expected object with keys k, r, P");
  if (!j["k"].is_number_integer()) fail(ErrorCode::parse, "model json: k must be an integer");
  const int k = j["k"].get<int>();
  if (!j["r"].is_array()) fail(ErrorCode::parse, "model json: r must be an array");
  std::vector<double> r;
  for (const auto& v : j["r"]) {
    if (!v.is_number()) fail(ErrorCode::parse, "model json: r entries must be numbers");
    r.push_back(v.get<double>());
  }
  if (!j["P"].is_array() || static_cast<int>(j["P"].size()) != k)
    fail(ErrorCode::parse, "model json: P must be a k x k array");
  SymMatrix P(k);
  for (int i = 0; i < k; ++i) {
    const auto& prow = j["P"][i];
    if (!prow.is_array() || static_cast<int>(prow.size()) != k)
      fail(ErrorCode::parse, "model json: P must be a k x k array");
    for (int c = 0; c < k; ++c) {
      if (!prow[c].is_number()) fail(ErrorCode::parse, "model json: P entries must be numbers");
      P.at(i, c) = prow[c].get<double>();
    }
  }
  return make_model(k, std::move(r), std::move(P));
}

std::string model_to_json(const ModelGraph& h) {
  nlohmann::json j;
  j["k"] = h.k;
  j["r"] = h.r;
  auto rows = nlohmann::json::array();
  for (int i = 0; i < h.k; ++i) {
    auto row = nlohmann::json::array();
    for (int c = 0; c < h.k; ++c) row.push_back(h.P.at(i, c));
    rows.push_back(row);
  }
  j["P"] = rows;
  return j.dump();
}

SymMatrix blow_up(const ModelGraph& h, const std::vector<int>& sizes) {
  if (static_cast<int>(sizes.size()) != h.k)
    fail(ErrorCode::invalid_argument, "blow_up: sizes must have length k");
  int n = 0;
  for (int s : sizes) {
    if (s <= 0) fail(ErrorCode::invalid_argument, "blow_up: sizes must be positive");
    n += s;
  }
  std::vector<int> cls(n);
  int pos = 0;
  for (int i = 0; i < h.k; ++i)
    for (int c = 0; c < sizes[i]; ++c) cls[pos++] = i;
  SymMatrix b(n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) b.at(u, v) = h.P.at(cls[u], cls[v]);
  return b;
}

std::vector<double> blowup_spectrum(const ModelGraph& h, const std::vector<int>& sizes) {
  if (static_cast<int>(sizes.size()) != h.k)
    fail(ErrorCode::invalid_argument, "blowup_spectrum: sizes must have length k");
  SymMatrix m(h.k);
  for (int i = 0; i < h.k; ++i) {
    if (sizes[i] <= 0) fail(ErrorCode::invalid_argument, "blowup_spectrum: sizes must be positive");
    for (int j = 0; j < h.k; ++j)
      m.at(i, j) = h.P.at(i, j) * std::sqrt(static_cast<double>(sizes[i]) * sizes[j]);
  }
  return eigh(m).values;
}

ModelSpectrum model_spectrum(const ModelGraph& h) {
  const auto d = h.class_degrees();
  for (double di : d)
    if (!(di > 0.0)) fail(ErrorCode::isolated_class, "isolated class");
  SymMatrix b(h.k);
  for (int i = 0; i < h.k; ++i)
    for (int j = 0; j < h.k; ++j)
      b.at(i, j) = h.P.at(i, j) * std::sqrt(h.r[i] * h.r[j]) / std::sqrt(d[i] * d[j]);
  const auto es = eigh(b);
  ModelSpectrum out;
  out.trivial_value = es.values[0];
  if (std::abs(out.trivial_value - 1.0) > 1e-9)
    fail(ErrorCode::internal, "model_spectrum: trivial eigenvalue is not 1");
  out.structural_values.assign(es.values.begin() + 1, es.values.end());
  return out;
}

double graphon_value(const ModelGraph& h, double x, double y) {
  if (!(x >= 0.0 && x < 1.0 && y >= 0.0 && y < 1.0))
    fail(ErrorCode::invalid_argument, "graphon_value: arguments must lie in [0,1)");
  auto locate = [&](double t) {
    double acc = 0.0;
    for (int i = 0; i < h.k; ++i) {
      acc += h.r[i];
      if (t < acc) return i;
    }
    return h.k - 1;
  };
  return h.P.at(locate(x), locate(y));
}

double model_hom_density(const SimpleGraphPattern& f, const ModelGraph& h) {
  if (f.s > 8) fail(ErrorCode::budget_exceeded, "model_hom_density: pattern too large");
  std::vector<int> psi(f.s, 0);
  // Edges whose second endpoint is v, available once psi[0..v] is set.
  std::vector<std::vector<int>> attached(f.s);
  for (auto [u, v] : f.edges) attached[v].push_back(u);

  double total = 0.0;
  std::vector<double> partial(f.s + 1, 1.0);
  int depth = 0;
  while (true) {
    if (depth == f.s) {
      total += partial[depth];
      --depth;
      ++psi[depth];
    } else if (psi[depth] >= h.k) {
      psi[depth] = 0;
      if (depth == 0) break;
      --depth;
      ++psi[depth];
    } else {
      double w = partial[depth] * h.r[psi[depth]];
      for (int u : attached[depth]) w *= h.P.at(psi[u], psi[depth]);
      partial[depth + 1] = w;
      ++depth;
      if (depth < f.s) psi[depth] = 0;
    }
  }
  return total;
}

}  // namespace qr
