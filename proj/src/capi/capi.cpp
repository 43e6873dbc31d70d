#include "quasirand.h"

#include <charconv>
#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "core/clustering.hpp"
#include "core/error.hpp"
#include "core/generator.hpp"
#include "core/graph.hpp"
#include "core/model.hpp"
#include "core/reports.hpp"

using nlohmann::json;

struct qr_graph {
  qr::WeightedGraph g;
};

struct qr_model {
  qr::ModelGraph m;
};

struct qr_sample {
  qr::LabeledSample s;
  qr_graph view;  // borrowed graph handle returned by qr_sample_graph
};

namespace {

thread_local std::string g_last_error;

qr_status status_of(const qr::Error& e) {
  using qr::ErrorCode;
  switch (e.code()) {
    case ErrorCode::invalid_argument: return QR_ERR_INVALID_ARGUMENT;
    case ErrorCode::parse: return QR_ERR_PARSE;
    case ErrorCode::empty_graph: return QR_ERR_EMPTY_GRAPH;
    case ErrorCode::disconnected: return QR_ERR_DISCONNECTED;
    case ErrorCode::cap_exceeded: return QR_ERR_CAP_EXCEEDED;
    case ErrorCode::budget_exceeded: return QR_ERR_BUDGET_EXCEEDED;
    case ErrorCode::resample_exhausted: return QR_ERR_RESAMPLE_EXHAUSTED;
    case ErrorCode::degenerate_subset: return QR_ERR_DEGENERATE_SUBSET;
    case ErrorCode::rank_deficient: return QR_ERR_RANK_DEFICIENT;
    case ErrorCode::isolated_class: return QR_ERR_ISOLATED_CLASS;
    case ErrorCode::no_structure: return QR_ERR_NO_STRUCTURE;
    case ErrorCode::internal: return QR_ERR_INTERNAL;
  }
  return QR_ERR_INTERNAL;
}

template <typename Fn>
qr_status wrap(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return QR_OK;
  } catch (const qr::Error& e) {
    g_last_error = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QR_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qr::VertexSet make_set(const qr_graph* g, const int* verts, int len) {
  if (len > 0 && verts == nullptr)
    qr::fail(qr::ErrorCode::invalid_argument, "null vertex array");
  return qr::VertexSet(std::vector<int>(verts, verts + len), g->g.n());
}

uint64_t get_seed(const json& j, const char* key, uint64_t dflt) {
  if (!j.contains(key)) return dflt;
  return j[key].get<uint64_t>();
}

}  // namespace

extern "C" {

const char* qr_version(void) { return qr::kToolVersion; }

const char* qr_last_error(void) { return g_last_error.c_str(); }

void qr_string_free(char* s) { std::free(s); }

qr_status qr_graph_parse_edge_list(const char* text, qr_graph** out) {
  return wrap([&] {
    if (!text || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    *out = new qr_graph{qr::parse_edge_list(text)};
  });
}

qr_status qr_graph_write_edge_list(const qr_graph* g, char** out) {
  return wrap([&] {
    if (!g || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    *out = dup_string(qr::write_edge_list(g->g));
  });
}

void qr_graph_free(qr_graph* g) { delete g; }

int qr_graph_vertex_count(const qr_graph* g) { return g ? g->g.n() : 0; }

int qr_graph_is_simple(const qr_graph* g) { return g && g->g.simple() ? 1 : 0; }

int qr_graph_is_connected(const qr_graph* g) { return g && qr::is_connected(g->g) ? 1 : 0; }

qr_status qr_graph_weight(const qr_graph* g, int u, int v, double* out) {
  return wrap([&] {
    if (!g || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    if (u < 0 || v < 0 || u >= g->g.n() || v >= g->g.n())
      qr::fail(qr::ErrorCode::invalid_argument, "vertex out of range");
    *out = g->g.weight(u, v);
  });
}

qr_status qr_graph_degree(const qr_graph* g, int u, double* out) {
  return wrap([&] {
    if (!g || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    if (u < 0 || u >= g->g.n()) qr::fail(qr::ErrorCode::invalid_argument, "vertex out of range");
    *out = g->g.degree(u);
  });
}

qr_status qr_graph_normalize(const qr_graph* g, qr_graph** out) {
  return wrap([&] {
    if (!g || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    *out = new qr_graph{qr::normalize_weights(g->g)};
  });
}

qr_status qr_graph_volume(const qr_graph* g, const int* verts, int len, double* out) {
  return wrap([&] {
    if (!g || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    *out = qr::volume(g->g, make_set(g, verts, len));
  });
}

qr_status qr_graph_weighted_cut(const qr_graph* g, const int* x, int xlen, const int* y,
                                int ylen, double* out) {
  return wrap([&] {
    if (!g || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    *out = qr::weighted_cut(g->g, make_set(g, x, xlen), make_set(g, y, ylen));
  });
}

qr_status qr_graph_volume_density(const qr_graph* g, const int* x, int xlen, const int* y,
                                  int ylen, double* out) {
  return wrap([&] {
    if (!g || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    *out = qr::volume_density(g->g, make_set(g, x, xlen), make_set(g, y, ylen));
  });
}

qr_status qr_model_parse_json(const char* text, qr_model** out) {
  return wrap([&] {
    if (!text || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    *out = new qr_model{qr::model_from_json(text)};
  });
}

qr_status qr_model_write_json(const qr_model* m, char** out) {
  return wrap([&] {
    if (!m || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    *out = dup_string(qr::model_to_json(m->m));
  });
}

void qr_model_free(qr_model* m) { delete m; }

int qr_model_class_count(const qr_model* m) { return m ? m->m.k : 0; }

qr_status qr_model_spectrum_json(const qr_model* m, char** out) {
  return wrap([&] {
    if (!m || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    const qr::ModelSpectrum s = qr::model_spectrum(m->m);
    json j;
    j["trivial_value"] = s.trivial_value;
    j["structural_values"] = s.structural_values;
    *out = dup_string(j.dump());
  });
}

qr_status qr_model_hom_density(const qr_model* m, const char* pattern, double* out) {
  return wrap([&] {
    if (!m || !pattern || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    *out = qr::model_hom_density(qr::parse_pattern(pattern), m->m);
  });
}

qr_status qr_model_blowup_spectrum(const qr_model* m, const int* sizes, int len,
                                   double* out_values) {
  return wrap([&] {
    if (!m || !sizes || !out_values) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    if (len != m->m.k) qr::fail(qr::ErrorCode::invalid_argument, "sizes must have length k");
    const auto values = qr::blowup_spectrum(m->m, std::vector<int>(sizes, sizes + len));
    for (int i = 0; i < m->m.k; ++i) out_values[i] = values[i];
  });
}

qr_status qr_model_graphon_value(const qr_model* m, double x, double y, double* out) {
  return wrap([&] {
    if (!m || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    *out = qr::graphon_value(m->m, x, y);
  });
}

qr_status qr_sample_create(const qr_model* m, int n, unsigned long long seed,
                           const int* fixed_sizes, int sizes_len, qr_sample** out) {
  return wrap([&] {
    if (!m || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    qr::SampleSpec spec;
    spec.model = m->m;
    spec.n = n;
    spec.seed = seed;
    if (fixed_sizes) spec.fixed_sizes = std::vector<int>(fixed_sizes, fixed_sizes + sizes_len);
    qr::LabeledSample s = qr::sample(spec);
    auto* handle = new qr_sample{std::move(s), qr_graph{qr::WeightedGraph(1, {0.0})}};
    handle->view.g = handle->s.graph;
    *out = handle;
  });
}

const qr_graph* qr_sample_graph(const qr_sample* s) { return s ? &s->view : nullptr; }

qr_status qr_sample_partition_json(const qr_sample* s, char** out) {
  return wrap([&] {
    if (!s || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    *out = dup_string(qr::partition_to_json(s->s.partition));
  });
}

qr_status qr_sample_sidecar_json(const qr_sample* s, char** out) {
  return wrap([&] {
    if (!s || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    *out = dup_string(qr::sample_sidecar_json(s->s));
  });
}

void qr_sample_free(qr_sample* s) { delete s; }

qr_status qr_analyze_json(const qr_graph* g, const char* options_json, char** out) {
  return wrap([&] {
    if (!g || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    json j = json::object();
    if (options_json && *options_json) {
      try {
        j = json::parse(options_json);
      } catch (const std::exception& e) {
        qr::fail(qr::ErrorCode::parse, std::string("analyze options: ") + e.what());
      }
    }
    qr::AnalyzeOptions opts;
    opts.k = j.value("k", opts.k);
    opts.delta = j.value("delta", opts.delta);
    opts.c_thr = j.value("c_thr", opts.c_thr);
    opts.epsilon = j.value("epsilon", opts.epsilon);
    opts.restarts = j.value("restarts", opts.restarts);
    opts.seed = get_seed(j, "seed", opts.seed);
    *out = dup_string(qr::analyze_report_json(g->g, opts));
  });
}

qr_status qr_discrepancy_json(const qr_graph* g, const char* options_json, char** out) {
  return wrap([&] {
    if (!g || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    json j = json::object();
    if (options_json && *options_json) {
      try {
        j = json::parse(options_json);
      } catch (const std::exception& e) {
        qr::fail(qr::ErrorCode::parse, std::string("discrepancy options: ") + e.what());
      }
    }
    qr::DiscrepancyOptions opts;
    if (j.contains("partition")) opts.partition = j["partition"].get<std::vector<int>>();
    if (j.contains("min_k")) opts.min_k = j["min_k"].get<int>();
    opts.mode = j.value("mode", opts.mode);
    opts.cap = j.value("cap", opts.cap);
    opts.seed = get_seed(j, "seed", opts.seed);
    opts.iters = j.value("iters", opts.iters);
    opts.bounds = j.value("bounds", opts.bounds);
    opts.exception_fraction = j.value("exception_fraction", opts.exception_fraction);
    opts.restarts = j.value("restarts", opts.restarts);
    *out = dup_string(qr::discrepancy_report_json(g->g, opts));
  });
}

qr_status qr_embedding_csv(const qr_graph* g, const char* options_json, char** out) {
  return wrap([&] {
    if (!g || !out) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    json j = json::object();
    if (options_json && *options_json) {
      try {
        j = json::parse(options_json);
      } catch (const std::exception& e) {
        qr::fail(qr::ErrorCode::parse, std::string("embedding options: ") + e.what());
      }
    }
    const int k = j.value("k", 2);
    const std::string source = j.value("source", "modularity");
    qr::Embedding e;
    if (source == "adjacency")
      e = qr::adjacency_representatives(g->g, k);
    else if (source == "modularity")
      e = qr::modularity_representatives(g->g, k);
    else
      qr::fail(qr::ErrorCode::invalid_argument, "embedding source must be adjacency or modularity");
    std::string csv;
    char buf[64];
    for (int i = 0; i < e.points.rows; ++i) {
      for (int c = 0; c < e.points.cols; ++c) {
        auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), e.points.at(i, c));
        (void)ec;
        if (c) csv += ',';
        csv.append(buf, p);
      }
      csv += '\n';
    }
    *out = dup_string(csv);
  });
}

qr_status qr_verify_json(const qr_graph* g, const char* options_json, char** out_json,
                         char** out_table, int* first_fail_index) {
  return wrap([&] {
    if (!g || !out_json) qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    json j = json::object();
    if (options_json && *options_json) {
      try {
        j = json::parse(options_json);
      } catch (const std::exception& e) {
        qr::fail(qr::ErrorCode::parse, std::string("verify options: ") + e.what());
      }
    }
    qr::VerifyOptions opts;
    if (j.contains("properties"))
      opts.properties = j["properties"].get<std::vector<std::string>>();
    else
      opts.properties = {"PI", "PI+", "PII", "PIII", "PIV", "P0"};
    if (j.contains("model")) opts.model = qr::model_from_json(j["model"].dump());
    if (j.contains("partition")) opts.partition = j["partition"].get<std::vector<int>>();
    if (j.contains("thresholds"))
      opts.thresholds = qr::thresholds_from_json(j["thresholds"].dump());
    opts.k = j.value("k", 0);
    const qr::VerifyOutcome res = qr::run_verify(g->g, opts);
    *out_json = dup_string(res.json);
    if (out_table) *out_table = dup_string(res.table);
    if (first_fail_index) *first_fail_index = res.first_fail_index;
  });
}

qr_status qr_sweep_csv(const qr_model* m, const char* options_json, char** out_csv,
                       char** out_summary_json) {
  return wrap([&] {
    if (!m || !out_csv || !out_summary_json)
      qr::fail(qr::ErrorCode::invalid_argument, "null argument");
    json j = json::object();
    if (options_json && *options_json) {
      try {
        j = json::parse(options_json);
      } catch (const std::exception& e) {
        qr::fail(qr::ErrorCode::parse, std::string("sweep options: ") + e.what());
      }
    }
    qr::SweepOptions opts;
    if (j.contains("sizes")) opts.sizes = j["sizes"].get<std::vector<int>>();
    if (j.contains("seeds")) opts.seeds = j["seeds"].get<std::vector<uint64_t>>();
    if (j.contains("metrics")) opts.metrics = j["metrics"].get<std::vector<std::string>>();
    if (j.contains("thresholds"))
      opts.thresholds = qr::thresholds_from_json(j["thresholds"].dump());
    opts.jobs = j.value("jobs", opts.jobs);
    const qr::SweepOutcome res = qr::run_sweep(m->m, opts);
    *out_csv = dup_string(res.csv);
    *out_summary_json = dup_string(res.summary_json);
  });
}

}  // extern "C"
