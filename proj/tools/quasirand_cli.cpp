// Command-line front end over the quasirand C API: generation, analysis,
// discrepancy, property verification, rate sweeps, and manifest replay.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quasirand.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitInvalid = 2;
constexpr int kExitResample = 3;
constexpr int kExitDisconnected = 4;
constexpr int kExitCap = 5;
constexpr int kExitInternal = 70;
constexpr int kExitVerifyBase = 10;

int exit_code_of(qr_status s) {
  switch (s) {
    case QR_OK: return kExitOk;
    case QR_ERR_PARSE:
    case QR_ERR_INVALID_ARGUMENT:
    case QR_ERR_RANK_DEFICIENT:
    case QR_ERR_ISOLATED_CLASS:
    case QR_ERR_EMPTY_GRAPH: return kExitInvalid;
    case QR_ERR_RESAMPLE_EXHAUSTED: return kExitResample;
    case QR_ERR_DISCONNECTED: return kExitDisconnected;
    case QR_ERR_CAP_EXCEEDED:
    case QR_ERR_BUDGET_EXCEEDED: return kExitCap;
    default: return kExitInternal;
  }
}

int complain(qr_status s) {
  std::cerr << "error: " << qr_last_error() << "\n";
  return exit_code_of(s);
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

// Owns a string returned by the library.
struct ApiString {
  char* p = nullptr;
  ~ApiString() { qr_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct GraphHandle {
  qr_graph* g = nullptr;
  ~GraphHandle() { qr_graph_free(g); }
};

struct ModelHandle {
  qr_model* m = nullptr;
  ~ModelHandle() { qr_model_free(m); }
};

struct SampleHandle {
  qr_sample* s = nullptr;
  ~SampleHandle() { qr_sample_free(s); }
};

int load_graph(const std::string& path, GraphHandle& gh) {
  const auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return kExitIo;
  }
  const qr_status st = qr_graph_parse_edge_list(text->c_str(), &gh.g);
  if (st != QR_OK) return complain(st);
  return kExitOk;
}

int load_model(const std::string& path, ModelHandle& mh) {
  const auto text = read_file(path);
  if (!text) {
    std::cerr << "error: cannot read " << path << "\n";
    return kExitIo;
  }
  const qr_status st = qr_model_parse_json(text->c_str(), &mh.m);
  if (st != QR_OK) return complain(st);
  return kExitOk;
}

int write_manifest(const std::string& primary_out, const std::string& command,
                   const std::vector<std::string>& argv, const json& inputs,
                   const json& outputs, unsigned long long seed, const json& params) {
  json m;
  m["tool_version"] = qr_version();
  m["command"] = command;
  m["argv"] = argv;
  m["inputs"] = inputs;
  m["outputs"] = outputs;
  m["seed"] = seed;
  m["params"] = params;
  const std::string path = primary_out + ".manifest.json";
  if (!write_file(path, m.dump(2) + "\n")) {
    std::cerr << "error: cannot write " << path << "\n";
    return kExitIo;
  }
  return kExitOk;
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

std::vector<unsigned long long> parse_seed_list(const std::string& s) {
  std::vector<unsigned long long> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoull(item));
  return out;
}

std::vector<std::string> parse_string_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int default_jobs() {
  if (const char* env = std::getenv("QUASIRAND_JOBS")) {
    const int j = std::atoi(env);
    if (j >= 1) return j;
  }
  return 1;
}

// Minimal SVG line chart of per-metric means against n.
std::string sweep_svg(const json& summary) {
  const int width = 640, height = 420, margin = 60;
  std::ostringstream svg;
  svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "'>\n<rect width='100%' height='100%' fill='white'/>\n";
  double max_n = 1, max_v = 1e-300;
  for (const auto& m : summary["metrics"])
    for (const auto& pt : m["means"]) {
      max_n = std::max(max_n, pt["n"].get<double>());
      max_v = std::max(max_v, pt["mean"].get<double>());
    }
  auto px = [&](double n) { return margin + (width - 2 * margin) * n / max_n; };
  auto py = [&](double v) { return height - margin - (height - 2 * margin) * v / max_v; };
  svg << "<line x1='" << margin << "' y1='" << height - margin << "' x2='" << width - margin
      << "' y2='" << height - margin << "' stroke='black'/>\n";
  svg << "<line x1='" << margin << "' y1='" << margin << "' x2='" << margin << "' y2='"
      << height - margin << "' stroke='black'/>\n";
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  int ci = 0;
  for (const auto& m : summary["metrics"]) {
    const char* color = colors[ci++ % 6];
    std::ostringstream pts;
    for (const auto& pt : m["means"])
      pts << px(pt["n"].get<double>()) << "," << py(pt["mean"].get<double>()) << " ";
    svg << "<polyline fill='none' stroke='" << color << "' points='" << pts.str() << "'/>\n";
    svg << "<text x='" << width - margin + 4 << "' y='" << margin + 16 * ci << "' fill='" << color
        << "' font-size='10'>" << m["metric"].get<std::string>() << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

int run_cli(const std::vector<std::string>& args, int depth);

int cmd_replay(const std::string& manifest_path, int depth) {
  const auto text = read_file(manifest_path);
  if (!text) {
    std::cerr << "error: cannot read " << manifest_path << "\n";
    return kExitIo;
  }
  json m;
  try {
    m = json::parse(*text);
  } catch (const std::exception& e) {
    std::cerr << "error: bad manifest: " << e.what() << "\n";
    return kExitInvalid;
  }
  if (!m.contains("argv") || !m["argv"].is_array()) {
    std::cerr << "error: manifest has no argv\n";
    return kExitInvalid;
  }
  if (depth > 0) {
    std::cerr << "error: nested replay\n";
    return kExitInvalid;
  }
  std::vector<std::string> argv;
  for (const auto& a : m["argv"]) argv.push_back(a.get<std::string>());
  return run_cli(argv, depth + 1);
}

int run_cli(const std::vector<std::string>& args, int depth) {
  CLI::App app{"quasirand: multiclass (quasi)random graph generation and spectral analysis"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a labeled graph from a model");
  std::string gen_model, gen_out, gen_fixed;
  int gen_n = 0;
  unsigned long long gen_seed = 0;
  gen->add_option("model", gen_model, "model JSON file")->required();
  gen->add_option("--n", gen_n, "vertex count")->required();
  gen->add_option("--seed", gen_seed, "RNG seed (default 0)");
  gen->add_option("--fixed-sizes", gen_fixed, "comma-separated cluster sizes");
  gen->add_option("--out", gen_out, "output edge-list path")->required();

  // analyze
  auto* ana = app.add_subcommand("analyze", "Spectra, k-variances and classification");
  std::string ana_graph, ana_out, ana_partition_out, ana_embedding_out, ana_embedding_source =
      "modularity";
  int ana_k = 2, ana_restarts = 20;
  double ana_delta = 0.5, ana_cthr = 1.0, ana_epsilon = 0.25;
  unsigned long long ana_seed = 0;
  ana->add_option("graph", ana_graph, "edge-list file")->required();
  ana->add_option("--k", ana_k, "cluster count")->required();
  ana->add_option("--delta", ana_delta, "modularity structural threshold (default 0.5)");
  ana->add_option("--c-thr", ana_cthr, "adjacency structural threshold scale (default 1.0)");
  ana->add_option("--epsilon", ana_epsilon, "k-clusterable ratio cut (default 0.25)");
  ana->add_option("--restarts", ana_restarts, "k-means restarts (default 20)");
  ana->add_option("--seed", ana_seed, "RNG seed (default 0)");
  ana->add_option("--out", ana_out, "report JSON path (stdout when absent)");
  ana->add_option("--partition-out", ana_partition_out, "write the weighted-variance partition");
  ana->add_option("--embedding-out", ana_embedding_out, "write representatives as CSV");
  ana->add_option("--embedding-source", ana_embedding_source, "adjacency|modularity");

  // discrepancy
  auto* dis = app.add_subcommand("discrepancy", "Multiway discrepancy of a partition or md_k");
  std::string dis_graph, dis_partition, dis_mode = "exact", dis_out;
  int dis_mink = 0, dis_cap = 24, dis_iters = 50, dis_restarts = 20;
  unsigned long long dis_seed = 0;
  bool dis_bounds = false;
  dis->add_option("graph", dis_graph, "edge-list file")->required();
  dis->add_option("--partition", dis_partition, "partition JSON file");
  dis->add_option("--min-k", dis_mink, "minimize over proper k-partitions");
  dis->add_option("--mode", dis_mode, "exact|heuristic|spectral_seeded (default exact)");
  dis->add_option("--cap", dis_cap, "exact enumeration cap (default 24)");
  dis->add_option("--seed", dis_seed, "RNG seed (default 0)");
  dis->add_option("--iters", dis_iters, "heuristic restarts (default 50)");
  dis->add_flag("--bounds", dis_bounds, "attach the spectral bracket");
  dis->add_option("--restarts", dis_restarts, "k-means restarts for seeded modes");
  dis->add_option("--out", dis_out, "result JSON path (stdout when absent)");

  // verify
  auto* ver = app.add_subcommand("verify", "Run the property checkers");
  std::string ver_graph, ver_props, ver_model, ver_partition, ver_thresholds, ver_out;
  int ver_k = 0;
  ver->add_option("graph", ver_graph, "edge-list file")->required();
  ver->add_option("--properties", ver_props, "comma list from PI,PI+,PII,PIII,PIV,P0");
  ver->add_option("--model", ver_model, "model JSON file (needed for PI+ and P0)");
  ver->add_option("--partition", ver_partition, "partition JSON file");
  ver->add_option("--thresholds", ver_thresholds, "thresholds JSON file");
  ver->add_option("--k", ver_k, "cluster count (default: model's k)");
  ver->add_option("--out", ver_out, "verdict JSON path (stdout when absent)");

  // sweep
  auto* swp = app.add_subcommand("sweep", "Rate sweeps over a size/seed grid");
  std::string swp_model, swp_sizes, swp_seeds, swp_metrics = "piv_statistic", swp_csv,
      swp_summary, swp_svg;
  int swp_jobs = default_jobs();
  swp->add_option("model", swp_model, "model JSON file")->required();
  swp->add_option("--sizes", swp_sizes, "comma list of sizes (at least 3)")->required();
  swp->add_option("--seeds", swp_seeds, "comma list of seeds")->required();
  swp->add_option("--metrics", swp_metrics, "comma list of sweep metrics");
  swp->add_option("--out-csv", swp_csv, "CSV output path")->required();
  swp->add_option("--out-summary", swp_summary, "summary JSON path");
  swp->add_option("--svg", swp_svg, "write a simple SVG chart of the means");
  swp->add_option("--jobs", swp_jobs, "worker count (env QUASIRAND_JOBS)");

  // replay
  auto* rep = app.add_subcommand("replay", "Re-run a command from its manifest");
  std::string rep_manifest;
  rep->add_option("manifest", rep_manifest, "manifest JSON file")->required();

  std::vector<const char*> argv;
  argv.push_back("quasirand");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInvalid;
  }

  if (gen->parsed()) {
    std::cerr << "seed: " << gen_seed << "\n";
    ModelHandle mh;
    if (int rc = load_model(gen_model, mh)) return rc;
    std::vector<int> sizes;
    if (!gen_fixed.empty()) sizes = parse_int_list(gen_fixed);
    SampleHandle sh;
    qr_status st = qr_sample_create(mh.m, gen_n, gen_seed, sizes.empty() ? nullptr : sizes.data(),
                                    static_cast<int>(sizes.size()), &sh.s);
    if (st != QR_OK) return complain(st);
    ApiString edges, sidecar;
    if ((st = qr_graph_write_edge_list(qr_sample_graph(sh.s), &edges.p)) != QR_OK)
      return complain(st);
    if ((st = qr_sample_sidecar_json(sh.s, &sidecar.p)) != QR_OK) return complain(st);
    if (!write_file(gen_out, edges.str())) {
      std::cerr << "error: cannot write " << gen_out << "\n";
      return kExitIo;
    }
    const std::string sidecar_path = gen_out + ".sidecar.json";
    if (!write_file(sidecar_path, sidecar.str())) {
      std::cerr << "error: cannot write " << sidecar_path << "\n";
      return kExitIo;
    }
    json params{{"n", gen_n}};
    if (!sizes.empty()) params["fixed_sizes"] = sizes;
    return write_manifest(gen_out, "generate", args, {{"model", gen_model}},
                          {gen_out, sidecar_path}, gen_seed, params);
  }

  if (ana->parsed()) {
    std::cerr << "seed: " << ana_seed << "\n";
    GraphHandle gh;
    if (int rc = load_graph(ana_graph, gh)) return rc;
    json opts{{"k", ana_k},          {"delta", ana_delta},   {"c_thr", ana_cthr},
              {"epsilon", ana_epsilon}, {"restarts", ana_restarts}, {"seed", ana_seed}};
    ApiString report;
    qr_status st = qr_analyze_json(gh.g, opts.dump().c_str(), &report.p);
    if (st != QR_OK) return complain(st);
    json outputs = json::array();
    if (!ana_out.empty()) {
      if (!write_file(ana_out, report.str())) {
        std::cerr << "error: cannot write " << ana_out << "\n";
        return kExitIo;
      }
      outputs.push_back(ana_out);
    } else {
      std::cout << report.str();
    }
    if (!ana_partition_out.empty()) {
      const json rep_json = json::parse(report.str());
      const json part = rep_json["kvariance"]["weighted"]["partition"];
      if (!write_file(ana_partition_out, part.dump() + "\n")) {
        std::cerr << "error: cannot write " << ana_partition_out << "\n";
        return kExitIo;
      }
      outputs.push_back(ana_partition_out);
    }
    if (!ana_embedding_out.empty()) {
      json eopts{{"k", ana_k}, {"source", ana_embedding_source}};
      ApiString csv;
      st = qr_embedding_csv(gh.g, eopts.dump().c_str(), &csv.p);
      if (st != QR_OK) return complain(st);
      if (!write_file(ana_embedding_out, csv.str())) {
        std::cerr << "error: cannot write " << ana_embedding_out << "\n";
        return kExitIo;
      }
      outputs.push_back(ana_embedding_out);
    }
    if (!ana_out.empty())
      return write_manifest(ana_out, "analyze", args, {{"graph", ana_graph}}, outputs, ana_seed,
                            opts);
    return kExitOk;
  }

  if (dis->parsed()) {
    std::cerr << "seed: " << dis_seed << "\n";
    GraphHandle gh;
    if (int rc = load_graph(dis_graph, gh)) return rc;
    json opts{{"mode", dis_mode}, {"cap", dis_cap},     {"seed", dis_seed},
              {"iters", dis_iters}, {"bounds", dis_bounds}, {"restarts", dis_restarts}};
    json inputs{{"graph", dis_graph}};
    if (!dis_partition.empty()) {
      const auto text = read_file(dis_partition);
      if (!text) {
        std::cerr << "error: cannot read " << dis_partition << "\n";
        return kExitIo;
      }
      opts["partition"] = json::parse(*text);
      inputs["partition"] = dis_partition;
    } else if (dis_mink > 0) {
      opts["min_k"] = dis_mink;
    } else {
      std::cerr << "error: need --partition or --min-k\n";
      return kExitInvalid;
    }
    ApiString report;
    const qr_status st = qr_discrepancy_json(gh.g, opts.dump().c_str(), &report.p);
    if (st != QR_OK) return complain(st);
    if (!dis_out.empty()) {
      if (!write_file(dis_out, report.str())) {
        std::cerr << "error: cannot write " << dis_out << "\n";
        return kExitIo;
      }
      return write_manifest(dis_out, "discrepancy", args, inputs, {dis_out}, dis_seed, opts);
    }
    std::cout << report.str();
    return kExitOk;
  }

  if (ver->parsed()) {
    GraphHandle gh;
    if (int rc = load_graph(ver_graph, gh)) return rc;
    json opts = json::object();
    json inputs{{"graph", ver_graph}};
    if (!ver_props.empty()) opts["properties"] = parse_string_list(ver_props);
    if (!ver_model.empty()) {
      const auto text = read_file(ver_model);
      if (!text) {
        std::cerr << "error: cannot read " << ver_model << "\n";
        return kExitIo;
      }
      opts["model"] = json::parse(*text);
      inputs["model"] = ver_model;
    }
    if (!ver_partition.empty()) {
      const auto text = read_file(ver_partition);
      if (!text) {
        std::cerr << "error: cannot read " << ver_partition << "\n";
        return kExitIo;
      }
      opts["partition"] = json::parse(*text);
      inputs["partition"] = ver_partition;
    }
    if (!ver_thresholds.empty()) {
      const auto text = read_file(ver_thresholds);
      if (!text) {
        std::cerr << "error: cannot read " << ver_thresholds << "\n";
        return kExitIo;
      }
      opts["thresholds"] = json::parse(*text);
      inputs["thresholds"] = ver_thresholds;
    }
    if (ver_k > 0) opts["k"] = ver_k;
    ApiString report, table;
    int first_fail = -1;
    const qr_status st = qr_verify_json(gh.g, opts.dump().c_str(), &report.p, &table.p,
                                        &first_fail);
    if (st != QR_OK) return complain(st);
    std::cout << table.str();
    if (!ver_out.empty()) {
      if (!write_file(ver_out, report.str())) {
        std::cerr << "error: cannot write " << ver_out << "\n";
        return kExitIo;
      }
      const int rc = write_manifest(ver_out, "verify", args, inputs, {ver_out}, 0, opts);
      if (rc != kExitOk) return rc;
    }
    return first_fail >= 0 ? kExitVerifyBase + first_fail : kExitOk;
  }

  if (swp->parsed()) {
    ModelHandle mh;
    if (int rc = load_model(swp_model, mh)) return rc;
    json opts;
    opts["sizes"] = parse_int_list(swp_sizes);
    opts["seeds"] = parse_seed_list(swp_seeds);
    opts["metrics"] = parse_string_list(swp_metrics);
    opts["jobs"] = swp_jobs;
    ApiString csv, summary;
    const qr_status st = qr_sweep_csv(mh.m, opts.dump().c_str(), &csv.p, &summary.p);
    if (st != QR_OK) return complain(st);
    if (!write_file(swp_csv, csv.str())) {
      std::cerr << "error: cannot write " << swp_csv << "\n";
      return kExitIo;
    }
    json outputs = json::array({swp_csv});
    if (!swp_summary.empty()) {
      if (!write_file(swp_summary, summary.str())) {
        std::cerr << "error: cannot write " << swp_summary << "\n";
        return kExitIo;
      }
      outputs.push_back(swp_summary);
    }
    if (!swp_svg.empty()) {
      if (!write_file(swp_svg, sweep_svg(json::parse(summary.str())))) {
        std::cerr << "error: cannot write " << swp_svg << "\n";
        return kExitIo;
      }
      outputs.push_back(swp_svg);
    }
    // The jobs count shapes scheduling only, never output bytes; keep it out
    // of the manifest params so replays may run at any width.
    json params{{"sizes", opts["sizes"]}, {"seeds", opts["seeds"]}, {"metrics", opts["metrics"]}};
    return write_manifest(swp_csv, "sweep", args, {{"model", swp_model}}, outputs, 0, params);
  }

  if (rep->parsed()) return cmd_replay(rep_manifest, depth);

  return kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, 0);
}
