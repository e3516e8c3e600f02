// citegraph: generate synthetic citation graphs, train embedding methods and
// run the citation-prediction evaluation (overall + distance-quadrant).
//
// Exit codes: 0 success, 1 config/input error, 2 numeric failure.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>

#include "citegraph/config.hpp"
#include "citegraph/error.hpp"
#include "citegraph/report.hpp"
#include "citegraph/version.hpp"

namespace fs = std::filesystem;
using namespace citegraph;
using nlohmann::json;

namespace {

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  bool force = false;
  bool full = false;
  std::vector<double> thresholds;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_full = false) {
  cmd->add_option("--config", args.config_path, "run configuration JSON")->required();
  cmd->add_option("--seed", args.seed, "override the master seed");
  cmd->add_option("--output", args.output, "override the output directory");
  cmd->add_flag("--force", args.force, "allow writing into a non-empty output directory");
  cmd->add_option("--thresholds", args.thresholds,
                  "fixed quadrant thresholds: <network> <topic>")
      ->expected(2);
  if (with_full) {
    cmd->add_flag("--full", args.full, "train on the full graph instead of the train split");
  }
}

RunConfig load_config(const CommonArgs& args) {
  RunConfig cfg = load_run_config(args.config_path);
  if (args.seed.has_value()) cfg.seed = *args.seed;
  if (args.output.has_value()) cfg.output_dir = *args.output;
  if (!args.thresholds.empty()) {
    cfg.eval.thresholds = std::make_pair(args.thresholds[0], args.thresholds[1]);
  }
  if (cfg.output_dir.empty()) {
    throw ConfigError("no output directory (set output_dir in the config or pass --output)");
  }
  return cfg;
}

void prepare_output_dir(const std::string& dir, bool force) {
  const fs::path p(dir);
  if (fs::exists(p)) {
    if (!fs::is_directory(p)) throw ConfigError("output path is not a directory: " + dir);
    if (!fs::is_empty(p) && !force) {
      throw ConfigError("output directory not empty (use --force): " + dir);
    }
  } else {
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
  }
}

class ManifestWriter {
 public:
  ManifestWriter(const std::string& command, const CommonArgs& args, const RunConfig& cfg)
      : dir_(cfg.output_dir) {
    manifest_["schema_version"] = 1;
    manifest_["tool_version"] = kVersion;
    manifest_["command"] = command;
    manifest_["master_seed"] = cfg.seed;
    manifest_["config"] = json::parse(std::ifstream(args.config_path));
    add_input(args.config_path);
    if (cfg.edges_path.has_value()) add_input(*cfg.edges_path);
    if (cfg.features_path.has_value()) add_input(*cfg.features_path);
    if (cfg.labels_path.has_value()) add_input(*cfg.labels_path);
  }

  void add_input(const std::string& path) { manifest_["inputs"][path] = file_content_hash(path); }

  // Writes `content` into the run directory and records its hash.
  std::string write(const std::string& filename, const std::string& content) {
    const std::string path = (fs::path(dir_) / filename).string();
    write_text_atomic(path, content);
    manifest_["outputs"][filename] = file_content_hash(path);
    return path;
  }

  // Records a file some other writer already placed in the run directory.
  void record_output(const std::string& filename) {
    manifest_["outputs"][filename] = file_content_hash((fs::path(dir_) / filename).string());
  }

  void finish() {
    const std::string path = (fs::path(dir_) / "manifest.json").string();
    write_text_atomic(path, manifest_.dump(2) + "\n");
  }

 private:
  std::string dir_;
  json manifest_;
};

std::string render_edges(const Graph& g) {
  std::string out;
  char buf[64];
  for (const auto& [u, v] : g.edge_list()) {
    const int n = std::snprintf(buf, sizeof buf, "%u %u\n", u, v);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

std::string render_matrix(const Matrix& m) {
  std::string out;
  char buf[64];
  int n = std::snprintf(buf, sizeof buf, "%zu %zu\n", m.rows(), m.cols());
  out.append(buf, static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      n = std::snprintf(buf, sizeof buf, "%.17g", row[c]);
      out.append(buf, static_cast<std::size_t>(n));
      out.push_back(c + 1 == row.size() ? '\n' : ' ');
    }
  }
  return out;
}

std::string render_labels(const NodeLabels& labels) {
  std::string out;
  char buf[64];
  for (std::size_t v = 0; v < labels.community.size(); ++v) {
    const int n = std::snprintf(buf, sizeof buf, "%zu %u %u\n", v, labels.community[v],
                                static_cast<unsigned>(labels.is_bridge[v]));
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

int cmd_generate(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  if (!cfg.synthetic.has_value()) {
    throw ConfigError("generate requires a data.synthetic section");
  }
  prepare_output_dir(cfg.output_dir, args.force);
  const LoadedData data = load_data(cfg);

  ManifestWriter manifest("generate", args, cfg);
  manifest.write("edges.txt", render_edges(data.graph));
  manifest.write("features.txt", render_matrix(data.features));
  manifest.write("labels.txt", render_labels(*data.labels));
  manifest.finish();
  std::cout << "generated " << data.graph.num_nodes() << " nodes, " << data.graph.num_edges()
            << " edges -> " << cfg.output_dir << "\n";
  return 0;
}

MethodKind require_method(const RunConfig& cfg) {
  if (!cfg.method.has_value()) throw ConfigError("this command requires method.name in the config");
  return *cfg.method;
}

int cmd_train(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  const MethodKind method = require_method(cfg);
  prepare_output_dir(cfg.output_dir, args.force);
  const LoadedData data = load_data(cfg);

  const Graph* train_graph = &data.graph;
  SplitResult split_result;
  if (!args.full) {
    split_result =
        split_edges(data.graph, cfg.eval.test_frac, cfg.eval.val_frac, derive_seed(cfg.seed, "split", 0));
    train_graph = &split_result.train_graph;
  }

  const MethodArtifacts artifacts =
      train_method(method, *train_graph, data.features, cfg.gnn, cfg.deepwalk, cfg.seed, 0);

  ManifestWriter manifest("train", args, cfg);
  manifest.write("embeddings.txt", render_matrix(artifacts.embeddings));
  if (artifacts.model.has_value()) {
    save_gnn_checkpoint((fs::path(cfg.output_dir) / "checkpoint.json").string(), *artifacts.model,
                        cfg.seed);
    manifest.record_output("checkpoint.json");
    json log;
    log["epoch_mean_loss"] = artifacts.loss_trace;
    manifest.write("train_log.json", log.dump(2) + "\n");
  }
  manifest.finish();
  std::cout << "trained " << to_string(method) << " -> " << cfg.output_dir << "\n";
  return 0;
}

int cmd_embed(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  const MethodKind method = require_method(cfg);
  prepare_output_dir(cfg.output_dir, args.force);
  const LoadedData data = load_data(cfg);

  Matrix embeddings;
  if (method == MethodKind::FeaturesOnly) {
    embeddings = embed_features_only(data.features);
  } else if (is_gnn(method)) {
    if (!cfg.checkpoint_path.has_value()) {
      throw ConfigError("embed requires method.checkpoint for GNN methods");
    }
    const GnnModel model = load_gnn_checkpoint(*cfg.checkpoint_path);
    Rng rng(derive_seed(cfg.seed, "embed/" + to_string(method), 0));
    embeddings = model_forward(data.graph, data.features, model, rng, ForwardMode::Inference);
  } else {
    throw ConfigError("deepwalk is transductive; use `train` to produce its embeddings");
  }

  ManifestWriter manifest("embed", args, cfg);
  if (cfg.checkpoint_path.has_value()) manifest.add_input(*cfg.checkpoint_path);
  manifest.write("embeddings.txt", render_matrix(embeddings));
  manifest.finish();
  std::cout << "embedded " << embeddings.rows() << " nodes -> " << cfg.output_dir << "\n";
  return 0;
}

int run_methods_and_report(const char* command, const CommonArgs& args, const RunConfig& cfg,
                           const std::vector<MethodKind>& methods) {
  const LoadedData data = load_data(cfg);
  const auto reports =
      run_evaluation(data.graph, data.features, methods, cfg.gnn, cfg.eval, cfg.seed);

  ManifestWriter manifest(command, args, cfg);
  manifest.write("metrics.json", metrics_report_json(reports, cfg.eval, cfg.seed));
  manifest.write("metrics.csv", metrics_report_csv(reports));
  manifest.finish();

  for (const auto& report : reports) {
    const Aggregate auc = aggregate_metric(report.repeats, 0, 0);
    const Aggregate hh_bacc = aggregate_metric(report.repeats, 4, 4);
    std::printf("%-16s overall AUC %.4f +- %.4f | high_high balanced acc %.4f +- %.4f (n=%zu)\n",
                to_string(report.kind).c_str(), auc.mean, auc.sd, hh_bacc.mean, hh_bacc.sd,
                hh_bacc.n);
  }
  return 0;
}

int cmd_evaluate(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  const MethodKind method = require_method(cfg);
  prepare_output_dir(cfg.output_dir, args.force);
  return run_methods_and_report("evaluate", args, cfg, {method});
}

int cmd_compare(const CommonArgs& args) {
  const RunConfig cfg = load_config(args);
  prepare_output_dir(cfg.output_dir, args.force);
  const std::vector<MethodKind> methods(std::begin(kAllMethods), std::end(kAllMethods));
  return run_methods_and_report("compare", args, cfg, methods);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"citation-graph embedding and link-prediction toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  CommonArgs gen_args, train_args, embed_args, eval_args, cmp_args;
  add_common(app.add_subcommand("generate", "write a synthetic dataset"), gen_args);
  add_common(app.add_subcommand("train", "train one method and write embeddings"), train_args,
             /*with_full=*/true);
  add_common(app.add_subcommand("embed", "compute embeddings from a checkpoint"), embed_args);
  add_common(app.add_subcommand("evaluate", "run the citation-prediction evaluation"), eval_args);
  add_common(app.add_subcommand("compare", "evaluate all methods on shared splits"), cmp_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("generate")) return cmd_generate(gen_args);
    if (app.got_subcommand("train")) return cmd_train(train_args);
    if (app.got_subcommand("embed")) return cmd_embed(embed_args);
    if (app.got_subcommand("evaluate")) return cmd_evaluate(eval_args);
    if (app.got_subcommand("compare")) return cmd_compare(cmp_args);
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
