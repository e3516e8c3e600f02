#pragma once

#include <optional>
#include <string>

#include "citegraph/data_io.hpp"
#include "citegraph/pipeline.hpp"
#include "citegraph/synthetic.hpp"

namespace citegraph {

// A run configuration document. Versioned; unknown keys anywhere are errors.
//
// {
//   "schema_version": 1,
//   "seed": 42,
//   "output_dir": "runs/demo",
//   "data": { "synthetic": {...} }            -- or --
//   "data": { "edges": "...", "features": "...", "labels": "..."(opt) },
//   "method": { "name": "combsage", "hidden_dims": [...], ... },
//   "deepwalk": { "walks_per_node": ..., ... },
//   "eval": { "test_frac": ..., "repeats": ..., "mlp": {...}, ... }
// }
struct RunConfig {
  std::uint64_t seed = 0;
  std::string output_dir;

  // data: exactly one source
  std::optional<SynthConfig> synthetic;
  bool synthetic_seed_given = false;
  std::optional<std::string> edges_path;
  std::optional<std::string> features_path;
  std::optional<std::string> labels_path;

  // method
  std::optional<MethodKind> method;
  GnnHyper gnn;
  std::optional<std::string> checkpoint_path;

  WalkConfig deepwalk;
  EvalSettings eval;  // .deepwalk mirrors the deepwalk section
};

// Throws ConfigError with the offending key path on any schema violation.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

struct LoadedData {
  Graph graph;
  Matrix features;
  std::optional<NodeLabels> labels;
};

// Generates the synthetic dataset or loads the configured files. Validates
// that feature rows match the node count.
LoadedData load_data(const RunConfig& cfg);

}  // namespace citegraph
