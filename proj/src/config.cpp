#include "citegraph/config.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>

#include "citegraph/error.hpp"

namespace citegraph {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end()) {
      throw ConfigError("config: unknown key '" + where + key + "'");
    }
  }
}

template <typename T>
T get_or(const json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for '" + where + key + "'");
  }
}

template <typename T>
T get_required(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError("config: missing key '" + where + key + "'");
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config: bad value for '" + where + key + "'");
  }
}

void parse_data(const json& j, RunConfig& cfg) {
  check_keys(j, "data.", {"synthetic", "edges", "features", "labels"});
  const bool has_synth = j.contains("synthetic");
  const bool has_files = j.contains("edges") || j.contains("features");
  if (has_synth == has_files) {
    throw ConfigError("config: data must have exactly one source (synthetic | edges+features)");
  }
  if (has_synth) {
    const json& s = j.at("synthetic");
    check_keys(s, "data.synthetic.",
               {"num_communities", "community_size", "p_in", "p_out", "bridge_fraction",
                "bridge_degree_boost", "feature_dim", "center_separation", "feature_noise", "seed",
                "largest_component_only"});
    SynthConfig sc;
    sc.num_communities = get_or<std::size_t>(s, "num_communities", "data.synthetic.", sc.num_communities);
    sc.community_size = get_or<std::size_t>(s, "community_size", "data.synthetic.", sc.community_size);
    sc.p_in = get_or<double>(s, "p_in", "data.synthetic.", sc.p_in);
    sc.p_out = get_or<double>(s, "p_out", "data.synthetic.", sc.p_out);
    sc.bridge_fraction = get_or<double>(s, "bridge_fraction", "data.synthetic.", sc.bridge_fraction);
    sc.bridge_degree_boost =
        get_or<std::size_t>(s, "bridge_degree_boost", "data.synthetic.", sc.bridge_degree_boost);
    sc.feature_dim = get_or<std::size_t>(s, "feature_dim", "data.synthetic.", sc.feature_dim);
    sc.center_separation =
        get_or<double>(s, "center_separation", "data.synthetic.", sc.center_separation);
    sc.feature_noise = get_or<double>(s, "feature_noise", "data.synthetic.", sc.feature_noise);
    sc.largest_component_only =
        get_or<bool>(s, "largest_component_only", "data.synthetic.", false);
    if (s.contains("seed")) {
      sc.seed = get_required<std::uint64_t>(s, "seed", "data.synthetic.");
      cfg.synthetic_seed_given = true;
    }
    sc.validate();
    cfg.synthetic = sc;
  } else {
    cfg.edges_path = get_required<std::string>(j, "edges", "data.");
    cfg.features_path = get_required<std::string>(j, "features", "data.");
    if (j.contains("labels")) cfg.labels_path = get_required<std::string>(j, "labels", "data.");
  }
}

void parse_method(const json& j, RunConfig& cfg) {
  check_keys(j, "method.",
             {"name", "hidden_dims", "fanouts", "epochs", "batch_size", "negatives_per_positive",
              "learning_rate", "agg_c", "agg_i", "jumping_knowledge", "checkpoint"});
  if (j.contains("name")) {
    cfg.method = method_from_string(get_required<std::string>(j, "name", "method."));
  }
  auto& g = cfg.gnn;
  g.hidden_dims = get_or<std::vector<std::size_t>>(j, "hidden_dims", "method.", g.hidden_dims);
  g.fanouts = get_or<std::vector<std::size_t>>(j, "fanouts", "method.", g.fanouts);
  g.epochs = get_or<std::size_t>(j, "epochs", "method.", g.epochs);
  g.batch_size = get_or<std::size_t>(j, "batch_size", "method.", g.batch_size);
  g.negatives_per_positive =
      get_or<std::size_t>(j, "negatives_per_positive", "method.", g.negatives_per_positive);
  g.learning_rate = get_or<double>(j, "learning_rate", "method.", g.learning_rate);
  if (j.contains("agg_c")) g.comb_agg_c = agg_kind_from_string(j.at("agg_c").get<std::string>());
  if (j.contains("agg_i")) g.comb_agg_i = agg_kind_from_string(j.at("agg_i").get<std::string>());
  if (j.contains("jumping_knowledge")) {
    g.jumping_knowledge = get_required<bool>(j, "jumping_knowledge", "method.");
  }
  if (j.contains("checkpoint")) {
    cfg.checkpoint_path = get_required<std::string>(j, "checkpoint", "method.");
  }
  if (g.hidden_dims.empty() || g.hidden_dims.size() != g.fanouts.size()) {
    throw ConfigError("config: method.hidden_dims and method.fanouts must be non-empty and equal length");
  }
  if (g.epochs == 0 || g.batch_size == 0 || g.negatives_per_positive == 0) {
    throw ConfigError("config: method counts must be >= 1");
  }
  if (g.learning_rate <= 0.0) throw ConfigError("config: method.learning_rate must be > 0");
}

void parse_deepwalk(const json& j, RunConfig& cfg) {
  check_keys(j, "deepwalk.",
             {"walks_per_node", "walk_length", "window", "embed_dim", "negatives", "epochs",
              "learning_rate"});
  auto& w = cfg.deepwalk;
  w.walks_per_node = get_or<std::size_t>(j, "walks_per_node", "deepwalk.", w.walks_per_node);
  w.walk_length = get_or<std::size_t>(j, "walk_length", "deepwalk.", w.walk_length);
  w.window = get_or<std::size_t>(j, "window", "deepwalk.", w.window);
  w.embed_dim = get_or<std::size_t>(j, "embed_dim", "deepwalk.", w.embed_dim);
  w.negatives = get_or<std::size_t>(j, "negatives", "deepwalk.", w.negatives);
  w.epochs = get_or<std::size_t>(j, "epochs", "deepwalk.", w.epochs);
  w.learning_rate = get_or<double>(j, "learning_rate", "deepwalk.", w.learning_rate);
  w.validate();
}

void parse_eval(const json& j, RunConfig& cfg) {
  check_keys(j, "eval.", {"test_frac", "val_frac", "repeats", "thresholds", "mlp"});
  auto& e = cfg.eval;
  e.test_frac = get_or<double>(j, "test_frac", "eval.", e.test_frac);
  e.val_frac = get_or<double>(j, "val_frac", "eval.", e.val_frac);
  e.repeats = get_or<std::size_t>(j, "repeats", "eval.", e.repeats);
  if (e.repeats == 0) throw ConfigError("config: eval.repeats must be >= 1");
  if (j.contains("thresholds")) {
    const auto t = get_required<std::vector<double>>(j, "thresholds", "eval.");
    if (t.size() != 2) throw ConfigError("config: eval.thresholds must be [network, topic]");
    e.thresholds = std::make_pair(t[0], t[1]);
  }
  if (j.contains("mlp")) {
    const json& m = j.at("mlp");
    check_keys(m, "eval.mlp.", {"hidden", "max_epochs", "batch_size", "patience", "learning_rate"});
    e.mlp.hidden = get_or<std::size_t>(m, "hidden", "eval.mlp.", e.mlp.hidden);
    e.mlp.max_epochs = get_or<std::size_t>(m, "max_epochs", "eval.mlp.", e.mlp.max_epochs);
    e.mlp.batch_size = get_or<std::size_t>(m, "batch_size", "eval.mlp.", e.mlp.batch_size);
    e.mlp.patience = get_or<std::size_t>(m, "patience", "eval.mlp.", e.mlp.patience);
    e.mlp.learning_rate = get_or<double>(m, "learning_rate", "eval.mlp.", e.mlp.learning_rate);
    if (e.mlp.hidden == 0 || e.mlp.max_epochs == 0 || e.mlp.batch_size == 0) {
      throw ConfigError("config: eval.mlp counts must be >= 1");
    }
  }
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  check_keys(j, "", {"schema_version", "seed", "output_dir", "data", "method", "deepwalk", "eval"});
  const int version = get_or<int>(j, "schema_version", "", 1);
  if (version != 1) {
    throw ConfigError("config: unsupported schema_version " + std::to_string(version));
  }

  RunConfig cfg;
  cfg.seed = get_or<std::uint64_t>(j, "seed", "", 0);
  cfg.output_dir = get_or<std::string>(j, "output_dir", "", "");
  if (!j.contains("data")) throw ConfigError("config: missing 'data' section");
  parse_data(j.at("data"), cfg);
  if (j.contains("method")) parse_method(j.at("method"), cfg);
  if (j.contains("deepwalk")) parse_deepwalk(j.at("deepwalk"), cfg);
  if (j.contains("eval")) parse_eval(j.at("eval"), cfg);
  cfg.eval.deepwalk = cfg.deepwalk;
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config: " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_run_config(text);
}

LoadedData load_data(const RunConfig& cfg) {
  LoadedData data;
  if (cfg.synthetic.has_value()) {
    SynthConfig sc = *cfg.synthetic;
    if (!cfg.synthetic_seed_given) sc.seed = derive_seed(cfg.seed, "data/synthetic");
    SynthData synth = generate_synthetic(sc);
    data.graph = std::move(synth.graph);
    data.features = std::move(synth.features);
    data.labels = std::move(synth.labels);
    return data;
  }
  data.features = load_features(*cfg.features_path);
  const auto edges = load_edge_list(*cfg.edges_path);
  data.graph = Graph::from_edges(edges, static_cast<NodeId>(data.features.rows()));
  if (cfg.labels_path.has_value()) {
    data.labels = load_labels(*cfg.labels_path, data.features.rows());
  }
  return data;
}

}  // namespace citegraph
