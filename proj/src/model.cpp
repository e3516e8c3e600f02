#include "citegraph/model.hpp"

#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "citegraph/data_io.hpp"
#include "citegraph/error.hpp"

namespace citegraph {

using nlohmann::json;

std::string to_string(GnnKind kind) {
  return kind == GnnKind::CombSage ? "combsage" : "graphsage";
}

GnnModel GnnModel::init(const GnnArch& arch, std::uint64_t seed) {
  if (arch.hidden_dims.empty()) throw ConfigError("model architecture needs at least one layer");
  if (arch.fanouts.size() != arch.hidden_dims.size()) {
    throw ConfigError("model architecture: fanouts count " + std::to_string(arch.fanouts.size()) +
                      " != layer count " + std::to_string(arch.hidden_dims.size()));
  }
  GnnModel m;
  m.arch = arch;
  Rng rng(seed);
  std::size_t in_dim = arch.input_dim;
  for (const std::size_t out_dim : arch.hidden_dims) {
    if (arch.kind == GnnKind::CombSage) {
      m.comb_layers.push_back(CombLayerParams::create(in_dim, out_dim, arch.agg_c, arch.agg_i, rng));
    } else {
      m.sage_layers.push_back(SageLayerParams::create(in_dim, out_dim, arch.agg, rng));
    }
    in_dim = out_dim;
  }
  return m;
}

GnnModel GnnModel::zeros_like(const GnnModel& other) {
  GnnModel m;
  m.arch = other.arch;
  for (const auto& l : other.comb_layers) m.comb_layers.push_back(CombLayerParams::zeros_like(l));
  for (const auto& l : other.sage_layers) m.sage_layers.push_back(SageLayerParams::zeros_like(l));
  return m;
}

std::size_t GnnModel::embed_dim() const {
  if (arch.jumping_knowledge) {
    std::size_t sum = 0;
    for (const std::size_t d : arch.hidden_dims) sum += d;
    return sum;
  }
  return arch.hidden_dims.back();
}

void collect_params(LstmParams& lstm, ParamRefs& refs) {
  refs.add(lstm.w_input);
  refs.add(lstm.w_forget);
  refs.add(lstm.w_output);
  refs.add(lstm.w_candidate);
  refs.add(lstm.b_input);
  refs.add(lstm.b_forget);
  refs.add(lstm.b_output);
  refs.add(lstm.b_candidate);
}

void collect_params(AggParams& agg, ParamRefs& refs) {
  switch (agg.kind) {
    case AggKind::Mean: return;
    case AggKind::MaxPool:
      refs.add(agg.pool_weight);
      refs.add(agg.pool_bias);
      return;
    case AggKind::Lstm: collect_params(agg.lstm, refs); return;
  }
}

void collect_params(CombLayerParams& layer, ParamRefs& refs) {
  refs.add(layer.w_inner);
  refs.add(layer.b_inner);
  refs.add(layer.w_combine);
  refs.add(layer.b_combine);
  collect_params(layer.agg_c, refs);
  collect_params(layer.agg_i, refs);
}

void collect_params(SageLayerParams& layer, ParamRefs& refs) {
  refs.add(layer.weight);
  refs.add(layer.bias);
  collect_params(layer.agg, refs);
}

void GnnModel::collect_params(ParamRefs& refs) {
  for (auto& l : comb_layers) citegraph::collect_params(l, refs);
  for (auto& l : sage_layers) citegraph::collect_params(l, refs);
}

namespace {

Vector layer_forward_dispatch(const Graph& g, const Matrix& h_prev, const CombLayerParams& p,
                              NodeId v, const std::vector<NodeId>& sampled, Rng* order_rng,
                              CombLayerState& st) {
  return combsage_layer_forward(g, h_prev, p, v, sampled, order_rng, st);
}

Vector layer_forward_dispatch(const Graph&, const Matrix& h_prev, const SageLayerParams& p, NodeId v,
                              const std::vector<NodeId>& sampled, Rng* order_rng,
                              SageLayerState& st) {
  return graphsage_layer_forward(h_prev, p, v, sampled, order_rng, st);
}

template <typename LayerT, typename StateT>
Matrix forward_impl(const Graph& g, const Matrix& features, const GnnArch& arch,
                    const std::vector<LayerT>& layers, Rng& rng, ForwardMode mode) {
  const NodeId n = g.num_nodes();
  Rng* order_rng = mode == ForwardMode::Train ? &rng : nullptr;

  std::vector<Matrix> layer_outputs;
  const Matrix* h_prev = &features;
  StateT state;
  for (std::size_t k = 0; k < layers.size(); ++k) {
    Matrix h_next(n, layers[k].out_dim);
    for (NodeId v = 0; v < n; ++v) {
      const auto sampled = sample_neighbors(g, v, arch.fanouts[k], rng);
      const Vector out = layer_forward_dispatch(g, *h_prev, layers[k], v, sampled, order_rng, state);
      h_next.set_row(v, out);
    }
    layer_outputs.push_back(std::move(h_next));
    h_prev = &layer_outputs.back();
  }

  if (!arch.jumping_knowledge) return std::move(layer_outputs.back());

  std::size_t width = 0;
  for (const auto& m : layer_outputs) width += m.cols();
  Matrix z(n, width);
  for (NodeId v = 0; v < n; ++v) {
    std::size_t off = 0;
    for (const auto& m : layer_outputs) {
      const auto row = m.row(v);
      for (std::size_t i = 0; i < row.size(); ++i) z(v, off + i) = row[i];
      off += row.size();
    }
  }
  return z;
}

}  // namespace

Matrix model_forward(const Graph& g, const Matrix& features, const GnnModel& model, Rng& rng,
                     ForwardMode mode) {
  if (features.rows() != g.num_nodes()) {
    throw ConfigError("model_forward: feature rows " + std::to_string(features.rows()) +
                      " != node count " + std::to_string(g.num_nodes()));
  }
  if (features.cols() != model.arch.input_dim) {
    throw ConfigError("model_forward: feature dim " + std::to_string(features.cols()) +
                      " != model input dim " + std::to_string(model.arch.input_dim));
  }
  if (model.arch.kind == GnnKind::CombSage) {
    return forward_impl<CombLayerParams, CombLayerState>(g, features, model.arch, model.comb_layers,
                                                         rng, mode);
  }
  return forward_impl<SageLayerParams, SageLayerState>(g, features, model.arch, model.sage_layers,
                                                       rng, mode);
}

Matrix embed_features_only(const Matrix& features) { return features; }

// --- checkpoint serialization ----------------------------------------------

namespace {

json matrix_to_json(const Matrix& m) {
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

Matrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<std::size_t>();
  const auto cols = j.at("cols").get<std::size_t>();
  auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != rows * cols) throw ConfigError("checkpoint: matrix payload size mismatch");
  return Matrix(rows, cols, std::move(data));
}

json lstm_to_json(const LstmParams& p) {
  return json{{"input_dim", p.input_dim},
              {"hidden_dim", p.hidden_dim},
              {"w_input", matrix_to_json(p.w_input)},
              {"w_forget", matrix_to_json(p.w_forget)},
              {"w_output", matrix_to_json(p.w_output)},
              {"w_candidate", matrix_to_json(p.w_candidate)},
              {"b_input", p.b_input},
              {"b_forget", p.b_forget},
              {"b_output", p.b_output},
              {"b_candidate", p.b_candidate}};
}

LstmParams lstm_from_json(const json& j) {
  LstmParams p;
  p.input_dim = j.at("input_dim").get<std::size_t>();
  p.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  p.w_input = matrix_from_json(j.at("w_input"));
  p.w_forget = matrix_from_json(j.at("w_forget"));
  p.w_output = matrix_from_json(j.at("w_output"));
  p.w_candidate = matrix_from_json(j.at("w_candidate"));
  p.b_input = j.at("b_input").get<Vector>();
  p.b_forget = j.at("b_forget").get<Vector>();
  p.b_output = j.at("b_output").get<Vector>();
  p.b_candidate = j.at("b_candidate").get<Vector>();
  return p;
}

json agg_to_json(const AggParams& p) {
  json j{{"kind", to_string(p.kind)}, {"input_dim", p.input_dim}};
  if (p.kind == AggKind::MaxPool) {
    j["pool_weight"] = matrix_to_json(p.pool_weight);
    j["pool_bias"] = p.pool_bias;
  } else if (p.kind == AggKind::Lstm) {
    j["lstm"] = lstm_to_json(p.lstm);
  }
  return j;
}

AggParams agg_from_json(const json& j) {
  AggParams p;
  p.kind = agg_kind_from_string(j.at("kind").get<std::string>());
  p.input_dim = j.at("input_dim").get<std::size_t>();
  if (p.kind == AggKind::MaxPool) {
    p.pool_weight = matrix_from_json(j.at("pool_weight"));
    p.pool_bias = j.at("pool_bias").get<Vector>();
  } else if (p.kind == AggKind::Lstm) {
    p.lstm = lstm_from_json(j.at("lstm"));
  }
  return p;
}

}  // namespace

void save_gnn_checkpoint(const std::string& path, const GnnModel& model, std::uint64_t seed) {
  json j;
  j["format_version"] = 1;
  j["kind"] = to_string(model.arch.kind);
  j["input_dim"] = model.arch.input_dim;
  j["hidden_dims"] = model.arch.hidden_dims;
  j["agg_c"] = to_string(model.arch.agg_c);
  j["agg_i"] = to_string(model.arch.agg_i);
  j["agg"] = to_string(model.arch.agg);
  j["jumping_knowledge"] = model.arch.jumping_knowledge;
  j["fanouts"] = model.arch.fanouts;
  j["seed"] = seed;
  json layers = json::array();
  if (model.arch.kind == GnnKind::CombSage) {
    for (const auto& l : model.comb_layers) {
      layers.push_back(json{{"in_dim", l.in_dim},
                            {"out_dim", l.out_dim},
                            {"w_inner", matrix_to_json(l.w_inner)},
                            {"b_inner", l.b_inner},
                            {"w_combine", matrix_to_json(l.w_combine)},
                            {"b_combine", l.b_combine},
                            {"agg_c", agg_to_json(l.agg_c)},
                            {"agg_i", agg_to_json(l.agg_i)}});
    }
  } else {
    for (const auto& l : model.sage_layers) {
      layers.push_back(json{{"in_dim", l.in_dim},
                            {"out_dim", l.out_dim},
                            {"weight", matrix_to_json(l.weight)},
                            {"bias", l.bias},
                            {"agg", agg_to_json(l.agg)}});
    }
  }
  j["layers"] = std::move(layers);
  write_text_atomic(path, j.dump());
}

GnnModel load_gnn_checkpoint(const std::string& path, std::uint64_t* seed_out) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open checkpoint: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("checkpoint parse error in " + path + ": " + e.what());
  }
  try {
    if (j.at("format_version").get<int>() != 1) {
      throw ConfigError("unsupported checkpoint format_version in " + path);
    }
    GnnModel m;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "combsage") {
      m.arch.kind = GnnKind::CombSage;
    } else if (kind == "graphsage") {
      m.arch.kind = GnnKind::GraphSage;
    } else {
      throw ConfigError("checkpoint: unknown model kind '" + kind + "'");
    }
    m.arch.input_dim = j.at("input_dim").get<std::size_t>();
    m.arch.hidden_dims = j.at("hidden_dims").get<std::vector<std::size_t>>();
    m.arch.agg_c = agg_kind_from_string(j.at("agg_c").get<std::string>());
    m.arch.agg_i = agg_kind_from_string(j.at("agg_i").get<std::string>());
    m.arch.agg = agg_kind_from_string(j.at("agg").get<std::string>());
    m.arch.jumping_knowledge = j.at("jumping_knowledge").get<bool>();
    m.arch.fanouts = j.at("fanouts").get<std::vector<std::size_t>>();
    if (seed_out != nullptr) *seed_out = j.at("seed").get<std::uint64_t>();
    for (const auto& lj : j.at("layers")) {
      if (m.arch.kind == GnnKind::CombSage) {
        CombLayerParams l;
        l.in_dim = lj.at("in_dim").get<std::size_t>();
        l.out_dim = lj.at("out_dim").get<std::size_t>();
        l.w_inner = matrix_from_json(lj.at("w_inner"));
        l.b_inner = lj.at("b_inner").get<Vector>();
        l.w_combine = matrix_from_json(lj.at("w_combine"));
        l.b_combine = lj.at("b_combine").get<Vector>();
        l.agg_c = agg_from_json(lj.at("agg_c"));
        l.agg_i = agg_from_json(lj.at("agg_i"));
        m.comb_layers.push_back(std::move(l));
      } else {
        SageLayerParams l;
        l.in_dim = lj.at("in_dim").get<std::size_t>();
        l.out_dim = lj.at("out_dim").get<std::size_t>();
        l.weight = matrix_from_json(lj.at("weight"));
        l.bias = lj.at("bias").get<Vector>();
        l.agg = agg_from_json(lj.at("agg"));
        m.sage_layers.push_back(std::move(l));
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw ConfigError("checkpoint field error in " + path + ": " + e.what());
  }
}

}  // namespace citegraph
