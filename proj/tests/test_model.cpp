#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "citegraph/error.hpp"
#include "citegraph/gradcheck.hpp"
#include "citegraph/model.hpp"
#include "citegraph/trainer.hpp"
#include "test_support.hpp"

using namespace citegraph;
using testsupport::random_edges;
using testsupport::random_matrix;

namespace {

GnnArch comb_arch(std::size_t in, std::vector<std::size_t> dims, AggKind agg_c, AggKind agg_i,
                  bool jk, std::vector<std::size_t> fanouts) {
  GnnArch a;
  a.kind = GnnKind::CombSage;
  a.input_dim = in;
  a.hidden_dims = std::move(dims);
  a.agg_c = agg_c;
  a.agg_i = agg_i;
  a.jumping_knowledge = jk;
  a.fanouts = std::move(fanouts);
  return a;
}

}  // namespace

TEST_CASE("jumping knowledge concatenates both layer outputs") {
  Rng rng(51);
  const Graph g = Graph::from_edges(random_edges(12, 0.3, rng), 12);
  const Matrix features = random_matrix(12, 8, rng);
  const GnnArch arch =
      comb_arch(8, {16, 16}, AggKind::Mean, AggKind::Mean, /*jk=*/true, {100, 100});
  const GnnModel model = GnnModel::init(arch, 1);
  CHECK(model.embed_dim() == 32);
  Rng fwd_rng(2);
  const Matrix z = model_forward(g, features, model, fwd_rng, ForwardMode::Inference);
  CHECK(z.rows() == 12);
  CHECK(z.cols() == 32);
}

TEST_CASE("zero weights give all-zero embeddings") {
  Rng rng(52);
  const Graph g = Graph::from_edges(random_edges(10, 0.3, rng), 10);
  const Matrix features = random_matrix(10, 4, rng);
  const GnnArch arch = comb_arch(4, {3, 3}, AggKind::MaxPool, AggKind::Lstm, true, {100, 100});
  GnnModel model = GnnModel::init(arch, 3);
  ParamRefs refs;
  model.collect_params(refs);
  refs.zero();
  Rng fwd_rng(4);
  const Matrix z = model_forward(g, features, model, fwd_rng, ForwardMode::Inference);
  for (const double x : z.data()) CHECK(x == 0.0);
}

TEST_CASE("model_forward commutes with node relabeling (mean and maxpool, inference)") {
  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const NodeId n = 6 + static_cast<NodeId>(rng.uniform_index(10));
    const auto edges = random_edges(n, 0.35, rng);
    const Graph g = Graph::from_edges(edges, n);
    const Matrix features = random_matrix(n, 5, rng);

    const AggKind agg_c = trial % 2 == 0 ? AggKind::Mean : AggKind::MaxPool;
    const AggKind agg_i = trial % 2 == 0 ? AggKind::MaxPool : AggKind::Mean;
    const GnnArch arch = comb_arch(5, {4, 4}, agg_c, agg_i, true, {1000, 1000});
    const GnnModel model = GnnModel::init(arch, 60 + static_cast<std::uint64_t>(trial));

    // Random permutation pi; node v of g becomes pi[v].
    std::vector<NodeId> pi(n);
    for (NodeId v = 0; v < n; ++v) pi[v] = v;
    rng.shuffle(pi);
    std::vector<Edge> perm_edges;
    perm_edges.reserve(edges.size());
    for (const auto& [u, v] : edges) perm_edges.emplace_back(pi[u], pi[v]);
    const Graph pg = Graph::from_edges(perm_edges, n);
    Matrix perm_features(n, 5);
    for (NodeId v = 0; v < n; ++v) perm_features.set_row(pi[v], features.row(v));

    Rng r1(7), r2(7);
    const Matrix z = model_forward(g, features, model, r1, ForwardMode::Inference);
    const Matrix pz = model_forward(pg, perm_features, model, r2, ForwardMode::Inference);
    for (NodeId v = 0; v < n; ++v) {
      const auto a = z.row(v);
      const auto b = pz.row(pi[v]);
      for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i] == b[i]);  // bitwise
      }
    }
  }
}

TEST_CASE("embedding rows are unit norm or zero after every layer") {
  Rng rng(54);
  const Graph g = Graph::from_edges(random_edges(15, 0.3, rng), 15);
  const Matrix features = random_matrix(15, 6, rng);
  const GnnArch arch = comb_arch(6, {5}, AggKind::MaxPool, AggKind::Lstm, false, {8});
  const GnnModel model = GnnModel::init(arch, 9);
  Rng fwd_rng(10);
  const Matrix z = model_forward(g, features, model, fwd_rng, ForwardMode::Inference);
  for (NodeId v = 0; v < 15; ++v) {
    const double norm = l2_norm(z.row(v));
    CHECK((norm == 0.0 || norm == doctest::Approx(1.0).epsilon(1e-12)));
  }
}

TEST_CASE("embed_features_only is the identity") {
  Rng rng(55);
  const Matrix features = random_matrix(7, 5, rng);
  const Matrix z = embed_features_only(features);
  CHECK(z.rows() == 7);
  CHECK(z.cols() == 5);
  CHECK(z.data() == features.data());
  CHECK(cosine_distance(z.row(0), z.row(1)) ==
        cosine_distance(features.row(0), features.row(1)));
}

TEST_CASE("a zero-score positive pair contributes -log(1/2)") {
  CHECK(logistic_edge_loss(0.0, true) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(logistic_edge_loss(0.0, false) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
}

namespace {

// Kink screen over every node's layer states (full neighborhoods): rejects
// parameter draws where any relu pre-activation or pooled argmax gap sits
// within finite-difference reach of a kink.
bool model_margins_ok(const Graph& g, const Matrix& features, const GnnModel& model) {
  const NodeId n = g.num_nodes();
  Matrix h = features;
  CombLayerState st;
  for (const auto& layer : model.comb_layers) {
    Matrix next(n, layer.out_dim);
    for (NodeId v = 0; v < n; ++v) {
      const auto nb = g.neighbors(v);
      next.set_row(v, combsage_layer_forward(g, h, layer, v,
                                             std::vector<NodeId>(nb.begin(), nb.end()), nullptr,
                                             st));
      for (const auto& pre : st.inner_pre) {
        if (!testsupport::relu_margin_ok(pre)) return false;
      }
      if (!testsupport::relu_margin_ok(st.combine_pre)) return false;
      if (st.output_norm != 0.0 && st.output_norm < 1e-2) return false;
      for (const auto& agg_st : st.agg_c_states) {
        if (!testsupport::maxpool_margin_ok(agg_st.pool_pre)) return false;
      }
      if (!testsupport::maxpool_margin_ok(st.agg_i_state.pool_pre)) return false;
    }
    h = std::move(next);
  }
  return true;
}

// Whole-model gradient check: scaled mean BCE over a fixed example set with
// full neighborhoods and sorted LSTM order, so the loss is a deterministic
// function of the parameters. Returns the worst relative error over an
// accepted (margin-clean) parameter draw.
double full_model_check(AggKind agg_c, AggKind agg_i, std::uint64_t seed) {
  Rng rng(seed);
  const NodeId n = 16;
  Graph g;
  Matrix features;
  GnnModel model;
  const GnnArch arch = comb_arch(4, {3, 3}, agg_c, agg_i, true, {1000, 1000});
  for (std::uint64_t attempt = 0;; ++attempt) {
    g = Graph::from_edges(random_edges(n, 0.25, rng), n);
    features = random_matrix(n, 4, rng);
    model = GnnModel::init(arch, derive_seed(seed, "init", attempt));
    if (model_margins_ok(g, features, model)) break;
  }

  std::vector<EdgeExample> examples;
  const auto edges = g.edge_list();
  for (std::size_t i = 0; i < std::min<std::size_t>(6, edges.size()); ++i) {
    examples.push_back({edges[i].first, edges[i].second, true});
  }
  examples.push_back({0, static_cast<NodeId>(n - 1), false});

  GnnModel grad_model = GnnModel::zeros_like(model);
  model_loss_and_grads(g, features, model, examples, grad_model, nullptr, nullptr);

  ParamRefs pr, gr;
  model.collect_params(pr);
  grad_model.collect_params(gr);
  auto flat = pr.to_flat();
  auto flat_grads = gr.to_flat();
  const auto saved = flat;
  // Scale the functional so finite-difference roundoff stays far below the
  // 1e-8 denominator floor (see test_support.hpp).
  const double scale = testsupport::kCheckScale;
  for (double& x : flat_grads) x *= scale;
  const auto loss = [&] {
    pr.from_flat(flat);
    GnnModel tmp = GnnModel::zeros_like(model);
    return scale * model_loss_and_grads(g, features, model, examples, tmp, nullptr, nullptr);
  };
  const double err = finite_difference_check(loss, flat, flat_grads, 1e-5);
  pr.from_flat(saved);
  return err;
}

}  // namespace

TEST_CASE("full-model gradients match finite differences (both aggregator configs)") {
  CHECK(full_model_check(AggKind::MaxPool, AggKind::Lstm, 501) < 1e-4);
  CHECK(full_model_check(AggKind::Mean, AggKind::Mean, 502) < 1e-4);
}

TEST_CASE("training loss falls on a tiny fixed graph") {
  const Graph g = Graph::from_edges({{0, 1}, {1, 2}, {2, 3}, {3, 4}}, 5);
  Matrix features(5, 3);
  Rng rng(56);
  for (double& x : features.data()) x = rng.normal();

  GnnArch arch = comb_arch(3, {4, 4}, AggKind::MaxPool, AggKind::Lstm, true, {5, 5});
  TrainConfig cfg;
  cfg.epochs = 50;
  cfg.batch_size = 4;
  cfg.learning_rate = 5e-3;
  cfg.seed = 77;
  const TrainResult result = train_unsupervised(g, features, arch, cfg);
  REQUIRE(result.epoch_mean_loss.size() == 50);
  CHECK(result.epoch_mean_loss.back() < result.epoch_mean_loss.front());
}

TEST_CASE("training is bitwise deterministic and ignores edge input order") {
  Rng rng(57);
  auto edges = random_edges(14, 0.3, rng);
  const Matrix features = random_matrix(14, 4, rng);
  GnnArch arch = comb_arch(4, {3, 3}, AggKind::MaxPool, AggKind::Lstm, true, {4, 4});
  TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 8;
  cfg.seed = 99;

  const Graph g1 = Graph::from_edges(edges, 14);
  GnnModel m1 = train_unsupervised(g1, features, arch, cfg).model;

  rng.shuffle(edges);  // different input order, same graph
  const Graph g2 = Graph::from_edges(edges, 14);
  GnnModel m2 = train_unsupervised(g2, features, arch, cfg).model;

  ParamRefs r1, r2;
  m1.collect_params(r1);
  m2.collect_params(r2);
  CHECK(r1.to_flat() == r2.to_flat());  // bitwise
}

TEST_CASE("training a graph with no edges is an error") {
  const Graph g = Graph::from_edges({}, 4);
  const Matrix features(4, 2);
  GnnArch arch = comb_arch(2, {2}, AggKind::Mean, AggKind::Mean, false, {4});
  CHECK_THROWS_AS(train_unsupervised(g, features, arch, TrainConfig{}), ConfigError);
}

TEST_CASE("checkpoint round-trips bit-exactly") {
  Rng rng(58);
  const GnnArch arch = comb_arch(5, {4, 3}, AggKind::MaxPool, AggKind::Lstm, true, {10, 5});
  GnnModel model = GnnModel::init(arch, 1234);

  const std::string path = (std::filesystem::temp_directory_path() / "ckpt_test.json").string();
  save_gnn_checkpoint(path, model, 42);
  std::uint64_t seed = 0;
  GnnModel loaded = load_gnn_checkpoint(path, &seed);
  std::filesystem::remove(path);

  CHECK(seed == 42);
  CHECK(loaded.arch.jumping_knowledge == model.arch.jumping_knowledge);
  CHECK(loaded.arch.fanouts == model.arch.fanouts);
  ParamRefs a, b;
  model.collect_params(a);
  loaded.collect_params(b);
  CHECK(a.to_flat() == b.to_flat());  // bitwise
}

TEST_CASE("graphsage models train and embed too") {
  Rng rng(59);
  const Graph g = Graph::from_edges(random_edges(12, 0.35, rng), 12);
  const Matrix features = random_matrix(12, 4, rng);
  GnnArch arch;
  arch.kind = GnnKind::GraphSage;
  arch.input_dim = 4;
  arch.hidden_dims = {4, 4};
  arch.agg = AggKind::Mean;
  arch.fanouts = {6, 6};
  TrainConfig cfg;
  cfg.epochs = 3;
  cfg.batch_size = 8;
  cfg.seed = 5;
  const TrainResult result = train_unsupervised(g, features, arch, cfg);
  Rng fwd(6);
  const Matrix z = model_forward(g, features, result.model, fwd, ForwardMode::Inference);
  CHECK(z.cols() == 4);
  CHECK(z.rows() == 12);
  CHECK(all_finite(z.data()));
}
