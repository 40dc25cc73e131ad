#include <cmath>

#include <gtest/gtest.h>

#include "oversmooth/energy.hpp"
#include "oversmooth/errors.hpp"
#include "oversmooth/gcn.hpp"
#include "oversmooth/generators.hpp"
#include "oversmooth/rng.hpp"
#include "test_util.hpp"

namespace oversmooth {
namespace {

using testing::column;
using testing::k2;
using testing::k3;
using testing::p3;

Graph random_graph(std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 40)(rng);
  const double p = std::uniform_real_distribution<double>(0.05, 0.6)(rng);
  Graph g = generate(gen::ErdosRenyi{n, p}, seed);
  if (g.num_edges() > 0 && seed % 4 == 0) g = perturb(g, PerturbationPlan::boost(1, 1000.0, seed));
  return g;
}

LayerSpec square_layer(Eigen::Index c, double s, std::uint64_t seed, Activation act = Activation::relu()) {
  LayerSpec spec;
  spec.weights = {make_weights(c, c, s, seed)};
  spec.activation = act;
  return spec;
}

TEST(Activation, Values) {
  EXPECT_EQ(Activation::relu()(-2.0), 0.0);
  EXPECT_EQ(Activation::relu()(3.0), 3.0);
  EXPECT_DOUBLE_EQ(Activation::leaky_relu(0.2)(-2.0), -0.4);
  EXPECT_DOUBLE_EQ(Activation::tanh()(0.5), std::tanh(0.5));
  EXPECT_DOUBLE_EQ(Activation::sigmoid()(0.0), 0.5);
  EXPECT_EQ(Activation::identity()(-7.0), -7.0);
  EXPECT_EQ(Activation::leaky_relu(0.2).name(), "leaky_relu(0.2)");
  EXPECT_EQ(parse_activation("tanh"), Activation::tanh());
  EXPECT_EQ(parse_activation("leaky_relu", 0.3), Activation::leaky_relu(0.3));
}

TEST(Activation, Errors) {
  EXPECT_THROW(Activation::leaky_relu(0.0), ValidationError);
  EXPECT_THROW(Activation::leaky_relu(1.0), ValidationError);
  EXPECT_THROW(Activation::leaky_relu(-0.5), ValidationError);
  EXPECT_THROW(parse_activation("gelu"), ValidationError);
}

TEST(Weights, TopSingularValueMatchesOracle) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Eigen::Index r = 1 + static_cast<Eigen::Index>(seed % 7);
    const Eigen::Index c = 1 + static_cast<Eigen::Index>((seed / 7) % 5);
    const double target = 0.1 + 0.3 * static_cast<double>(seed % 10);
    const Eigen::MatrixXd w = make_weights(r, c, target, seed);
    EXPECT_EQ(w.rows(), r);
    EXPECT_EQ(w.cols(), c);
    EXPECT_NEAR(top_singular_value(w), target, 1e-12 * target);
    EXPECT_NEAR(oracle::top_singular(testing::to_dense(w)), target, 1e-6 * target);
  }
  EXPECT_EQ(make_weights(3, 3, 1.0, 5), make_weights(3, 3, 1.0, 5));
  EXPECT_THROW(make_weights(0, 3, 1.0, 5), ValidationError);
  EXPECT_THROW(make_weights(3, 3, 0.0, 5), ValidationError);
}

TEST(Layer, ForwardExampleK2) {
  LayerSpec spec;
  spec.weights = {Eigen::MatrixXd::Identity(1, 1)};
  const Spectrum s = eigendecompose(augmented_normalized_laplacian(k2()));
  const EmbeddingMatrix out = layer_forward(column({1, 0}), spec, s);
  EXPECT_NEAR(out(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(out(1, 0), 0.5, 1e-15);
}

TEST(Layer, PlacementsDifferOnSignedInput) {
  LayerSpec spec;
  spec.weights = {-Eigen::MatrixXd::Identity(1, 1)};
  const Spectrum s = eigendecompose(augmented_normalized_laplacian(k2()));
  // P x = (-0.5, -0.5). Paper: relu first gives 0. Conventional: relu(0.5) = 0.5.
  const EmbeddingMatrix x = column({-1, 0});
  EXPECT_NEAR(layer_forward(x, spec, s, ActivationPlacement::Paper).norm(), 0.0, 1e-15);
  const EmbeddingMatrix conv = layer_forward(x, spec, s, ActivationPlacement::Conventional);
  EXPECT_NEAR(conv(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(conv(1, 0), 0.5, 1e-15);
}

TEST(Layer, ValidationErrors) {
  LayerSpec empty;
  EXPECT_THROW(empty.validate(), ValidationError);
  LayerSpec broken;
  broken.weights = {Eigen::MatrixXd::Ones(2, 3), Eigen::MatrixXd::Ones(2, 2)};
  EXPECT_THROW(broken.validate(), ValidationError);
  LayerSpec ok;
  ok.weights = {Eigen::MatrixXd::Ones(2, 3), Eigen::MatrixXd::Ones(3, 4)};
  EXPECT_NO_THROW(ok.validate());
  EXPECT_EQ(ok.input_channels(), 2);
  EXPECT_EQ(ok.output_channels(), 4);
  const Spectrum s = eigendecompose(augmented_normalized_laplacian(k2()));
  EXPECT_THROW(layer_forward(Eigen::MatrixXd::Ones(2, 3), ok, s), ValidationError);
  EXPECT_THROW(layer_forward(Eigen::MatrixXd::Ones(3, 2), ok, s), ValidationError);
}

TEST(Network, CompleteGraphCollapsesAfterOneLayer) {
  // On K3 every nonzero eigenvalue is 1, so P = I - L annihilates the nonconstant part.
  const auto ctx = SpectralContext::of(k3());
  std::vector<LayerSpec> layers(4, square_layer(2, 1.0, 3));
  const Trajectory t = run_network(gaussian_matrix(3, 2, 9), layers, ctx);
  ASSERT_EQ(t.records.size(), 5u);
  EXPECT_GT(t.records[0].energy, 0.0);
  for (std::size_t l = 1; l < t.records.size(); ++l) EXPECT_NEAR(t.records[l].energy, 0.0, 1e-12);
}

TEST(Network, RecordsContract) {
  const Graph g = p3();
  const auto ctx = SpectralContext::of(g);
  std::vector<LayerSpec> layers{square_layer(3, 1.5, 1), square_layer(3, 0.5, 2)};
  const EmbeddingMatrix x0 = gaussian_matrix(3, 3, 4);
  const Trajectory t = run_network(x0, layers, ctx);
  ASSERT_EQ(t.records.size(), 3u);
  EXPECT_FALSE(t.records[0].bound_safe.has_value());
  EXPECT_FALSE(t.records[0].gain.has_value());
  for (std::size_t l = 0; l < t.records.size(); ++l) {
    const auto& r = t.records[l];
    EXPECT_EQ(r.layer, l);
    EXPECT_GE(r.energy, 0.0);
    EXPECT_EQ(r.channels, 3);
  }
  EXPECT_NEAR(*t.records[1].gain, 1.5, 1e-12);
  EXPECT_NEAR(*t.records[1].bound_safe, 1.5 * 1.5 * 0.25, 1e-12);
  EXPECT_NEAR(*t.records[1].bound_paper, 1.5 * 0.25, 1e-12);
  EXPECT_NEAR(t.sup_gain, 1.5, 1e-12);
  EXPECT_NEAR(t.sup_bound_safe, 1.5 * 1.5 * 0.25, 1e-12);
  EXPECT_DOUBLE_EQ(t.records[0].energy, dirichlet_energy_trace(x0, ctx.laplacian));
  EXPECT_DOUBLE_EQ(t.records[2].energy, dirichlet_energy_trace(t.final_embedding, ctx.laplacian));
}

TEST(Network, ChainBreakNamesTheLayer) {
  const auto ctx = SpectralContext::of(p3());
  std::vector<LayerSpec> layers{square_layer(2, 1.0, 1), square_layer(3, 1.0, 2)};
  try {
    run_network(gaussian_matrix(3, 2, 1), layers, ctx);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("layer 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(run_network(gaussian_matrix(3, 2, 1), {}, ctx), ValidationError);
  EXPECT_THROW(run_network(gaussian_matrix(4, 2, 1), {square_layer(2, 1.0, 1)}, ctx), ValidationError);
}

TEST(Network, DimensionChangingStack) {
  const Graph g = generate(gen::ErdosRenyi{20, 0.3}, 1);
  const auto ctx = SpectralContext::of(g);
  LayerSpec a;
  a.weights = {make_weights(8, 16, 1.0, 1)};
  LayerSpec b;
  b.weights = {make_weights(16, 4, 1.0, 2)};
  const Trajectory t = run_network(gaussian_matrix(20, 8, 3), {a, b}, ctx);
  EXPECT_EQ(t.records[0].channels, 8);
  EXPECT_EQ(t.records[1].channels, 16);
  EXPECT_EQ(t.records[2].channels, 4);
  EXPECT_EQ(t.final_embedding.cols(), 4);
}

TEST(Network, ActivationDoesNotRaiseEnergyReluFamily) {
  const std::vector<Activation> acts{Activation::relu(), Activation::leaky_relu(0.01), Activation::leaky_relu(0.2),
                                     Activation::leaky_relu(0.5), Activation::leaky_relu(0.99)};
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const Graph g = random_graph(seed);
    const SymMatrix lap = augmented_normalized_laplacian(g);
    const EmbeddingMatrix x = 3.0 * gaussian_matrix(static_cast<Eigen::Index>(g.num_nodes()), 3, seed);
    const double e = dirichlet_energy_trace(x, lap);
    for (const auto& act : acts) {
      const double ea = dirichlet_energy_trace(apply_activation(x, act), lap);
      EXPECT_LE(ea, e * (1 + 1e-9) + 1e-12) << seed << " " << act.name();
    }
  }
}

TEST(Network, SmoothActivationsOnRegularGraphs) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const std::size_t n = std::uniform_int_distribution<std::size_t>(5, 30)(rng);
    const std::size_t k = 2 * std::uniform_int_distribution<std::size_t>(1, (n - 1) / 2)(rng);
    const Graph g = generate(gen::KRegular{n, k}, seed);
    const SymMatrix lap = augmented_normalized_laplacian(g);
    const EmbeddingMatrix x = 2.0 * gaussian_matrix(static_cast<Eigen::Index>(n), 2, seed);
    const double e = dirichlet_energy_trace(x, lap);
    for (const auto& act : {Activation::tanh(), Activation::sigmoid()}) {
      EXPECT_LE(dirichlet_energy_trace(apply_activation(x, act), lap), e * (1 + 1e-9) + 1e-12) << seed;
    }
  }
}

TEST(Network, EnergyDecaysGeometricallyUnderSafeFactor) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Graph g = random_graph(seed);
    if (g.num_edges() == 0) continue;
    const auto ctx = SpectralContext::of(g);
    if (ctx.spectrum.kernel_dim() == ctx.spectrum.size()) continue;
    std::vector<LayerSpec> layers;
    for (std::uint64_t l = 0; l < 6; ++l) layers.push_back(square_layer(3, 0.5 + 0.25 * (l % 4), seed * 10 + l));
    const auto placement = seed % 2 ? ActivationPlacement::Paper : ActivationPlacement::Conventional;
    const Trajectory t =
        run_network(gaussian_matrix(static_cast<Eigen::Index>(g.num_nodes()), 3, seed), layers, ctx, placement);
    for (std::size_t l = 1; l < t.records.size(); ++l) {
      const double bound = *t.records[l].bound_safe * t.records[l - 1].energy;
      EXPECT_LE(t.records[l].energy, bound * (1 + 1e-9) + 1e-12) << seed << " layer " << l;
    }
  }
}

}  // namespace
}  // namespace oversmooth
