#include "oversmooth/gcn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>

#include <Eigen/SVD>

#include "oversmooth/errors.hpp"
#include "oversmooth/rng.hpp"

namespace oversmooth {

Activation Activation::leaky_relu(double slope) {
  if (!(slope > 0.0 && slope < 1.0)) {
    throw ValidationError("Leaky-ReLU slope must lie strictly inside (0, 1)");
  }
  return Activation(Kind::LeakyReLU, slope);
}

double Activation::operator()(double x) const {
  switch (kind_) {
    case Kind::ReLU:
      return x > 0.0 ? x : 0.0;
    case Kind::LeakyReLU:
      return x > 0.0 ? x : slope_ * x;
    case Kind::Tanh:
      return std::tanh(x);
    case Kind::Sigmoid:
      return 1.0 / (1.0 + std::exp(-x));
    case Kind::Identity:
      return x;
  }
  return x;
}

std::string Activation::name() const {
  switch (kind_) {
    case Kind::ReLU:
      return "relu";
    case Kind::LeakyReLU: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "leaky_relu(%g)", slope_);
      return buf;
    }
    case Kind::Tanh:
      return "tanh";
    case Kind::Sigmoid:
      return "sigmoid";
    case Kind::Identity:
      return "identity";
  }
  return "?";
}

Activation parse_activation(const std::string& kind, double slope) {
  if (kind == "relu") return Activation::relu();
  if (kind == "leaky_relu") return Activation::leaky_relu(slope);
  if (kind == "tanh") return Activation::tanh();
  if (kind == "sigmoid") return Activation::sigmoid();
  if (kind == "identity") return Activation::identity();
  throw ValidationError("unknown activation '" + kind + "'");
}

EmbeddingMatrix apply_activation(const EmbeddingMatrix& x, const Activation& act) {
  if (act.kind() == Activation::Kind::Identity) return x;
  return x.unaryExpr([&act](double v) { return act(v); });
}

double top_singular_value(const Eigen::MatrixXd& w) {
  if (w.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(w);
  return svd.singularValues()(0);
}

Eigen::MatrixXd make_weights(Eigen::Index rows, Eigen::Index cols, double target_top_singular,
                             std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw ValidationError("weight matrix needs at least one row and column");
  if (!(target_top_singular > 0.0) || !std::isfinite(target_top_singular)) {
    throw ValidationError("target top singular value must be positive and finite");
  }
  Eigen::MatrixXd w = gaussian_matrix(rows, cols, seed);
  double top = top_singular_value(w);
  // A Gaussian draw is almost surely nonzero; reseed on the measure-zero case.
  for (std::uint64_t k = 1; top == 0.0; ++k) {
    w = gaussian_matrix(rows, cols, derive_seed(seed, {k}));
    top = top_singular_value(w);
  }
  return w * (target_top_singular / top);
}

Eigen::Index LayerSpec::input_channels() const { return weights.empty() ? 0 : weights.front().rows(); }

Eigen::Index LayerSpec::output_channels() const { return weights.empty() ? 0 : weights.back().cols(); }

void LayerSpec::validate() const {
  if (weights.empty()) throw ValidationError("layer needs at least one weight matrix");
  for (std::size_t h = 0; h < weights.size(); ++h) {
    if (weights[h].size() == 0) throw ValidationError("weight " + std::to_string(h) + " is empty");
    if (!weights[h].allFinite()) throw ValidationError("weight " + std::to_string(h) + " is not finite");
    if (h > 0 && weights[h - 1].cols() != weights[h].rows()) {
      throw ValidationError("weight " + std::to_string(h) + " expects " + std::to_string(weights[h].rows()) +
                            " input channels but the previous weight produces " +
                            std::to_string(weights[h - 1].cols()));
    }
  }
}

double LayerSpec::gain() const {
  double s = 1.0;
  for (const auto& w : weights) s *= top_singular_value(w);
  return s;
}

namespace {

EmbeddingMatrix mlp(EmbeddingMatrix h, const LayerSpec& spec, ActivationPlacement placement) {
  if (placement == ActivationPlacement::Paper) h = apply_activation(h, spec.activation);
  for (const auto& w : spec.weights) h = apply_activation(h * w, spec.activation);
  return h;
}

void check_input(const EmbeddingMatrix& x, const LayerSpec& spec, Eigen::Index n) {
  spec.validate();
  if (x.rows() != n) {
    throw ValidationError("embedding has " + std::to_string(x.rows()) + " rows but the spectrum has size " +
                          std::to_string(n));
  }
  if (x.cols() != spec.input_channels()) {
    throw ValidationError("embedding has " + std::to_string(x.cols()) + " channels but the layer expects " +
                          std::to_string(spec.input_channels()));
  }
}

}  // namespace

EmbeddingMatrix layer_forward(const EmbeddingMatrix& x, const LayerSpec& spec, const Spectrum& lap_spectrum,
                              ActivationPlacement placement) {
  check_input(x, spec, lap_spectrum.size());
  const SymMatrix filt = eval_filter_matrix(spec.filter, lap_spectrum);
  return mlp(filt.matrix() * x, spec, placement);
}

Trajectory run_network(const EmbeddingMatrix& x0, const std::vector<LayerSpec>& layers, const SpectralContext& ctx,
                       ActivationPlacement placement) {
  if (layers.empty()) throw ValidationError("network needs at least one layer");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    try {
      layers[l].validate();
    } catch (const ValidationError& e) {
      throw ValidationError("layer " + std::to_string(l + 1) + ": " + e.what());
    }
    const Eigen::Index in = l == 0 ? x0.cols() : layers[l - 1].output_channels();
    if (layers[l].input_channels() != in) {
      throw ValidationError("layer " + std::to_string(l + 1) + " expects " +
                            std::to_string(layers[l].input_channels()) + " input channels but receives " +
                            std::to_string(in));
    }
  }
  if (x0.rows() != ctx.laplacian.dim()) {
    throw ValidationError("initial embedding has " + std::to_string(x0.rows()) + " rows but the graph has " +
                          std::to_string(ctx.laplacian.dim()) + " nodes");
  }

  auto record = [&](std::size_t l, const EmbeddingMatrix& x) {
    LayerRecord r;
    r.layer = l;
    // Edge-sum form: deep stacks with s_l > 1 grow a large kernel component,
    // and the trace form then loses about eps * ||X||^2 to cancellation.
    r.energy = dirichlet_energy_edge_sum(x, ctx.graph);
    r.squared_norm = x.squaredNorm();
    if (r.squared_norm > 0.0) r.rayleigh = r.energy / r.squared_norm;
    r.channels = x.cols();
    return r;
  };

  Trajectory t;
  t.records.reserve(layers.size() + 1);
  t.records.push_back(record(0, x0));

  // Layers commonly share one filter, so each distinct filter is expanded once.
  std::map<std::vector<double>, Eigen::MatrixXd> filter_cache;
  EmbeddingMatrix x = x0;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const LayerSpec& spec = layers[l];
    auto it = filter_cache.find(spec.filter.coefficients());
    if (it == filter_cache.end()) {
      it = filter_cache.emplace(spec.filter.coefficients(), eval_filter_matrix(spec.filter, ctx.spectrum).matrix())
               .first;
    }
    x = mlp(it->second * x, spec, placement);

    LayerRecord r = record(l + 1, x);
    const double s = spec.gain();
    r.gain = s;
    const bool degenerate = ctx.spectrum.kernel_dim() == ctx.spectrum.size();
    if (!degenerate) {
      const FilterContraction fc = filter_contraction(spec.filter, ctx.spectrum);
      r.bound_paper = s * fc.paper;
      r.bound_safe = s * s * fc.safe;
      t.sup_bound_safe = std::max(t.sup_bound_safe, *r.bound_safe);
    }
    t.sup_gain = std::max(t.sup_gain, s);
    t.records.push_back(r);
  }
  t.final_embedding = std::move(x);
  return t;
}

}  // namespace oversmooth
