#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oversmooth/energy.hpp"
#include "oversmooth/spectral.hpp"

namespace oversmooth {

class Activation {
 public:
  enum class Kind { ReLU, LeakyReLU, Tanh, Sigmoid, Identity };

  static Activation relu() { return Activation(Kind::ReLU, 0.0); }
  // Throws ValidationError unless 0 < slope < 1.
  static Activation leaky_relu(double slope);
  static Activation tanh() { return Activation(Kind::Tanh, 0.0); }
  static Activation sigmoid() { return Activation(Kind::Sigmoid, 0.0); }
  static Activation identity() { return Activation(Kind::Identity, 0.0); }

  Kind kind() const noexcept { return kind_; }
  double slope() const noexcept { return slope_; }
  // ReLU and LeakyReLU: the activations the energy lemma covers on any graph.
  bool is_relu_family() const noexcept { return kind_ == Kind::ReLU || kind_ == Kind::LeakyReLU; }

  double operator()(double x) const;
  std::string name() const;

  friend bool operator==(const Activation&, const Activation&) = default;

 private:
  Activation(Kind k, double slope) : kind_(k), slope_(slope) {}
  Kind kind_;
  double slope_;
};

// Parses "relu", "leaky_relu", "tanh", "sigmoid", "identity".
Activation parse_activation(const std::string& kind, double slope = 0.2);

EmbeddingMatrix apply_activation(const EmbeddingMatrix& x, const Activation& act);

// Gaussian entries rescaled so the top singular value equals `target_top_singular`.
Eigen::MatrixXd make_weights(Eigen::Index rows, Eigen::Index cols, double target_top_singular,
                             std::uint64_t seed);

double top_singular_value(const Eigen::MatrixXd& w);

struct LayerSpec {
  PolynomialFilter filter = PolynomialFilter::propagation();
  std::vector<Eigen::MatrixXd> weights;
  Activation activation = Activation::relu();

  Eigen::Index input_channels() const;
  Eigen::Index output_channels() const;
  // Throws ValidationError on an empty stack or a broken dimension chain.
  void validate() const;
  // Product of the top singular values of the realized weights.
  double gain() const;
};

// Paper: sigma applied to the filtered input and after every weight,
//        sigma(... sigma(sigma(P X) W1) W2 ... WH).
// Conventional: sigma only after each weight.
enum class ActivationPlacement { Paper, Conventional };

EmbeddingMatrix layer_forward(const EmbeddingMatrix& x, const LayerSpec& spec,
                              const Spectrum& lap_spectrum,
                              ActivationPlacement placement = ActivationPlacement::Paper);

struct LayerRecord {
  std::size_t layer = 0;
  double energy = 0.0;
  double squared_norm = 0.0;       // ||X^(l)||_F^2
  std::optional<double> rayleigh;  // empty for an all-zero embedding
  // Per-layer contraction factors for the step into this layer (empty at layer 0).
  //   paper: s_l * P_l(lambda_min_nonzero)^2
  //   safe:  s_l^2 * max_i P_l(lambda_i)^2
  std::optional<double> bound_paper;
  std::optional<double> bound_safe;
  std::optional<double> gain;  // s_l
  Eigen::Index channels = 0;
};

struct Trajectory {
  std::vector<LayerRecord> records;  // layers 0..L
  double sup_gain = 0.0;             // s = max_l s_l
  double sup_bound_safe = 0.0;       // max_l of the safe factor
  EmbeddingMatrix final_embedding;
};

// Runs f_L o ... o f_1 from x0, recording energy after every layer. Throws
// ValidationError naming the first layer whose input width does not chain.
Trajectory run_network(const EmbeddingMatrix& x0, const std::vector<LayerSpec>& layers,
                       const SpectralContext& ctx,
                       ActivationPlacement placement = ActivationPlacement::Paper);

}  // namespace oversmooth
