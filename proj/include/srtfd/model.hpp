#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "srtfd/common.hpp"
#include "srtfd/gbt.hpp"
#include "srtfd/linalg.hpp"

namespace srtfd {

/// How the per-class MC-dropout variance vector is reduced to one scalar.
enum class VarianceReduction { ArgmaxClass, MaxClass, MeanClass };

struct ModelConfig {
  std::vector<int> layer_dims;  // input dim, hidden dims..., class count
  double dropout_rate = 0.1;    // in [0,1)
  double learning_rate = 1e-4;
  double init_scale = 1.0;  // multiplies the uniform bound 1/sqrt(fan_in)
  uint64_t rng_seed = 0;
  VarianceReduction variance_reduction = VarianceReduction::ArgmaxClass;
};

struct PredictionOutput {
  std::vector<double> probabilities;  // equals mc_mean for stochastic predictions
  int predicted_class = 0;
  double mc_variance = 0.0;
  std::vector<double> mc_mean;
};

/// One sample of an SGD step. With `negative` set, the loss is the
/// complement term that penalizes probability mass on `label` instead of
/// cross-entropy toward it.
struct TrainItem {
  FeatureVec features;
  int label = 0;
  bool negative = false;
  double weight = 1.0;
};

struct SgdResult {
  double loss = 0.0;              // mean weighted loss over both sets
  double max_abs_gradient = 0.0;  // max |g| over all parameters before the update
  double max_abs_update = 0.0;    // max |delta theta|
};

struct ForwardTrace {
  // activations[0] = input, activations[l+1] = post-activation of layer l
  // (post-dropout when enabled); activations.back() = softmax probabilities.
  std::vector<std::vector<double>> activations;
  std::vector<std::vector<double>> pre_activations;  // one per layer
};

/// Dense softmax classifier with manual backpropagation, plain SGD, inverted
/// dropout and multi-pass stochastic inference. All randomness comes from the
/// seed in the config or from caller-provided streams, so trajectories are
/// reproducible bit for bit.
class Model {
 public:
  Model() = default;
  explicit Model(ModelConfig cfg);

  const ModelConfig& config() const { return cfg_; }
  const std::vector<int>& layer_dims() const { return cfg_.layer_dims; }
  int input_dim() const { return cfg_.layer_dims.front(); }
  int class_count() const { return cfg_.layer_dims.back(); }

  /// Softmax output for one input. With dropout_on, each hidden activation is
  /// zeroed with probability dropout_rate and survivors scaled by 1/(1-p).
  std::vector<double> forward(const FeatureVec& x, bool dropout_on, Rng& rng) const;
  std::vector<double> forward(const FeatureVec& x) const;  // deterministic

  ForwardTrace forward_trace(const FeatureVec& x, bool dropout_on, Rng& rng) const;

  /// Deterministic single-pass prediction (dropout off, mc_variance 0).
  PredictionOutput predict(const FeatureVec& x) const;

  /// `passes` stochastic forwards with dropout on; the mean prediction, the
  /// argmax of the mean, and the population variance of the tracked class
  /// probability across passes.
  PredictionOutput mc_predict(const FeatureVec& x, int passes, Rng& rng) const;

  /// One SGD step: theta <- theta - eta * (A + B), where A averages the
  /// labeled-set gradients and B the pseudo-set gradients, each item weighted
  /// by its own weight. Gradients are evaluated with dropout off.
  SgdResult sgd_step(std::span<const TrainItem> labeled, std::span<const TrainItem> pseudo,
                     const gbt::FocalLossConfig& loss_cfg);

  /// Extends the output layer to `new_class_count` classes. Existing rows are
  /// untouched; new rows come from the seeded initializer.
  void grow_head(int new_class_count);

  uint64_t state_hash() const;

  std::string to_json() const;
  static Model from_json(const std::string& text);
  void save(const std::string& path) const;
  static Model load(const std::string& path);

  const std::vector<Mat>& weights() const { return weights_; }
  const std::vector<std::vector<double>>& biases() const { return biases_; }
  std::vector<Mat>& mutable_weights() { return weights_; }
  std::vector<std::vector<double>>& mutable_biases() { return biases_; }

 private:
  void init_layer(std::size_t layer, std::size_t first_row, std::size_t last_row, uint64_t tag);

  ModelConfig cfg_;
  std::vector<Mat> weights_;                 // weights_[l]: dims[l+1] x dims[l]
  std::vector<std::vector<double>> biases_;  // biases_[l]: dims[l+1]
};

std::vector<double> softmax(const std::vector<double>& logits);

}  // namespace srtfd
